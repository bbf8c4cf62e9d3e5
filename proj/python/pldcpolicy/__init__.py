"""Piecewise-linear difference-of-convex policies for two-stage stochastic LPs."""

from ._pldc import (  # noqa: F401
    Instance,
    Policy,
    PldcError,
    TrainingDataset,
    apply_policy,
    build_dataset,
    corrected_objective,
    fit_policy,
    generate_synthetic,
    load_instance,
    load_policy,
    run_sequential,
    sample_rhs,
    save_policy,
    solve_extensive,
    solve_lshaped,
    solve_sd,
    write_instance,
)

__all__ = [
    "Instance",
    "Policy",
    "PldcError",
    "TrainingDataset",
    "apply_policy",
    "build_dataset",
    "corrected_objective",
    "fit_policy",
    "generate_synthetic",
    "load_instance",
    "load_policy",
    "run_sequential",
    "sample_rhs",
    "save_policy",
    "solve_extensive",
    "solve_lshaped",
    "solve_sd",
    "write_instance",
]
