// Python bindings for the main operations: instance generation and IO, exact
// and sampling-based solves, dataset construction, policy fitting, policy
// application, and the sequential refinement loop.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pldc/instance_io.hpp"
#include "pldc/lshaped.hpp"
#include "pldc/policy.hpp"
#include "pldc/rhs_sampling.hpp"
#include "pldc/sd.hpp"
#include "pldc/sequential.hpp"
#include "pldc/simplex.hpp"

namespace py = pybind11;
using namespace pldc;

namespace {

RhsMode mode_from(const std::string& s) {
    if (s == "time-series") return RhsMode::TimeSeries;
    if (s == "lhs") return RhsMode::LatinHypercube;
    throw ConfigError("unknown rhs mode: " + s + " (expected time-series|lhs)");
}

std::vector<int> all_rows(const TwoStageInstance& inst) {
    if (!inst.perturbed_rows.empty()) return inst.perturbed_rows;
    std::vector<int> rows(inst.m1());
    for (int k = 0; k < inst.m1(); ++k) rows[k] = k;
    return rows;
}

std::vector<Eigen::VectorXd> draw_rhs(const TwoStageInstance& inst, int n, std::uint64_t seed,
                                      const std::string& mode) {
    auto cfg = default_rhs_config(inst.b_nominal, all_rows(inst), n, seed, mode_from(mode));
    return sample_rhs(cfg, inst.b_nominal);
}

TrainingDataset make_dataset(const TwoStageInstance& inst,
                             const std::vector<Eigen::VectorXd>& rhs, const std::string& method,
                             int oos_samples, std::uint64_t seed) {
    TrainingDataset ds;
    if (method == "lshaped") {
        for (const auto& b : rhs) {
            auto ls = solve_lshaped(inst, b);
            ds.points.push_back({b, ls.x_star, ls.eta_star, ls.v_star, DataSource::LShaped});
            for (const auto& cut : ls.cuts_active) ds.bundle.push_back(cut);
        }
    } else if (method == "sd") {
        auto sample = draw_scenario_sample(inst, oos_samples, seed + 0x6f6f73);
        for (int i = 0; i < static_cast<int>(rhs.size()); ++i) {
            SdOptions so;
            so.seed = seed + static_cast<std::uint64_t>(i);
            so.solve_id = i;
            auto sd = solve_sd(inst, rhs[i], so);
            Cut cut = out_of_sample_cut(inst, sd.incumbent, sample);
            cut.solve_id = i;
            double eta = cut.value_at(sd.incumbent);
            ds.points.push_back(
                {rhs[i], sd.incumbent, eta, inst.c.dot(sd.incumbent) + eta, DataSource::SD});
            ds.bundle.push_back(std::move(cut));
        }
    } else {
        throw ConfigError("unknown method: " + method + " (expected lshaped|sd)");
    }
    ds.bundle = dedup_cuts(ds.bundle, 1e-12);
    return ds;
}

}  // namespace

PYBIND11_MODULE(_pldc, m) {
    m.doc() = "piecewise-linear difference-of-convex policies for two-stage stochastic LPs";

    py::register_exception<Error>(m, "PldcError");

    py::class_<TwoStageInstance>(m, "Instance")
        .def_readonly("c", &TwoStageInstance::c)
        .def_readonly("A", &TwoStageInstance::A)
        .def_readonly("b_nominal", &TwoStageInstance::b_nominal)
        .def_readonly("q", &TwoStageInstance::q)
        .def_readonly("W", &TwoStageInstance::W)
        .def_property_readonly("num_scenarios",
                               [](const TwoStageInstance& i) { return i.scenarios.size(); })
        .def("d_x", &TwoStageInstance::d_x)
        .def("m1", &TwoStageInstance::m1);

    py::class_<TrainingDataset>(m, "TrainingDataset")
        .def_property_readonly("num_points",
                               [](const TrainingDataset& d) { return d.points.size(); })
        .def_property_readonly("bundle_size",
                               [](const TrainingDataset& d) { return d.bundle.size(); });

    py::class_<PLDCPolicy>(m, "Policy")
        .def_property_readonly("num_cells", [](const PLDCPolicy& p) { return p.cells.size(); })
        .def_property_readonly("bundle_size", [](const PLDCPolicy& p) { return p.bundle.size(); })
        .def_readonly("relaxed", &PLDCPolicy::relaxed)
        .def_readonly("max_recovery_error", &PLDCPolicy::max_recovery_error)
        .def_readonly("max_train_slack", &PLDCPolicy::max_train_slack);

    m.def(
        "generate_synthetic",
        [](int d_x, int m1, int m2, int num_scenarios, std::uint64_t seed) {
            return generate_synthetic({d_x, m1, m2, num_scenarios, seed});
        },
        py::arg("d_x") = 4, py::arg("m1") = 2, py::arg("m2") = 3, py::arg("num_scenarios") = 16,
        py::arg("seed") = 0);
    m.def("load_instance", &load_instance, py::arg("path"));
    m.def("write_instance", &write_instance, py::arg("instance"), py::arg("path"));

    m.def(
        "solve_extensive",
        [](const TwoStageInstance& inst, const Eigen::VectorXd& b) {
            auto sol = solve_lp(build_extensive_form(inst, b));
            if (sol.status == LpStatus::Infeasible)
                throw InfeasibleRhs("extensive form infeasible at this rhs");
            if (sol.status != LpStatus::Optimal)
                throw NumericalError("extensive form solve did not reach optimality");
            return py::make_tuple(sol.objective,
                                  Eigen::VectorXd(sol.x.head(inst.d_x())));
        },
        py::arg("instance"), py::arg("b"));
    m.def(
        "solve_lshaped",
        [](const TwoStageInstance& inst, const Eigen::VectorXd& b) {
            auto ls = solve_lshaped(inst, b);
            py::dict d;
            d["objective"] = ls.v_star;
            d["x"] = ls.x_star;
            d["eta"] = ls.eta_star;
            d["iterations"] = ls.iterations;
            return d;
        },
        py::arg("instance"), py::arg("b"));
    m.def(
        "solve_sd",
        [](const TwoStageInstance& inst, const Eigen::VectorXd& b, std::uint64_t seed) {
            SdOptions so;
            so.seed = seed;
            auto sd = solve_sd(inst, b, so);
            py::dict d;
            d["objective"] = sd.value_estimate;
            d["x"] = sd.incumbent;
            d["iterations"] = sd.iterations;
            return d;
        },
        py::arg("instance"), py::arg("b"), py::arg("seed") = 0);

    m.def("sample_rhs", &draw_rhs, py::arg("instance"), py::arg("n"), py::arg("seed") = 0,
          py::arg("mode") = "time-series");
    m.def("build_dataset", &make_dataset, py::arg("instance"), py::arg("rhs"),
          py::arg("method") = "lshaped", py::arg("oos_samples") = 2000, py::arg("seed") = 0);

    m.def(
        "fit_policy",
        [](const TwoStageInstance& inst, const TrainingDataset& ds, bool relaxed) {
            PolicyOptions opts;
            opts.relaxed = relaxed;
            return fit_policy(inst.c, inst.A, ds, opts);
        },
        py::arg("instance"), py::arg("dataset"), py::arg("relaxed") = false);
    m.def(
        "apply_policy",
        [](const PLDCPolicy& policy, const Eigen::VectorXd& b) {
            auto out = apply_policy(policy, b);
            return py::make_tuple(out.x_hat, out.eta_hat);
        },
        py::arg("policy"), py::arg("b"));
    m.def("corrected_objective", &corrected_objective, py::arg("policy"), py::arg("x_hat"));
    m.def("save_policy", &save_policy, py::arg("policy"), py::arg("path"));
    m.def("load_policy", &load_policy, py::arg("path"));

    m.def(
        "run_sequential",
        [](const TwoStageInstance& inst, const TrainingDataset& init, std::uint64_t seed,
           double ci_tol, int min_rounds, int max_rounds, int pool, const std::string& method,
           const std::string& rhs_mode) {
            SequentialConfig cfg;
            cfg.seed = seed;
            cfg.ci_tol = ci_tol;
            cfg.min_rounds = min_rounds;
            cfg.max_rounds = max_rounds;
            cfg.pool_size = pool;
            cfg.solver = method == "sd" ? SolverMode::SD : SolverMode::LShaped;
            cfg.rhs = default_rhs_config(inst.b_nominal, all_rows(inst), 1, seed,
                                         mode_from(rhs_mode));
            auto res = run_sequential(inst, cfg, init);
            py::list rounds;
            for (const auto& r : res.history) {
                py::dict d;
                d["round"] = r.round;
                d["n_t"] = r.batch_size;
                d["R"] = r.infeasible_fraction;
                d["R_ci"] = r.feas_ci_upper;
                d["p_or_r"] = r.subopt_fraction;
                d["p_ci"] = r.opt_ci_upper;
                d["cells"] = r.cells;
                d["cuts"] = r.bundle_size;
                d["train_size"] = r.training_size;
                rounds.append(d);
            }
            py::dict out;
            out["policy"] = res.policy;
            out["rounds"] = rounds;
            out["converged"] = res.stopped == StopReason::Converged;
            return out;
        },
        py::arg("instance"), py::arg("initial_dataset"), py::arg("seed") = 0,
        py::arg("ci_tol") = 1e-4, py::arg("min_rounds") = 20, py::arg("max_rounds") = 80,
        py::arg("pool") = 5000, py::arg("method") = "lshaped", py::arg("rhs_mode") = "lhs");
}
