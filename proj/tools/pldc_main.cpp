// Command-line front end: synthetic instance generation, single solves,
// static policy training, policy evaluation, and the sequential refinement
// loop. Every command is deterministic under a fixed seed and configuration
// and embeds its fully resolved configuration into the emitted files.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pldc/instance_io.hpp"
#include "pldc/lshaped.hpp"
#include "pldc/policy.hpp"
#include "pldc/rhs_sampling.hpp"
#include "pldc/sd.hpp"
#include "pldc/sequential.hpp"
#include "pldc/simplex.hpp"

using nlohmann::json;
using namespace pldc;

namespace {

constexpr std::uint64_t kOosSeedOffset = 0x6f6f73;
constexpr std::uint64_t kInitSeedOffset = 1;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << text;
}

void write_report(const std::string& path, const json& report) {
    std::string text = report.dump(1) + "\n";
    if (path.empty())
        std::cout << text;
    else
        write_text(path, text);
}

std::vector<int> rows_or_all(const TwoStageInstance& inst) {
    if (!inst.perturbed_rows.empty()) return inst.perturbed_rows;
    std::vector<int> rows(inst.m1());
    for (int k = 0; k < inst.m1(); ++k) rows[k] = k;
    return rows;
}

RhsMode parse_mode(const std::string& s) {
    if (s == "time-series") return RhsMode::TimeSeries;
    if (s == "lhs") return RhsMode::LatinHypercube;
    throw ConfigError("unknown rhs mode: " + s + " (expected time-series|lhs)");
}

// All options of all subcommands, defaulted, then overlaid by --config and
// finally by explicit flags.
struct Options {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;

    // generate
    std::string preset;
    int dx = 4, m1 = 2, m2 = 3, scenarios = 16;

    // shared
    std::string instance_path;
    std::string method = "lshaped";  // solve: extensive|lshaped|sd; others: lshaped|sd
    std::vector<double> rhs_override;

    // train / evaluate
    int n = 50;
    std::string rhs_mode = "time-series";
    bool relaxed = false;
    int oos_samples = 2000;
    std::string policy_path;  // evaluate input / train+sequential output
    std::string report_path;
    double eps_feas = kPolicyFeasTol;
    double eps_opt = kOptGapSmall;
    bool timing = false;

    // sequential
    int n0 = 2;
    double growth = 1.1;
    double z_score = 1.96;
    double ci_tol = 1e-4;
    int min_rounds = 20;
    int max_rounds = 80;
    int pool = 5000;
    int init_n = 2;
};

void apply_section(const json& cfg, const std::string& section,
                   const std::vector<std::pair<std::string, std::function<void(const json&)>>>& keys) {
    if (!cfg.contains(section)) return;
    const json& sec = cfg.at(section);
    if (!sec.is_object()) throw ConfigError("config section '" + section + "' must be an object");
    for (const auto& [key, value] : sec.items()) {
        bool known = false;
        for (const auto& [name, setter] : keys)
            if (name == key) {
                setter(value);
                known = true;
                break;
            }
        if (!known) throw ConfigError("unknown config key: " + section + "." + key);
    }
}

void apply_config(const std::string& path, Options& o) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    for (const auto& [key, value] : cfg.items()) {
        if (key == "seed") {
            o.seed = value.get<std::uint64_t>();
        } else if (key == "threads") {
            o.threads = value.get<int>();
        } else if (key == "instance" || key == "rhs" || key == "solver" || key == "policy" ||
                   key == "sequential" || key == "output") {
            // handled below
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    apply_section(cfg, "instance",
                  {{"path", [&](const json& v) { o.instance_path = v.get<std::string>(); }},
                   {"preset", [&](const json& v) { o.preset = v.get<std::string>(); }},
                   {"dx", [&](const json& v) { o.dx = v.get<int>(); }},
                   {"m1", [&](const json& v) { o.m1 = v.get<int>(); }},
                   {"m2", [&](const json& v) { o.m2 = v.get<int>(); }},
                   {"scenarios", [&](const json& v) { o.scenarios = v.get<int>(); }}});
    apply_section(cfg, "rhs",
                  {{"mode", [&](const json& v) { o.rhs_mode = v.get<std::string>(); }},
                   {"n", [&](const json& v) { o.n = v.get<int>(); }},
                   {"values", [&](const json& v) { o.rhs_override = v.get<std::vector<double>>(); }}});
    apply_section(cfg, "solver",
                  {{"method", [&](const json& v) { o.method = v.get<std::string>(); }},
                   {"oos_samples", [&](const json& v) { o.oos_samples = v.get<int>(); }}});
    apply_section(cfg, "policy",
                  {{"relaxed", [&](const json& v) { o.relaxed = v.get<bool>(); }},
                   {"path", [&](const json& v) { o.policy_path = v.get<std::string>(); }},
                   {"eps_feas", [&](const json& v) { o.eps_feas = v.get<double>(); }},
                   {"eps_opt", [&](const json& v) { o.eps_opt = v.get<double>(); }}});
    apply_section(cfg, "sequential",
                  {{"n0", [&](const json& v) { o.n0 = v.get<int>(); }},
                   {"growth", [&](const json& v) { o.growth = v.get<double>(); }},
                   {"z", [&](const json& v) { o.z_score = v.get<double>(); }},
                   {"ci_tol", [&](const json& v) { o.ci_tol = v.get<double>(); }},
                   {"min_rounds", [&](const json& v) { o.min_rounds = v.get<int>(); }},
                   {"max_rounds", [&](const json& v) { o.max_rounds = v.get<int>(); }},
                   {"pool", [&](const json& v) { o.pool = v.get<int>(); }},
                   {"init_n", [&](const json& v) { o.init_n = v.get<int>(); }}});
    apply_section(cfg, "output",
                  {{"path", [&](const json& v) { o.out = v.get<std::string>(); }},
                   {"report", [&](const json& v) { o.report_path = v.get<std::string>(); }},
                   {"timing", [&](const json& v) { o.timing = v.get<bool>(); }}});
}

Eigen::VectorXd resolve_rhs(const Options& o, const TwoStageInstance& inst) {
    if (o.rhs_override.empty()) return inst.b_nominal;
    if (static_cast<int>(o.rhs_override.size()) != inst.m1())
        throw ConfigError("--rhs needs exactly " + std::to_string(inst.m1()) + " entries");
    return Eigen::Map<const Eigen::VectorXd>(o.rhs_override.data(),
                                             static_cast<int>(o.rhs_override.size()));
}

// Static training dataset: exact solves plus active cuts in lshaped mode, or
// sampling-based incumbents with shared-sample out-of-sample cuts in sd mode.
TrainingDataset build_dataset(const TwoStageInstance& inst, const std::vector<Eigen::VectorXd>& rhs,
                              const std::string& method, int oos_samples, std::uint64_t seed) {
    TrainingDataset ds;
    if (method == "lshaped") {
        for (const auto& b : rhs) {
            auto ls = solve_lshaped(inst, b);
            TrainingPoint pt;
            pt.b = b;
            pt.x_star = ls.x_star;
            pt.eta_star = ls.eta_star;
            pt.v_star = ls.v_star;
            pt.source = DataSource::LShaped;
            ds.points.push_back(std::move(pt));
            for (const auto& cut : ls.cuts_active) ds.bundle.push_back(cut);
        }
    } else if (method == "sd") {
        auto sample = draw_scenario_sample(inst, oos_samples, seed + kOosSeedOffset);
        for (int i = 0; i < static_cast<int>(rhs.size()); ++i) {
            SdOptions so;
            so.seed = seed + static_cast<std::uint64_t>(i);
            so.solve_id = i;
            auto sd = solve_sd(inst, rhs[i], so);
            Cut cut = out_of_sample_cut(inst, sd.incumbent, sample);
            cut.solve_id = i;
            TrainingPoint pt;
            pt.b = rhs[i];
            pt.x_star = sd.incumbent;
            pt.eta_star = cut.value_at(sd.incumbent);
            pt.v_star = inst.c.dot(sd.incumbent) + pt.eta_star;
            pt.source = DataSource::SD;
            ds.points.push_back(std::move(pt));
            ds.bundle.push_back(std::move(cut));
        }
    } else {
        throw ConfigError("unknown training method: " + method + " (expected lshaped|sd)");
    }
    ds.bundle = dedup_cuts(ds.bundle, 1e-12);
    return ds;
}

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

// --- subcommands -----------------------------------------------------------

int cmd_generate(const Options& o, bool dims_given) {
    SyntheticSpec spec;
    spec.seed = o.seed;
    spec.d_x = o.dx;
    spec.m1 = o.m1;
    spec.m2 = o.m2;
    if (!o.preset.empty() && !dims_given) {
        if (o.preset == "pgp2-shape") {
            spec.d_x = 4;
            spec.m1 = 2;
            spec.m2 = 3;
        } else if (o.preset == "cep-shape") {
            spec.d_x = 8;
            spec.m1 = 5;
            spec.m2 = 7;
        } else {
            throw ConfigError("unknown preset: " + o.preset +
                              " (expected pgp2-shape|cep-shape)");
        }
    } else if (!o.preset.empty()) {
        throw ConfigError("--preset and explicit dimensions are mutually exclusive");
    }
    spec.num_scenarios = o.scenarios;
    if (o.out.empty()) throw ConfigError("generate needs -o <path>");
    write_instance(generate_synthetic(spec), o.out);
    return 0;
}

int cmd_solve(const Options& o) {
    if (o.instance_path.empty()) throw ConfigError("solve needs --instance <path>");
    auto inst = load_instance(o.instance_path);
    Eigen::VectorXd b = resolve_rhs(o, inst);
    json report;
    report["command"] = "solve";
    report["config"] = {{"instance", o.instance_path}, {"method", o.method},
                        {"seed", o.seed},             {"rhs", vec_to_json(b)}};
    if (o.method == "extensive") {
        auto sol = solve_lp(build_extensive_form(inst, b));
        if (sol.status == LpStatus::Infeasible)
            throw InfeasibleRhs("extensive form infeasible at this rhs");
        if (sol.status != LpStatus::Optimal)
            throw NumericalError("extensive form solve did not reach optimality");
        report["objective"] = sol.objective;
        report["x"] = vec_to_json(sol.x.head(inst.d_x()));
    } else if (o.method == "lshaped") {
        auto ls = solve_lshaped(inst, b);
        report["objective"] = ls.v_star;
        report["x"] = vec_to_json(ls.x_star);
        report["eta"] = ls.eta_star;
        report["iterations"] = ls.iterations;
        report["active_cuts"] = ls.cuts_active.size();
    } else if (o.method == "sd") {
        SdOptions so;
        so.seed = o.seed;
        auto sd = solve_sd(inst, b, so);
        report["objective"] = sd.value_estimate;
        report["x"] = vec_to_json(sd.incumbent);
        report["iterations"] = sd.iterations;
        report["active_cuts"] = sd.cuts_active.size();
    } else {
        throw ConfigError("unknown method: " + o.method + " (expected extensive|lshaped|sd)");
    }
    write_report(o.out, report);
    return 0;
}

int cmd_train(const Options& o) {
    if (o.instance_path.empty()) throw ConfigError("train needs --instance <path>");
    if (o.out.empty()) throw ConfigError("train needs -o <policy path>");
    if (o.n < 1) throw ConfigError("train needs --n >= 1 training points");
    auto inst = load_instance(o.instance_path);
    auto rcfg = default_rhs_config(inst.b_nominal, rows_or_all(inst), o.n, o.seed,
                                   parse_mode(o.rhs_mode));
    auto rhs = sample_rhs(rcfg, inst.b_nominal);
    auto ds = build_dataset(inst, rhs, o.method, o.oos_samples, o.seed);
    PolicyOptions popts;
    popts.relaxed = o.relaxed;
    auto policy = fit_policy(inst.c, inst.A, ds, popts);
    policy.seed = o.seed;
    save_policy(policy, o.out);

    json report;
    report["command"] = "train";
    report["config"] = {{"instance", o.instance_path}, {"method", o.method},
                        {"n", o.n},                    {"rhs_mode", o.rhs_mode},
                        {"relaxed", o.relaxed},        {"oos_samples", o.oos_samples},
                        {"seed", o.seed},              {"policy", o.out}};
    report["cells"] = policy.cells.size();
    report["bundle_size"] = policy.bundle.size();
    report["training_points"] = ds.points.size();
    report["max_recovery_error"] = policy.max_recovery_error;
    report["max_train_slack"] = policy.max_train_slack;
    write_report(o.report_path.empty() ? o.out + ".report.json" : o.report_path, report);
    return 0;
}

int cmd_evaluate(const Options& o) {
    if (o.instance_path.empty()) throw ConfigError("evaluate needs --instance <path>");
    if (o.policy_path.empty()) throw ConfigError("evaluate needs --policy <path>");
    if (o.out.empty()) throw ConfigError("evaluate needs -o <csv path>");
    if (o.n < 1) throw ConfigError("evaluate needs --n >= 1 points");
    auto inst = load_instance(o.instance_path);
    auto policy = load_policy(o.policy_path);
    auto rcfg = default_rhs_config(inst.b_nominal, rows_or_all(inst), o.n, o.seed,
                                   parse_mode(o.rhs_mode));
    auto rhs = sample_rhs(rcfg, inst.b_nominal);

    json meta = {{"command", "evaluate"},     {"instance", o.instance_path},
                 {"policy", o.policy_path},   {"n", o.n},
                 {"rhs_mode", o.rhs_mode},    {"seed", o.seed},
                 {"eps_feas", o.eps_feas},    {"eps_opt", o.eps_opt},
                 {"timing", o.timing}};
    std::string csv = "# " + meta.dump() + "\n";
    csv += "b_id,feasible,feas_gap,rel_opt_gap,wall_micros\n";

    int feasible_count = 0, optimal_count = 0;
    double max_feas_gap = 0.0, max_opt_gap = 0.0;
    for (int i = 0; i < static_cast<int>(rhs.size()); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        auto out = apply_policy(policy, rhs[i]);
        auto t1 = std::chrono::steady_clock::now();
        long micros =
            o.timing
                ? std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count()
                : 0;  // zero keeps reruns bit-identical; opt in with --timing
        double feas_gap = std::max((inst.A * out.x_hat - rhs[i]).lpNorm<Eigen::Infinity>(),
                                   std::max(0.0, -out.x_hat.minCoeff()));
        bool feasible = feas_gap <= o.eps_feas;
        auto ls = solve_lshaped(inst, rhs[i]);
        double rel_gap = (first_stage_objective(inst, out.x_hat) - ls.v_star) /
                         (1.0 + std::abs(ls.v_star));
        if (feasible) {
            ++feasible_count;
            max_feas_gap = std::max(max_feas_gap, feas_gap);
            max_opt_gap = std::max(max_opt_gap, rel_gap);
            if (rel_gap <= o.eps_opt) ++optimal_count;
        }
        csv += std::to_string(i) + "," + (feasible ? "1" : "0") + "," + fmt17(feas_gap) + "," +
               fmt17(rel_gap) + "," + std::to_string(micros) + "\n";
    }
    double n = static_cast<double>(rhs.size());
    double feas_pct = 100.0 * feasible_count / n;
    double opt_pct = feasible_count > 0 ? 100.0 * optimal_count / feasible_count : 0.0;
    // Footer row: aggregates in the same five-column layout.
    csv += "summary," + fmt17(feas_pct) + "," + fmt17(max_feas_gap) + "," + fmt17(opt_pct) +
           "," + fmt17(max_opt_gap) + "\n";
    write_text(o.out, csv);
    return 0;
}

int cmd_sequential(const Options& o) {
    if (o.instance_path.empty()) throw ConfigError("sequential needs --instance <path>");
    if (o.out.empty()) throw ConfigError("sequential needs -o <csv path>");
    if (o.init_n < 1) throw ConfigError("sequential needs --init-n >= 1");
    auto inst = load_instance(o.instance_path);

    SequentialConfig cfg;
    cfg.n0 = o.n0;
    cfg.growth = o.growth;
    cfg.z_score = o.z_score;
    cfg.ci_tol = o.ci_tol;
    cfg.eps_feas = o.eps_feas;
    cfg.eps_opt = o.eps_opt;
    cfg.min_rounds = o.min_rounds;
    cfg.max_rounds = o.max_rounds;
    cfg.pool_size = o.pool;
    cfg.oos_samples = o.oos_samples;
    cfg.seed = o.seed;
    cfg.solver = o.method == "sd" ? SolverMode::SD : SolverMode::LShaped;
    if (o.method != "sd" && o.method != "lshaped")
        throw ConfigError("unknown method: " + o.method + " (expected lshaped|sd)");
    cfg.rhs = default_rhs_config(inst.b_nominal, rows_or_all(inst), 1, o.seed,
                                 parse_mode(o.rhs_mode));
    cfg.policy.relaxed = o.relaxed;

    auto init_cfg = default_rhs_config(inst.b_nominal, rows_or_all(inst), o.init_n,
                                       o.seed + kInitSeedOffset, RhsMode::TimeSeries);
    auto init = build_dataset(inst, sample_rhs(init_cfg, inst.b_nominal), o.method,
                              o.oos_samples, o.seed + kInitSeedOffset);
    auto res = run_sequential(inst, cfg, init);

    json meta = {{"command", "sequential"}, {"instance", o.instance_path},
                 {"method", o.method},      {"seed", o.seed},
                 {"n0", o.n0},              {"growth", o.growth},
                 {"z", o.z_score},          {"ci_tol", o.ci_tol},
                 {"min_rounds", o.min_rounds}, {"max_rounds", o.max_rounds},
                 {"pool", o.pool},          {"init_n", o.init_n},
                 {"rhs_mode", o.rhs_mode},  {"converged", res.stopped == StopReason::Converged}};
    std::string csv = "# " + meta.dump() + "\n";
    csv += "round,n_t,R,R_ci,p_or_r,p_ci,cells,cuts,train_size\n";
    for (const auto& rec : res.history)
        csv += std::to_string(rec.round) + "," + std::to_string(rec.batch_size) + "," +
               fmt17(rec.infeasible_fraction) + "," + fmt17(rec.feas_ci_upper) + "," +
               fmt17(rec.subopt_fraction) + "," + fmt17(rec.opt_ci_upper) + "," +
               std::to_string(rec.cells) + "," + std::to_string(rec.bundle_size) + "," +
               std::to_string(rec.training_size) + "\n";
    write_text(o.out, csv);
    save_policy(res.policy, o.policy_path.empty() ? o.out + ".policy.json" : o.policy_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;

    // The config file (when present) seeds the defaults; explicit flags win.
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config(argv[i + 1], o);
            } catch (const Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 64;
            }
        }

    CLI::App app{"piecewise-linear difference-of-convex policies for two-stage stochastic LPs"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON run-configuration file");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--threads", o.threads, "thread count (0 = machine default)");

    auto add_common = [&](CLI::App* sub, bool needs_instance) {
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--threads", o.threads, "thread count");
        sub->add_option("--config", config_path, "JSON run-configuration file");
        sub->add_option("-o,--out", o.out, "output path");
        if (needs_instance)
            sub->add_option("--instance", o.instance_path, "instance file (JSON or SMPS .cor)");
    };

    auto* gen = app.add_subcommand("generate", "write a synthetic two-stage instance");
    add_common(gen, false);
    gen->add_option("--preset", o.preset, "shape preset: pgp2-shape|cep-shape");
    auto* opt_dx = gen->add_option("--dx", o.dx, "first-stage variables");
    auto* opt_m1 = gen->add_option("--m1", o.m1, "first-stage constraints");
    auto* opt_m2 = gen->add_option("--m2", o.m2, "second-stage constraints");
    gen->add_option("--scenarios", o.scenarios, "scenario count");

    auto* solve = app.add_subcommand("solve", "solve one instance at one rhs");
    add_common(solve, true);
    solve->add_option("--method", o.method, "extensive|lshaped|sd");
    solve->add_option("--rhs", o.rhs_override, "explicit rhs entries")->delimiter(',');

    auto* train = app.add_subcommand("train", "fit a policy on sampled rhs data");
    add_common(train, true);
    train->add_option("--method", o.method, "data source: lshaped|sd");
    train->add_option("--n", o.n, "number of training rhs");
    train->add_option("--rhs-mode", o.rhs_mode, "time-series|lhs");
    train->add_flag("--relaxed", o.relaxed, "penalized-slack training mode");
    train->add_option("--oos-samples", o.oos_samples, "out-of-sample draw size (sd mode)");
    train->add_option("--report", o.report_path, "training report path");

    auto* eval = app.add_subcommand("evaluate", "apply a saved policy to fresh rhs draws");
    add_common(eval, true);
    eval->add_option("--policy", o.policy_path, "policy file");
    eval->add_option("--n", o.n, "number of evaluation rhs");
    eval->add_option("--rhs-mode", o.rhs_mode, "time-series|lhs");
    eval->add_option("--eps-feas", o.eps_feas, "feasibility tolerance");
    eval->add_option("--eps-opt", o.eps_opt, "relative optimality tolerance");
    eval->add_flag("--timing", o.timing, "record wall times (breaks rerun bit-identity)");

    auto* seq = app.add_subcommand("sequential", "run the sequential refinement loop");
    add_common(seq, true);
    seq->add_option("--method", o.method, "solver mode: lshaped|sd");
    seq->add_option("--n0", o.n0, "initial batch size");
    seq->add_option("--growth", o.growth, "batch growth factor");
    seq->add_option("--z", o.z_score, "CI z-score");
    seq->add_option("--ci-tol", o.ci_tol, "CI upper-bound stopping threshold");
    seq->add_option("--eps-feas", o.eps_feas, "feasibility tolerance");
    seq->add_option("--eps-opt", o.eps_opt, "relative optimality tolerance");
    seq->add_option("--min-rounds", o.min_rounds, "minimum rounds");
    seq->add_option("--max-rounds", o.max_rounds, "maximum rounds");
    seq->add_option("--pool", o.pool, "rhs pool size (0 = fresh draws each round)");
    seq->add_option("--init-n", o.init_n, "initial training points");
    seq->add_option("--oos-samples", o.oos_samples, "out-of-sample draw size (sd mode)");
    seq->add_option("--rhs-mode", o.rhs_mode, "batch rhs mode: time-series|lhs");
    seq->add_flag("--relaxed", o.relaxed, "penalized-slack training mode");
    seq->add_option("--policy-out", o.policy_path, "final policy path");

    try {
        app.parse(argc, argv);
        if (o.threads > 0) Eigen::setNbThreads(o.threads);
        if (gen->parsed())
            return cmd_generate(o, opt_dx->count() + opt_m1->count() + opt_m2->count() > 0);
        if (solve->parsed()) return cmd_solve(o);
        if (train->parsed()) return cmd_train(o);
        if (eval->parsed()) return cmd_evaluate(o);
        if (seq->parsed()) return cmd_sequential(o);
        std::cerr << "error: no subcommand\n";
        return 64;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const MasterInfeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleRhs& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const TrainingInfeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const CmInfeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
