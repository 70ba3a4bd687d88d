#include "maxwell/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxwell/counting.hpp"
#include "maxwell/exit_curves.hpp"
#include "maxwell/oracle.hpp"
#include "maxwell/sim_stats.hpp"

namespace maxwell {

namespace {

constexpr const char* kVersion = "maxwell 1.0.0";
constexpr double kDefaultTol = 1e-12;
constexpr int kDefaultGrid = 10000;
constexpr long kDefaultMaxIter = 1000000;

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct CsvWriter {
    std::ofstream file;
    std::ostream* os;
    explicit CsvWriter(const std::string& path) {
        if (path.empty() || path == "-") {
            os = &std::cout;
        } else {
            file.open(path);
            if (!file) throw EnsembleError("cannot open output file: " + path);
            os = &file;
        }
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            *os << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }
};

void write_json(const std::string& path, const nlohmann::json& j) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw EnsembleError("cannot open sidecar file: " + path);
    f << j.dump(2) << "\n";
}

struct CommonOpts {
    std::string ensemble_path;
    std::string out;
    double epsilon = 0.46;
    int n = 1024;
    int trials = 100;
    uint64_t seed = 1;
    int grid = kDefaultGrid;
    double tol = kDefaultTol;
};

DDPair load(const CommonOpts& o) { return DDPair::load_json(o.ensemble_path); }

int cmd_thresholds(const CommonOpts& o) {
    DDPair dd = load(o);
    double bp = bp_threshold(dd, o.tol);
    double stab = stability_threshold(dd);
    double sh = shannon_threshold(dd);
    double bar = first_upper_bound(dd, o.tol);
    MapThreshold mt = map_threshold(dd, o.tol);
    std::vector<std::pair<std::string, std::string>> rows = {
        {"design_rate", fmt(dd.design_rate())},
        {"eps_bp", fmt(bp)},
        {"eps_stability", fmt(stab)},
        {"eps_shannon", fmt(sh)},
        {"eps_bar_map", fmt(bar)},
        {"eps_map", fmt(mt.epsilon)},
        {"eps_map_x_star", fmt(mt.x_star)},
        {"eps_map_tight", mt.tight ? "true" : "false"},
    };
    if (!dd.generalized_mode()) {
        if (auto p = trial_entropy_poly(dd)) {
            std::ostringstream ss;
            for (std::size_t k = 0; k < p->coeffs().size(); ++k) {
                if (k) ss << " ";
                ss << fmt(p->coeff(k));
            }
            rows.push_back({"trial_entropy_poly", ss.str()});
        }
    }
    for (const auto& [k, v] : rows) std::cout << k << " = " << v << "\n";
    if (!o.out.empty()) {
        CsvWriter w(o.out);
        w.row({"key", "value"});
        for (const auto& [k, v] : rows) w.row({k, v});
    }
    return 0;
}

int cmd_partition(const CommonOpts& o) {
    DDPair dd = load(o);
    BranchPartition part = compute_partition(dd, o.grid);
    CsvWriter w(o.out);
    w.row({"i", "x_low", "x_high", "jump_epsilon"});
    for (std::size_t i = 0; i < part.intervals.size(); ++i)
        w.row({std::to_string(i + 1), fmt(part.intervals[i].x_low), fmt(part.intervals[i].x_high),
               fmt(part.intervals[i].eps_low)});
    return 0;
}

int cmd_curve(const CommonOpts& o, const std::string& kind) {
    DDPair dd = load(o);
    nlohmann::json meta;
    meta["kind"] = kind;
    meta["design_rate"] = dd.design_rate();
    ExitCurve curve{CurveKind::BP, {}};
    if (kind == "ebp") {
        curve = ebp_curve(dd, o.grid);
        EbpArea area = ebp_area(dd);
        meta["area_numeric"] = area.numeric;
        meta["area_closed_form"] = area.closed_form;
    } else if (kind == "bp") {
        BranchPartition part = compute_partition(dd);
        for (int i = 0; i <= o.grid; ++i) {
            double eps = static_cast<double>(i) / o.grid;
            DEFixedPoint fp = de_fixed_point(dd, eps, o.tol, kDefaultMaxIter);
            if (!fp.converged) throw NonConvergence("density evolution did not converge");
            curve.samples.push_back({fp.x, eps, fp.x > 0.0 ? dd.lambda_node()(fp.y) : 0.0});
        }
        BpArea area = bp_area(dd);
        meta["area"] = area.area;
        meta["deficits"] = area.deficits;
        meta["jump_epsilons"] = part.jump_epsilons();
    } else if (kind == "map") {
        MapCurve mc = map_exit_curve(dd, o.grid);
        curve = mc.curve;
        meta["jumps"] = nlohmann::json::array();
        for (const MapJump& j : mc.jumps)
            meta["jumps"].push_back({{"eps", j.eps},
                                     {"x_minus", j.x_minus},
                                     {"x_plus", j.x_plus},
                                     {"conjectural", j.conjectural}});
    } else {
        throw EnsembleError("curve kind must be bp, ebp or map");
    }
    CsvWriter w(o.out);
    w.row({"x", "epsilon", "h"});
    for (const ExitSample& s : curve.samples) w.row({fmt(s.x), fmt(s.epsilon), fmt(s.h)});
    if (!o.out.empty() && o.out != "-") write_json(o.out + ".json", meta);
    return 0;
}

int cmd_trajectory(const CommonOpts& o) {
    DDPair dd = load(o);
    auto traj = maxwell_trajectory(dd, o.epsilon, o.grid);
    CsvWriter w(o.out);
    w.row({"gamma", "determined_fraction", "entropy"});
    for (const TrajectoryPoint& p : traj) w.row({fmt(p.gamma), fmt(p.determined), fmt(p.entropy)});
    return 0;
}

int cmd_psi(const CommonOpts& o) {
    DDPair dd = load(o);
    ResidualEnsemble res = residual_ensemble(dd, o.epsilon);
    CsvWriter w(o.out);
    w.row({"u", "psi"});
    if (res.empty()) {
        std::cerr << "residual graph empty below the BP threshold; nothing to scan\n";
        return 0;
    }
    NodeDDP ddp = normalize_residual(res);
    for (int i = 0; i <= o.grid; ++i) {
        double u = static_cast<double>(i) / o.grid;
        w.row({fmt(u), fmt(psi(ddp, u).value)});
    }
    TightnessReport rep = check_tightness(dd, o.epsilon);
    const char* verdict = rep.verdict == PsiVerdict::certified    ? "certified"
                          : rep.verdict == PsiVerdict::violated   ? "violated"
                                                                  : "marginal";
    std::cout << "verdict = " << verdict << "\n"
              << "max_u = " << fmt(rep.max_u) << "\n"
              << "max_psi = " << fmt(rep.max_psi) << "\n"
              << "psi_dd_at_1 = " << fmt(rep.psi_dd_at_1) << "\n";
    return 0;
}

int cmd_entropy_sweep(const CommonOpts& o) {
    DDPair dd = load(o);
    CsvWriter w(o.out);
    w.row({"epsilon", "entropy", "certified"});
    for (int i = 0; i <= o.grid; ++i) {
        double eps = static_cast<double>(i) / o.grid;
        CondEntropy ce = conditional_entropy(dd, eps);
        w.row({fmt(eps), fmt(ce.value), ce.certified ? "true" : "false"});
    }
    return 0;
}

int cmd_simulate(const CommonOpts& o, const std::string& strategy_name, double dgamma, int bins,
                 const std::string& runlog_dir) {
    DDPair dd = load(o);
    GuessStrategy strat;
    strat.kind =
        strategy_name == "rounds" ? GuessStrategy::rounds : GuessStrategy::sequential;
    strat.delta_gamma = dgamma;
    auto runs = run_trials(dd, o.n, o.epsilon, o.trials, o.seed, strat);
    if (!runlog_dir.empty()) {
        for (std::size_t i = 0; i < runs.size(); ++i) {
            CsvWriter w(runlog_dir + "/run_" + std::to_string(i) + ".csv");
            w.row({"time", "kind", "bit", "entropy", "determined"});
            const MaxwellRun& r = runs[i];
            for (std::size_t e = 0; e < r.events.size(); ++e) {
                const RunEvent& ev = r.events[e];
                const char* kind = ev.kind == EventKind::decode    ? "decode"
                                   : ev.kind == EventKind::guess   ? "guess"
                                                                   : "condition";
                w.row({std::to_string(ev.time), kind, std::to_string(ev.bit),
                       std::to_string(r.trajectory[e + 1].second),
                       std::to_string(r.trajectory[e + 1].first)});
            }
        }
    }
    TrajectoryStats stats = trajectory_stats(runs, o.n, bins);
    CsvWriter w(o.out);
    w.row({"bin", "determined_frac", "mean", "q05", "q95"});
    for (std::size_t b = 0; b < stats.bins.size(); ++b)
        w.row({std::to_string(b), fmt(stats.bins[b].determined), fmt(stats.bins[b].mean),
               fmt(stats.bins[b].q05), fmt(stats.bins[b].q95)});
    long zero = 0;
    for (const auto& r : runs) zero += r.final_entropy == 0 ? 1 : 0;
    std::cout << "trials = " << o.trials << "\n"
              << "final_entropy_zero_fraction = " << fmt(static_cast<double>(zero) / o.trials)
              << "\n";
    return 0;
}

int cmd_exact_exit(const CommonOpts& o, const std::string& code, const std::string& graph_path) {
    TannerGraph g;
    if (!graph_path.empty()) {
        std::ifstream in(graph_path);
        if (!in) throw EnsembleError("cannot open graph file: " + graph_path);
        g = read_graph(in);
    } else if (code == "spc3") {
        g = single_parity_graph(3);
    } else if (code == "rep2") {
        g = repetition_graph(2);
    } else if (code == "hamming74") {
        g = hamming_graph(3);
    } else if (code == "hamming15") {
        g = hamming_graph(4);
    } else if (!o.ensemble_path.empty()) {
        DDPair dd = load(o);
        g = sample_graph(dd, o.n, o.seed, true);
    } else {
        throw EnsembleError("exact-exit needs --code, --graph or --ensemble");
    }
    ExactExit ex = exact_exit_polynomial(g);
    CsvWriter w(o.out);
    w.row({"power", "coefficient"});
    for (std::size_t p = 0; p < ex.average.coeffs().size(); ++p)
        w.row({std::to_string(p), fmt(ex.average.coeff(p))});
    bool pass = ex.integral == Frac(ex.k, ex.n);
    std::cout << "n = " << ex.n << "\nk = " << ex.k << "\n"
              << "integral = " << ex.integral.num << "/" << ex.integral.den << "\n"
              << "area_identity = " << (pass ? "pass" : "fail") << "\n";
    return pass ? 0 : 1;
}

int cmd_gldpc(const CommonOpts& o) {
    DDPair dd = load(o);
    if (!dd.generalized_mode())
        throw EnsembleError("gldpc expects an ensemble file with a right_exit polynomial");
    double bp = bp_threshold(dd, o.tol);
    double bar = first_upper_bound(dd, o.tol);
    std::cout << "design_rate = " << fmt(dd.design_rate()) << "\n"
              << "eps_bp = " << fmt(bp) << "\n"
              << "eps_bar_map = " << fmt(bar) << "\n";
    if (!o.out.empty()) {
        CsvWriter w(o.out);
        w.row({"key", "value"});
        w.row({"design_rate", fmt(dd.design_rate())});
        w.row({"eps_bp", fmt(bp)});
        w.row({"eps_bar_map", fmt(bar)});
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Asymptotic analysis and finite-length simulation of LDPC ensembles over the BEC"};
    app.set_version_flag("--version", std::string(kVersion) + " (tol=" + fmt(kDefaultTol) +
                                          ", grid=" + std::to_string(kDefaultGrid) +
                                          ", max_iter=" + std::to_string(kDefaultMaxIter) + ")");
    app.require_subcommand(1);

    CommonOpts o;
    std::string kind = "bp", strategy = "sequential", code, graph_path, runlog_dir;
    double dgamma = 0.01;
    int bins = 50;

    auto add_common = [&](CLI::App* c, bool needs_ensemble = true) {
        auto* opt = c->add_option("--ensemble", o.ensemble_path, "ensemble spec JSON");
        if (needs_ensemble) opt->required();
        c->add_option("--out", o.out, "output CSV path ('-' for stdout)");
        c->add_option("--epsilon", o.epsilon, "channel erasure probability");
        c->add_option("--n", o.n, "blocklength");
        c->add_option("--trials", o.trials, "number of trials");
        c->add_option("--seed", o.seed, "master RNG seed");
        c->add_option("--grid", o.grid, "grid size");
        c->add_option("--tol", o.tol, "numeric tolerance");
    };

    auto* c_thr = app.add_subcommand("thresholds", "BP/MAP/Shannon/stability thresholds");
    add_common(c_thr);
    auto* c_curve = app.add_subcommand("curve", "EXIT curve CSV");
    add_common(c_curve);
    c_curve->add_option("--kind", kind, "bp, ebp or map");
    auto* c_part = app.add_subcommand("partition", "monotone branch partition");
    add_common(c_part);
    auto* c_traj = app.add_subcommand("trajectory", "analytic decoder trajectory");
    add_common(c_traj);
    auto* c_psi = app.add_subcommand("psi", "weight-enumerator exponent scan");
    add_common(c_psi);
    auto* c_sweep = app.add_subcommand("entropy-sweep", "conditional entropy over epsilon");
    add_common(c_sweep);
    auto* c_sim = app.add_subcommand("simulate", "finite-length decoder trials");
    add_common(c_sim);
    c_sim->add_option("--strategy", strategy, "sequential or rounds");
    c_sim->add_option("--dgamma", dgamma, "rounds step");
    c_sim->add_option("--bins", bins, "trajectory bins");
    c_sim->add_option("--runlog-dir", runlog_dir, "write per-run event logs here");
    auto* c_exact = app.add_subcommand("exact-exit", "exact small-code EXIT oracle");
    add_common(c_exact, false);
    c_exact->add_option("--code", code, "spc3, rep2, hamming74 or hamming15");
    c_exact->add_option("--graph", graph_path, "adjacency list file");
    auto* c_gldpc = app.add_subcommand("gldpc", "generalized-ensemble thresholds");
    add_common(c_gldpc);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    // sampling commands get lighter grids unless one was asked for; the
    // partition/root-scan resolution stays at the 1e4 default internally
    auto sampling_grid = [&](CLI::App* c, int dflt) {
        if (c->count("--grid") == 0) o.grid = dflt;
    };

    try {
        if (c_thr->parsed()) return cmd_thresholds(o);
        if (c_curve->parsed()) {
            sampling_grid(c_curve, 2000);
            return cmd_curve(o, kind);
        }
        if (c_part->parsed()) return cmd_partition(o);
        if (c_traj->parsed()) {
            sampling_grid(c_traj, 1000);
            return cmd_trajectory(o);
        }
        if (c_psi->parsed()) {
            sampling_grid(c_psi, 2000);
            return cmd_psi(o);
        }
        if (c_sweep->parsed()) {
            sampling_grid(c_sweep, 200);
            return cmd_entropy_sweep(o);
        }
        if (c_sim->parsed()) return cmd_simulate(o, strategy, dgamma, bins, runlog_dir);
        if (c_exact->parsed()) return cmd_exact_exit(o, code, graph_path);
        if (c_gldpc->parsed()) return cmd_gldpc(o);
    } catch (const OracleBoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const EnsembleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace maxwell
