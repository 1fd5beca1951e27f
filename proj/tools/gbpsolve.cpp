// gbpsolve: message-passing solver and convergence-rate analysis for sparse
// linear systems. Subcommands: analyze, solve, bounds, loops, treecheck, bench.
//
// Exit codes: 0 success, 2 parse/config error, 3 numerical failure,
// 4 dominance precondition failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gbp/bounds.hpp"
#include "gbp/dominance.hpp"
#include "gbp/experiment.hpp"
#include "gbp/generate.hpp"
#include "gbp/matrix_market.hpp"
#include "gbp/solver.hpp"
#include "gbp/treecheck.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNotDominant = 4;

struct InputOptions {
    std::string input_path;
    std::string rhs_path;
    std::string generate_kind;
    gbp::Index n = 0;
    double row_sum = 0.7;
    double mean_degree = 0.0;
    double value_min = -1.2;
    double value_max = -0.2;
    double positive_prob = 0.8;
    double target_row_sum = 0.4;
    std::uint64_t seed = 0;

    void attach(CLI::App& app) {
        app.add_option("--input", input_path, "Matrix Market coordinate file");
        app.add_option("--rhs", rhs_path,
                       "right-hand side (Matrix Market array or .json); default b_i = i");
        app.add_option("--generate", generate_kind,
                       "instance kind: tree|single_loop|example1|example2|"
                       "example3_style|example4_style");
        app.add_option("--n", n, "generated instance size (0 = kind default)");
        app.add_option("--row-sum", row_sum, "tree/single_loop off-diagonal row mass");
        app.add_option("--mean-degree", mean_degree, "example3/4 mean degree (0 = default)");
        app.add_option("--value-min", value_min, "example3 off-diagonal lower bound");
        app.add_option("--value-max", value_max, "example3 off-diagonal upper bound");
        app.add_option("--positive-prob", positive_prob, "example4 positive-sign probability");
        app.add_option("--target-row-sum", target_row_sum, "example4 mean |row| sum");
        app.add_option("--seed", seed, "generator seed");
    }

    gbp::SparseSystem load() const {
        if (input_path.empty() == generate_kind.empty())
            throw gbp::Error("need exactly one of --input and --generate");
        if (!input_path.empty()) return gbp::load_matrix_market(input_path, rhs_path);
        gbp::GeneratorSpec spec;
        spec.kind = gbp::generator_kind_from_string(generate_kind);
        spec.n = n;
        spec.row_sum = row_sum;
        spec.mean_degree = mean_degree;
        spec.value_min = value_min;
        spec.value_max = value_max;
        spec.positive_prob = positive_prob;
        spec.target_row_sum = target_row_sum;
        return gbp::generate(spec, seed);
    }

    std::optional<gbp::GeneratorSpec> generator_spec() const {
        if (generate_kind.empty()) return std::nullopt;
        gbp::GeneratorSpec spec;
        spec.kind = gbp::generator_kind_from_string(generate_kind);
        spec.n = n;
        spec.row_sum = row_sum;
        spec.mean_degree = mean_degree;
        spec.value_min = value_min;
        spec.value_max = value_max;
        spec.positive_prob = positive_prob;
        spec.target_row_sum = target_row_sum;
        return spec;
    }
};

struct ScalingOption {
    std::string choice = "identity";
    std::string file;

    void attach(CLI::App& app) {
        app.add_option("--scaling", choice, "identity | perron | file");
        app.add_option("--scaling-file", file, "vector file when --scaling file");
    }

    gbp::Scaling resolve(const gbp::SparseSystem& sys) const {
        if (choice == "identity") return gbp::Scaling::identity(sys.size());
        if (choice == "perron") return gbp::Scaling(gbp::spectral_certificate(sys).u);
        if (choice == "file") return gbp::Scaling(gbp::load_vector(file, sys.size()));
        throw gbp::Error("unknown scaling: " + choice);
    }

    gbp::ScalingChoice as_choice() const {
        if (choice == "identity") return gbp::ScalingChoice::Identity;
        if (choice == "perron") return gbp::ScalingChoice::Perron;
        if (choice == "file") return gbp::ScalingChoice::Explicit;
        throw gbp::Error("unknown scaling: " + choice);
    }
};

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw gbp::Error("cannot open " + out_path + " for writing");
        out << j.dump(2) << "\n";
    }
}

json dominance_json(const gbp::SparseSystem& sys, const gbp::Scaling& d) {
    const gbp::DominanceReport report = gbp::classify(sys, d);
    json j;
    j["classification"] = gbp::to_string(report.classification);
    j["borderline"] = report.borderline;
    if (!report.diagnostic.empty()) j["diagnostic"] = report.diagnostic;
    if (report.varrho.size() > 0)
        j["varrho"] = std::vector<double>(report.varrho.begin(), report.varrho.end());
    const gbp::SpectralCertificate cert = gbp::spectral_certificate(sys);
    j["rho"] = cert.rho;
    j["rho_converged"] = cert.converged;
    j["u"] = std::vector<double>(cert.u.begin(), cert.u.end());
    if (cert.reducible_warning) j["reducible_warning"] = true;
    if (gbp::at_least(report.classification, gbp::Classification::WeaklyDScaledDD)) {
        const gbp::DiagonalizerTrace trace = gbp::construct_diagonalizer(sys, d);
        json dj;
        dj["u_set"] = trace.u_set;
        dj["epsilon"] = trace.epsilon;
        dj["d_tilde"] = std::vector<double>(trace.d_tilde.d.begin(), trace.d_tilde.d.end());
        dj["varrho_tilde"] =
            std::vector<double>(trace.varrho_tilde.begin(), trace.varrho_tilde.end());
        j["diagonalizer"] = dj;
    }
    return j;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"message-passing linear solver and convergence analysis"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "dominance classification and certificates");
    InputOptions analyze_in;
    ScalingOption analyze_scaling;
    std::string analyze_out;
    analyze_in.attach(*analyze);
    analyze_scaling.attach(*analyze);
    analyze->add_option("--out", analyze_out, "output JSON path (default stdout)");

    // solve (also used by `bounds`)
    auto* solve = app.add_subcommand("solve", "run the solver and emit curves");
    InputOptions solve_in;
    ScalingOption solve_scaling;
    std::string solve_out, solve_config, solve_bounds;
    int solve_rounds = 100;
    double solve_stop_tol = 0.0;
    bool solve_jacobi = false;
    std::vector<int> solve_fit_window;
    solve_in.attach(*solve);
    solve_scaling.attach(*solve);
    solve->add_option("--config", solve_config, "JSON experiment config (overrides flags)");
    solve->add_option("--rounds", solve_rounds, "rounds to run");
    solve->add_option("--stop-tol", solve_stop_tol,
                      "successive-difference stop tolerance (0 = run all rounds)");
    solve->add_option("--bounds", solve_bounds, "comma list of theorem1,rho,lambda_star");
    solve->add_flag("--jacobi", solve_jacobi, "also run the Jacobi baseline");
    solve->add_option("--fit-window", solve_fit_window, "rate fit window: k0 k1")
        ->expected(2);
    solve->add_option("--out", solve_out, "output prefix; writes <out>.csv and <out>.json");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "emit bound curves only");
    InputOptions bounds_in;
    ScalingOption bounds_scaling;
    std::string bounds_out;
    int bounds_rounds = 100;
    bounds_in.attach(*bounds);
    bounds_scaling.attach(*bounds);
    bounds->add_option("--rounds", bounds_rounds, "rounds to tabulate");
    bounds->add_option("--out", bounds_out, "output prefix; writes <out>.csv and <out>.json");

    // loops
    auto* loops = app.add_subcommand("loops", "enumerate simple loops and gains");
    InputOptions loops_in;
    ScalingOption loops_scaling;
    std::string loops_out;
    long loops_max = 1000000;
    loops_in.attach(*loops);
    loops_scaling.attach(*loops);
    loops->add_option("--max-loops", loops_max, "enumeration cap");
    loops->add_option("--out", loops_out, "output JSON path (default stdout)");

    // treecheck
    auto* treecheck = app.add_subcommand("treecheck", "unwrapped-tree verification");
    InputOptions tree_in;
    ScalingOption tree_scaling;
    std::string tree_out;
    gbp::Index tree_root = 0;
    int tree_rounds = 4;
    tree_in.attach(*treecheck);
    tree_scaling.attach(*treecheck);
    treecheck->add_option("--root", tree_root, "root node (0-based)");
    treecheck->add_option("--rounds", tree_rounds, "rounds / tree depth");
    treecheck->add_option("--out", tree_out, "output JSON path (default stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "solver vs Jacobi across seeds");
    InputOptions bench_in;
    std::string bench_out;
    int bench_rounds = 100, bench_count = 20;
    bench_in.attach(*bench);
    bench->add_option("--rounds", bench_rounds, "rounds per run");
    bench->add_option("--count", bench_count, "number of seeds (seed, seed+1, ...)");
    bench->add_option("--out", bench_out, "output JSON path (default stdout)");

    app.parse(argc, argv);

    if (analyze->parsed()) {
        const gbp::SparseSystem sys = analyze_in.load();
        emit(dominance_json(sys, analyze_scaling.resolve(sys)), analyze_out);
        return kExitOk;
    }

    if (solve->parsed() || bounds->parsed()) {
        gbp::ExperimentConfig cfg;
        if (!solve_config.empty()) {
            std::ifstream in(solve_config);
            if (!in) throw gbp::Error("cannot open " + solve_config);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw gbp::Error(std::string("invalid config JSON: ") + e.what());
            }
            cfg = gbp::config_from_json(j);
        } else {
            const InputOptions& in = solve->parsed() ? solve_in : bounds_in;
            const ScalingOption& sc = solve->parsed() ? solve_scaling : bounds_scaling;
            cfg.input_path = in.input_path;
            cfg.rhs_path = in.rhs_path;
            cfg.generator = in.generator_spec();
            cfg.seed = in.seed;
            cfg.scaling = sc.as_choice();
            cfg.scaling_path = sc.file;
            if (solve->parsed()) {
                cfg.rounds = solve_rounds;
                cfg.stop_tol = solve_stop_tol;
                cfg.jacobi = solve_jacobi;
                if (!solve_fit_window.empty())
                    cfg.fit_window = std::make_pair(solve_fit_window[0], solve_fit_window[1]);
                std::string token;
                std::istringstream ss(solve_bounds);
                while (std::getline(ss, token, ',')) {
                    if (token == "theorem1")
                        cfg.bound_theorem1 = true;
                    else if (token == "rho")
                        cfg.bound_rho = true;
                    else if (token == "lambda_star")
                        cfg.bound_lambda_star = true;
                    else if (!token.empty())
                        throw gbp::Error("unknown bound: " + token);
                }
                if (!solve_out.empty()) {
                    cfg.out_csv = solve_out + ".csv";
                    cfg.out_json = solve_out + ".json";
                }
            } else {
                cfg.rounds = bounds_rounds;
                cfg.bound_theorem1 = true;
                cfg.bound_rho = true;
                if (!bounds_out.empty()) {
                    cfg.out_csv = bounds_out + ".csv";
                    cfg.out_json = bounds_out + ".json";
                }
            }
        }
        const gbp::ExperimentSummary summary = gbp::run_experiment(cfg);
        if (cfg.out_json.empty()) std::cout << summary.json.dump(2) << "\n";
        return summary.termination == gbp::Termination::NumericalFailure ? kExitNumerical
                                                                         : kExitOk;
    }

    if (loops->parsed()) {
        const gbp::SparseSystem sys = loops_in.load();
        const gbp::InducedGraph g = gbp::build_induced_graph(sys);
        const gbp::Vector vr = gbp::varrho(sys, loops_scaling.resolve(sys));
        const gbp::LoopGainReport report = gbp::enumerate_simple_loops(g, vr, loops_max);
        json j;
        j["loop_count"] = report.loops.size();
        j["lambda_star"] = report.lambda_star;
        j["truncated"] = report.truncated;
        j["acyclic"] = report.acyclic();
        json loop_list = json::array();
        for (size_t p = 0; p < report.loops.size(); ++p)
            loop_list.push_back({{"nodes", report.loops[p]},
                                 {"gain", report.gains[p]},
                                 {"per_node_gain", report.per_node_gains[p]}});
        j["loops"] = loop_list;
        emit(j, loops_out);
        return kExitOk;
    }

    if (treecheck->parsed()) {
        const gbp::SparseSystem sys = tree_in.load();
        const gbp::InducedGraph g = gbp::build_induced_graph(sys);
        const gbp::Scaling d = tree_scaling.resolve(sys);
        const gbp::UnwrappedTree tree =
            gbp::build_unwrapped_tree(sys, g, tree_root, tree_rounds);
        const gbp::RootEquivalenceReport eq =
            gbp::verify_root_equivalence(sys, g, tree_root, tree_rounds);
        const gbp::TreeDominanceReport dom =
            gbp::verify_tree_dominance(sys, g, d, tree_root, tree_rounds);
        json j;
        j["root"] = tree_root;
        j["rounds"] = tree_rounds;
        j["tree_nodes"] = tree.nodes.size();
        j["layer_sizes"] = tree.layer_sizes;
        j["root_estimate_graph"] = eq.x_graph;
        j["root_estimate_tree"] = eq.x_tree;
        j["abs_diff"] = eq.abs_diff;
        j["root_equivalent"] = eq.ok;
        j["original_classification"] = gbp::to_string(dom.original);
        j["tree_classification"] = gbp::to_string(dom.tree);
        j["tree_dominant"] = dom.ok;
        emit(j, tree_out);
        return eq.ok && dom.ok ? kExitOk : kExitNumerical;
    }

    if (bench->parsed()) {
        json runs = json::array();
        int wins = 0;
        for (int s = 0; s < bench_count; ++s) {
            InputOptions in = bench_in;
            in.seed = bench_in.seed + static_cast<std::uint64_t>(s);
            const gbp::SparseSystem sys = in.load();
            const gbp::InducedGraph g = gbp::build_induced_graph(sys);
            const gbp::Solution star = gbp::direct_solve(sys);
            const gbp::Trajectory mp = gbp::run(sys, g, bench_rounds, 0.0, &star);
            const gbp::Trajectory ja = gbp::jacobi_run(sys, bench_rounds, 0.0, &star);
            const bool win = mp.mse.back() < ja.mse.back();
            wins += win ? 1 : 0;
            runs.push_back({{"seed", in.seed},
                            {"solver_final_mse", mp.mse.back()},
                            {"jacobi_final_mse", ja.mse.back()},
                            {"solver_wins", win}});
        }
        json j;
        j["rounds"] = bench_rounds;
        j["count"] = bench_count;
        j["solver_wins"] = wins;
        j["runs"] = runs;
        emit(j, bench_out);
        return kExitOk;
    }

    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 prints its own message via exit(); mirror the code mapping
        CLI::App app;
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    } catch (const gbp::NumericalFailure& e) {
        json err{{"error", {{"type", "numerical_failure"},
                            {"message", e.what()},
                            {"round", e.round},
                            {"from", e.from},
                            {"to", e.to}}}};
        std::cout << err.dump(2) << "\n";
        return kExitNumerical;
    } catch (const gbp::SingularMatrix& e) {
        json err{{"error", {{"type", "singular_matrix"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return kExitNumerical;
    } catch (const gbp::NotWeaklyDominant& e) {
        json err{{"error", {{"type", "not_weakly_dominant"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return kExitNotDominant;
    } catch (const gbp::NotGeneralizedDominant& e) {
        json err{{"error", {{"type", "not_generalized_dominant"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return kExitNotDominant;
    } catch (const gbp::ParseError& e) {
        json err{{"error", {{"type", "parse_error"}, {"message", e.what()}, {"line", e.line}}}};
        std::cout << err.dump(2) << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        json err{{"error", {{"type", "error"}, {"message", e.what()}}}};
        std::cout << err.dump(2) << "\n";
        return kExitConfig;
    }
}
