#include "gbp/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gbp/matrix_market.hpp"

namespace gbp {

namespace {

using nlohmann::json;

GeneratorSpec generator_from_json(const json& j) {
    GeneratorSpec spec;
    spec.kind = generator_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("n")) spec.n = j.at("n").get<Index>();
    if (j.contains("row_sum")) spec.row_sum = j.at("row_sum").get<double>();
    if (j.contains("mean_degree")) spec.mean_degree = j.at("mean_degree").get<double>();
    if (j.contains("value_min")) spec.value_min = j.at("value_min").get<double>();
    if (j.contains("value_max")) spec.value_max = j.at("value_max").get<double>();
    if (j.contains("positive_prob")) spec.positive_prob = j.at("positive_prob").get<double>();
    if (j.contains("target_row_sum"))
        spec.target_row_sum = j.at("target_row_sum").get<double>();
    return spec;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Eq-style aggregation of a per-node bound row: log10((1/n) sum_i bound_i^2).
double bound_row_log10(const Matrix& table, int k) {
    const double n = static_cast<double>(table.cols());
    return std::log10(table.row(k).squaredNorm() / n);
}

std::string csv_cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

const char* to_string(Termination t) {
    switch (t) {
        case Termination::MaxRounds: return "max_rounds";
        case Termination::Converged: return "converged";
        case Termination::NumericalFailure: return "numerical_failure";
    }
    return "?";
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    if (j.contains("input")) cfg.input_path = j.at("input").get<std::string>();
    if (j.contains("rhs")) cfg.rhs_path = j.at("rhs").get<std::string>();
    if (j.contains("generate")) cfg.generator = generator_from_json(j.at("generate"));
    if (cfg.input_path.empty() == !cfg.generator.has_value())
        throw Error("config needs exactly one of \"input\" and \"generate\"");

    if (j.contains("scaling")) {
        const auto& s = j.at("scaling");
        if (s.is_string()) {
            const auto name = s.get<std::string>();
            if (name == "identity")
                cfg.scaling = ScalingChoice::Identity;
            else if (name == "perron")
                cfg.scaling = ScalingChoice::Perron;
            else
                throw Error("unknown scaling: " + name);
        } else if (s.contains("file")) {
            cfg.scaling = ScalingChoice::Explicit;
            cfg.scaling_path = s.at("file").get<std::string>();
        } else if (s.contains("vector")) {
            cfg.scaling = ScalingChoice::Explicit;
            const auto& vec = s.at("vector");
            cfg.scaling_values.resize(static_cast<Index>(vec.size()));
            for (Index i = 0; i < cfg.scaling_values.size(); ++i)
                cfg.scaling_values[i] = vec[static_cast<size_t>(i)].get<double>();
        } else {
            throw Error("malformed scaling entry");
        }
    }

    if (j.contains("rounds")) cfg.rounds = j.at("rounds").get<int>();
    if (cfg.rounds < 1) throw Error("rounds must be >= 1");
    if (j.contains("stop_tol")) cfg.stop_tol = j.at("stop_tol").get<double>();
    if (j.contains("bounds"))
        for (const auto& name : j.at("bounds")) {
            const auto s = name.get<std::string>();
            if (s == "theorem1")
                cfg.bound_theorem1 = true;
            else if (s == "rho")
                cfg.bound_rho = true;
            else if (s == "lambda_star")
                cfg.bound_lambda_star = true;
            else
                throw Error("unknown bound: " + s);
        }
    if (j.contains("jacobi")) cfg.jacobi = j.at("jacobi").get<bool>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("fit_window")) {
        const auto& w = j.at("fit_window");
        cfg.fit_window = std::make_pair(w.at(0).get<int>(), w.at(1).get<int>());
    }
    if (j.contains("max_loops")) cfg.max_loops = j.at("max_loops").get<long>();
    if (j.contains("out_csv")) cfg.out_csv = j.at("out_csv").get<std::string>();
    if (j.contains("out_json")) cfg.out_json = j.at("out_json").get<std::string>();
    return cfg;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
    if (cfg.input_path.empty() == !cfg.generator.has_value())
        throw Error("config needs exactly one of input path and generator");

    const SparseSystem sys = cfg.generator ? generate(*cfg.generator, cfg.seed)
                                           : load_matrix_market(cfg.input_path, cfg.rhs_path);
    const InducedGraph g = build_induced_graph(sys);
    const SpectralCertificate cert = spectral_certificate(sys);

    Scaling d = Scaling::identity(sys.size());
    const char* scaling_name = "identity";
    if (cfg.scaling == ScalingChoice::Perron) {
        d = Scaling(cert.u);
        scaling_name = "perron";
    } else if (cfg.scaling == ScalingChoice::Explicit) {
        d = Scaling(cfg.scaling_values.size() > 0 ? cfg.scaling_values
                                                  : load_vector(cfg.scaling_path, sys.size()));
        scaling_name = "explicit";
    }

    const DominanceReport report = classify(sys, d);
    const Solution star = direct_solve(sys);
    const Trajectory traj = run(sys, g, cfg.rounds, cfg.stop_tol, &star);

    std::optional<Trajectory> jacobi;
    if (cfg.jacobi) jacobi = jacobi_run(sys, cfg.rounds, cfg.stop_tol, &star);

    std::optional<RecursionBoundTable> thm1;
    if (cfg.bound_theorem1) thm1 = recursion_bound(sys, g, d, cfg.rounds);
    std::optional<SpectralBoundTable> rho_table;
    if (cfg.bound_rho) rho_table = spectral_bound(sys, cfg.rounds);
    std::optional<LoopGainReport> loops;
    if (cfg.bound_lambda_star) loops = enumerate_simple_loops(g, report.varrho, cfg.max_loops);

    ExperimentSummary out;
    out.termination = traj.termination;
    json& summary = out.json;

    summary["n"] = sys.size();
    summary["edges"] = g.edge_count();
    summary["seed"] = cfg.seed;
    summary["input"] = cfg.generator ? to_string(cfg.generator->kind) : cfg.input_path;
    summary["scaling"] = scaling_name;
    summary["classification"] = to_string(report.classification);
    summary["borderline"] = report.borderline;
    summary["varrho"] = std::vector<double>(report.varrho.begin(), report.varrho.end());
    summary["rho"] = cert.rho;
    summary["rho_converged"] = cert.converged;
    if (cert.reducible_warning) summary["reducible_warning"] = true;
    summary["termination"] = to_string(traj.termination);
    summary["rounds_executed"] = traj.rounds_executed;
    summary["oracle_residual_norm"] = star.residual_norm;
    if (traj.termination == Termination::NumericalFailure)
        summary["failure"] = {{"round", traj.failure_round},
                              {"from", traj.failure_from},
                              {"to", traj.failure_to}};
    if (loops) {
        summary["lambda_star"] = loops->lambda_star;
        summary["loop_count"] = loops->loops.size();
        summary["loops_truncated"] = loops->truncated;
        summary["acyclic"] = loops->acyclic();
    }
    if (jacobi && !jacobi->mse.empty()) summary["jacobi_final_mse"] = jacobi->mse.back();
    if (!traj.mse.empty()) summary["final_mse"] = traj.mse.back();

    // rate fit over the requested window, clamped to the recorded rounds
    {
        auto [k0, k1] = cfg.fit_window.value_or(default_fit_window(traj));
        k1 = std::min(k1, traj.rounds_executed);
        summary["fit_window"] = {k0, k1};
        if (k0 >= 0 && k1 > k0) {
            const RateEstimate est = estimate_asymptotic_rate(traj, k0, k1);
            summary["exact_convergence"] = est.exact_convergence;
            if (!est.exact_convergence) {
                summary["slope"] = est.slope;
                summary["rate"] = est.rate;
            }
        }
    }

    if (!cfg.out_csv.empty()) {
        std::ofstream csv(cfg.out_csv);
        if (!csv) throw Error("cannot open " + cfg.out_csv + " for writing");
        csv << "round,log10_mse,theorem1_bound_log10,rho_bound_log10,jacobi_log10_mse\n";
        for (int k = 0; k <= traj.rounds_executed; ++k) {
            csv << k;
            const double mse = traj.mse[static_cast<size_t>(k)];
            csv << "," << csv_cell(mse > 0.0 ? std::log10(mse) : -INFINITY);
            csv << ",";
            if (thm1 && k >= 1) csv << csv_cell(bound_row_log10(thm1->bound, k));
            csv << ",";
            if (rho_table) csv << csv_cell(bound_row_log10(rho_table->bound, k));
            csv << ",";
            if (jacobi && k <= jacobi->rounds_executed) {
                const double jm = jacobi->mse[static_cast<size_t>(k)];
                csv << csv_cell(jm > 0.0 ? std::log10(jm) : -INFINITY);
            }
            csv << "\n";
        }
        if (!csv) throw Error("write failed for " + cfg.out_csv);
    }
    if (!cfg.out_json.empty()) {
        std::ofstream js(cfg.out_json);
        if (!js) throw Error("cannot open " + cfg.out_json + " for writing");
        js << summary.dump(2) << "\n";
        if (!js) throw Error("write failed for " + cfg.out_json);
    }
    return out;
}

}  // namespace gbp
