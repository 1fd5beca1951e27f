#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "gbp/bounds.hpp"
#include "gbp/generate.hpp"
#include "gbp/solver.hpp"

namespace gbp {

enum class ScalingChoice { Identity, Perron, Explicit };

/// One end-to-end run: solve, optional Jacobi baseline, optional bounds,
/// rate fit, CSV curve and JSON summary emission.
struct ExperimentConfig {
    // input: a Matrix Market file (with optional rhs) or a generator recipe
    std::string input_path;
    std::string rhs_path;
    std::optional<GeneratorSpec> generator;

    ScalingChoice scaling = ScalingChoice::Identity;
    std::string scaling_path;  // Explicit: vector file (Matrix Market array or JSON)
    Vector scaling_values;     // Explicit: inline values (wins over scaling_path)

    int rounds = 100;
    double stop_tol = 0.0;  // 0 disables the successive-difference stop

    bool bound_theorem1 = false;
    bool bound_rho = false;
    bool bound_lambda_star = false;
    bool jacobi = false;

    std::uint64_t seed = 0;
    std::optional<std::pair<int, int>> fit_window;  // default: last half
    long max_loops = 1000000;

    std::string out_csv;
    std::string out_json;
};

ExperimentConfig config_from_json(const nlohmann::json& j);

struct ExperimentSummary {
    nlohmann::json json;
    Termination termination = Termination::MaxRounds;
};

/// Runs the configured experiment and writes the CSV/JSON outputs.
/// A message-passing divisor collapse is recorded in the summary (partial
/// curves are still written), not thrown; precondition failures
/// (NotWeaklyDominant, NotGeneralizedDominant) and input errors propagate.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

}  // namespace gbp
