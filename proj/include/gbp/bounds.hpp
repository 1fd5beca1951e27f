#pragma once

#include <vector>

#include "gbp/dominance.hpp"
#include "gbp/solver.hpp"
#include "gbp/system.hpp"

namespace gbp {

/// Per-level edge tables driving the recursive error bound. Entries are keyed
/// by directed-edge index. lambda_edge is positive wherever the reverse
/// matrix entry a_ji is nonzero, and exactly zero on one-sided edges.
struct BoundState {
    int level = 0;
    Vector lambda_edge;
    Vector eta_edge;
};

/// Upper bounds on |x_i^(k) - x_i*| from the message recursion.
/// bound(k, i) covers round k for k = 1..K; row 0 is NaN (the recursion
/// defines no round-0 bound).
struct RecursionBoundTable {
    Matrix bound;                   // (K+1) x n
    std::vector<BoundState> levels; // levels 0..K-1
    Vector varrho;
    double xstar_norm = 0.0;        // ||x*||_d
};

/// Upper bounds on |x_i^(k) - x_i*| of the form u_i rho^(k+1) ||x*||_u.
struct SpectralBoundTable {
    Matrix bound;  // (K+1) x n, valid from round 0
    SpectralCertificate certificate;
    double xstar_norm = 0.0;  // ||x*||_u
};

/// Simple loops (closed non-reversal paths, length >= 3) with their gains.
struct LoopGainReport {
    std::vector<std::vector<Index>> loops;  // distinct node sequences
    std::vector<double> gains;              // product of varrho over the loop
    std::vector<double> per_node_gains;     // gain^(1/k)
    double lambda_star = 0.0;               // max per-node gain; 0 when acyclic
    bool truncated = false;                 // enumeration hit max_loops
    bool acyclic() const { return loops.empty(); }
};

struct RateEstimate {
    double slope = 0.0;  // per-round slope of log10 mean squared error
    double rate = 0.0;   // 10^(slope/2)
    int k0 = 0, k1 = 0;  // fitted round window
    int points = 0;      // rounds that entered the fit
    /// Errors hit exact zero (or the float floor) inside the window.
    bool exact_convergence = false;
};

/// Runs the b-independent a-message recursion and the edge Lambda/eta
/// recursion to produce per-node, per-round error bounds. Requires at least
/// weak D-scaled dominance under d.
RecursionBoundTable recursion_bound(const SparseSystem& sys, const InducedGraph& g,
                                    const Scaling& d, int rounds);

/// Requires the spectral certificate rho < 1.
SpectralBoundTable spectral_bound(const SparseSystem& sys, int rounds);

LoopGainReport enumerate_simple_loops(const InducedGraph& g, const Vector& varrho_values,
                                      long max_loops = 1000000);

/// Maximum loop gain per node under the Perron-vector scaling; equals rho
/// whenever the graph has at least one loop. Returns 0 on acyclic graphs.
double lambda_star_at_perron(const SparseSystem& sys, long max_loops = 1000000);

/// Least-squares slope of log10 mse over rounds [k0, k1] of a trajectory
/// recorded against an oracle.
RateEstimate estimate_asymptotic_rate(const Trajectory& traj, int k0, int k1);

/// Last half of the recorded rounds.
std::pair<int, int> default_fit_window(const Trajectory& traj);

}  // namespace gbp
