#pragma once

#include <vector>

#include "gbp/system.hpp"

namespace gbp {

/// All directed-edge messages and per-node quantities of one round.
/// Message vectors are keyed by the graph's directed-edge index, so
/// a_msg[g.directed_index(i, j)] is the value node i sent to neighbor j.
struct MessageState {
    int round = 0;
    Vector a_msg;
    Vector b_msg;
    Vector a_node;
    Vector b_node;
    Vector x_est;
    /// Directed message pairs written this round (2|E|); locality instrument.
    Index messages_sent = 0;
};

enum class Termination { MaxRounds, Converged, NumericalFailure };

struct Trajectory {
    /// x_history[k] is the round-k estimate, k = 0..rounds_executed.
    std::vector<Vector> x_history;
    int rounds_executed = 0;
    Termination termination = Termination::MaxRounds;

    // populated when an oracle solution was supplied to run()
    bool has_oracle = false;
    std::vector<double> mse;  // (1/n) sum_i (x_i^(k) - x_i*)^2 per round
    double oracle_max_norm = 0.0;

    // populated when termination == NumericalFailure
    int failure_round = -1;
    Index failure_from = -1;
    Index failure_to = -1;

    const Vector& final_x() const { return x_history.back(); }
};

/// Round-0 state: a_{i->j} = a_ii, b_{i->j} = b_i, x_i = b_i / a_ii.
MessageState init_messages(const SparseSystem& sys, const InducedGraph& g);

/// One synchronous round; reads only the previous round's messages.
/// Throws NumericalFailure when a divisor falls below 1e-12 * |a_ii|.
MessageState step(const SparseSystem& sys, const InducedGraph& g, const MessageState& prev);

/// Iterates step() until max_rounds, the successive-difference max-norm drops
/// below stop_tol (when positive), or a numerical failure. Failures are
/// recorded in the trajectory, not thrown.
Trajectory run(const SparseSystem& sys, const InducedGraph& g, int max_rounds, double stop_tol,
               const Solution* oracle = nullptr);

/// Classical Jacobi iteration x' = A_d^-1 (b - (A - A_d) x), x_0 = A_d^-1 b.
Trajectory jacobi_run(const SparseSystem& sys, int max_rounds, double stop_tol,
                      const Solution* oracle = nullptr);

/// Returns the system D^-1 A D, D^-1 b; sparsity and diagonal are unchanged.
SparseSystem transform_system(const SparseSystem& sys, const Scaling& d);

}  // namespace gbp
