#include "gbp/solver.hpp"

#include <cmath>

namespace gbp {

namespace {

// Matrix coefficients laid out per directed edge: coeff[e] = a_{source(e),target(e)}.
Vector edge_coefficients(const SparseSystem& sys, const InducedGraph& g) {
    Vector coeff(g.directed_count());
    for (Index e = 0; e < g.directed_count(); ++e) coeff[e] = sys.entry(g.source(e), g.target(e));
    return coeff;
}

void check_diag_positive(const SparseSystem& sys) {
    for (Index i = 0; i < sys.size(); ++i)
        if (!(sys.diag(i) > 0.0))
            throw NonPositiveDiagonal("a_" + std::to_string(i) + std::to_string(i) +
                                      " is not positive");
}

MessageState step_impl(const SparseSystem& sys, const InducedGraph& g, const Vector& coeff,
                       const MessageState& prev) {
    const Index n = sys.size();
    const int k = prev.round + 1;
    MessageState next;
    next.round = k;
    next.a_msg.resize(g.directed_count());
    next.b_msg.resize(g.directed_count());
    next.a_node.resize(n);
    next.b_node.resize(n);
    next.x_est.resize(n);

    for (Index i = 0; i < n; ++i) {
        const double guard = 1e-12 * std::abs(sys.diag(i));
        double a_i = sys.diag(i);
        double b_i = sys.rhs()[i];
        const Index begin = g.out_begin(i), end = g.out_begin(i + 1);
        for (Index e = begin; e < end; ++e) {
            const Index in = g.twin(e);  // v -> i
            const double divisor = prev.a_msg[in];
            if (std::abs(divisor) < guard)
                throw NumericalFailure(k, g.source(in), i, "message divisor collapse");
            a_i -= coeff[in] * coeff[e] / divisor;
            b_i -= coeff[e] * prev.b_msg[in] / divisor;
        }
        if (std::abs(a_i) < guard)
            throw NumericalFailure(k, i, i, "node divisor collapse");
        next.a_node[i] = a_i;
        next.b_node[i] = b_i;
        next.x_est[i] = b_i / a_i;
        for (Index e = begin; e < end; ++e) {
            const Index in = g.twin(e);
            next.a_msg[e] = a_i + coeff[in] * coeff[e] / prev.a_msg[in];
            next.b_msg[e] = b_i + coeff[e] * prev.b_msg[in] / prev.a_msg[in];
            ++next.messages_sent;
        }
    }
    return next;
}

void record(Trajectory& traj, const Vector& x, const Solution* oracle) {
    traj.x_history.push_back(x);
    if (oracle) {
        const Index n = x.size();
        traj.mse.push_back((x - oracle->x).squaredNorm() / static_cast<double>(n));
    }
}

}  // namespace

MessageState init_messages(const SparseSystem& sys, const InducedGraph& g) {
    check_diag_positive(sys);
    MessageState state;
    state.round = 0;
    state.a_msg.resize(g.directed_count());
    state.b_msg.resize(g.directed_count());
    for (Index e = 0; e < g.directed_count(); ++e) {
        state.a_msg[e] = sys.diag(g.source(e));
        state.b_msg[e] = sys.rhs()[g.source(e)];
        ++state.messages_sent;
    }
    state.a_node = sys.diagonal();
    state.b_node = sys.rhs();
    state.x_est = sys.rhs().cwiseQuotient(sys.diagonal());
    return state;
}

MessageState step(const SparseSystem& sys, const InducedGraph& g, const MessageState& prev) {
    return step_impl(sys, g, edge_coefficients(sys, g), prev);
}

Trajectory run(const SparseSystem& sys, const InducedGraph& g, int max_rounds, double stop_tol,
               const Solution* oracle) {
    if (max_rounds < 1) throw Error("max_rounds must be >= 1");
    const Vector coeff = edge_coefficients(sys, g);
    Trajectory traj;
    traj.has_oracle = oracle != nullptr;
    if (oracle) traj.oracle_max_norm = max_norm(oracle->x);

    MessageState state = init_messages(sys, g);
    record(traj, state.x_est, oracle);
    for (int k = 1; k <= max_rounds; ++k) {
        MessageState next;
        try {
            next = step_impl(sys, g, coeff, state);
        } catch (const NumericalFailure& f) {
            traj.termination = Termination::NumericalFailure;
            traj.failure_round = f.round;
            traj.failure_from = f.from;
            traj.failure_to = f.to;
            return traj;
        }
        const double diff = max_norm(next.x_est - state.x_est);
        state = std::move(next);
        record(traj, state.x_est, oracle);
        traj.rounds_executed = k;
        if (stop_tol > 0.0 && diff < stop_tol) {
            traj.termination = Termination::Converged;
            return traj;
        }
    }
    traj.termination = Termination::MaxRounds;
    return traj;
}

Trajectory jacobi_run(const SparseSystem& sys, int max_rounds, double stop_tol,
                      const Solution* oracle) {
    if (max_rounds < 1) throw Error("max_rounds must be >= 1");
    const Index n = sys.size();
    for (Index i = 0; i < n; ++i)
        if (sys.diag(i) == 0.0)
            throw ZeroDiagonal("a_" + std::to_string(i) + std::to_string(i) + " is zero");

    Trajectory traj;
    traj.has_oracle = oracle != nullptr;
    if (oracle) traj.oracle_max_norm = max_norm(oracle->x);

    Vector x = sys.rhs().cwiseQuotient(sys.diagonal());
    record(traj, x, oracle);
    for (int k = 1; k <= max_rounds; ++k) {
        Vector next(n);
        for (Index i = 0; i < n; ++i) {
            double s = sys.rhs()[i];
            for (const auto& [j, v] : sys.row(i)) s -= v * x[j];
            next[i] = s / sys.diag(i);
        }
        const double diff = max_norm(next - x);
        x = std::move(next);
        record(traj, x, oracle);
        traj.rounds_executed = k;
        if (stop_tol > 0.0 && diff < stop_tol) {
            traj.termination = Termination::Converged;
            return traj;
        }
    }
    traj.termination = Termination::MaxRounds;
    return traj;
}

SparseSystem transform_system(const SparseSystem& sys, const Scaling& d) {
    const Index n = sys.size();
    if (d.d.size() != n) throw Error("scaling length mismatch");
    SparseSystem out(n);
    for (Index i = 0; i < n; ++i) {
        out.set_diag(i, sys.diag(i));
        for (const auto& [j, v] : sys.row(i)) out.set_entry(i, j, v * d.d[j] / d.d[i]);
    }
    out.set_rhs(sys.rhs().cwiseQuotient(d.d));
    return out;
}

}  // namespace gbp
