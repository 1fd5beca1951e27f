#include "gbp/bounds.hpp"

#include <cmath>
#include <limits>

namespace gbp {

namespace {

Vector edge_coefficients(const SparseSystem& sys, const InducedGraph& g) {
    Vector coeff(g.directed_count());
    for (Index e = 0; e < g.directed_count(); ++e) coeff[e] = sys.entry(g.source(e), g.target(e));
    return coeff;
}

// Lambda_{i->j} = |a_ji| d_i - a_ji a_ij d_j varrho_j / a_{i->j}
Vector lambda_from_messages(const InducedGraph& g, const Vector& coeff, const Vector& d,
                            const Vector& vr, const Vector& a_msg) {
    Vector lambda(g.directed_count());
    for (Index e = 0; e < g.directed_count(); ++e) {
        const Index i = g.source(e), j = g.target(e);
        const double a_ji = coeff[g.twin(e)], a_ij = coeff[e];
        lambda[e] = std::abs(a_ji) * d[i] - a_ji * a_ij * d[j] * vr[j] / a_msg[e];
        if (a_ji != 0.0 && !(lambda[e] > 0.0))
            throw NonPositiveLambda("lambda for edge " + std::to_string(i) + "->" +
                                    std::to_string(j) + " is " + std::to_string(lambda[e]));
    }
    return lambda;
}

}  // namespace

RecursionBoundTable recursion_bound(const SparseSystem& sys, const InducedGraph& g,
                                    const Scaling& d, int rounds) {
    if (rounds < 1) throw Error("rounds must be >= 1");
    const DominanceReport report = classify(sys, d);
    if (!at_least(report.classification, Classification::WeaklyDScaledDD))
        throw NotWeaklyDominant("classification is " + to_string(report.classification));

    const Index n = sys.size();
    const Vector& vr = report.varrho;
    const Vector coeff = edge_coefficients(sys, g);
    const Solution star = direct_solve(sys);

    RecursionBoundTable table;
    table.varrho = vr;
    table.xstar_norm = scaled_max_norm(star.x, d);
    table.bound = Matrix::Constant(rounds + 1, n, std::numeric_limits<double>::quiet_NaN());
    table.levels.reserve(static_cast<size_t>(rounds));

    Vector a_msg(g.directed_count());
    for (Index e = 0; e < g.directed_count(); ++e) a_msg[e] = sys.diag(g.source(e));

    BoundState state;
    state.level = 0;
    state.lambda_edge = lambda_from_messages(g, coeff, d.d, vr, a_msg);
    state.eta_edge.resize(g.directed_count());
    for (Index e = 0; e < g.directed_count(); ++e) state.eta_edge[e] = vr[g.source(e)];

    for (int k = 1; k <= rounds; ++k) {
        // bound_i(k) from the level k-1 tables
        for (Index i = 0; i < n; ++i) {
            double num = 0.0, den = 0.0;
            for (Index e = g.out_begin(i); e < g.out_begin(i + 1); ++e) {
                const Index in = g.twin(e);
                num += state.lambda_edge[in] * state.eta_edge[in];
                den += state.lambda_edge[in];
            }
            table.bound(k, i) =
                den > 0.0 ? d.d[i] * vr[i] * num / den * table.xstar_norm : 0.0;
        }
        table.levels.push_back(state);
        if (k == rounds) break;

        // advance the a-messages one level
        Vector a_next(g.directed_count());
        for (Index i = 0; i < n; ++i) {
            const double guard = 1e-12 * std::abs(sys.diag(i));
            double a_i = sys.diag(i);
            for (Index e = g.out_begin(i); e < g.out_begin(i + 1); ++e) {
                const Index in = g.twin(e);
                if (std::abs(a_msg[in]) < guard)
                    throw NumericalFailure(k, g.source(in), i, "message divisor collapse");
                a_i -= coeff[in] * coeff[e] / a_msg[in];
            }
            for (Index e = g.out_begin(i); e < g.out_begin(i + 1); ++e) {
                const Index in = g.twin(e);
                a_next[e] = a_i + coeff[in] * coeff[e] / a_msg[in];
            }
        }
        a_msg = std::move(a_next);

        // eta at level l uses Lambda and eta from level l-1
        BoundState next;
        next.level = state.level + 1;
        next.lambda_edge = lambda_from_messages(g, coeff, d.d, vr, a_msg);
        next.eta_edge.resize(g.directed_count());
        for (Index i = 0; i < n; ++i) {
            double sum_le = 0.0, sum_l = 0.0;
            for (Index e = g.out_begin(i); e < g.out_begin(i + 1); ++e) {
                const Index in = g.twin(e);
                sum_le += state.lambda_edge[in] * state.eta_edge[in];
                sum_l += state.lambda_edge[in];
            }
            for (Index e = g.out_begin(i); e < g.out_begin(i + 1); ++e) {
                const Index in = g.twin(e), j = g.target(e);
                const double num = sum_le - state.lambda_edge[in] * state.eta_edge[in];
                const double den = std::abs(coeff[e]) * d.d[j] * (1.0 - vr[i] * vr[j]) +
                                   (sum_l - state.lambda_edge[in]);
                next.eta_edge[e] = den > 0.0 ? vr[i] * num / den : 0.0;
            }
        }
        state = std::move(next);
    }
    return table;
}

SpectralBoundTable spectral_bound(const SparseSystem& sys, int rounds) {
    if (rounds < 0) throw Error("rounds must be >= 0");
    SpectralBoundTable table;
    table.certificate = spectral_certificate(sys);
    if (!(table.certificate.rho < 1.0))
        throw NotGeneralizedDominant("spectral radius " + std::to_string(table.certificate.rho) +
                                     " is not below 1");
    const Solution star = direct_solve(sys);
    const Scaling u(table.certificate.u);
    table.xstar_norm = scaled_max_norm(star.x, u);
    const Index n = sys.size();
    table.bound.resize(rounds + 1, n);
    double rho_pow = table.certificate.rho;  // rho^(k+1) at k = 0
    for (int k = 0; k <= rounds; ++k) {
        for (Index i = 0; i < n; ++i) table.bound(k, i) = u.d[i] * rho_pow * table.xstar_norm;
        rho_pow *= table.certificate.rho;
    }
    return table;
}

namespace {

struct LoopSearch {
    const InducedGraph& g;
    const Vector& vr;
    long max_loops;
    LoopGainReport& report;
    std::vector<Index> path;
    std::vector<char> on_path;

    bool full() const { return static_cast<long>(report.loops.size()) >= max_loops; }

    void record() {
        const auto k = static_cast<double>(path.size());
        double gain = 1.0;
        for (Index v : path) gain *= vr[v];
        report.loops.push_back(path);
        report.gains.push_back(gain);
        report.per_node_gains.push_back(std::pow(gain, 1.0 / k));
    }

    // Enumerates simple cycles whose minimum vertex is path[0]; interior
    // vertices are kept strictly larger so each cycle appears once, and the
    // orientation with the smaller second vertex is the canonical one.
    void dfs(Index u) {
        const Index s = path[0];
        for (Index w : g.neighbors(u)) {
            if (full()) {
                report.truncated = true;
                return;
            }
            if (w == s) {
                if (path.size() >= 3 && path[1] < path.back()) record();
            } else if (w > s && !on_path[w]) {
                path.push_back(w);
                on_path[w] = 1;
                dfs(w);
                on_path[w] = 0;
                path.pop_back();
            }
        }
    }
};

}  // namespace

LoopGainReport enumerate_simple_loops(const InducedGraph& g, const Vector& varrho_values,
                                      long max_loops) {
    if (varrho_values.size() != g.size()) throw Error("varrho length mismatch");
    LoopGainReport report;
    LoopSearch search{g, varrho_values, max_loops, report, {}, {}};
    search.on_path.assign(static_cast<size_t>(g.size()), 0);
    for (Index s = 0; s < g.size() && !report.truncated; ++s) {
        search.path.assign(1, s);
        search.on_path[s] = 1;
        search.dfs(s);
        search.on_path[s] = 0;
    }
    for (double lam : report.per_node_gains) report.lambda_star = std::max(report.lambda_star, lam);
    return report;
}

double lambda_star_at_perron(const SparseSystem& sys, long max_loops) {
    const SpectralCertificate cert = spectral_certificate(sys);
    if (!(cert.rho < 1.0))
        throw NotGeneralizedDominant("spectral radius " + std::to_string(cert.rho) +
                                     " is not below 1");
    const Vector vr = varrho(sys, Scaling(cert.u));
    const InducedGraph g = build_induced_graph(sys);
    return enumerate_simple_loops(g, vr, max_loops).lambda_star;
}

RateEstimate estimate_asymptotic_rate(const Trajectory& traj, int k0, int k1) {
    if (!traj.has_oracle) throw Error("trajectory has no oracle errors");
    if (k0 < 0 || k1 <= k0 || k1 > traj.rounds_executed)
        throw Error("fit window [" + std::to_string(k0) + "," + std::to_string(k1) +
                    "] outside recorded rounds");

    RateEstimate est;
    est.k0 = k0;
    est.k1 = k1;

    const double rms_floor =
        100.0 * std::numeric_limits<double>::epsilon() * (1.0 + traj.oracle_max_norm);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = k0; k <= k1; ++k) {
        const double mse = traj.mse[static_cast<size_t>(k)];
        if (mse == 0.0) {
            est.exact_convergence = true;
            return est;
        }
        if (std::sqrt(mse) < rms_floor) continue;  // float-floor plateau
        const double y = std::log10(mse);
        sx += k;
        sy += y;
        sxx += static_cast<double>(k) * k;
        sxy += k * y;
        ++est.points;
    }
    if (est.points < 2) {
        est.exact_convergence = true;
        return est;
    }
    const double m = est.points;
    est.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    est.rate = std::pow(10.0, est.slope / 2.0);
    return est;
}

std::pair<int, int> default_fit_window(const Trajectory& traj) {
    return {traj.rounds_executed / 2, traj.rounds_executed};
}

}  // namespace gbp
