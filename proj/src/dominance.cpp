#include "gbp/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gbp {

std::string to_string(Classification c) {
    switch (c) {
        case Classification::StrictDD: return "StrictDD";
        case Classification::DScaledDD: return "DScaledDD";
        case Classification::WeaklyDScaledDD: return "WeaklyDScaledDD";
        case Classification::NotWeaklyDD: return "NotWeaklyDD";
    }
    return "?";
}

bool at_least(Classification c, Classification floor) {
    return static_cast<int>(c) <= static_cast<int>(floor);
}

Vector varrho(const SparseSystem& sys, const Scaling& d) {
    const Index n = sys.size();
    if (d.d.size() != n) throw Error("scaling length mismatch");
    Vector out(n);
    for (Index i = 0; i < n; ++i) {
        if (!(sys.diag(i) > 0.0))
            throw NonPositiveDiagonal("a_" + std::to_string(i) + std::to_string(i) +
                                      " is not positive");
        double s = 0.0;
        for (const auto& [j, v] : sys.row(i)) s += std::abs(v) * d.d[j];
        out[i] = s / (sys.diag(i) * d.d[i]);
    }
    return out;
}

DominanceReport classify(const SparseSystem& sys, const Scaling& d) {
    const Index n = sys.size();
    DominanceReport report;
    for (Index i = 0; i < n; ++i)
        if (!(sys.diag(i) > 0.0)) {
            report.classification = Classification::NotWeaklyDD;
            report.diagnostic = "diagonal entry " + std::to_string(i) + " is not positive";
            return report;
        }
    report.varrho = varrho(sys, d);
    const Vector varrho_identity = varrho(sys, Scaling::identity(n));

    constexpr double kBorderline = 1e-12;
    auto near_one = [&](double v) { return std::abs(v - 1.0) < kBorderline; };

    bool strict = true, scaled = true, weakly = true;
    for (Index i = 0; i < n; ++i) {
        strict = strict && varrho_identity[i] < 1.0;
        scaled = scaled && report.varrho[i] < 1.0;
        if (near_one(varrho_identity[i]) || near_one(report.varrho[i])) report.borderline = true;
    }
    const InducedGraph g = build_induced_graph(sys);
    for (auto [i, j] : g.edges()) {
        const double prod = report.varrho[i] * report.varrho[j];
        weakly = weakly && prod < 1.0;
        if (near_one(prod)) report.borderline = true;
    }

    if (strict)
        report.classification = Classification::StrictDD;
    else if (scaled)
        report.classification = Classification::DScaledDD;
    else if (weakly)
        report.classification = Classification::WeaklyDScaledDD;
    else {
        report.classification = Classification::NotWeaklyDD;
        report.diagnostic = "some edge has varrho_i * varrho_j >= 1";
    }
    return report;
}

namespace {

// One shifted power-iteration sweep restricted to a component: y = x + Rbar x.
void shifted_apply(const SparseSystem& sys, const std::vector<Index>& comp, const Vector& x,
                   Vector& y) {
    for (Index i : comp) {
        double s = 0.0;
        for (const auto& [j, v] : sys.row(i)) s += std::abs(v) * x[j];
        y[i] = x[i] + s / sys.diag(i);
    }
}

}  // namespace

SpectralCertificate spectral_certificate(const SparseSystem& sys) {
    const Index n = sys.size();
    for (Index i = 0; i < n; ++i)
        if (!(sys.diag(i) > 0.0))
            throw NonPositiveDiagonal("a_" + std::to_string(i) + std::to_string(i) +
                                      " is not positive");

    // tighter than the 1e-10 contract so certificate consumers can compare
    // bounds at absolute 1e-10 slack
    constexpr double kTol = 1e-13;
    constexpr int kMaxIter = 10000;

    SpectralCertificate cert;
    cert.u = Vector::Ones(n);
    const InducedGraph g = build_induced_graph(sys);
    Vector x = Vector::Ones(n), y = Vector::Zero(n);

    for (const auto& comp : g.connected_components()) {
        if (comp.size() == 1 && g.degree(comp[0]) == 0) continue;  // rho 0, u stays 1
        for (Index i : comp) x[i] = 1.0;
        int it = 0;
        bool hit_tol = false;
        for (; it < kMaxIter; ++it) {
            shifted_apply(sys, comp, x, y);
            double rmax = 0.0, rmin = std::numeric_limits<double>::infinity(), ymax = 0.0;
            for (Index i : comp) {
                const double r = y[i] / x[i];
                rmax = std::max(rmax, r);
                rmin = std::min(rmin, r);
                ymax = std::max(ymax, std::abs(y[i]));
            }
            for (Index i : comp) x[i] = y[i] / ymax;
            if (rmax - rmin <= kTol * rmax) {
                hit_tol = true;
                break;
            }
        }
        // Report the Collatz-Wielandt upper value, evaluated with the same
        // arithmetic varrho uses, so varrho(sys, u) never exceeds rho.
        double rho_comp = 0.0;
        for (Index i : comp) {
            double s = 0.0;
            for (const auto& [j, v] : sys.row(i)) s += std::abs(v) * x[j];
            rho_comp = std::max(rho_comp, s / (sys.diag(i) * x[i]));
        }
        cert.converged = cert.converged && hit_tol;
        cert.iterations = std::max(cert.iterations, it + 1);
        cert.rho = std::max(cert.rho, rho_comp);
        for (Index i : comp) {
            cert.u[i] = x[i];
            if (x[i] < 1e-12) cert.reducible_warning = true;
        }
    }
    return cert;
}

DiagonalizerTrace construct_diagonalizer(const SparseSystem& sys, const Scaling& d) {
    const DominanceReport report = classify(sys, d);
    if (!at_least(report.classification, Classification::WeaklyDScaledDD))
        throw NotWeaklyDominant("classification is " + to_string(report.classification));

    const Index n = sys.size();
    const Vector& vr = report.varrho;
    const InducedGraph g = build_induced_graph(sys);

    DiagonalizerTrace trace;
    std::vector<char> in_u(static_cast<size_t>(n), 0);
    for (Index i = 0; i < n; ++i)
        if (vr[i] >= 1.0) {
            in_u[i] = 1;
            trace.u_set.push_back(i);
        }

    Vector d_tilde = d.d;
    if (!trace.u_set.empty()) {
        // epsilon: half the worst-case slack of the two constraints
        // rho_bar_i < 1 and varrho_i * rho_bar_i < 1 over U.
        double slack = std::numeric_limits<double>::infinity();
        std::map<Index, double> max_neighbor;
        for (Index i : trace.u_set) {
            double m = 0.0;
            for (Index j : g.neighbors(i)) m = std::max(m, vr[j]);
            max_neighbor[i] = m;
            slack = std::min(slack, std::min(1.0 - m, 1.0 / vr[i] - m));
        }
        trace.epsilon = 0.5 * slack;
        for (Index i : trace.u_set) {
            const double rho_bar = trace.epsilon + max_neighbor[i];
            trace.rho_bar[i] = rho_bar;
            d_tilde[i] = d.d[i] / rho_bar;
        }
        for (Index i = 0; i < n; ++i) {
            if (in_u[i]) continue;
            double breve = 1.0;
            for (Index j : g.neighbors(i))
                if (in_u[j]) breve = std::min(breve, trace.rho_bar.at(j));
            trace.rho_breve[i] = breve;
        }
    }
    trace.d_tilde = Scaling(d_tilde);
    trace.varrho_tilde = varrho(sys, trace.d_tilde);
    for (Index i = 0; i < n; ++i)
        if (!(trace.varrho_tilde[i] < 1.0))
            throw Error("diagonalizer failed to reach strict dominance at node " +
                        std::to_string(i));
    return trace;
}

}  // namespace gbp
