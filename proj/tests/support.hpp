#pragma once

// Instance builders shared by the unit and acceptance suites. These generate
// weakly D-scaled dominant systems by construction: per-row off-diagonal
// magnitudes are rescaled so varrho_i hits a chosen target exactly, with
// "hub" targets above 1 placed on an independent set so edge products stay
// below 1.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "gbp/dominance.hpp"
#include "gbp/system.hpp"

namespace testsupport {

using gbp::Index;
using gbp::Scaling;
using gbp::SparseSystem;
using gbp::Vector;
using Rng = std::mt19937_64;

struct WeaklyDominantInstance {
    SparseSystem sys;
    Scaling d;
    bool has_hub = false;  // some varrho_i >= 1
};

inline std::vector<std::pair<Index, Index>> random_connected_graph(Index n, Rng& rng,
                                                                   double extra_factor = 1.0) {
    std::vector<Index> perm(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::set<std::pair<Index, Index>> edges;
    for (Index k = 1; k < n; ++k) {
        std::uniform_int_distribution<Index> pick(0, k - 1);
        Index a = perm[static_cast<size_t>(k)], b = perm[static_cast<size_t>(pick(rng))];
        edges.insert({std::min(a, b), std::max(a, b)});
    }
    std::uniform_int_distribution<Index> node(0, n - 1);
    const long extras = std::lround(extra_factor * n);
    for (long e = 0; e < extras; ++e) {
        Index a = node(rng), b = node(rng);
        if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
    }
    return {edges.begin(), edges.end()};
}

/// Structurally symmetric system over a random connected graph with
/// varrho targets hit exactly under the returned scaling.
inline WeaklyDominantInstance random_weakly_dominant(Index n, Rng& rng, bool want_hubs,
                                                     bool identity_scaling = false,
                                                     double extra_edges = 1.0) {
    while (true) {
        const auto edges = random_connected_graph(n, rng, extra_edges);
        std::vector<std::vector<Index>> nb(static_cast<size_t>(n));
        for (auto [i, j] : edges) {
            nb[static_cast<size_t>(i)].push_back(j);
            nb[static_cast<size_t>(j)].push_back(i);
        }

        std::uniform_real_distribution<double> low(0.2, 0.7);
        std::uniform_real_distribution<double> high(1.0, 1.3);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Vector target(n);
        bool has_hub = false;
        std::vector<char> hub(static_cast<size_t>(n), 0);
        for (Index i = 0; i < n; ++i) target[i] = low(rng);
        if (want_hubs) {
            for (Index i = 0; i < n; ++i) {
                bool neighbor_hub = false;
                for (Index j : nb[static_cast<size_t>(i)]) neighbor_hub |= hub[static_cast<size_t>(j)] != 0;
                if (!neighbor_hub && unit(rng) < 0.4) {
                    hub[static_cast<size_t>(i)] = 1;
                    target[i] = high(rng);
                    has_hub = true;
                }
            }
            if (!has_hub) continue;  // retry until a hub lands
        }

        Vector d = Vector::Ones(n);
        if (!identity_scaling) {
            std::uniform_real_distribution<double> logd(-0.7, 0.7);
            for (Index i = 0; i < n; ++i) d[i] = std::exp(logd(rng));
        }

        SparseSystem sys(n);
        std::uniform_real_distribution<double> mag(0.1, 1.0);
        for (Index i = 0; i < n; ++i) {
            sys.set_diag(i, 1.0);
            auto& row_nb = nb[static_cast<size_t>(i)];
            if (row_nb.empty()) continue;
            std::vector<double> raw;
            double mass = 0.0;
            for (Index j : row_nb) {
                double v = mag(rng) * (rng() % 2 ? 1.0 : -1.0);
                raw.push_back(v);
                mass += std::abs(v) * d[j];
            }
            const double scale = target[i] * d[i] / mass;
            for (size_t k = 0; k < raw.size(); ++k) sys.set_entry(i, row_nb[k], raw[k] * scale);
        }
        std::normal_distribution<double> gauss(0.0, 3.0);
        Vector b(n);
        for (Index i = 0; i < n; ++i) b[i] = gauss(rng);
        sys.set_rhs(b);
        sys.validate();
        return {std::move(sys), Scaling(d), has_hub};
    }
}

/// Generalized-DD system on a random tree topology.
inline SparseSystem random_tree_system(Index n, Rng& rng) {
    std::vector<std::pair<Index, Index>> edges;
    for (Index k = 1; k < n; ++k) {
        std::uniform_int_distribution<Index> pick(0, k - 1);
        edges.emplace_back(k, pick(rng));
    }
    std::vector<std::vector<Index>> nb(static_cast<size_t>(n));
    for (auto [i, j] : edges) {
        nb[static_cast<size_t>(i)].push_back(j);
        nb[static_cast<size_t>(j)].push_back(i);
    }
    SparseSystem sys(n);
    std::uniform_real_distribution<double> mag(0.1, 1.0);
    std::uniform_real_distribution<double> level(0.3, 0.9);
    for (Index i = 0; i < n; ++i) {
        sys.set_diag(i, 1.0);
        if (nb[static_cast<size_t>(i)].empty()) continue;
        std::vector<double> raw;
        double mass = 0.0;
        for (Index j : nb[static_cast<size_t>(i)]) {
            (void)j;
            double v = mag(rng) * (rng() % 2 ? 1.0 : -1.0);
            raw.push_back(v);
            mass += std::abs(v);
        }
        const double scale = level(rng) / mass;
        for (size_t k = 0; k < raw.size(); ++k)
            sys.set_entry(i, nb[static_cast<size_t>(i)][k], raw[k] * scale);
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector b(n);
    for (Index i = 0; i < n; ++i) b[i] = gauss(rng);
    sys.set_rhs(b);
    return sys;
}

}  // namespace testsupport
