#include "gbp/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "gbp/dominance.hpp"

namespace gbp {

GeneratorKind generator_kind_from_string(const std::string& name) {
    if (name == "tree") return GeneratorKind::Tree;
    if (name == "single_loop") return GeneratorKind::SingleLoop;
    if (name == "example1") return GeneratorKind::Example1;
    if (name == "example2") return GeneratorKind::Example2;
    if (name == "example3_style") return GeneratorKind::Example3Style;
    if (name == "example4_style") return GeneratorKind::Example4Style;
    throw Error("unknown generator kind: " + name);
}

std::string to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::Tree: return "tree";
        case GeneratorKind::SingleLoop: return "single_loop";
        case GeneratorKind::Example1: return "example1";
        case GeneratorKind::Example2: return "example2";
        case GeneratorKind::Example3Style: return "example3_style";
        case GeneratorKind::Example4Style: return "example4_style";
    }
    return "?";
}

namespace {

using Rng = std::mt19937_64;

Vector default_rhs(Index n) {
    Vector b(n);
    for (Index i = 0; i < n; ++i) b[i] = static_cast<double>(i + 1);
    return b;
}

SparseSystem example1() {
    Matrix a(3, 3);
    a << 1, -0.72, -0.6,
        -0.1, 1, -0.375,
        -0.7, -0.5, 1;
    return SparseSystem::from_dense(a, default_rhs(3));
}

SparseSystem example2() {
    Matrix a(5, 5);
    a << 1, 0.29, 0, 0.32, 0.35,
        0.51, 1, 0.48, 0, 0,
        0, 0.3, 1, 0.32, 0.35,
        0.52, 0, 0.46, 1, 0,
        0.44, 0, 0.53, 0, 1;
    return SparseSystem::from_dense(a, default_rhs(5));
}

std::vector<std::pair<Index, Index>> random_spanning_tree(Index n, Rng& rng) {
    std::vector<Index> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<Index, Index>> edges;
    for (Index k = 1; k < n; ++k) {
        std::uniform_int_distribution<Index> pick(0, k - 1);
        edges.emplace_back(perm[static_cast<size_t>(k)], perm[static_cast<size_t>(pick(rng))]);
    }
    return edges;
}

std::vector<std::pair<Index, Index>> random_connected_edges(Index n, double mean_degree,
                                                            Rng& rng) {
    auto edges = random_spanning_tree(n, rng);
    std::set<std::pair<Index, Index>> have;
    for (auto [i, j] : edges) have.insert({std::min(i, j), std::max(i, j)});
    const long target = std::lround(mean_degree * n / 2.0);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    long guard = 20 * target + 100;
    while (static_cast<long>(have.size()) < target && guard-- > 0) {
        Index i = pick(rng), j = pick(rng);
        if (i != j) have.insert({std::min(i, j), std::max(i, j)});
    }
    return {have.begin(), have.end()};
}

// Unit diagonal; per-row off-diagonal mass scaled to a varrho target < 1.
SparseSystem fill_row_scaled(Index n, const std::vector<std::pair<Index, Index>>& edges,
                             double row_sum, Rng& rng) {
    std::vector<std::vector<Index>> nb(static_cast<size_t>(n));
    for (auto [i, j] : edges) {
        nb[static_cast<size_t>(i)].push_back(j);
        nb[static_cast<size_t>(j)].push_back(i);
    }
    std::uniform_real_distribution<double> mag(0.1, 1.0);
    std::uniform_real_distribution<double> level(0.5, 1.0);
    SparseSystem sys(n);
    for (Index i = 0; i < n; ++i) {
        sys.set_diag(i, 1.0);
        if (nb[static_cast<size_t>(i)].empty()) continue;
        double total = 0.0;
        std::vector<double> raw;
        for (Index j : nb[static_cast<size_t>(i)]) {
            (void)j;
            double v = mag(rng) * (rng() % 2 ? 1.0 : -1.0);
            raw.push_back(v);
            total += std::abs(v);
        }
        const double scale = row_sum * level(rng) / total;
        for (size_t k = 0; k < raw.size(); ++k)
            sys.set_entry(i, nb[static_cast<size_t>(i)][k], raw[k] * scale);
    }
    sys.set_rhs(default_rhs(n));
    return sys;
}

SparseSystem example3_style(Index n, double mean_degree, double value_min, double value_max,
                            Rng& rng) {
    auto edges = random_connected_edges(n, mean_degree, rng);
    std::vector<Index> deg(static_cast<size_t>(n), 0);
    for (auto [i, j] : edges) {
        ++deg[static_cast<size_t>(i)];
        ++deg[static_cast<size_t>(j)];
    }
    std::uniform_real_distribution<double> val(value_min, value_max);
    SparseSystem sys(n);
    for (Index i = 0; i < n; ++i) sys.set_diag(i, static_cast<double>(deg[static_cast<size_t>(i)]));
    for (auto [i, j] : edges) {
        sys.set_entry(i, j, val(rng));
        sys.set_entry(j, i, val(rng));
    }
    sys.set_rhs(default_rhs(n));
    return sys;
}

SparseSystem example4_style(Index n, double mean_degree, double positive_prob,
                            double target_row_sum, Rng& rng) {
    auto edges = random_connected_edges(n, mean_degree, rng);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SparseSystem sys(n);
    for (Index i = 0; i < n; ++i) sys.set_diag(i, 1.0);
    double total = 0.0;
    for (auto [i, j] : edges) {
        const double vij = mag(rng) * (unit(rng) < positive_prob ? 1.0 : -1.0);
        const double vji = mag(rng) * (unit(rng) < positive_prob ? 1.0 : -1.0);
        sys.set_entry(i, j, vij);
        sys.set_entry(j, i, vji);
        total += std::abs(vij) + std::abs(vji);
    }
    // rescale so the mean absolute off-diagonal row sum is target_row_sum
    const double scale = target_row_sum * n / total;
    for (Index i = 0; i < n; ++i) {
        const auto row = sys.row(i);
        for (const auto& [j, v] : row) sys.set_entry(i, j, v * scale);
    }
    sys.set_rhs(default_rhs(n));
    return sys;
}

}  // namespace

SparseSystem generate(const GeneratorSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    constexpr int kMaxAttempts = 100;

    switch (spec.kind) {
        case GeneratorKind::Example1: return example1();
        case GeneratorKind::Example2: return example2();
        default: break;
    }

    if (spec.kind == GeneratorKind::Tree || spec.kind == GeneratorKind::SingleLoop) {
        if (!(spec.row_sum > 0.0 && spec.row_sum < 1.0))
            throw Error("row_sum must be in (0,1)");
        const Index n = spec.n > 0 ? spec.n : 10;
        if (n < (spec.kind == GeneratorKind::SingleLoop ? 3 : 2))
            throw Error("n too small for this kind");
        std::vector<std::pair<Index, Index>> edges;
        if (spec.kind == GeneratorKind::Tree) {
            edges = random_spanning_tree(n, rng);
        } else {
            for (Index i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
        }
        return fill_row_scaled(n, edges, spec.row_sum, rng);
    }

    if (!(spec.value_min < spec.value_max) || spec.value_max >= 0.0)
        throw Error("need value_min < value_max < 0");
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        SparseSystem sys =
            spec.kind == GeneratorKind::Example3Style
                ? example3_style(spec.n > 0 ? spec.n : 13,
                                 spec.mean_degree > 0 ? spec.mean_degree : 3.1, spec.value_min,
                                 spec.value_max, rng)
                : example4_style(spec.n > 0 ? spec.n : 1000,
                                 spec.mean_degree > 0 ? spec.mean_degree : 7.772,
                                 spec.positive_prob, spec.target_row_sum, rng);
        const DominanceReport report = classify(sys, Scaling::identity(sys.size()));
        if (at_least(report.classification, Classification::WeaklyDScaledDD)) return sys;
    }
    throw GenerationFailed("no weakly dominant instance after " + std::to_string(kMaxAttempts) +
                           " attempts");
}

}  // namespace gbp
