#include "gbp/system.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

namespace gbp {

SparseSystem::SparseSystem(Index n)
    : n_(n),
      diag_(Vector::Constant(n, std::numeric_limits<double>::quiet_NaN())),
      b_(Vector::Zero(n)),
      rows_(static_cast<size_t>(n)) {}

SparseSystem SparseSystem::from_dense(const Matrix& a, const Vector& b) {
    if (a.rows() != a.cols()) throw NonSquare("matrix is not square");
    SparseSystem sys(static_cast<Index>(a.rows()));
    for (Index i = 0; i < sys.n_; ++i) {
        sys.set_diag(i, a(i, i));
        for (Index j = 0; j < sys.n_; ++j)
            if (i != j && a(i, j) != 0.0) sys.set_entry(i, j, a(i, j));
    }
    sys.set_rhs(b);
    sys.validate();
    return sys;
}

void SparseSystem::set_diag(Index i, double v) { diag_[i] = v; }

double SparseSystem::entry(Index i, Index j) const {
    if (i == j) return diag_[i];
    auto it = rows_[i].find(j);
    return it == rows_[i].end() ? 0.0 : it->second;
}

void SparseSystem::set_entry(Index i, Index j, double v) {
    if (i == j) {
        diag_[i] = v;
        return;
    }
    if (v == 0.0)
        rows_[i].erase(j);
    else
        rows_[i][j] = v;
}

void SparseSystem::set_rhs(Vector b) {
    if (b.size() != n_) throw Error("rhs length mismatch");
    b_ = std::move(b);
}

void SparseSystem::validate() const {
    for (Index i = 0; i < n_; ++i) {
        if (!std::isfinite(diag_[i]))
            throw MissingDiagonal("diagonal entry (" + std::to_string(i) + "," +
                                  std::to_string(i) + ") missing or not finite");
        for (const auto& [j, v] : rows_[i]) {
            if (j < 0 || j >= n_ || j == i) throw Error("off-diagonal index out of range");
            if (v == 0.0) throw Error("stored off-diagonal entry is zero");
            if (!std::isfinite(v)) throw Error("off-diagonal entry not finite");
        }
    }
    if (b_.size() != n_) throw Error("rhs length mismatch");
}

Vector SparseSystem::residual(const Vector& x) const {
    Vector r = -b_;
    for (Index i = 0; i < n_; ++i) {
        r[i] += diag_[i] * x[i];
        for (const auto& [j, v] : rows_[i]) r[i] += v * x[j];
    }
    return r;
}

bool SparseSystem::operator==(const SparseSystem& other) const {
    if (n_ != other.n_) return false;
    if (diag_ != other.diag_ || b_ != other.b_) return false;
    return rows_ == other.rows_;
}

InducedGraph::InducedGraph(Index n, const std::vector<std::pair<Index, Index>>& undirected_edges)
    : n_(n), neighbors_(static_cast<size_t>(n)) {
    std::set<std::pair<Index, Index>> dedup;
    for (auto [i, j] : undirected_edges) {
        if (i == j) throw Error("self-loop edge");
        dedup.insert({std::min(i, j), std::max(i, j)});
    }
    edges_.assign(dedup.begin(), dedup.end());
    for (auto [i, j] : edges_) {
        neighbors_[i].push_back(j);
        neighbors_[j].push_back(i);
    }
    for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());

    offset_.assign(static_cast<size_t>(n) + 1, 0);
    for (Index i = 0; i < n; ++i) offset_[i + 1] = offset_[i] + degree(i);
    const Index m = offset_[n];
    from_.resize(m);
    to_.resize(m);
    twin_.resize(m);
    for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < degree(i); ++k) {
            from_[offset_[i] + k] = i;
            to_[offset_[i] + k] = neighbors_[i][k];
        }
    for (Index e = 0; e < m; ++e) twin_[e] = directed_index(to_[e], from_[e]);
}

Index InducedGraph::directed_index(Index i, Index j) const {
    const auto& nb = neighbors_[i];
    auto it = std::lower_bound(nb.begin(), nb.end(), j);
    if (it == nb.end() || *it != j) throw Error("not an edge");
    return offset_[i] + static_cast<Index>(it - nb.begin());
}

std::vector<std::vector<Index>> InducedGraph::connected_components() const {
    std::vector<std::vector<Index>> comps;
    std::vector<char> seen(static_cast<size_t>(n_), 0);
    for (Index s = 0; s < n_; ++s) {
        if (seen[s]) continue;
        std::vector<Index> comp{s};
        seen[s] = 1;
        for (size_t q = 0; q < comp.size(); ++q)
            for (Index j : neighbors_[comp[q]])
                if (!seen[j]) {
                    seen[j] = 1;
                    comp.push_back(j);
                }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

Index InducedGraph::diameter() const {
    Index diam = 0;
    std::vector<Index> dist(static_cast<size_t>(n_));
    for (Index s = 0; s < n_; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<Index> q{s};
        dist[s] = 0;
        while (!q.empty()) {
            Index u = q.front();
            q.pop_front();
            diam = std::max(diam, dist[u]);
            for (Index v : neighbors_[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
        }
    }
    return diam;
}

Scaling::Scaling(Vector values) : d(std::move(values)) {
    for (Index i = 0; i < d.size(); ++i)
        if (!(d[i] > 0.0) || !std::isfinite(d[i]))
            throw Error("scaling entry " + std::to_string(i) + " not positive and finite");
}

InducedGraph build_induced_graph(const SparseSystem& sys) {
    std::vector<std::pair<Index, Index>> edges;
    for (Index i = 0; i < sys.size(); ++i)
        for (const auto& [j, v] : sys.row(i)) {
            (void)v;
            edges.emplace_back(i, j);
        }
    return InducedGraph(sys.size(), edges);
}

Solution direct_solve(const SparseSystem& sys) {
    const Index n = sys.size();
    Matrix a = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        a(i, i) = sys.diag(i);
        for (const auto& [j, v] : sys.row(i)) a(i, j) = v;
    }
    Vector row_scale = a.cwiseAbs().rowwise().maxCoeff();
    Vector rhs = sys.rhs();

    std::vector<Index> perm(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) perm[i] = i;

    for (Index c = 0; c < n; ++c) {
        Index p = c;
        for (Index r = c + 1; r < n; ++r)
            if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
        if (p != c) {
            a.row(c).swap(a.row(p));
            std::swap(rhs[c], rhs[p]);
            std::swap(perm[c], perm[p]);
        }
        if (row_scale[perm[c]] == 0.0 || std::abs(a(c, c)) < 1e-14 * row_scale[perm[c]])
            throw SingularMatrix("pivot " + std::to_string(c) + " below threshold");
        for (Index r = c + 1; r < n; ++r) {
            const double f = a(r, c) / a(c, c);
            if (f == 0.0) continue;
            a.row(r).tail(n - c - 1) -= f * a.row(c).tail(n - c - 1);
            rhs[r] -= f * rhs[c];
        }
    }
    Vector x(n);
    for (Index r = n - 1; r >= 0; --r) {
        double s = rhs[r];
        if (r + 1 < n) s -= a.row(r).tail(n - r - 1).dot(x.tail(n - r - 1));
        x[r] = s / a(r, r);
    }
    return Solution{x, max_norm(sys.residual(x))};
}

double scaled_max_norm(const Vector& x, const Scaling& d) {
    if (x.size() != d.d.size()) throw Error("scaled_max_norm length mismatch");
    if (x.size() == 0) return 0.0;
    return (x.cwiseAbs().cwiseQuotient(d.d)).maxCoeff();
}

double max_norm(const Vector& x) { return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff(); }

}  // namespace gbp
