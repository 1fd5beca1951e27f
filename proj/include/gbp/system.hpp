#pragma once

#include <map>
#include <utility>
#include <vector>

#include "gbp/types.hpp"

namespace gbp {

/// Square sparse system A x = b. The diagonal is stored explicitly for every
/// row; off-diagonal zeros are never stored (absence is structural).
class SparseSystem {
  public:
    SparseSystem() = default;
    explicit SparseSystem(Index n);

    /// Dense convenience constructor; drops exact off-diagonal zeros.
    static SparseSystem from_dense(const Matrix& a, const Vector& b);

    Index size() const { return n_; }

    double diag(Index i) const { return diag_[i]; }
    const Vector& diagonal() const { return diag_; }
    void set_diag(Index i, double v);

    /// Off-diagonal entry; 0.0 when absent.
    double entry(Index i, Index j) const;
    /// Sets a_ij (i != j). Setting an exact zero removes the entry.
    void set_entry(Index i, Index j, double v);

    /// Sorted off-diagonal entries of row i.
    const std::map<Index, double>& row(Index i) const { return rows_[i]; }

    const Vector& rhs() const { return b_; }
    void set_rhs(Vector b);

    /// Checks the structural invariants; throws on violation.
    void validate() const;

    /// A x - b using the sparse rows.
    Vector residual(const Vector& x) const;

    bool operator==(const SparseSystem& other) const;

  private:
    Index n_ = 0;
    Vector diag_;
    Vector b_;
    std::vector<std::map<Index, double>> rows_;
};

/// Undirected communication graph of a system: {i,j} is an edge iff
/// a_ij != 0 or a_ji != 0. Neighbor lists are sorted ascending, and every
/// directed edge (i->j) has a stable index used to key message storage.
class InducedGraph {
  public:
    InducedGraph() = default;
    InducedGraph(Index n, const std::vector<std::pair<Index, Index>>& undirected_edges);

    Index size() const { return n_; }
    const std::vector<Index>& neighbors(Index i) const { return neighbors_[i]; }
    Index degree(Index i) const { return static_cast<Index>(neighbors_[i].size()); }
    const std::vector<std::pair<Index, Index>>& edges() const { return edges_; }
    Index edge_count() const { return static_cast<Index>(edges_.size()); }

    /// Number of directed edges, 2|E|.
    Index directed_count() const { return static_cast<Index>(to_.size()); }
    /// Index of directed edge i->j; j must be a neighbor of i.
    Index directed_index(Index i, Index j) const;
    Index source(Index e) const { return from_[e]; }
    Index target(Index e) const { return to_[e]; }
    /// Index of the reverse edge j->i.
    Index twin(Index e) const { return twin_[e]; }
    /// First directed-edge index of node i; its out-edges are contiguous.
    Index out_begin(Index i) const { return offset_[i]; }

    std::vector<std::vector<Index>> connected_components() const;
    /// Max over components of the largest pairwise distance.
    Index diameter() const;

  private:
    Index n_ = 0;
    std::vector<std::vector<Index>> neighbors_;
    std::vector<std::pair<Index, Index>> edges_;
    std::vector<Index> offset_, from_, to_, twin_;
};

/// Positive diagonal scaling D = diag{d_i}.
struct Scaling {
    Vector d;

    Scaling() = default;
    explicit Scaling(Vector values);
    static Scaling identity(Index n) { return Scaling(Vector::Ones(n)); }
};

struct Solution {
    Vector x;
    double residual_norm = 0.0;  // max-norm of A x - b at construction
};

InducedGraph build_induced_graph(const SparseSystem& sys);

/// Dense Gaussian elimination with partial pivoting. Throws SingularMatrix
/// when a pivot falls below 1e-14 times the row's initial max magnitude.
Solution direct_solve(const SparseSystem& sys);

/// max over v of |x_v| / d_v
double scaled_max_norm(const Vector& x, const Scaling& d);

double max_norm(const Vector& x);

}  // namespace gbp
