#pragma once

#include <vector>

#include "gbp/dominance.hpp"
#include "gbp/system.hpp"

namespace gbp {

/// Depth-k computation tree grown from a root of a loopy graph. Each tree
/// node carries sigma, the original node it copies; weights and right-hand
/// sides are copied through sigma.
struct UnwrappedTree {
    struct Node {
        Index sigma;
        Index parent;  // tree index; -1 for the root
        int depth;
    };
    std::vector<Node> nodes;
    SparseSystem tree_system;
    InducedGraph tree_graph;
    Index root = 0;
    std::vector<Index> layer_sizes;
};

/// Expands leaves depth times, attaching every non-parent neighbor of
/// sigma(leaf) as a child. Throws TreeTooLarge past max_nodes.
UnwrappedTree build_unwrapped_tree(const SparseSystem& sys, const InducedGraph& g, Index root,
                                   int depth, long max_nodes = 1000000);

struct RootEquivalenceReport {
    double x_graph = 0.0;  // root estimate after k rounds on the loopy graph
    double x_tree = 0.0;   // root estimate after k rounds on the depth-k tree
    double abs_diff = 0.0;
    double tolerance = 0.0;
    bool ok = false;
    int rounds = 0;
    long tree_nodes = 0;
};

/// Runs the message-passing solver for k rounds on both the graph and its
/// depth-k unwrapped tree and compares the root estimates.
RootEquivalenceReport verify_root_equivalence(const SparseSystem& sys, const InducedGraph& g,
                                              Index root, int rounds);

struct TreeDominanceReport {
    Classification original = Classification::NotWeaklyDD;
    Classification tree = Classification::NotWeaklyDD;
    bool ok = false;  // tree classifies at least WeaklyDScaledDD
    long tree_nodes = 0;
};

/// Classifies the unwrapped tree under the inherited scaling
/// d_tree[t] = d[sigma(t)].
TreeDominanceReport verify_tree_dominance(const SparseSystem& sys, const InducedGraph& g,
                                          const Scaling& d, Index root, int depth);

}  // namespace gbp
