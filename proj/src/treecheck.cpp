#include "gbp/treecheck.hpp"

#include <cmath>

#include "gbp/solver.hpp"

namespace gbp {

UnwrappedTree build_unwrapped_tree(const SparseSystem& sys, const InducedGraph& g, Index root,
                                   int depth, long max_nodes) {
    if (root < 0 || root >= sys.size()) throw Error("root out of range");
    if (depth < 0) throw Error("depth must be >= 0");

    UnwrappedTree tree;
    tree.root = 0;
    tree.nodes.push_back({root, -1, 0});
    tree.layer_sizes.push_back(1);

    std::vector<Index> frontier{0};
    for (int layer = 1; layer <= depth; ++layer) {
        std::vector<Index> next;
        for (Index t : frontier) {
            const auto& node = tree.nodes[static_cast<size_t>(t)];
            const Index parent_sigma =
                node.parent < 0 ? -1 : tree.nodes[static_cast<size_t>(node.parent)].sigma;
            for (Index j : g.neighbors(node.sigma)) {
                if (j == parent_sigma) continue;
                if (static_cast<long>(tree.nodes.size()) >= max_nodes)
                    throw TreeTooLarge("unwrapped tree exceeds " + std::to_string(max_nodes) +
                                       " nodes");
                next.push_back(static_cast<Index>(tree.nodes.size()));
                tree.nodes.push_back({j, t, layer});
            }
        }
        if (next.empty()) break;
        tree.layer_sizes.push_back(static_cast<Index>(next.size()));
        frontier = std::move(next);
    }

    const Index m = static_cast<Index>(tree.nodes.size());
    SparseSystem ts(m);
    Vector b(m);
    std::vector<std::pair<Index, Index>> edges;
    for (Index t = 0; t < m; ++t) {
        const auto& node = tree.nodes[static_cast<size_t>(t)];
        ts.set_diag(t, sys.diag(node.sigma));
        b[t] = sys.rhs()[node.sigma];
        if (node.parent >= 0) {
            const Index p = node.parent;
            const Index ps = tree.nodes[static_cast<size_t>(p)].sigma;
            const double child_to_parent = sys.entry(node.sigma, ps);
            const double parent_to_child = sys.entry(ps, node.sigma);
            if (child_to_parent != 0.0) ts.set_entry(t, p, child_to_parent);
            if (parent_to_child != 0.0) ts.set_entry(p, t, parent_to_child);
            edges.emplace_back(p, t);
        }
    }
    ts.set_rhs(b);
    ts.validate();
    tree.tree_system = std::move(ts);
    tree.tree_graph = InducedGraph(m, edges);
    return tree;
}

RootEquivalenceReport verify_root_equivalence(const SparseSystem& sys, const InducedGraph& g,
                                              Index root, int rounds) {
    const UnwrappedTree tree = build_unwrapped_tree(sys, g, root, rounds);

    MessageState on_graph = init_messages(sys, g);
    for (int k = 0; k < rounds; ++k) on_graph = step(sys, g, on_graph);
    MessageState on_tree = init_messages(tree.tree_system, tree.tree_graph);
    for (int k = 0; k < rounds; ++k) on_tree = step(tree.tree_system, tree.tree_graph, on_tree);

    RootEquivalenceReport report;
    report.rounds = rounds;
    report.tree_nodes = static_cast<long>(tree.nodes.size());
    report.x_graph = on_graph.x_est[root];
    report.x_tree = on_tree.x_est[tree.root];
    report.abs_diff = std::abs(report.x_graph - report.x_tree);
    report.tolerance = 1e-10 * (1.0 + std::abs(report.x_graph));
    report.ok = report.abs_diff <= report.tolerance;
    return report;
}

TreeDominanceReport verify_tree_dominance(const SparseSystem& sys, const InducedGraph& g,
                                          const Scaling& d, Index root, int depth) {
    const DominanceReport original = classify(sys, d);
    if (!at_least(original.classification, Classification::WeaklyDScaledDD))
        throw NotWeaklyDominant("classification is " + to_string(original.classification));

    const UnwrappedTree tree = build_unwrapped_tree(sys, g, root, depth);
    Vector d_tree(tree.nodes.size());
    for (size_t t = 0; t < tree.nodes.size(); ++t) d_tree[static_cast<Index>(t)] = d.d[tree.nodes[t].sigma];
    const DominanceReport inherited = classify(tree.tree_system, Scaling(d_tree));

    TreeDominanceReport report;
    report.original = original.classification;
    report.tree = inherited.classification;
    report.ok = at_least(inherited.classification, Classification::WeaklyDScaledDD);
    report.tree_nodes = static_cast<long>(tree.nodes.size());
    return report;
}

}  // namespace gbp
