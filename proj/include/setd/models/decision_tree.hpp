#pragma once

// CART-style decision tree on binary features. Growth greedily picks the
// split (feature == 0 vs == 1) with the smallest weighted child Gini and
// stops when a node is pure, max depth is reached, or no split reduces
// impurity. Supports sample weights (for boosting) and per-node random
// feature subsets (for forests).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "setd/models/base.hpp"
#include "setd/rng.hpp"

namespace setd {

// Gini index over class proportions: sum_k p_k (1 - p_k).
inline double gini_impurity(const std::vector<int>& labels) {
    if (labels.empty()) throw DataError("gini_impurity: empty input");
    double n1 = 0;
    for (int v : labels) n1 += (v == 1);
    double p1 = n1 / static_cast<double>(labels.size());
    double p0 = 1.0 - p1;
    return p0 * (1.0 - p0) + p1 * (1.0 - p1);
}

namespace detail {

inline double gini_from_weights(double w0, double w1) {
    double total = w0 + w1;
    if (total <= 0) return 0.0;
    double p0 = w0 / total, p1 = w1 / total;
    return p0 * (1.0 - p0) + p1 * (1.0 - p1);
}

} // namespace detail

struct TreeNode {
    bool is_leaf = true;
    int feature = -1;   // internal: split column
    int left = -1;      // child for feature value 0
    int right = -1;     // child for feature value 1
    int klass = 1;      // leaf: predicted class
    double count0 = 0;  // weighted class counts reaching the node
    double count1 = 0;
    double gini = 0;    // node impurity
    int depth = 0;
};

class DecisionTreeModel : public Model {
public:
    DecisionTreeModel(std::vector<TreeNode> nodes, std::size_t width)
        : nodes_(std::move(nodes)), width_(width) {}

    Family family() const override { return Family::decision_tree; }
    std::size_t width() const override { return width_; }

    const std::vector<TreeNode>& nodes() const { return nodes_; }

    int route(const Row& row) const {
        int at = 0;
        while (!nodes_[static_cast<std::size_t>(at)].is_leaf) {
            const TreeNode& n = nodes_[static_cast<std::size_t>(at)];
            at = detail::bit_set(row[static_cast<std::size_t>(n.feature)]) ? n.right : n.left;
        }
        return at;
    }

    int max_depth() const {
        int d = 0;
        for (const auto& n : nodes_) d = std::max(d, n.depth);
        return d;
    }

    nlohmann::json params_json() const override {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& n : nodes_) {
            if (n.is_leaf)
                arr.push_back({{"leaf", true},
                               {"class", n.klass},
                               {"counts", {n.count0, n.count1}},
                               {"gini", n.gini}});
            else
                arr.push_back({{"leaf", false},
                               {"feature", n.feature},
                               {"left", n.left},
                               {"right", n.right},
                               {"gini", n.gini}});
        }
        return {{"nodes", arr}};
    }

protected:
    int predict_unchecked(const Row& row) const override {
        return nodes_[static_cast<std::size_t>(route(row))].klass;
    }

private:
    std::vector<TreeNode> nodes_;
    std::size_t width_;
};

namespace detail {

struct TreeGrower {
    const Rows& x;
    const Labels& y;
    const std::vector<double>& weights;
    int max_depth;              // 0 = unbounded
    int features_per_split;     // 0 = all features
    Rng* rng;                   // only used when features_per_split > 0
    std::vector<TreeNode> nodes;

    int grow(std::vector<std::size_t> rows, int depth) {
        double w0 = 0, w1 = 0;
        for (std::size_t r : rows) (y[r] == 1 ? w1 : w0) += weights[r];

        TreeNode node;
        node.depth = depth;
        node.count0 = w0;
        node.count1 = w1;
        node.gini = gini_from_weights(w0, w1);
        node.klass = (w1 >= w0) ? 1 : 0; // ties flag the positive class
        int id = static_cast<int>(nodes.size());
        nodes.push_back(node);

        if (node.gini == 0.0 || (max_depth > 0 && depth >= max_depth)) return id;

        std::size_t width = x.front().size();
        std::vector<std::size_t> candidates;
        if (features_per_split > 0 && static_cast<std::size_t>(features_per_split) < width) {
            auto picked = rng->sample_indices(width, static_cast<std::size_t>(features_per_split));
            candidates.assign(picked.begin(), picked.end());
            std::sort(candidates.begin(), candidates.end());
        } else {
            candidates.resize(width);
            std::iota(candidates.begin(), candidates.end(), std::size_t{0});
        }

        int best_feature = -1;
        double best_score = node.gini; // a split must strictly reduce impurity
        for (std::size_t f : candidates) {
            double l0 = 0, l1 = 0, r0 = 0, r1 = 0;
            for (std::size_t r : rows) {
                bool bit = bit_set(x[r][f]);
                if (y[r] == 1) (bit ? r1 : l1) += weights[r];
                else (bit ? r0 : l0) += weights[r];
            }
            double wl = l0 + l1, wr = r0 + r1;
            if (wl <= 0 || wr <= 0) continue; // degenerate split
            double total = wl + wr;
            double score =
                (wl / total) * gini_from_weights(l0, l1) + (wr / total) * gini_from_weights(r0, r1);
            if (score < best_score - 1e-12) {
                best_score = score;
                best_feature = static_cast<int>(f);
            }
        }
        if (best_feature < 0) return id;

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows)
            (bit_set(x[r][static_cast<std::size_t>(best_feature)]) ? right_rows : left_rows)
                .push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        nodes[static_cast<std::size_t>(id)].is_leaf = false;
        nodes[static_cast<std::size_t>(id)].feature = best_feature;
        int left = grow(std::move(left_rows), depth + 1);
        nodes[static_cast<std::size_t>(id)].left = left;
        int right = grow(std::move(right_rows), depth + 1);
        nodes[static_cast<std::size_t>(id)].right = right;
        return id;
    }
};

} // namespace detail

// Weighted, feature-subset-aware trainer shared by the tree, forest and
// boosting families. Weights must be non-negative with positive sum.
inline std::unique_ptr<DecisionTreeModel> train_decision_tree_weighted(
    const Rows& x, const Labels& y, const std::vector<double>& weights, int max_depth,
    int features_per_split = 0, Rng* rng = nullptr,
    const std::vector<std::size_t>* row_subset = nullptr) {
    detail::require_nonempty(x, y);
    if (weights.size() != x.size()) throw DataError("decision tree: weight/row length mismatch");

    std::vector<std::size_t> rows;
    if (row_subset) rows = *row_subset;
    else {
        rows.resize(x.size());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
    }

    detail::TreeGrower grower{x, y, weights, max_depth, features_per_split, rng, {}};
    grower.grow(std::move(rows), 0);
    return std::make_unique<DecisionTreeModel>(std::move(grower.nodes), x.front().size());
}

// Unit weights keep leaf counts as plain row counts in exports; the split
// criterion is scale-invariant so the grown tree is unchanged.
inline std::unique_ptr<DecisionTreeModel> train_decision_tree(const Rows& x, const Labels& y,
                                                              int max_depth = 6) {
    detail::require_nonempty(x, y);
    std::vector<double> weights(x.size(), 1.0);
    return train_decision_tree_weighted(x, y, weights, max_depth);
}

// DOT rendering: internal nodes carry the split column name and node Gini,
// leaves carry the class and weighted counts.
inline std::string tree_to_dot(const DecisionTreeModel& tree,
                               const std::vector<std::string>& column_names,
                               const std::string& graph_name = "decision_tree") {
    std::ostringstream out;
    out << "digraph " << graph_name << " {\n";
    out << "  node [shape=box];\n";
    const auto& nodes = tree.nodes();
    char buf[64];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const TreeNode& n = nodes[i];
        if (n.is_leaf) {
            std::snprintf(buf, sizeof(buf), "%.4g", n.gini);
            out << "  n" << i << " [label=\"class=" << n.klass << "\\ncounts=[" << n.count0 << ", "
                << n.count1 << "]\\ngini=" << buf << "\"];\n";
        } else {
            std::snprintf(buf, sizeof(buf), "%.4g", n.gini);
            out << "  n" << i << " [label=\""
                << column_names.at(static_cast<std::size_t>(n.feature)) << "\\ngini=" << buf
                << "\"];\n";
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const TreeNode& n = nodes[i];
        if (n.is_leaf) continue;
        out << "  n" << i << " -> n" << n.left << " [label=\"0\"];\n";
        out << "  n" << i << " -> n" << n.right << " [label=\"1\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace setd
