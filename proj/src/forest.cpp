#include "fairsample/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairsample/errors.hpp"
#include "fairsample/rng.hpp"

namespace fairsample {

namespace {

struct TreeBuilder {
    const Matrix& X;
    const std::vector<std::int8_t>& y;
    int max_depth;
    int min_leaf;
    int mtry;
    Rng& rng;
    Tree tree;

    // Builds the subtree for `rows` (indices into X), returns its node index.
    int build(std::vector<std::size_t>& rows, int depth) {
        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        std::size_t positives = 0;
        for (std::size_t i : rows) positives += static_cast<std::size_t>(y[i]);
        const std::size_t n = rows.size();

        const bool pure = positives == 0 || positives == n;
        if (pure || depth >= max_depth ||
            n < 2 * static_cast<std::size_t>(min_leaf)) {
            make_leaf(node_index, positives, n);
            return node_index;
        }

        // Random feature subset, then the best Gini split among them.
        std::vector<std::size_t> features(X.cols);
        std::iota(features.begin(), features.end(), 0);
        for (int f = 0; f < mtry; ++f) {
            const std::size_t j =
                f + static_cast<std::size_t>(rng.below(features.size() - f));
            std::swap(features[f], features[j]);
        }

        double best_impurity = node_gini(positives, n);
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::pair<double, std::int8_t>> vals(n);
        for (int f = 0; f < mtry; ++f) {
            const std::size_t feat = features[f];
            for (std::size_t i = 0; i < n; ++i) {
                vals[i] = {X.at(rows[i], feat), y[rows[i]]};
            }
            std::sort(vals.begin(), vals.end());
            // Sweep split points between distinct adjacent values.
            std::size_t left_n = 0, left_pos = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                ++left_n;
                left_pos += static_cast<std::size_t>(vals[i].second);
                if (vals[i].first == vals[i + 1].first) continue;
                const std::size_t right_n = n - left_n;
                if (left_n < static_cast<std::size_t>(min_leaf) ||
                    right_n < static_cast<std::size_t>(min_leaf)) {
                    continue;
                }
                const double impurity =
                    (static_cast<double>(left_n) * node_gini(left_pos, left_n) +
                     static_cast<double>(right_n) *
                         node_gini(positives - left_pos, right_n)) /
                    static_cast<double>(n);
                if (impurity < best_impurity - 1e-12) {
                    best_impurity = impurity;
                    best_feature = static_cast<int>(feat);
                    best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
                }
            }
        }
        if (best_feature < 0) {
            make_leaf(node_index, positives, n);
            return node_index;
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t i : rows) {
            (X.at(i, static_cast<std::size_t>(best_feature)) < best_threshold
                 ? left_rows
                 : right_rows)
                .push_back(i);
        }
        rows.clear();
        rows.shrink_to_fit();
        const int left = build(left_rows, depth + 1);
        const int right = build(right_rows, depth + 1);
        TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left;
        node.right = right;
        return node_index;
    }

    void make_leaf(int node_index, std::size_t positives, std::size_t n) {
        TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
        node.feature = -1;
        node.label = 2 * positives >= n ? 1 : 0;
    }

    static double node_gini(std::size_t positives, std::size_t n) {
        const double p = static_cast<double>(positives) / static_cast<double>(n);
        return 2.0 * p * (1.0 - p);
    }
};

}  // namespace

std::int8_t Tree::predict(std::span<const double> row) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
        const TreeNode& node = nodes[static_cast<std::size_t>(i)];
        i = row[static_cast<std::size_t>(node.feature)] < node.threshold
                ? node.left
                : node.right;
    }
    return nodes[static_cast<std::size_t>(i)].label;
}

double ForestModel::score(std::span<const double> row) const {
    std::size_t votes = 0;
    for (const Tree& t : trees) votes += static_cast<std::size_t>(t.predict(row));
    return static_cast<double>(votes) / static_cast<double>(trees.size());
}

ForestModel train_forest(const Dataset& train, const ForestParams& params) {
    if (train.size() < 2) {
        throw ArgumentError("train_forest needs at least 2 rows");
    }
    if (params.n_trees < 1 || params.max_depth < 1 || params.min_leaf < 1 ||
        params.features_per_split < 0) {
        throw ArgumentError("train_forest: invalid parameters");
    }
    const std::size_t n = train.size();
    const int mtry =
        params.features_per_split > 0
            ? std::min<int>(params.features_per_split,
                            static_cast<int>(train.dim()))
            : static_cast<int>(
                  std::ceil(std::sqrt(static_cast<double>(train.dim()))));

    // Weight-proportional bootstrap uses the cumulative weight profile.
    std::vector<double> cumulative(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += train.w[i];
        cumulative[i] = acc;
    }
    if (!(acc > 0.0)) {
        throw ArgumentError("train_forest requires positive total weight");
    }

    ForestModel model;
    model.params = params;
    model.trees.resize(static_cast<std::size_t>(params.n_trees));
    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(Rng::mix(params.seed) ^ static_cast<std::uint64_t>(t));
        std::vector<std::size_t> rows(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.u01() * acc;
            rows[i] = static_cast<std::size_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                cumulative.begin());
            if (rows[i] >= n) rows[i] = n - 1;
        }
        TreeBuilder builder{train.X, train.y, params.max_depth, params.min_leaf,
                            mtry, rng, {}};
        builder.build(rows, 0);
        model.trees[static_cast<std::size_t>(t)] = std::move(builder.tree);
    }
    return model;
}

}  // namespace fairsample
