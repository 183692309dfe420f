#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairsample/dataset.hpp"

namespace fairsample {

struct ForestParams {
    int n_trees = 100;
    int max_depth = 8;
    int min_leaf = 5;
    /// Features examined per split; 0 means ceil(sqrt(d)).
    int features_per_split = 0;
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;   // rows with x[feature] < threshold
    int right = -1;  // rows with x[feature] >= threshold
    std::int8_t label = 0;
};

struct Tree {
    std::vector<TreeNode> nodes;
    std::int8_t predict(std::span<const double> row) const;
};

/// Bagged Gini decision trees. Each tree trains on a bootstrap sample drawn
/// with probability proportional to instance weight; splits search a random
/// feature subset. The forest score is the fraction of trees voting
/// favorable, so scores are multiples of 1/n_trees.
struct ForestModel {
    std::vector<Tree> trees;
    ForestParams params;

    double score(std::span<const double> row) const;
};

ForestModel train_forest(const Dataset& train, const ForestParams& params);

}  // namespace fairsample
