#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evorf/dataset.hpp"

namespace evorf {

struct Hyperparameters {
    int num_trees = 20000;
    int mtry = 0;                  // 0 → floor(sqrt(p)) at train time
    double sample_fraction = 1.0;  // in (0, 1]
    bool replace = true;
    int min_node_size = 1;
    std::uint64_t seed = 1;

    void validate(std::size_t n_rows, std::size_t n_features) const;
};

struct TreeNode {
    float threshold = 0.0f;
    std::int32_t left = -1;   // children; -1 on leaves
    std::int32_t right = -1;
    std::int16_t feature = -1;  // -1 → leaf
    std::uint16_t count_pre = 0;   // bag rows of each class reaching the node
    std::uint16_t count_post = 0;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
    std::vector<std::uint32_t> bag;  // drawn training-row indices (multiset)

    Label predict(std::span<const int> row) const;
    std::vector<std::uint8_t> in_bag_mask(std::size_t n_rows) const;
};

struct Split {
    int feature_index = -1;
    double threshold = 0.0;
    double impurity_decrease = 0.0;
};

// Gini impurity of a two-class node.
double gini(int count_pre, int count_post);

// Best (feature, midpoint-threshold) pair over the candidate features,
// maximizing Gini decrease with exact integer comparisons. Ties go to the
// lower feature index, then the lower threshold. Empty when no split gives a
// strictly positive decrease.
// `rows` are indices into `data`; candidates must be sorted ascending.
std::optional<Split> best_split(const Dataset& data, std::span<const std::uint32_t> rows,
                                std::span<const int> candidates);

DecisionTree train_tree(const Dataset& train, const Hyperparameters& hp,
                        std::uint64_t tree_key);

struct RandomForest {
    std::vector<DecisionTree> trees;
    Hyperparameters hp;
    std::vector<std::string> feature_names;
    std::size_t train_size = 0;
    int train_pre = 0;   // class balance of the training data, for vote ties
    int train_post = 0;

    // Majority vote; a tree votes its leaf majority (tie → Pre); a forest
    // tie goes to the larger training class, then Pre.
    Label predict(std::span<const int> row) const;
    Label resolve_votes(int votes_pre, int votes_post) const;
};

// threads = 0 → hardware concurrency. Bit-identical results for any thread
// count: tree i depends only on (hp.seed, i).
RandomForest train_forest(const Dataset& train, const Hyperparameters& hp,
                          unsigned threads = 0);

struct OobResult {
    std::vector<int> votes_pre;   // per training row
    std::vector<int> votes_post;
    std::vector<std::optional<Label>> predictions;  // empty pool → nullopt
    std::size_t voted = 0;
    std::size_t wrong = 0;

    double error() const;
};

OobResult oob_predictions(const RandomForest& forest, const Dataset& train,
                          unsigned threads = 0);

// OOB error with one feature column replaced (used by permutation
// importance); `column` must have train.n_rows entries.
double oob_error_with_column(const RandomForest& forest, const Dataset& train,
                             std::size_t feature, std::span<const int> column,
                             unsigned threads = 0);

struct ConfusionMatrix {
    // counts[true][predicted], 0 = Pre, 1 = Post
    long counts[2][2] = {{0, 0}, {0, 0}};

    long total() const;
    double error() const;
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

ConfusionMatrix evaluate(const RandomForest& forest, const Dataset& test);

}  // namespace evorf
