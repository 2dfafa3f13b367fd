#include "evorf/forest.hpp"

#include <algorithm>
#include <cmath>

#include "evorf/error.hpp"
#include "evorf/parallel.hpp"
#include "evorf/rng.hpp"

namespace evorf {

void Hyperparameters::validate(std::size_t n_rows, std::size_t n_features) const {
    if (num_trees < 1) throw ValidationError("num_trees must be positive");
    if (mtry < 0 || mtry > static_cast<int>(n_features))
        throw ValidationError("mtry must be in [0, #features]");
    if (!(sample_fraction > 0.0) || sample_fraction > 1.0)
        throw ValidationError("sample_fraction must be in (0, 1]");
    if (sample_fraction * static_cast<double>(n_rows) < 1.0)
        throw ValidationError("sample_fraction draws no rows");
    if (min_node_size < 1) throw ValidationError("min_node_size must be positive");
    if (n_rows == 0) throw ValidationError("training data is empty");
    if (n_rows > 65535) throw ValidationError("training data too large (max 65535 rows)");
    if (n_features == 0 || n_features > 32767)
        throw ValidationError("feature count out of range");
}

double gini(int count_pre, int count_post) {
    if (count_pre < 0 || count_post < 0) throw ValidationError("negative class count");
    const long n = static_cast<long>(count_pre) + count_post;
    if (n == 0) throw ValidationError("gini of an empty node is undefined");
    const double p0 = static_cast<double>(count_pre) / static_cast<double>(n);
    const double p1 = static_cast<double>(count_post) / static_cast<double>(n);
    return 1.0 - (p0 * p0 + p1 * p1);
}

namespace {

using i128 = __int128;

// Candidate score for maximizing Gini decrease, kept as an exact rational
// S/D with S = A·nR + B·nL, D = nL·nR, where A and B are the sums of squared
// class counts of the two children. All quantities fit i128 comfortably for
// node sizes up to 65535.
struct SplitScore {
    long long num = 0;
    long long den = 1;

    bool better_than(const SplitScore& other) const {
        return static_cast<i128>(num) * other.den > static_cast<i128>(other.num) * den;
    }
};

struct ValueHistogram {
    // class counts per distinct feature value, ascending
    std::vector<int> value;
    std::vector<int> pre;
    std::vector<int> post;

    void build(const Dataset& data, std::span<const std::uint32_t> rows, int feature) {
        value.clear();
        pre.clear();
        post.clear();
        int lo = data.at(rows[0], static_cast<std::size_t>(feature));
        int hi = lo;
        for (const std::uint32_t r : rows) {
            const int v = data.at(r, static_cast<std::size_t>(feature));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const std::size_t span = static_cast<std::size_t>(hi - lo) + 1;
        counts_.assign(span * 2, 0);
        for (const std::uint32_t r : rows) {
            const int v = data.at(r, static_cast<std::size_t>(feature));
            const std::size_t slot = static_cast<std::size_t>(v - lo) * 2;
            ++counts_[slot + (data.labels[r] == Label::Post ? 1u : 0u)];
        }
        for (std::size_t i = 0; i < span; ++i) {
            const int c0 = counts_[i * 2], c1 = counts_[i * 2 + 1];
            if (c0 + c1 == 0) continue;
            value.push_back(lo + static_cast<int>(i));
            pre.push_back(c0);
            post.push_back(c1);
        }
    }

private:
    std::vector<int> counts_;
};

}  // namespace

std::optional<Split> best_split(const Dataset& data, std::span<const std::uint32_t> rows,
                                std::span<const int> candidates) {
    if (rows.empty() || candidates.empty())
        throw ValidationError("best_split needs rows and candidate features");

    const long long n = static_cast<long long>(rows.size());
    long long total_pre = 0;
    for (const std::uint32_t r : rows) total_pre += data.labels[r] == Label::Pre;
    const long long total_post = n - total_pre;
    const long long parent_sq = total_pre * total_pre + total_post * total_post;

    ValueHistogram hist;
    bool found = false;
    SplitScore best_score;
    int best_feature = -1;
    double best_threshold = 0.0;

    for (const int f : candidates) {
        hist.build(data, rows, f);
        if (hist.value.size() < 2) continue;
        long long l_pre = 0, l_post = 0;
        for (std::size_t i = 0; i + 1 < hist.value.size(); ++i) {
            l_pre += hist.pre[i];
            l_post += hist.post[i];
            const long long n_left = l_pre + l_post;
            const long long n_right = n - n_left;
            const long long a = l_pre * l_pre + l_post * l_post;
            const long long r_pre = total_pre - l_pre;
            const long long r_post = total_post - l_post;
            const long long b = r_pre * r_pre + r_post * r_post;
            SplitScore score{a * n_right + b * n_left, n_left * n_right};
            // strictly positive impurity decrease: S/D > parent_sq/n
            if (static_cast<i128>(score.num) * n <= static_cast<i128>(parent_sq) * score.den)
                continue;
            if (!found || score.better_than(best_score)) {
                found = true;
                best_score = score;
                best_feature = f;
                best_threshold =
                    (static_cast<double>(hist.value[i]) + static_cast<double>(hist.value[i + 1])) /
                    2.0;
            }
        }
    }

    if (!found) return std::nullopt;
    Split s;
    s.feature_index = best_feature;
    s.threshold = best_threshold;
    s.impurity_decrease = (static_cast<double>(best_score.num) /
                               static_cast<double>(best_score.den) -
                           static_cast<double>(parent_sq) / static_cast<double>(n)) /
                          static_cast<double>(n);
    return s;
}

namespace {

// First boundary of the lowest-index candidate feature that still varies.
// Such a split has zero Gini gain but lets a tree grow past locally
// uninformative nodes (two features can be jointly but not marginally
// predictive); both children are non-empty, so growth terminates.
std::optional<Split> fallback_split(const Dataset& data, std::span<const std::uint32_t> rows,
                                    std::span<const int> candidates) {
    for (const int f : candidates) {
        int lo = data.at(rows[0], static_cast<std::size_t>(f));
        int hi = lo;
        int second = lo;
        for (const std::uint32_t r : rows) {
            const int v = data.at(r, static_cast<std::size_t>(f));
            if (v < lo) {
                second = lo;
                lo = v;
            } else if (v > lo && (second == lo || v < second)) {
                second = v;
            }
            hi = std::max(hi, v);
        }
        if (hi == lo) continue;
        Split s;
        s.feature_index = f;
        s.threshold = (static_cast<double>(lo) + static_cast<double>(second)) / 2.0;
        s.impurity_decrease = 0.0;
        return s;
    }
    return std::nullopt;
}

struct TreeBuilder {
    const Dataset& train;
    const Hyperparameters& hp;
    std::uint64_t tree_key;
    DecisionTree tree;
    std::size_t node_counter = 0;

    void build(std::vector<std::uint32_t>& rows) {
        grow(rows);
    }

    std::int32_t grow(std::vector<std::uint32_t>& rows) {
        const std::int32_t idx = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        const std::size_t node_index = node_counter++;

        int pre = 0;
        for (const std::uint32_t r : rows) pre += train.labels[r] == Label::Pre;
        const int post = static_cast<int>(rows.size()) - pre;
        tree.nodes[static_cast<std::size_t>(idx)].count_pre = static_cast<std::uint16_t>(pre);
        tree.nodes[static_cast<std::size_t>(idx)].count_post = static_cast<std::uint16_t>(post);

        if (pre == 0 || post == 0 ||
            static_cast<int>(rows.size()) <= hp.min_node_size)
            return idx;

        Rng node_rng(derive_key(tree_key, stream::kNode, node_index));
        std::vector<int> candidates =
            node_rng.sample_without_replacement(train.n_features,
                                                static_cast<std::size_t>(hp.mtry));
        std::sort(candidates.begin(), candidates.end());

        std::optional<Split> split = best_split(train, rows, candidates);
        if (!split) split = fallback_split(train, rows, candidates);
        if (!split) return idx;

        std::vector<std::uint32_t> left_rows, right_rows;
        for (const std::uint32_t r : rows) {
            const double v = train.at(r, static_cast<std::size_t>(split->feature_index));
            (v <= split->threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const std::int32_t left = grow(left_rows);
        left_rows = {};
        const std::int32_t right = grow(right_rows);

        TreeNode& node = tree.nodes[static_cast<std::size_t>(idx)];
        node.feature = static_cast<std::int16_t>(split->feature_index);
        node.threshold = static_cast<float>(split->threshold);
        node.left = left;
        node.right = right;
        return idx;
    }
};

}  // namespace

DecisionTree train_tree(const Dataset& train, const Hyperparameters& hp,
                        std::uint64_t tree_key) {
    const std::size_t n = train.n_rows;
    const std::size_t k = static_cast<std::size_t>(
        std::llround(hp.sample_fraction * static_cast<double>(n)));

    TreeBuilder builder{train, hp, tree_key, {}, 0};
    Rng bag_rng(derive_key(tree_key, stream::kBag, 0));
    builder.tree.bag.reserve(k);
    if (hp.replace) {
        for (std::size_t i = 0; i < k; ++i)
            builder.tree.bag.push_back(static_cast<std::uint32_t>(bag_rng.next_below(n)));
    } else {
        for (const int r : bag_rng.sample_without_replacement(n, k))
            builder.tree.bag.push_back(static_cast<std::uint32_t>(r));
    }

    std::vector<std::uint32_t> rows = builder.tree.bag;
    builder.build(rows);
    return std::move(builder.tree);
}

Label DecisionTree::predict(std::span<const int> row) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const TreeNode& node = nodes[i];
        const double v = row[static_cast<std::size_t>(node.feature)];
        i = static_cast<std::size_t>(v <= node.threshold ? node.left : node.right);
    }
    return nodes[i].count_post > nodes[i].count_pre ? Label::Post : Label::Pre;
}

std::vector<std::uint8_t> DecisionTree::in_bag_mask(std::size_t n_rows) const {
    std::vector<std::uint8_t> mask(n_rows, 0);
    for (const std::uint32_t r : bag) mask[r] = 1;
    return mask;
}

Label RandomForest::resolve_votes(int votes_pre, int votes_post) const {
    if (votes_pre != votes_post) return votes_post > votes_pre ? Label::Post : Label::Pre;
    if (train_post > train_pre) return Label::Post;
    return Label::Pre;
}

Label RandomForest::predict(std::span<const int> row) const {
    if (row.size() != feature_names.size())
        throw ValidationError("row has " + std::to_string(row.size()) + " features, forest has " +
                              std::to_string(feature_names.size()));
    int pre = 0, post = 0;
    for (const DecisionTree& tree : trees)
        (tree.predict(row) == Label::Pre ? pre : post)++;
    return resolve_votes(pre, post);
}

RandomForest train_forest(const Dataset& train, const Hyperparameters& hp, unsigned threads) {
    hp.validate(train.n_rows, train.n_features);
    Hyperparameters resolved = hp;
    if (resolved.mtry == 0)
        resolved.mtry = std::max(
            1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(train.n_features)))));

    RandomForest forest;
    forest.hp = resolved;
    forest.feature_names = train.feature_names;
    forest.train_size = train.n_rows;
    const auto [pre, post] = train.class_counts();
    forest.train_pre = pre;
    forest.train_post = post;
    forest.trees.resize(static_cast<std::size_t>(resolved.num_trees));

    parallel_for(forest.trees.size(), threads, [&](std::size_t i) {
        forest.trees[i] = train_tree(train, resolved, derive_key(resolved.seed, stream::kTree, i));
    });
    return forest;
}

double OobResult::error() const {
    if (voted == 0) return std::nan("");
    return static_cast<double>(wrong) / static_cast<double>(voted);
}

namespace {

// Shared core for OOB evaluation with a row-value accessor; parallel over
// rows, so tallies are integers accumulated in a fixed per-row layout.
template <typename ValueAt>
void oob_core(const RandomForest& forest, const Dataset& train, unsigned threads,
              ValueAt&& value_at, OobResult& out) {
    const std::size_t n = train.n_rows;
    std::vector<std::vector<std::uint8_t>> masks(forest.trees.size());
    parallel_for(forest.trees.size(), threads,
                 [&](std::size_t t) { masks[t] = forest.trees[t].in_bag_mask(n); });

    out.votes_pre.assign(n, 0);
    out.votes_post.assign(n, 0);
    out.predictions.assign(n, std::nullopt);

    parallel_for(n, threads, [&](std::size_t r) {
        std::vector<int> row(train.n_features);
        for (std::size_t c = 0; c < train.n_features; ++c) row[c] = value_at(r, c);
        int pre = 0, post = 0;
        for (std::size_t t = 0; t < forest.trees.size(); ++t) {
            if (masks[t][r]) continue;
            (forest.trees[t].predict(row) == Label::Pre ? pre : post)++;
        }
        out.votes_pre[r] = pre;
        out.votes_post[r] = post;
        if (pre + post > 0) out.predictions[r] = forest.resolve_votes(pre, post);
    });

    out.voted = 0;
    out.wrong = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (!out.predictions[r]) continue;
        ++out.voted;
        out.wrong += *out.predictions[r] != train.labels[r];
    }
}

}  // namespace

OobResult oob_predictions(const RandomForest& forest, const Dataset& train, unsigned threads) {
    if (forest.train_size != train.n_rows ||
        forest.feature_names.size() != train.n_features)
        throw ValidationError("forest was not trained on this dataset shape");
    OobResult out;
    oob_core(forest, train, threads,
             [&](std::size_t r, std::size_t c) { return train.at(r, c); }, out);
    return out;
}

double oob_error_with_column(const RandomForest& forest, const Dataset& train,
                             std::size_t feature, std::span<const int> column,
                             unsigned threads) {
    if (column.size() != train.n_rows)
        throw ValidationError("replacement column length mismatch");
    if (feature >= train.n_features) throw ValidationError("feature index out of range");
    OobResult out;
    oob_core(forest, train, threads,
             [&](std::size_t r, std::size_t c) {
                 return c == feature ? column[r] : train.at(r, c);
             },
             out);
    return out.error();
}

long ConfusionMatrix::total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

double ConfusionMatrix::error() const {
    const long t = total();
    if (t == 0) return std::nan("");
    return static_cast<double>(counts[0][1] + counts[1][0]) / static_cast<double>(t);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) counts[i][j] += other.counts[i][j];
    return *this;
}

ConfusionMatrix evaluate(const RandomForest& forest, const Dataset& test) {
    if (test.n_rows == 0) throw ValidationError("evaluation set is empty");
    if (test.n_features != forest.feature_names.size())
        throw ValidationError("evaluation set feature space does not match the forest");
    ConfusionMatrix cm;
    for (std::size_t r = 0; r < test.n_rows; ++r) {
        const Label predicted = forest.predict(test.row(r));
        ++cm.counts[static_cast<int>(test.labels[r])][static_cast<int>(predicted)];
    }
    return cm;
}

}  // namespace evorf
