#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evorf/phoneme_inventory.hpp"
#include "evorf/tokenize.hpp"

namespace evorf {

enum class Label : int { Pre = 0, Post = 1 };

// Evolution-family stage from the raw corpus; only Pre and Post survive
// filtering.
enum class Stage { NonEvolving, Pre, Mid, Post, Mega };

std::string to_string(Label label);
std::string to_string(Stage stage);
Label label_from_string(std::string_view s);
Stage stage_from_string(std::string_view s);

struct NameRecord {
    std::string id;
    std::string name;
    Language language = Language::Japanese;
    std::optional<Label> label;
    std::optional<Stage> stage;
};

struct RecordFile {
    std::vector<NameRecord> records;
    std::vector<std::string> warnings;
};

// CSV with header `id,name,language,stage` or `id,name,language,label`.
// Exact duplicate names (after trimming) are dropped with a warning.
RecordFile load_records(const std::string& path);

// Keeps Pre/Post stage records, drops NonEvolving/Mid/Mega, sets labels from
// stages. Every record must carry a stage.
std::vector<NameRecord> filter_records(const std::vector<NameRecord>& records);

// Feature matrix, row-major. Counts are small non-negative integers.
struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<int> values;  // n_rows * n_features
    std::vector<Label> labels;
    std::string provenance;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;

    int at(std::size_t row, std::size_t col) const { return values[row * n_features + col]; }
    std::span<const int> row(std::size_t r) const {
        return {values.data() + r * n_features, n_features};
    }
    // (pre, post) counts
    std::pair<int, int> class_counts() const;
};

// One row per record, tokenize + featurize; feature order = inventory symbol
// order, with "length" appended last when requested.
Dataset build_dataset(const std::vector<NameRecord>& records, const PhonemeInventory& inv,
                      bool with_length);

struct SplitPair {
    std::vector<std::size_t> train_indices;  // sorted ascending
    std::vector<std::size_t> test_indices;   // sorted ascending
    std::uint64_t seed = 0;
};

// Seeded uniform permutation; first floor(2N/3) indices train, rest test.
SplitPair split(std::size_t n_rows, std::uint64_t seed);

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices,
               const std::string& tag);

// Majority-class proportion.
double naive_baseline(const std::vector<Label>& labels);

// Dataset dump: feature columns plus a final `label` column, integer-exact.
void write_dataset_csv(const Dataset& ds, const std::string& path);
Dataset load_dataset_csv(const std::string& path);

}  // namespace evorf
