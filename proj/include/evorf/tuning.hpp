#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evorf/forest.hpp"

namespace evorf {

struct GridSpec {
    std::vector<int> mtry;
    std::vector<double> sample_fraction;  // 1.0 → bagging with replacement
    std::vector<int> min_node_size;

    // {1, ⌊√p⌋, ⌊p/4⌋, ⌊p/2⌋, p} × {0.4, 0.632, 0.8, 1.0} × {1, 5, 10},
    // deduplicated and clamped to valid ranges.
    static GridSpec defaults(std::size_t n_features);

    // Config file: one `key = v1, v2, ...` line per key (mtry,
    // sample_fraction, min_node_size); missing keys take defaults.
    static GridSpec from_file(const std::string& path, std::size_t n_features);
};

struct TuningTrial {
    Hyperparameters hp;
    double oob_error = 0.0;
};

struct TuningResult {
    Hyperparameters chosen;
    std::vector<TuningTrial> trials;  // in scan order
    std::uint64_t seed = 0;
};

// Deterministic grid scan minimizing OOB error; ties go to the earlier
// trial. Trial forests may use a reduced tree count (trial_trees) to keep
// tuning cheap; the chosen hyperparameters keep hp_base's num_trees.
TuningResult tune(const Dataset& train, const GridSpec& grid, const Hyperparameters& hp_base,
                  std::uint64_t seed, int trial_trees = 1000, unsigned threads = 0);

struct TreeCountTrial {
    int num_trees = 0;
    double mean_oob = 0.0;
    double sd_oob = 0.0;
};

struct TreeCountResult {
    int chosen = 0;
    std::vector<TreeCountTrial> trials;
};

// For each candidate count, trains n_seeds forests under derived seeds and
// reports mean/SD OOB error; chooses the smallest count whose mean is within
// one SD of the best mean (plateau rule).
TreeCountResult tune_num_trees(const Dataset& train, const std::vector<int>& candidates,
                               const Hyperparameters& hp_base, int n_seeds = 9,
                               unsigned threads = 0);

void write_trials_csv(const TuningResult& result, const std::string& path);

}  // namespace evorf
