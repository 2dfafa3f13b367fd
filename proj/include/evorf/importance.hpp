#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evorf/forest.hpp"

namespace evorf {

struct FeatureImportance {
    std::string feature;
    double importance = 0.0;  // OOB error increase, as a fraction
    std::optional<double> p_value;
    double pre_mean = 0.0;   // mean count per name within each training class
    double post_mean = 0.0;

    // "post" when the feature is denser in post-evolution names
    std::string skew() const;
};

struct ImportanceReport {
    std::vector<FeatureImportance> features;  // fixed feature order

    const FeatureImportance* find(const std::string& name) const;
};

// importance_j = OOB_error(column j permuted through the fixed forest)
//              − OOB_error(original). Negative values are reported as-is.
std::vector<double> permutation_importance(const RandomForest& forest, const Dataset& train,
                                           std::uint64_t perm_seed, unsigned threads = 0);

struct AltmannOptions {
    int n_perm = 100;
    int trees_override = 0;  // 0 → retrain with hp.num_trees
    unsigned threads = 0;
};

// Response-permutation p-values: retrain under shuffled labels n_perm times,
// p_j = (1 + #{null_jk ≥ observed_j}) / (1 + n_perm).
std::vector<double> altmann_pvalues(const Dataset& train, const Hyperparameters& hp,
                                    const std::vector<double>& observed,
                                    const AltmannOptions& opts = {});

// Per-class mean counts on the training subset; both classes must be present.
void directionality(const Dataset& train, ImportanceReport& report);

// Full report assembly for one trained forest.
ImportanceReport importance_report(const RandomForest& forest, const Dataset& train,
                                   std::uint64_t perm_seed,
                                   const std::optional<AltmannOptions>& altmann = std::nullopt,
                                   unsigned threads = 0);

// CSV: feature,importance_pct,p_value,pre_mean,post_mean,skew. Importance is
// in percentage points of OOB error. With a threshold (e.g. 0.1), only rows
// above it are written — a presentation filter that never changes values.
void write_importance_csv(const ImportanceReport& report, const std::string& path,
                          std::optional<double> min_importance_pct = std::nullopt);

}  // namespace evorf
