#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "evorf/dataset.hpp"
#include "evorf/forest.hpp"
#include "evorf/importance.hpp"
#include "evorf/stats.hpp"
#include "evorf/tuning.hpp"

namespace evorf {

struct ExperimentConfig {
    Language lang = Language::Japanese;
    bool with_length = false;
    bool tune = false;
    int n_runs = 1;
    int altmann = 0;  // permutation count; 0 disables p-values
    Hyperparameters hp;
    int tuning_trees = 1000;   // trees per tuning trial
    int altmann_trees = 1000;  // trees per null retrain
    unsigned threads = 0;
    std::string out_dir = "out";
    std::string format = "csv";
    bool svg = false;
};

// Loads a records CSV, filters by stage when the file carries stages, and
// featurizes. The provenance records the path and a content hash.
Dataset load_corpus(const std::string& records_csv, const PhonemeInventory& inv,
                    bool with_length, std::vector<std::string>* warnings = nullptr);

struct RunResult {
    std::uint64_t seed = 0;  // split and forest seed for this run
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double oob_error = 0.0;
    double test_error = 0.0;
    ConfusionMatrix confusion;
    double post_fraction_test = 0.0;
    ImportanceReport importance;  // empty for cross-dataset runs
};

struct MrfResult {
    std::vector<RunResult> runs;
    double mean_test_error = 0.0;
    double sd_test_error = 0.0;
    double mean_oob_error = 0.0;
    double sd_oob_error = 0.0;
    ConfusionMatrix pooled;
    Hyperparameters hp_used;
    std::optional<TuningResult> tuning;
    std::vector<std::string> feature_names;
    std::vector<double> mean_importance;  // across runs, feature order
    std::string train_provenance;
    std::string test_provenance;  // cross-dataset only
};

// One seeded split/train/evaluate/importance run (seed = cfg.hp.seed).
MrfResult run_single(const Dataset& full, const ExperimentConfig& cfg);

// Nine (or n_runs) runs; run i uses seed i for both the split and the
// forest; tuning happens once, on run 1's training subset. Altmann p-values,
// when requested, are computed on run 1 only.
MrfResult run_mrf(const Dataset& full, const ExperimentConfig& cfg);

// Trains on the complete train dataset (no split) and evaluates on the
// complete test dataset; run i varies only the forest seed.
MrfResult run_cross(const Dataset& train_full, const Dataset& test_full,
                    const ExperimentConfig& cfg);

struct ComparisonResult {
    MrfResult tuned;
    MrfResult untuned;  // mtry=⌊√p⌋, fraction 1 with replacement, node size 1
};

ComparisonResult run_untuned_comparison(const Dataset& full, const ExperimentConfig& cfg);

struct HumanResponses {
    std::vector<std::string> sample_ids;
    std::vector<Label> truth;
    std::vector<std::string> respondent_ids;
    // votes[respondent][sample]: -1 missing, otherwise a Label value
    std::vector<std::vector<std::int8_t>> votes;
};

// votes CSV `respondent_id,sample_id,vote`, truth sidecar `sample_id,label`.
HumanResponses load_responses(const std::string& votes_csv, const std::string& truth_csv,
                              std::vector<std::string>* warnings = nullptr);

struct MajorityVoteResult {
    long scored_samples = 0;
    long correct = 0;
    long ties = 0;
    std::vector<std::string> tie_samples;
    std::vector<std::string> unvoted_samples;  // excluded from scoring
    double majority_accuracy = 0.0;
    std::vector<double> respondent_accuracy;
    double respondent_mean = 0.0;
    double respondent_sd = 0.0;
};

// Per-sample mode of votes (tie → incorrect, flagged), plus per-respondent
// accuracies.
MajorityVoteResult majority_vote_eval(const HumanResponses& responses);

struct HumanVsMrfResult {
    MajorityVoteResult human;
    std::vector<double> forest_accuracy;  // per run, on the sample set
    double forest_mean = 0.0;
    double forest_sd = 0.0;
    MrfResult mrf;  // the underlying official-data MRF (test metrics)
};

// The MRF's forests (trained per run_mrf on `official`) each classify
// `samples`; sample truth comes from the samples dataset labels.
HumanVsMrfResult human_vs_mrf(const Dataset& official, const Dataset& samples,
                              const HumanResponses& responses, const ExperimentConfig& cfg);

// OLS of test error on the post-evolution fraction of the test subset.
stats::Ols distribution_regression(std::span<const double> post_fraction,
                                   std::span<const double> test_error);

struct LengthStats {
    double pre_median = 0.0, post_median = 0.0;
    double pre_mean = 0.0, post_mean = 0.0;
    double pre_sd = 0.0, post_sd = 0.0;
    long pre_n = 0, post_n = 0;
    std::vector<double> pre_lengths, post_lengths;
};

// Requires a dataset built with_length (uses the trailing length column).
LengthStats length_stats(const Dataset& ds);

// Manifest assembly: everything needed to recompute the tables.
nlohmann::ordered_json manifest_config(const ExperimentConfig& cfg);
nlohmann::ordered_json manifest_mrf(const MrfResult& result, const ExperimentConfig& cfg);
void write_manifest(const nlohmann::ordered_json& doc, const std::string& path);

}  // namespace evorf
