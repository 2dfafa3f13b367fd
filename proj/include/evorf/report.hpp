#pragma once

#include <string>

#include "evorf/experiments.hpp"

namespace evorf {

// Per-run metrics: run,seed,n_train,n_test,oob_error,test_error,post_fraction_test.
void write_runs_csv(const MrfResult& result, const std::string& path);

// Pooled counts plus overall error, one labeled row per true class.
void write_confusion_csv(const ConfusionMatrix& cm, const std::string& path);

// Across-run mean importance per feature, in percentage points.
void write_mean_importance_csv(const MrfResult& result, const std::string& path);

// Per-class mean counts and skew from the first run's report.
void write_directionality_csv(const ImportanceReport& report, const std::string& path);

// Tuned and untuned arms side by side.
void write_comparison_csv(const ComparisonResult& result, const std::string& path);

// Name length summary per class: n, median, mean, SD.
void write_lengths_csv(const LengthStats& ls, const std::string& path);

// OLS of test error on test-subset class balance.
void write_regression_csv(const stats::Ols& ols, const std::string& path);

// Human majority vote vs the forests, one metric per row.
void write_human_csv(const HumanVsMrfResult& result, const std::string& path);

// One-row digest of an MRF: errors, SDs, pooled confusion.
void write_summary_csv(const MrfResult& result, const std::string& path);

}  // namespace evorf
