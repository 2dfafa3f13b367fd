#pragma once

#include <span>
#include <string>

#include "evorf/experiments.hpp"

namespace evorf {

// Horizontal per-class mean-count bars for the highest-importance features.
void svg_directionality(const ImportanceReport& report, const std::string& path,
                        std::size_t top_n = 12);

// Box plots (min, quartiles, max) of name lengths per class.
void svg_lengths(const LengthStats& ls, const std::string& path);

// Scatter of test error against test-subset class balance with the fitted line.
void svg_regression(std::span<const double> x, std::span<const double> y,
                    const stats::Ols& ols, const std::string& path);

}  // namespace evorf
