#pragma once

#include <string>

#include "evorf/forest.hpp"

namespace evorf {

// Versioned JSON round-trip for trained forests. Numbers are integers except
// thresholds, which are value-midpoints (x.0 / x.5) and serialize exactly.
void save_forest(const RandomForest& forest, const std::string& path);
RandomForest load_forest(const std::string& path);

}  // namespace evorf
