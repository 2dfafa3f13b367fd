#include "evorf/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evorf/error.hpp"
#include "evorf/rng.hpp"
#include "evorf/stats.hpp"

namespace evorf {

namespace {

void push_unique(std::vector<int>& v, int x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

GridSpec GridSpec::defaults(std::size_t n_features) {
    const int p = static_cast<int>(n_features);
    GridSpec g;
    push_unique(g.mtry, 1);
    push_unique(g.mtry, std::max(1, static_cast<int>(std::floor(std::sqrt(double(p))))));
    push_unique(g.mtry, std::max(1, p / 4));
    push_unique(g.mtry, std::max(1, p / 2));
    push_unique(g.mtry, p);
    g.sample_fraction = {0.4, 0.632, 0.8, 1.0};
    g.min_node_size = {1, 5, 10};
    return g;
}

GridSpec GridSpec::from_file(const std::string& path, std::size_t n_features) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open grid file " + path);
    GridSpec g = defaults(n_features);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path, line_no, "expected `key = v1, v2, ...`");
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        std::vector<std::string> values;
        std::stringstream ss(line.substr(eq + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = strip(item);
            if (!item.empty()) values.push_back(item);
        }
        if (values.empty()) throw ParseError(path, line_no, "no values for key " + key);
        try {
            if (key == "mtry") {
                g.mtry.clear();
                for (const auto& v : values) g.mtry.push_back(std::stoi(v));
            } else if (key == "sample_fraction") {
                g.sample_fraction.clear();
                for (const auto& v : values) g.sample_fraction.push_back(std::stod(v));
            } else if (key == "min_node_size") {
                g.min_node_size.clear();
                for (const auto& v : values) g.min_node_size.push_back(std::stoi(v));
            } else {
                throw ParseError(path, line_no, "unknown key " + key);
            }
        } catch (const std::invalid_argument&) {
            throw ParseError(path, line_no, "bad number for key " + key);
        }
    }
    return g;
}

TuningResult tune(const Dataset& train, const GridSpec& grid, const Hyperparameters& hp_base,
                  std::uint64_t seed, int trial_trees, unsigned threads) {
    if (grid.mtry.empty() || grid.sample_fraction.empty() || grid.min_node_size.empty())
        throw ValidationError("tuning grid is empty");

    TuningResult result;
    result.seed = seed;
    std::size_t trial_index = 0;
    bool have_best = false;
    double best_error = 0.0;
    std::size_t best_index = 0;

    for (const int mtry : grid.mtry) {
        for (const double fraction : grid.sample_fraction) {
            for (const int node_size : grid.min_node_size) {
                Hyperparameters hp = hp_base;
                hp.mtry = mtry;
                hp.sample_fraction = fraction;
                hp.replace = fraction >= 1.0;  // full-fraction draws resample
                hp.min_node_size = node_size;
                hp.num_trees = trial_trees > 0 ? trial_trees : hp_base.num_trees;
                hp.seed = derive_key(seed, stream::kTune, trial_index);
                hp.validate(train.n_rows, train.n_features);

                const RandomForest forest = train_forest(train, hp, threads);
                const double err = oob_predictions(forest, train, threads).error();
                result.trials.push_back({hp, err});
                if (!have_best || std::isnan(best_error) || err < best_error) {
                    have_best = true;
                    best_error = err;
                    best_index = trial_index;
                }
                ++trial_index;
            }
        }
    }

    result.chosen = result.trials[best_index].hp;
    result.chosen.num_trees = hp_base.num_trees;
    result.chosen.seed = hp_base.seed;
    return result;
}

TreeCountResult tune_num_trees(const Dataset& train, const std::vector<int>& candidates,
                               const Hyperparameters& hp_base, int n_seeds,
                               unsigned threads) {
    if (candidates.empty()) throw ValidationError("no tree-count candidates");
    if (n_seeds < 1) throw ValidationError("n_seeds must be positive");

    TreeCountResult result;
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
        Hyperparameters hp = hp_base;
        hp.num_trees = candidates[ci];
        std::vector<double> errors;
        errors.reserve(static_cast<std::size_t>(n_seeds));
        const std::uint64_t count_key = derive_key(hp_base.seed, stream::kTreeCount, ci);
        for (int s = 0; s < n_seeds; ++s) {
            hp.seed = derive_key(count_key, stream::kTreeCount, static_cast<std::uint64_t>(s));
            const RandomForest forest = train_forest(train, hp, threads);
            errors.push_back(oob_predictions(forest, train, threads).error());
        }
        result.trials.push_back({candidates[ci], stats::mean(errors), stats::sample_sd(errors)});
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.trials.size(); ++i)
        if (result.trials[i].mean_oob < result.trials[best].mean_oob) best = i;
    const double plateau = result.trials[best].mean_oob + result.trials[best].sd_oob;

    int chosen = 0;
    bool have = false;
    for (const auto& t : result.trials) {
        if (t.mean_oob <= plateau && (!have || t.num_trees < chosen)) {
            have = true;
            chosen = t.num_trees;
        }
    }
    result.chosen = chosen;
    return result;
}

void write_trials_csv(const TuningResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << "trial,mtry,sample_fraction,replace,min_node_size,oob_error,chosen\n";
    char buf[64];
    for (std::size_t i = 0; i < result.trials.size(); ++i) {
        const auto& t = result.trials[i];
        const bool chosen = t.hp.mtry == result.chosen.mtry &&
                            t.hp.sample_fraction == result.chosen.sample_fraction &&
                            t.hp.min_node_size == result.chosen.min_node_size;
        out << i << ',' << t.hp.mtry << ',';
        std::snprintf(buf, sizeof buf, "%.3f", t.hp.sample_fraction);
        out << buf << ',' << (t.hp.replace ? 1 : 0) << ',' << t.hp.min_node_size << ',';
        std::snprintf(buf, sizeof buf, "%.6f", t.oob_error);
        out << buf << ',' << (chosen ? 1 : 0) << "\n";
    }
    if (!out) throw DataError("failed writing " + path);
}

}  // namespace evorf
