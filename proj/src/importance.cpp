#include "evorf/importance.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "evorf/csv.hpp"
#include "evorf/error.hpp"
#include "evorf/rng.hpp"

namespace evorf {

std::string FeatureImportance::skew() const {
    if (post_mean > pre_mean) return "post";
    if (pre_mean > post_mean) return "pre";
    return "balanced";
}

const FeatureImportance* ImportanceReport::find(const std::string& name) const {
    for (const auto& f : features)
        if (f.feature == name) return &f;
    return nullptr;
}

std::vector<double> permutation_importance(const RandomForest& forest, const Dataset& train,
                                           std::uint64_t perm_seed, unsigned threads) {
    const double base = oob_predictions(forest, train, threads).error();
    std::vector<double> importance(train.n_features, 0.0);
    for (std::size_t j = 0; j < train.n_features; ++j) {
        Rng rng(derive_key(perm_seed, stream::kPermute, j));
        const std::vector<std::size_t> perm = rng.permutation(train.n_rows);
        std::vector<int> column(train.n_rows);
        for (std::size_t r = 0; r < train.n_rows; ++r) column[r] = train.at(perm[r], j);
        importance[j] = oob_error_with_column(forest, train, j, column, threads) - base;
    }
    return importance;
}

std::vector<double> altmann_pvalues(const Dataset& train, const Hyperparameters& hp,
                                    const std::vector<double>& observed,
                                    const AltmannOptions& opts) {
    if (opts.n_perm < 1) throw ValidationError("Altmann iterations must be at least 1");
    if (observed.size() != train.n_features)
        throw ValidationError("observed importance length mismatch");

    Hyperparameters null_hp = hp;
    if (opts.trees_override > 0) null_hp.num_trees = opts.trees_override;

    std::vector<int> exceed(train.n_features, 0);
    Dataset shuffled = train;
    for (int k = 1; k <= opts.n_perm; ++k) {
        Rng rng(derive_key(hp.seed, stream::kNullLabels, static_cast<std::uint64_t>(k)));
        const std::vector<std::size_t> perm = rng.permutation(train.n_rows);
        for (std::size_t r = 0; r < train.n_rows; ++r)
            shuffled.labels[r] = train.labels[perm[r]];

        null_hp.seed = derive_key(hp.seed, stream::kNullForest, static_cast<std::uint64_t>(k));
        const RandomForest null_forest = train_forest(shuffled, null_hp, opts.threads);
        const std::vector<double> null_imp = permutation_importance(
            null_forest, shuffled,
            derive_key(hp.seed, stream::kNullPermute, static_cast<std::uint64_t>(k)),
            opts.threads);
        for (std::size_t j = 0; j < train.n_features; ++j)
            exceed[j] += null_imp[j] >= observed[j];
    }

    std::vector<double> p(train.n_features);
    for (std::size_t j = 0; j < train.n_features; ++j)
        p[j] = (1.0 + exceed[j]) / (1.0 + opts.n_perm);
    return p;
}

void directionality(const Dataset& train, ImportanceReport& report) {
    const auto [pre, post] = train.class_counts();
    if (pre == 0 || post == 0)
        throw ValidationError("directionality needs both classes in the training subset");
    if (report.features.size() != train.n_features)
        throw ValidationError("report feature count mismatch");
    for (std::size_t j = 0; j < train.n_features; ++j) {
        long pre_sum = 0, post_sum = 0;
        for (std::size_t r = 0; r < train.n_rows; ++r) {
            if (train.labels[r] == Label::Pre)
                pre_sum += train.at(r, j);
            else
                post_sum += train.at(r, j);
        }
        report.features[j].pre_mean = static_cast<double>(pre_sum) / pre;
        report.features[j].post_mean = static_cast<double>(post_sum) / post;
    }
}

ImportanceReport importance_report(const RandomForest& forest, const Dataset& train,
                                   std::uint64_t perm_seed,
                                   const std::optional<AltmannOptions>& altmann,
                                   unsigned threads) {
    ImportanceReport report;
    report.features.resize(train.n_features);
    for (std::size_t j = 0; j < train.n_features; ++j)
        report.features[j].feature = train.feature_names[j];

    const std::vector<double> imp = permutation_importance(forest, train, perm_seed, threads);
    for (std::size_t j = 0; j < train.n_features; ++j) report.features[j].importance = imp[j];

    if (altmann) {
        AltmannOptions opts = *altmann;
        if (opts.threads == 0) opts.threads = threads;
        const std::vector<double> p = altmann_pvalues(train, forest.hp, imp, opts);
        for (std::size_t j = 0; j < train.n_features; ++j) report.features[j].p_value = p[j];
    }

    directionality(train, report);
    return report;
}

void write_importance_csv(const ImportanceReport& report, const std::string& path,
                          std::optional<double> min_importance_pct) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << "feature,importance_pct,p_value,pre_mean,post_mean,skew\n";
    char buf[64];
    for (const auto& f : report.features) {
        const double pct = f.importance * 100.0;
        if (min_importance_pct && pct <= *min_importance_pct) continue;
        out << csv::escape(f.feature) << ',';
        std::snprintf(buf, sizeof buf, "%.6f", pct);
        out << buf << ',';
        if (f.p_value) {
            std::snprintf(buf, sizeof buf, "%.6f", *f.p_value);
            out << buf;
        }
        out << ',';
        std::snprintf(buf, sizeof buf, "%.6f", f.pre_mean);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.6f", f.post_mean);
        out << buf << ',';
        out << f.skew() << "\n";
    }
    if (!out) throw DataError("failed writing " + path);
}

}  // namespace evorf
