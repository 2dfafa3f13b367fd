#include "evorf/report.hpp"

#include <cstdio>
#include <fstream>

#include "evorf/csv.hpp"
#include "evorf/error.hpp"

namespace evorf {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    return out;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string pct(double v) { return num(v * 100.0); }

}  // namespace

void write_runs_csv(const MrfResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "run,seed,n_train,n_test,oob_error_pct,test_error_pct,post_fraction_test\n";
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const RunResult& r = result.runs[i];
        out << (i + 1) << ',' << r.seed << ',' << r.n_train << ',' << r.n_test << ','
            << pct(r.oob_error) << ',' << pct(r.test_error) << ','
            << num(r.post_fraction_test) << '\n';
    }
}

void write_confusion_csv(const ConfusionMatrix& cm, const std::string& path) {
    auto out = open_out(path);
    out << "true_class,predicted_pre,predicted_post\n";
    out << "pre," << cm.counts[0][0] << ',' << cm.counts[0][1] << '\n';
    out << "post," << cm.counts[1][0] << ',' << cm.counts[1][1] << '\n';
    out << "# error_pct," << pct(cm.error()) << ",total=" << cm.total() << '\n';
}

void write_mean_importance_csv(const MrfResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "feature,mean_importance_pct\n";
    for (std::size_t j = 0; j < result.mean_importance.size(); ++j)
        out << csv::escape(result.feature_names[j]) << ',' << pct(result.mean_importance[j])
            << '\n';
}

void write_directionality_csv(const ImportanceReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "feature,pre_mean,post_mean,skew\n";
    for (const FeatureImportance& f : report.features)
        out << csv::escape(f.feature) << ',' << num(f.pre_mean) << ',' << num(f.post_mean)
            << ',' << f.skew() << '\n';
}

namespace {

void comparison_row(std::ofstream& out, const char* arm, const MrfResult& m) {
    const Hyperparameters& hp = m.hp_used;
    out << arm << ',' << pct(m.mean_test_error) << ',' << pct(m.sd_test_error) << ','
        << pct(m.mean_oob_error) << ',' << pct(m.sd_oob_error) << ',' << hp.mtry << ','
        << num(hp.sample_fraction) << ',' << (hp.replace ? "true" : "false") << ','
        << hp.min_node_size << ',' << hp.num_trees << '\n';
}

}  // namespace

void write_comparison_csv(const ComparisonResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "arm,mean_test_error_pct,sd_test_error_pct,mean_oob_error_pct,sd_oob_error_pct,"
           "mtry,sample_fraction,replace,min_node_size,num_trees\n";
    comparison_row(out, "tuned", result.tuned);
    comparison_row(out, "untuned", result.untuned);
}

void write_lengths_csv(const LengthStats& ls, const std::string& path) {
    auto out = open_out(path);
    out << "class,n,median,mean,sd\n";
    out << "pre," << ls.pre_n << ',' << num(ls.pre_median) << ',' << num(ls.pre_mean) << ','
        << num(ls.pre_sd) << '\n';
    out << "post," << ls.post_n << ',' << num(ls.post_median) << ',' << num(ls.post_mean)
        << ',' << num(ls.post_sd) << '\n';
}

void write_regression_csv(const stats::Ols& ols, const std::string& path) {
    auto out = open_out(path);
    out << "slope,intercept,r_squared,f_statistic,df1,df2,p_value\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%d,%d,%.9g\n", ols.slope,
                  ols.intercept, ols.r_squared, ols.f_statistic, ols.df1, ols.df2,
                  ols.p_value);
    out << buf;
}

void write_human_csv(const HumanVsMrfResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "metric,value\n";
    out << "human_majority_accuracy_pct," << pct(result.human.majority_accuracy) << '\n';
    out << "human_scored_samples," << result.human.scored_samples << '\n';
    out << "human_ties," << result.human.ties << '\n';
    out << "human_respondent_mean_pct," << pct(result.human.respondent_mean) << '\n';
    out << "human_respondent_sd_pct," << pct(result.human.respondent_sd) << '\n';
    out << "human_respondents," << result.human.respondent_accuracy.size() << '\n';
    out << "forest_mean_accuracy_pct," << pct(result.forest_mean) << '\n';
    out << "forest_sd_accuracy_pct," << pct(result.forest_sd) << '\n';
    for (std::size_t i = 0; i < result.forest_accuracy.size(); ++i)
        out << "forest_run_" << (i + 1) << "_accuracy_pct,"
            << pct(result.forest_accuracy[i]) << '\n';
    out << "mrf_mean_test_error_pct," << pct(result.mrf.mean_test_error) << '\n';
    out << "mrf_sd_test_error_pct," << pct(result.mrf.sd_test_error) << '\n';
}

void write_summary_csv(const MrfResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "runs,mean_test_error_pct,sd_test_error_pct,mean_oob_error_pct,sd_oob_error_pct,"
           "pooled_error_pct\n";
    out << result.runs.size() << ',' << pct(result.mean_test_error) << ','
        << pct(result.sd_test_error) << ',' << pct(result.mean_oob_error) << ','
        << pct(result.sd_oob_error) << ',' << pct(result.pooled.error()) << '\n';
}

}  // namespace evorf
