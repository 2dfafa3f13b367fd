// evorf: phoneme-count featurization of creature names plus seeded random
// forest experiments over those features.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evorf/csv.hpp"
#include "evorf/error.hpp"
#include "evorf/experiments.hpp"
#include "evorf/forest_io.hpp"
#include "evorf/report.hpp"
#include "evorf/svg.hpp"
#include "evorf/tokenize.hpp"

namespace fs = std::filesystem;
using namespace evorf;

namespace {

struct CommonOpts {
    std::string lang = "ja";
    std::string inventory;  // explicit path wins over the default location
    std::string out_dir = "out";
    bool with_length = false;
    unsigned threads = 0;
};

Language parse_lang(const std::string& s) { return language_from_string(s); }

std::string inventory_path(const CommonOpts& opts) {
    std::string dir = "data/inventories";
    if (!opts.inventory.empty()) {
        if (!fs::is_directory(opts.inventory)) return opts.inventory;
        dir = opts.inventory;  // directory given: pick the language file inside
    } else if (const char* env = std::getenv("EVORF_INVENTORY_DIR")) {
        dir = env;
    }
    switch (parse_lang(opts.lang)) {
        case Language::Japanese: return dir + "/japanese.tsv";
        case Language::Chinese: return dir + "/chinese.tsv";
        case Language::Korean: return dir + "/korean.tsv";
    }
    throw ValidationError("unknown language " + opts.lang);
}

PhonemeInventory load_inventory(const CommonOpts& opts) {
    return PhonemeInventory::load(inventory_path(opts), parse_lang(opts.lang));
}

fs::path ensure_out(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());
    return p;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

// ---- transcribe ----------------------------------------------------------

int cmd_transcribe(const CommonOpts& opts, const std::string& input,
                   const std::string& out_file, bool no_filter) {
    const csv::Table raw = csv::read_file(input);
    const fs::path out_path =
        out_file.empty() ? ensure_out(opts.out_dir) / "transcribed.csv" : fs::path(out_file);
    if (!out_path.parent_path().empty()) {
        std::error_code ec;
        fs::create_directories(out_path.parent_path(), ec);
    }
    if (raw.header.empty() && raw.rows.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        std::cerr << "warning: " << input << " is empty; wrote empty output\n";
        return 0;
    }

    const PhonemeInventory inv = load_inventory(opts);
    RecordFile rf = load_records(input);
    print_warnings(rf.warnings);

    const bool any_stage =
        std::any_of(rf.records.begin(), rf.records.end(),
                    [](const NameRecord& r) { return r.stage.has_value(); });
    std::vector<NameRecord> records;
    if (any_stage && !no_filter)
        records = filter_records(rf.records);
    else
        records = std::move(rf.records);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + out_path.string());
    out << "id,name,tokens";
    for (std::size_t i = 0; i < inv.size(); ++i)
        out << ',' << csv::escape(inv.symbol(static_cast<int>(i)));
    if (opts.with_length) out << ",length";
    const bool all_labeled =
        !records.empty() && std::all_of(records.begin(), records.end(),
                                        [](const NameRecord& r) { return r.label.has_value(); });
    if (all_labeled) out << ",label";
    out << '\n';

    std::vector<std::string> failures;
    for (const NameRecord& rec : records) {
        try {
            const TokenSequence tokens = tokenize(rec.name, inv);
            const FeatureVector fv = featurize(tokens, inv, opts.with_length);
            std::string joined;
            for (const std::string& s : tokens.symbols(inv)) {
                if (!joined.empty()) joined += ' ';
                joined += s;
            }
            out << csv::escape(rec.id) << ',' << csv::escape(rec.name) << ','
                << csv::escape(joined);
            for (const int c : fv.counts) out << ',' << c;
            if (opts.with_length) out << ',' << fv.length;
            if (all_labeled)
                out << ',' << (rec.label == Label::Post ? "post" : "pre");
            out << '\n';
        } catch (const DataError& e) {
            failures.push_back(rec.id + " (" + rec.name + "): " + e.what());
        }
    }
    if (!failures.empty()) {
        std::cerr << failures.size() << " name(s) failed to transcribe:\n";
        for (const auto& f : failures) std::cerr << "  " << f << "\n";
        return 3;
    }
    if (records.empty())
        std::cerr << "warning: no records to transcribe; wrote header only\n";
    std::cout << "wrote " << records.size() << " row(s) to " << out_path.string() << "\n";
    return 0;
}

// ---- featurize -----------------------------------------------------------

int cmd_featurize(const CommonOpts& opts, const std::string& input,
                  const std::string& out_file) {
    const PhonemeInventory inv = load_inventory(opts);
    std::vector<std::string> warnings;
    const Dataset ds = load_corpus(input, inv, opts.with_length, &warnings);
    print_warnings(warnings);
    const fs::path out_path =
        out_file.empty() ? ensure_out(opts.out_dir) / "dataset.csv" : fs::path(out_file);
    if (!out_path.parent_path().empty()) {
        std::error_code ec;
        fs::create_directories(out_path.parent_path(), ec);
    }
    write_dataset_csv(ds, out_path.string());
    const auto [pre, post] = ds.class_counts();
    std::cout << "wrote " << ds.n_rows << " rows (" << pre << " pre / " << post
              << " post), " << ds.n_features << " features to " << out_path.string() << "\n";
    return 0;
}

// ---- train / evaluate / importance / tune --------------------------------

int cmd_train(const std::string& dataset_path, const std::string& forest_path,
              const Hyperparameters& hp, unsigned threads) {
    const Dataset ds = load_dataset_csv(dataset_path);
    const RandomForest forest = train_forest(ds, hp, threads);
    save_forest(forest, forest_path);
    const double oob = oob_predictions(forest, ds, threads).error();
    std::printf("trained %d trees on %zu rows; OOB error %.4f%%\n", hp.num_trees, ds.n_rows,
                oob * 100.0);
    std::cout << "saved forest to " << forest_path << "\n";
    return 0;
}

int cmd_evaluate(const CommonOpts& opts, const std::string& forest_path,
                 const std::string& dataset_path) {
    const RandomForest forest = load_forest(forest_path);
    const Dataset ds = load_dataset_csv(dataset_path);
    const ConfusionMatrix cm = evaluate(forest, ds);
    const fs::path out = ensure_out(opts.out_dir);
    write_confusion_csv(cm, (out / "confusion.csv").string());
    std::printf("error %.4f%% on %ld rows (confusion written to %s)\n", cm.error() * 100.0,
                cm.total(), (out / "confusion.csv").string().c_str());
    return 0;
}

int cmd_importance(const CommonOpts& opts, const std::string& forest_path,
                   const std::string& dataset_path, std::uint64_t perm_seed, int altmann,
                   int altmann_trees) {
    const RandomForest forest = load_forest(forest_path);
    const Dataset ds = load_dataset_csv(dataset_path);
    std::optional<AltmannOptions> alt;
    if (altmann > 0) alt = AltmannOptions{altmann, altmann_trees, opts.threads};
    const ImportanceReport report =
        importance_report(forest, ds, perm_seed, alt, opts.threads);
    const fs::path out = ensure_out(opts.out_dir);
    write_importance_csv(report, (out / "importance_full.csv").string());
    write_importance_csv(report, (out / "importance_filtered.csv").string(), 0.1);
    write_directionality_csv(report, (out / "directionality.csv").string());
    std::cout << "wrote importance tables to " << out.string() << "\n";
    return 0;
}

int cmd_tune(const CommonOpts& opts, const std::string& dataset_path,
             const std::string& grid_path, const Hyperparameters& hp_base,
             std::uint64_t seed, int trial_trees) {
    const Dataset ds = load_dataset_csv(dataset_path);
    const GridSpec grid = grid_path.empty() ? GridSpec::defaults(ds.n_features)
                                            : GridSpec::from_file(grid_path, ds.n_features);
    const TuningResult result = tune(ds, grid, hp_base, seed, trial_trees, opts.threads);
    const fs::path out = ensure_out(opts.out_dir);
    write_trials_csv(result, (out / "tuning_trials.csv").string());
    const Hyperparameters& c = result.chosen;
    std::printf("chosen: mtry=%d fraction=%.3f replace=%s min_node_size=%d (trials: %zu)\n",
                c.mtry, c.sample_fraction, c.replace ? "true" : "false", c.min_node_size,
                result.trials.size());
    return 0;
}

// ---- experiment subcommands ----------------------------------------------

ExperimentConfig make_config(const CommonOpts& opts, bool tune_flag, int runs, int altmann,
                             const Hyperparameters& hp, int tuning_trees, int altmann_trees,
                             const std::string& format, bool svg) {
    ExperimentConfig cfg;
    cfg.lang = parse_lang(opts.lang);
    cfg.with_length = opts.with_length;
    cfg.tune = tune_flag;
    cfg.n_runs = runs;
    cfg.altmann = altmann;
    cfg.hp = hp;
    cfg.tuning_trees = tuning_trees;
    cfg.altmann_trees = altmann_trees;
    cfg.threads = opts.threads;
    cfg.out_dir = opts.out_dir;
    cfg.format = format;
    cfg.svg = svg;
    return cfg;
}

void write_mrf_outputs(const MrfResult& result, const ExperimentConfig& cfg) {
    const fs::path out = ensure_out(cfg.out_dir);
    write_manifest(manifest_mrf(result, cfg), (out / "manifest.json").string());
    if (cfg.format == "csv") {
        write_runs_csv(result, (out / "runs.csv").string());
        write_summary_csv(result, (out / "summary.csv").string());
        write_confusion_csv(result.pooled, (out / "confusion.csv").string());
        if (!result.mean_importance.empty())
            write_mean_importance_csv(result, (out / "mean_importance.csv").string());
        if (!result.runs.empty() && !result.runs.front().importance.features.empty()) {
            const ImportanceReport& first = result.runs.front().importance;
            write_importance_csv(first, (out / "importance_full.csv").string());
            write_importance_csv(first, (out / "importance_filtered.csv").string(), 0.1);
            write_directionality_csv(first, (out / "directionality.csv").string());
            if (cfg.svg) svg_directionality(first, (out / "directionality.svg").string());
        }
    }
    std::printf("mean test error %.4f%% (SD %.4f%%), mean OOB %.4f%% over %zu run(s)\n",
                result.mean_test_error * 100.0, result.sd_test_error * 100.0,
                result.mean_oob_error * 100.0, result.runs.size());
    std::cout << "outputs in " << out.string() << "\n";
}

int cmd_experiment_single(const CommonOpts& opts, const std::string& records,
                          const ExperimentConfig& cfg_in) {
    const PhonemeInventory inv = load_inventory(opts);
    std::vector<std::string> warnings;
    const Dataset ds = load_corpus(records, inv, cfg_in.with_length, &warnings);
    print_warnings(warnings);
    const MrfResult result = run_single(ds, cfg_in);
    write_mrf_outputs(result, cfg_in);
    return 0;
}

int cmd_experiment_mrf(const CommonOpts& opts, const std::string& records,
                       const ExperimentConfig& cfg) {
    const PhonemeInventory inv = load_inventory(opts);
    std::vector<std::string> warnings;
    const Dataset ds = load_corpus(records, inv, cfg.with_length, &warnings);
    print_warnings(warnings);
    const MrfResult result = run_mrf(ds, cfg);
    write_mrf_outputs(result, cfg);
    return 0;
}

int cmd_experiment_cross(const CommonOpts& opts, const std::string& train_records,
                         const std::string& test_records, const ExperimentConfig& cfg) {
    const PhonemeInventory inv = load_inventory(opts);
    std::vector<std::string> warnings;
    const Dataset train = load_corpus(train_records, inv, cfg.with_length, &warnings);
    const Dataset test = load_corpus(test_records, inv, cfg.with_length, &warnings);
    print_warnings(warnings);
    const MrfResult result = run_cross(train, test, cfg);
    write_mrf_outputs(result, cfg);
    return 0;
}

int cmd_experiment_untuned(const CommonOpts& opts, const std::string& records,
                           const ExperimentConfig& cfg) {
    const PhonemeInventory inv = load_inventory(opts);
    std::vector<std::string> warnings;
    const Dataset ds = load_corpus(records, inv, cfg.with_length, &warnings);
    print_warnings(warnings);
    const ComparisonResult result = run_untuned_comparison(ds, cfg);
    const fs::path out = ensure_out(cfg.out_dir);
    nlohmann::ordered_json j;
    j["config"] = manifest_config(cfg);
    j["tuned"] = manifest_mrf(result.tuned, cfg);
    j["untuned"] = manifest_mrf(result.untuned, cfg);
    write_manifest(j, (out / "manifest.json").string());
    if (cfg.format == "csv") write_comparison_csv(result, (out / "comparison.csv").string());
    std::printf("tuned %.4f%% (SD %.4f%%) vs untuned %.4f%% (SD %.4f%%)\n",
                result.tuned.mean_test_error * 100.0, result.tuned.sd_test_error * 100.0,
                result.untuned.mean_test_error * 100.0,
                result.untuned.sd_test_error * 100.0);
    std::cout << "outputs in " << out.string() << "\n";
    return 0;
}

int cmd_experiment_human(const CommonOpts& opts, const std::string& official_records,
                         const std::string& sample_records, const std::string& votes_csv,
                         const std::string& truth_csv, const ExperimentConfig& cfg) {
    const PhonemeInventory inv = load_inventory(opts);
    std::vector<std::string> warnings;
    const Dataset official = load_corpus(official_records, inv, cfg.with_length, &warnings);
    const Dataset samples = load_corpus(sample_records, inv, cfg.with_length, &warnings);
    const HumanResponses responses = load_responses(votes_csv, truth_csv, &warnings);
    print_warnings(warnings);
    const HumanVsMrfResult result = human_vs_mrf(official, samples, responses, cfg);
    const fs::path out = ensure_out(cfg.out_dir);
    nlohmann::ordered_json j;
    j["config"] = manifest_config(cfg);
    j["human"] = {{"majority_accuracy", result.human.majority_accuracy},
                  {"scored_samples", result.human.scored_samples},
                  {"correct", result.human.correct},
                  {"ties", result.human.ties},
                  {"respondents", result.human.respondent_accuracy.size()},
                  {"respondent_mean", result.human.respondent_mean},
                  {"respondent_sd", result.human.respondent_sd}};
    j["forest_accuracy"] = result.forest_accuracy;
    j["forest_mean"] = result.forest_mean;
    j["forest_sd"] = result.forest_sd;
    j["mrf"] = manifest_mrf(result.mrf, cfg);
    write_manifest(j, (out / "manifest.json").string());
    if (cfg.format == "csv") write_human_csv(result, (out / "human.csv").string());
    std::printf("human majority %.2f%% (respondents M=%.2f%% SD=%.2f%%) vs forest "
                "%.2f%% (SD %.2f%%)\n",
                result.human.majority_accuracy * 100.0, result.human.respondent_mean * 100.0,
                result.human.respondent_sd * 100.0, result.forest_mean * 100.0,
                result.forest_sd * 100.0);
    std::cout << "outputs in " << out.string() << "\n";
    return 0;
}

int cmd_experiment_lengths(const CommonOpts& opts, const std::string& records,
                           const ExperimentConfig& cfg) {
    const PhonemeInventory inv = load_inventory(opts);
    std::vector<std::string> warnings;
    const Dataset ds = load_corpus(records, inv, /*with_length=*/true, &warnings);
    print_warnings(warnings);
    const LengthStats ls = length_stats(ds);
    const fs::path out = ensure_out(cfg.out_dir);
    write_lengths_csv(ls, (out / "lengths.csv").string());
    if (cfg.svg) svg_lengths(ls, (out / "lengths.svg").string());
    nlohmann::ordered_json j;
    j["config"] = manifest_config(cfg);
    j["pre"] = {{"n", ls.pre_n}, {"median", ls.pre_median}, {"mean", ls.pre_mean},
                {"sd", ls.pre_sd}};
    j["post"] = {{"n", ls.post_n}, {"median", ls.post_median}, {"mean", ls.post_mean},
                 {"sd", ls.post_sd}};
    write_manifest(j, (out / "manifest.json").string());
    std::printf("lengths: pre median %.1f mean %.2f (n=%ld), post median %.1f mean %.2f "
                "(n=%ld)\n",
                ls.pre_median, ls.pre_mean, ls.pre_n, ls.post_median, ls.post_mean,
                ls.post_n);
    return 0;
}

int cmd_experiment_regression(const CommonOpts& opts, const std::vector<std::string>& runs_files,
                              const ExperimentConfig& cfg) {
    std::vector<double> xs, ys;
    for (const std::string& path : runs_files) {
        const csv::Table t = csv::read_file(path);
        const int xc = t.column("post_fraction_test");
        const int yc = t.column("test_error_pct");
        if (xc < 0 || yc < 0)
            throw DataError(path +
                            ": need 'post_fraction_test' and 'test_error_pct' columns "
                            "(as written by the runs table)");
        for (const auto& row : t.rows) {
            try {
                xs.push_back(std::stod(row[static_cast<std::size_t>(xc)]));
                ys.push_back(std::stod(row[static_cast<std::size_t>(yc)]) / 100.0);
            } catch (const std::exception&) {
                throw DataError(path + ": non-numeric value in runs table");
            }
        }
    }
    const stats::Ols fit = distribution_regression(xs, ys);
    const fs::path out = ensure_out(cfg.out_dir);
    write_regression_csv(fit, (out / "regression.csv").string());
    if (cfg.svg) svg_regression(xs, ys, fit, (out / "regression.svg").string());
    std::printf("F(%d,%d) = %.4g, p = %.4g, R^2 = %.4g, slope = %.4g (n=%zu)\n", fit.df1,
                fit.df2, fit.f_statistic, fit.p_value, fit.r_squared, fit.slope, xs.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phoneme-count name featurization and seeded random-forest experiments"};
    app.require_subcommand(1);

    CommonOpts opts;
    Hyperparameters hp;
    bool tune_flag = false;
    bool no_filter = false;
    bool svg = false;
    int runs = 9;
    int altmann = 0;
    int tuning_trees = 1000;
    int altmann_trees = 1000;
    int trial_trees = 1000;
    std::string format = "csv";
    std::string input, input2, votes_csv, truth_csv, out_file, grid_path;
    std::vector<std::string> runs_files;
    std::string forest_path = "out/forest.json", dataset_path;

    auto add_common = [&](CLI::App* cmd, bool with_lang = true) {
        if (with_lang)
            cmd->add_option("--lang", opts.lang, "Language: ja, zh, or ko")
                ->check(CLI::IsMember({"ja", "zh", "ko", "japanese", "chinese", "korean"}));
        cmd->add_option("--inventory", opts.inventory,
                        "Phoneme inventory TSV (default: data/inventories/<language>.tsv, "
                        "or $EVORF_INVENTORY_DIR)");
        cmd->add_option("--out", opts.out_dir, "Output directory (default: out)");
        cmd->add_option("--threads", opts.threads,
                        "Worker threads (0 = hardware concurrency)");
    };
    auto add_hp = [&](CLI::App* cmd) {
        cmd->add_option("--trees", hp.num_trees, "Trees per forest (default: 20000)");
        cmd->add_option("--seed", hp.seed, "Base seed (default: 1)");
        cmd->add_option("--mtry", hp.mtry, "Features per node (0 = floor(sqrt(p)))");
        cmd->add_option("--fraction", hp.sample_fraction,
                        "Bag size as a fraction of the training rows");
        cmd->add_option("--min-node-size", hp.min_node_size,
                        "Stop splitting nodes at or below this size");
        cmd->add_flag_callback("--no-replace", [&] { hp.replace = false; },
                               "Sample bags without replacement");
    };

    // transcribe
    auto* transcribe = app.add_subcommand(
        "transcribe", "Tokenize names into phoneme symbols and per-symbol counts");
    transcribe->add_option("input", input, "Records CSV (id,name,language,stage|label)")
        ->required();
    add_common(transcribe);
    transcribe->add_flag("--with-length", opts.with_length, "Append a length column");
    transcribe->add_flag("--no-filter", no_filter,
                         "Keep every record (default drops non-binary stages)");
    transcribe->add_option("-o,--output", out_file, "Output CSV path");

    // featurize
    auto* featurize = app.add_subcommand(
        "featurize", "Build a model-ready feature matrix CSV (features + label)");
    featurize->add_option("input", input, "Records CSV")->required();
    add_common(featurize);
    featurize->add_flag("--with-length", opts.with_length, "Append a length feature");
    featurize->add_option("-o,--output", out_file, "Output CSV path");

    // train
    auto* train = app.add_subcommand("train", "Train a forest on a feature matrix CSV");
    train->add_option("dataset", dataset_path, "Feature matrix CSV")->required();
    add_common(train, /*with_lang=*/false);
    add_hp(train);
    train->add_option("-o,--output", forest_path, "Forest JSON path");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a saved forest on a dataset");
    eval_cmd->add_option("forest", input, "Forest JSON")->required();
    eval_cmd->add_option("dataset", dataset_path, "Feature matrix CSV")->required();
    add_common(eval_cmd, /*with_lang=*/false);

    // importance
    auto* imp_cmd = app.add_subcommand(
        "importance", "Permutation importance (optionally with permutation p-values)");
    imp_cmd->add_option("forest", input, "Forest JSON")->required();
    imp_cmd->add_option("dataset", dataset_path, "Training feature matrix CSV")->required();
    add_common(imp_cmd, /*with_lang=*/false);
    imp_cmd->add_option("--seed", hp.seed, "Permutation seed (default: 1)");
    imp_cmd->add_option("--altmann", altmann, "Label permutations for p-values (0 = off)");
    imp_cmd->add_option("--altmann-trees", altmann_trees,
                        "Trees per label-permutation retrain");

    // tune
    auto* tune_cmd = app.add_subcommand("tune", "Grid-search hyperparameters by OOB error");
    tune_cmd->add_option("dataset", dataset_path, "Training feature matrix CSV")->required();
    add_common(tune_cmd, /*with_lang=*/false);
    tune_cmd->add_option("--grid", grid_path, "Grid file (key = v1, v2 lines)");
    tune_cmd->add_option("--trial-trees", trial_trees, "Trees per trial (default: 1000)");
    add_hp(tune_cmd);

    // experiment
    auto* exp = app.add_subcommand("experiment", "End-to-end experiment pipelines");
    exp->require_subcommand(1);

    auto add_exp_common = [&](CLI::App* cmd) {
        add_common(cmd);
        add_hp(cmd);
        cmd->add_flag("--with-length", opts.with_length, "Append a length feature");
        cmd->add_flag("--tune,!--no-tune", tune_flag,
                      "Grid-tune on the first run's training subset");
        cmd->add_option("--altmann", altmann,
                        "Label permutations for p-values on the first run (0 = off)");
        cmd->add_option("--tuning-trees", tuning_trees, "Trees per tuning trial");
        cmd->add_option("--altmann-trees", altmann_trees, "Trees per null retrain");
        cmd->add_option("--format", format, "Table format: csv writes tables, json only "
                                            "the manifest")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_flag("--svg", svg, "Also render SVG charts");
    };

    auto* exp_single = exp->add_subcommand("single", "One split/train/evaluate run");
    exp_single->add_option("records", input, "Records CSV")->required();
    add_exp_common(exp_single);

    auto* exp_mrf = exp->add_subcommand("mrf", "Repeated runs with seeds 1..N");
    exp_mrf->add_option("records", input, "Records CSV")->required();
    add_exp_common(exp_mrf);
    exp_mrf->add_option("--runs", runs, "Run count (default: 9)");

    auto* exp_cross = exp->add_subcommand(
        "cross", "Train on one full corpus, evaluate on another");
    exp_cross->add_option("train_records", input, "Training records CSV")->required();
    exp_cross->add_option("test_records", input2, "Evaluation records CSV")->required();
    add_exp_common(exp_cross);
    exp_cross->add_option("--runs", runs, "Forest seeds 1..N (default: 9)");

    auto* exp_untuned = exp->add_subcommand(
        "untuned", "Tuned vs untuned-defaults MRF comparison");
    exp_untuned->add_option("records", input, "Records CSV")->required();
    add_exp_common(exp_untuned);
    exp_untuned->add_option("--runs", runs, "Runs per arm (default: 9)");

    auto* exp_human = exp->add_subcommand(
        "human", "Majority-vote comparison against forests trained on official data");
    exp_human->add_option("official_records", input, "Official records CSV")->required();
    exp_human->add_option("sample_records", input2, "Sampled names records CSV (with labels)")
        ->required();
    exp_human->add_option("votes", votes_csv, "Votes CSV (respondent_id,sample_id,vote)")
        ->required();
    exp_human->add_option("truth", truth_csv, "Truth CSV (sample_id,label)")->required();
    add_exp_common(exp_human);
    exp_human->add_option("--runs", runs, "Forest runs (default: 9)");

    auto* exp_lengths = exp->add_subcommand("lengths", "Name length statistics per class");
    exp_lengths->add_option("records", input, "Records CSV")->required();
    add_common(exp_lengths);
    exp_lengths->add_flag("--svg", svg, "Also render an SVG box plot");
    exp_lengths->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* exp_regress = exp->add_subcommand(
        "regression", "Regress test error on test-subset class balance across runs tables");
    exp_regress->add_option("runs_tables", runs_files, "One or more runs.csv files")
        ->required()
        ->expected(-1);
    add_common(exp_regress, /*with_lang=*/false);
    exp_regress->add_flag("--svg", svg, "Also render an SVG scatter");

    try {
        app.parse(argc, argv);

        if (*transcribe) return cmd_transcribe(opts, input, out_file, no_filter);
        if (*featurize) return cmd_featurize(opts, input, out_file);
        if (*train) return cmd_train(dataset_path, forest_path, hp, opts.threads);
        if (*eval_cmd) return cmd_evaluate(opts, input, dataset_path);
        if (*imp_cmd)
            return cmd_importance(opts, input, dataset_path, hp.seed, altmann, altmann_trees);
        if (*tune_cmd)
            return cmd_tune(opts, dataset_path, grid_path, hp, hp.seed, trial_trees);

        const auto cfg = [&](int n_runs) {
            return make_config(opts, tune_flag, n_runs, altmann, hp, tuning_trees,
                               altmann_trees, format, svg);
        };
        if (*exp_single) return cmd_experiment_single(opts, input, cfg(1));
        if (*exp_mrf) return cmd_experiment_mrf(opts, input, cfg(runs));
        if (*exp_cross) return cmd_experiment_cross(opts, input, input2, cfg(runs));
        if (*exp_untuned) return cmd_experiment_untuned(opts, input, cfg(runs));
        if (*exp_human)
            return cmd_experiment_human(opts, input, input2, votes_csv, truth_csv, cfg(runs));
        if (*exp_lengths) return cmd_experiment_lengths(opts, input, cfg(1));
        if (*exp_regress) return cmd_experiment_regression(opts, runs_files, cfg(1));
        return 4;  // unreachable with require_subcommand(1)
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
