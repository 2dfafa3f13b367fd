#include "evorf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "evorf/csv.hpp"
#include "evorf/error.hpp"
#include "evorf/rng.hpp"

namespace evorf {

using nlohmann::ordered_json;

namespace {

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a_hex(buf.str());
}

}  // namespace

Dataset load_corpus(const std::string& records_csv, const PhonemeInventory& inv,
                    bool with_length, std::vector<std::string>* warnings) {
    RecordFile rf = load_records(records_csv);
    if (warnings)
        warnings->insert(warnings->end(), rf.warnings.begin(), rf.warnings.end());

    const bool any_stage =
        std::any_of(rf.records.begin(), rf.records.end(),
                    [](const NameRecord& r) { return r.stage.has_value(); });
    std::vector<NameRecord> records =
        any_stage ? filter_records(rf.records) : std::move(rf.records);

    Dataset ds = build_dataset(records, inv, with_length);
    ds.provenance = records_csv + "#" + file_hash(records_csv) + ":" + ds.provenance;
    return ds;
}

namespace {

struct RunArtifacts {
    RunResult result;
};

double post_fraction(const Dataset& ds) {
    const auto [pre, post] = ds.class_counts();
    return static_cast<double>(post) / static_cast<double>(pre + post);
}

// One split/train/evaluate run. `importance_seed` keys the column
// permutations; altmann (when set) adds p-values.
RunResult execute_run(const Dataset& full, const Hyperparameters& hp,
                      std::uint64_t run_seed, const ExperimentConfig& cfg,
                      bool with_importance, bool with_altmann) {
    const SplitPair sp = split(full.n_rows, run_seed);
    const Dataset train = subset(full, sp.train_indices, "train");
    const Dataset test = subset(full, sp.test_indices, "test");

    Hyperparameters run_hp = hp;
    run_hp.seed = run_seed;
    const RandomForest forest = train_forest(train, run_hp, cfg.threads);

    RunResult run;
    run.seed = run_seed;
    run.n_train = train.n_rows;
    run.n_test = test.n_rows;
    run.oob_error = oob_predictions(forest, train, cfg.threads).error();
    run.confusion = evaluate(forest, test);
    run.test_error = run.confusion.error();
    run.post_fraction_test = post_fraction(test);
    if (with_importance) {
        std::optional<AltmannOptions> altmann;
        if (with_altmann && cfg.altmann > 0)
            altmann = AltmannOptions{cfg.altmann, cfg.altmann_trees, cfg.threads};
        run.importance = importance_report(forest, train, run_seed, altmann, cfg.threads);
    }
    return run;
}

void aggregate(MrfResult& result) {
    std::vector<double> test_errors, oob_errors;
    for (const RunResult& run : result.runs) {
        test_errors.push_back(run.test_error);
        oob_errors.push_back(run.oob_error);
        result.pooled += run.confusion;
    }
    result.mean_test_error = stats::mean(test_errors);
    result.sd_test_error = stats::sample_sd(test_errors);
    result.mean_oob_error = stats::mean(oob_errors);
    result.sd_oob_error = stats::sample_sd(oob_errors);

    if (!result.runs.empty() && !result.runs.front().importance.features.empty()) {
        const std::size_t p = result.runs.front().importance.features.size();
        result.mean_importance.assign(p, 0.0);
        for (std::size_t j = 0; j < p; ++j) {
            for (const RunResult& run : result.runs)
                result.mean_importance[j] += run.importance.features[j].importance;
            result.mean_importance[j] /= static_cast<double>(result.runs.size());
        }
    }
}

MrfResult run_seeded(const Dataset& full, const ExperimentConfig& cfg,
                     const std::vector<std::uint64_t>& seeds) {
    MrfResult result;
    result.feature_names = full.feature_names;
    result.train_provenance = full.provenance;

    Hyperparameters hp = cfg.hp;
    if (cfg.tune) {
        const SplitPair sp = split(full.n_rows, seeds.front());
        const Dataset train1 = subset(full, sp.train_indices, "train");
        const GridSpec grid = GridSpec::defaults(full.n_features);
        result.tuning = tune(train1, grid, cfg.hp, seeds.front(), cfg.tuning_trees,
                             cfg.threads);
        hp = result.tuning->chosen;
    }
    result.hp_used = hp;

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const bool altmann_here = i == 0 && cfg.altmann > 0;
        result.runs.push_back(
            execute_run(full, hp, seeds[i], cfg, /*with_importance=*/true, altmann_here));
    }
    aggregate(result);
    return result;
}

}  // namespace

MrfResult run_single(const Dataset& full, const ExperimentConfig& cfg) {
    return run_seeded(full, cfg, {cfg.hp.seed});
}

MrfResult run_mrf(const Dataset& full, const ExperimentConfig& cfg) {
    if (cfg.n_runs < 1) throw ValidationError("n_runs must be at least 1");
    std::vector<std::uint64_t> seeds;
    for (int i = 1; i <= cfg.n_runs; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
    return run_seeded(full, cfg, seeds);
}

MrfResult run_cross(const Dataset& train_full, const Dataset& test_full,
                    const ExperimentConfig& cfg) {
    if (train_full.feature_names != test_full.feature_names)
        throw ValidationError(
            "train and test datasets have different feature spaces; build both with the same "
            "inventory and length setting");
    if (train_full.provenance == test_full.provenance)
        throw ValidationError("cross-dataset train and test sources are identical");

    MrfResult result;
    result.feature_names = train_full.feature_names;
    result.train_provenance = train_full.provenance;
    result.test_provenance = test_full.provenance;

    Hyperparameters hp = cfg.hp;
    if (cfg.tune) {
        const GridSpec grid = GridSpec::defaults(train_full.n_features);
        result.tuning = tune(train_full, grid, cfg.hp, 1, cfg.tuning_trees, cfg.threads);
        hp = result.tuning->chosen;
    }
    result.hp_used = hp;

    for (int i = 1; i <= cfg.n_runs; ++i) {
        Hyperparameters run_hp = hp;
        run_hp.seed = static_cast<std::uint64_t>(i);
        const RandomForest forest = train_forest(train_full, run_hp, cfg.threads);

        RunResult run;
        run.seed = run_hp.seed;
        run.n_train = train_full.n_rows;
        run.n_test = test_full.n_rows;
        run.oob_error = oob_predictions(forest, train_full, cfg.threads).error();
        run.confusion = evaluate(forest, test_full);
        run.test_error = run.confusion.error();
        run.post_fraction_test = post_fraction(test_full);
        result.runs.push_back(std::move(run));
    }
    aggregate(result);
    return result;
}

ComparisonResult run_untuned_comparison(const Dataset& full, const ExperimentConfig& cfg) {
    ExperimentConfig tuned_cfg = cfg;
    tuned_cfg.tune = true;
    ExperimentConfig untuned_cfg = cfg;
    untuned_cfg.tune = false;
    untuned_cfg.hp.mtry = 0;  // resolves to ⌊√p⌋
    untuned_cfg.hp.sample_fraction = 1.0;
    untuned_cfg.hp.replace = true;
    untuned_cfg.hp.min_node_size = 1;

    ComparisonResult result;
    result.tuned = run_mrf(full, tuned_cfg);
    result.untuned = run_mrf(full, untuned_cfg);
    return result;
}

HumanResponses load_responses(const std::string& votes_csv, const std::string& truth_csv,
                              std::vector<std::string>* warnings) {
    const csv::Table truth_table = csv::read_file(truth_csv);
    const int t_sample = truth_table.column("sample_id");
    const int t_label = truth_table.column("label");
    if (t_sample < 0 || t_label < 0)
        throw DataError(truth_csv + ": need 'sample_id' and 'label' columns");

    HumanResponses hr;
    std::unordered_map<std::string, std::size_t> sample_index;
    for (const auto& row : truth_table.rows) {
        const std::string& id = row[static_cast<std::size_t>(t_sample)];
        if (sample_index.count(id))
            throw DataError(truth_csv + ": duplicate sample_id " + id);
        sample_index[id] = hr.sample_ids.size();
        hr.sample_ids.push_back(id);
        hr.truth.push_back(label_from_string(row[static_cast<std::size_t>(t_label)]));
    }
    if (hr.sample_ids.empty()) throw DataError(truth_csv + ": no samples");

    const csv::Table votes_table = csv::read_file(votes_csv);
    const int v_resp = votes_table.column("respondent_id");
    const int v_sample = votes_table.column("sample_id");
    const int v_vote = votes_table.column("vote");
    if (v_resp < 0 || v_sample < 0 || v_vote < 0)
        throw DataError(votes_csv + ": need 'respondent_id', 'sample_id', 'vote' columns");

    std::unordered_map<std::string, std::size_t> resp_index;
    std::size_t overwritten = 0;
    for (const auto& row : votes_table.rows) {
        const std::string& resp = row[static_cast<std::size_t>(v_resp)];
        const std::string& sample = row[static_cast<std::size_t>(v_sample)];
        const auto sit = sample_index.find(sample);
        if (sit == sample_index.end())
            throw DataError(votes_csv + ": vote for unknown sample_id " + sample);
        auto [rit, inserted] = resp_index.try_emplace(resp, hr.respondent_ids.size());
        if (inserted) {
            hr.respondent_ids.push_back(resp);
            hr.votes.emplace_back(hr.sample_ids.size(), static_cast<std::int8_t>(-1));
        }
        std::int8_t& slot = hr.votes[rit->second][sit->second];
        if (slot != -1) ++overwritten;
        slot = static_cast<std::int8_t>(
            label_from_string(row[static_cast<std::size_t>(v_vote)]));
    }
    if (overwritten > 0 && warnings)
        warnings->push_back(votes_csv + ": " + std::to_string(overwritten) +
                            " repeated (respondent, sample) vote(s); keeping the last");
    if (hr.respondent_ids.empty()) throw DataError(votes_csv + ": no votes");
    return hr;
}

MajorityVoteResult majority_vote_eval(const HumanResponses& responses) {
    const std::size_t n_samples = responses.sample_ids.size();
    MajorityVoteResult result;

    for (std::size_t s = 0; s < n_samples; ++s) {
        int pre = 0, post = 0;
        for (const auto& row : responses.votes) {
            if (row[s] < 0) continue;
            (static_cast<Label>(row[s]) == Label::Pre ? pre : post)++;
        }
        if (pre + post == 0) {
            result.unvoted_samples.push_back(responses.sample_ids[s]);
            continue;
        }
        ++result.scored_samples;
        if (pre == post) {
            ++result.ties;
            result.tie_samples.push_back(responses.sample_ids[s]);
            continue;  // tie counts as incorrect
        }
        const Label mode = post > pre ? Label::Post : Label::Pre;
        result.correct += mode == responses.truth[s];
    }
    if (result.scored_samples == 0)
        throw ValidationError("no sample received any votes");
    result.majority_accuracy =
        static_cast<double>(result.correct) / static_cast<double>(result.scored_samples);

    for (const auto& row : responses.votes) {
        long answered = 0, right = 0;
        for (std::size_t s = 0; s < n_samples; ++s) {
            if (row[s] < 0) continue;
            ++answered;
            right += static_cast<Label>(row[s]) == responses.truth[s];
        }
        if (answered == 0) continue;
        result.respondent_accuracy.push_back(static_cast<double>(right) /
                                             static_cast<double>(answered));
    }
    result.respondent_mean = stats::mean(result.respondent_accuracy);
    result.respondent_sd = stats::sample_sd(result.respondent_accuracy);
    return result;
}

HumanVsMrfResult human_vs_mrf(const Dataset& official, const Dataset& samples,
                              const HumanResponses& responses, const ExperimentConfig& cfg) {
    if (official.feature_names != samples.feature_names)
        throw ValidationError("sample set must share the official dataset's feature space");

    HumanVsMrfResult result;
    result.human = majority_vote_eval(responses);

    MrfResult& mrf = result.mrf;
    mrf.feature_names = official.feature_names;
    mrf.train_provenance = official.provenance;

    Hyperparameters hp = cfg.hp;
    if (cfg.tune) {
        const SplitPair sp = split(official.n_rows, 1);
        const Dataset train1 = subset(official, sp.train_indices, "train");
        const GridSpec grid = GridSpec::defaults(official.n_features);
        mrf.tuning = tune(train1, grid, cfg.hp, 1, cfg.tuning_trees, cfg.threads);
        hp = mrf.tuning->chosen;
    }
    mrf.hp_used = hp;

    const int n_runs = std::max(1, cfg.n_runs);
    for (int i = 1; i <= n_runs; ++i) {
        const std::uint64_t seed = static_cast<std::uint64_t>(i);
        const SplitPair sp = split(official.n_rows, seed);
        const Dataset train = subset(official, sp.train_indices, "train");
        const Dataset test = subset(official, sp.test_indices, "test");

        Hyperparameters run_hp = hp;
        run_hp.seed = seed;
        const RandomForest forest = train_forest(train, run_hp, cfg.threads);

        RunResult run;
        run.seed = seed;
        run.n_train = train.n_rows;
        run.n_test = test.n_rows;
        run.oob_error = oob_predictions(forest, train, cfg.threads).error();
        run.confusion = evaluate(forest, test);
        run.test_error = run.confusion.error();
        run.post_fraction_test = post_fraction(test);
        mrf.runs.push_back(std::move(run));

        long right = 0;
        for (std::size_t s = 0; s < samples.n_rows; ++s)
            right += forest.predict(samples.row(s)) == samples.labels[s];
        result.forest_accuracy.push_back(static_cast<double>(right) /
                                         static_cast<double>(samples.n_rows));
    }
    aggregate(mrf);
    result.forest_mean = stats::mean(result.forest_accuracy);
    result.forest_sd = stats::sample_sd(result.forest_accuracy);
    return result;
}

stats::Ols distribution_regression(std::span<const double> post_fraction,
                                   std::span<const double> test_error) {
    return stats::ols(post_fraction, test_error);
}

LengthStats length_stats(const Dataset& ds) {
    if (ds.feature_names.empty() || ds.feature_names.back() != "length")
        throw ValidationError("length statistics need a dataset built with length");
    const std::size_t col = ds.n_features - 1;
    LengthStats ls;
    for (std::size_t r = 0; r < ds.n_rows; ++r) {
        const double len = ds.at(r, col);
        if (ds.labels[r] == Label::Pre)
            ls.pre_lengths.push_back(len);
        else
            ls.post_lengths.push_back(len);
    }
    ls.pre_n = static_cast<long>(ls.pre_lengths.size());
    ls.post_n = static_cast<long>(ls.post_lengths.size());
    if (ls.pre_n == 0 || ls.post_n == 0)
        throw ValidationError("length statistics need both classes");
    ls.pre_median = stats::median(ls.pre_lengths);
    ls.post_median = stats::median(ls.post_lengths);
    ls.pre_mean = stats::mean(ls.pre_lengths);
    ls.post_mean = stats::mean(ls.post_lengths);
    ls.pre_sd = stats::sample_sd(ls.pre_lengths);
    ls.post_sd = stats::sample_sd(ls.post_lengths);
    return ls;
}

ordered_json manifest_config(const ExperimentConfig& cfg) {
    ordered_json j;
    j["language"] = to_string(cfg.lang);
    j["with_length"] = cfg.with_length;
    j["tune"] = cfg.tune;
    j["n_runs"] = cfg.n_runs;
    j["altmann"] = cfg.altmann;
    j["hyperparameters"] = {
        {"num_trees", cfg.hp.num_trees},         {"mtry", cfg.hp.mtry},
        {"sample_fraction", cfg.hp.sample_fraction}, {"replace", cfg.hp.replace},
        {"min_node_size", cfg.hp.min_node_size}, {"seed", cfg.hp.seed},
    };
    j["tuning_trees"] = cfg.tuning_trees;
    j["altmann_trees"] = cfg.altmann_trees;
    return j;
}

namespace {

ordered_json json_confusion(const ConfusionMatrix& cm) {
    return ordered_json{{"pre_as_pre", cm.counts[0][0]},
                        {"pre_as_post", cm.counts[0][1]},
                        {"post_as_pre", cm.counts[1][0]},
                        {"post_as_post", cm.counts[1][1]}};
}

ordered_json json_hp(const Hyperparameters& hp) {
    return ordered_json{{"num_trees", hp.num_trees},
                        {"mtry", hp.mtry},
                        {"sample_fraction", hp.sample_fraction},
                        {"replace", hp.replace},
                        {"min_node_size", hp.min_node_size},
                        {"seed", hp.seed}};
}

}  // namespace

ordered_json manifest_mrf(const MrfResult& result, const ExperimentConfig& cfg) {
    ordered_json j;
    j["config"] = manifest_config(cfg);
    j["train_data"] = result.train_provenance;
    if (!result.test_provenance.empty()) j["test_data"] = result.test_provenance;
    j["hp_used"] = json_hp(result.hp_used);
    if (result.tuning) {
        ordered_json trials = ordered_json::array();
        for (const auto& t : result.tuning->trials)
            trials.push_back({{"mtry", t.hp.mtry},
                              {"sample_fraction", t.hp.sample_fraction},
                              {"replace", t.hp.replace},
                              {"min_node_size", t.hp.min_node_size},
                              {"oob_error", t.oob_error}});
        j["tuning"] = {{"seed", result.tuning->seed}, {"trials", std::move(trials)}};
    }

    ordered_json runs = ordered_json::array();
    for (const RunResult& run : result.runs) {
        ordered_json jr;
        jr["seed"] = run.seed;
        jr["n_train"] = run.n_train;
        jr["n_test"] = run.n_test;
        jr["oob_error"] = run.oob_error;
        jr["test_error"] = run.test_error;
        jr["post_fraction_test"] = run.post_fraction_test;
        jr["confusion"] = json_confusion(run.confusion);
        if (!run.importance.features.empty()) {
            ordered_json imp = ordered_json::array();
            for (const auto& f : run.importance.features) {
                ordered_json je;
                je["feature"] = f.feature;
                je["importance"] = f.importance;
                if (f.p_value) je["p_value"] = *f.p_value;
                je["pre_mean"] = f.pre_mean;
                je["post_mean"] = f.post_mean;
                je["skew"] = f.skew();
                imp.push_back(std::move(je));
            }
            jr["importance"] = std::move(imp);
        }
        runs.push_back(std::move(jr));
    }
    j["runs"] = std::move(runs);

    j["mean_test_error"] = result.mean_test_error;
    j["sd_test_error"] = result.sd_test_error;
    j["mean_oob_error"] = result.mean_oob_error;
    j["sd_oob_error"] = result.sd_oob_error;
    j["pooled_confusion"] = json_confusion(result.pooled);
    if (!result.mean_importance.empty()) {
        ordered_json imp = ordered_json::array();
        for (std::size_t i = 0; i < result.mean_importance.size(); ++i)
            imp.push_back({{"feature", result.feature_names[i]},
                           {"mean_importance", result.mean_importance[i]}});
        j["mean_importance"] = std::move(imp);
    }
    return j;
}

void write_manifest(const ordered_json& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << doc.dump(2) << "\n";
    if (!out) throw DataError("failed writing " + path);
}

}  // namespace evorf
