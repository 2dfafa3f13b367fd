// Acceptance gate: one line per criterion. Criteria that need the external
// name corpora skip cleanly when the files are absent; the property suite
// always runs. Exit status is nonzero only when a criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evorf/dataset.hpp"
#include "evorf/error.hpp"
#include "evorf/experiments.hpp"
#include "evorf/forest.hpp"
#include "evorf/importance.hpp"
#include "evorf/rng.hpp"
#include "evorf/stats.hpp"
#include "evorf/tokenize.hpp"

using namespace evorf;

namespace {

struct SkipTest {
    std::string reason;
};

struct CheckFail {
    std::string message;
};

void expect(bool condition, const std::string& message) {
    if (!condition) throw CheckFail{message};
}

std::string g_detail;
int g_failures = 0;

void run_criterion(int id, const std::string& title, const std::function<void()>& body) {
    g_detail.clear();
    std::string status, note;
    try {
        body();
        status = "PASS";
        note = g_detail;
    } catch (const SkipTest& s) {
        status = "SKIP";
        note = s.reason;
    } catch (const CheckFail& f) {
        status = "FAIL";
        note = f.message;
        ++g_failures;
    } catch (const std::exception& e) {
        status = "FAIL";
        note = e.what();
        ++g_failures;
    }
    std::printf("[%s] %2d: %s%s%s\n", status.c_str(), id, title.c_str(),
                note.empty() ? "" : " — ", note.c_str());
    std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// Shared data access

std::string data_dir() {
    if (const char* env = std::getenv("EVORF_DATA")) return env;
    return EVORF_SOURCE_DIR "/data/corpora";
}

std::string data_file(const std::string& name) {
    const std::string path = data_dir() + "/" + name;
    if (!std::filesystem::exists(path)) throw SkipTest{"needs " + path};
    return path;
}

const PhonemeInventory& inventory(Language lang) {
    static std::map<int, PhonemeInventory> cache;
    const int key = static_cast<int>(lang);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const std::string base = EVORF_SOURCE_DIR "/data/inventories/";
        const std::string file = lang == Language::Japanese   ? "japanese.tsv"
                                 : lang == Language::Chinese ? "chinese.tsv"
                                                             : "korean.tsv";
        it = cache.emplace(key, PhonemeInventory::load(base + file, lang)).first;
    }
    return it->second;
}

// Corpus cache keyed by (file, with_length); throws SkipTest when absent.
const Dataset& corpus(const std::string& file, Language lang, bool with_length) {
    static std::map<std::string, Dataset> cache;
    const std::string key = file + (with_length ? "+L" : "-L");
    auto it = cache.find(key);
    if (it == cache.end()) {
        const std::string path = data_file(file);
        it = cache.emplace(key, load_corpus(path, inventory(lang), with_length)).first;
    }
    return it->second;
}

ExperimentConfig sweep_config(Language lang, bool with_length) {
    ExperimentConfig cfg;
    cfg.lang = lang;
    cfg.with_length = with_length;
    cfg.tune = true;
    cfg.n_runs = 9;
    cfg.hp.num_trees = 20000;
    cfg.tuning_trees = 1000;
    cfg.threads = 0;
    return cfg;
}

// The tuned Japanese sweep backs three criteria; compute it once and make a
// load failure sticky so each dependent criterion reports the same skip.
const MrfResult& tuned_japanese_sweep() {
    static std::optional<MrfResult> cached;
    static std::optional<std::string> skip_reason;
    if (skip_reason) throw SkipTest{*skip_reason};
    if (!cached) {
        try {
            const Dataset& ds = corpus("official_ja.csv", Language::Japanese, false);
            cached = run_mrf(ds, sweep_config(Language::Japanese, false));
        } catch (const SkipTest& s) {
            skip_reason = s.reason;
            throw;
        }
    }
    return *cached;
}

std::string pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", fraction * 100.0);
    return buf;
}

// ---------------------------------------------------------------------------
// Data-conditional criteria

void criterion_shapes() {
    const Dataset& ja = corpus("official_ja.csv", Language::Japanese, false);
    const auto [ja_pre, ja_post] = ja.class_counts();
    expect(ja.n_rows == 628, "official corpus has " + std::to_string(ja.n_rows) +
                                 " rows after filtering, wanted 628");
    expect(ja_pre == 303 && ja_post == 325,
           "official class balance " + std::to_string(ja_pre) + "/" +
               std::to_string(ja_post) + ", wanted 303/325");

    const Dataset& el = corpus("elicited_ja.csv", Language::Japanese, false);
    const auto [el_pre, el_post] = el.class_counts();
    expect(el.n_rows == 967, "elicited corpus has " + std::to_string(el.n_rows) +
                                 " rows, wanted 967");
    expect(el_pre == 482 && el_post == 485,
           "elicited class balance " + std::to_string(el_pre) + "/" +
               std::to_string(el_post) + ", wanted 482/485");
    g_detail = "628 (303/325) and 967 (482/485)";
}

void criterion_sparsity() {
    const Dataset& ja = corpus("official_ja.csv", Language::Japanese, false);
    const long total = static_cast<long>(ja.values.size());
    const long zeros = std::count(ja.values.begin(), ja.values.end(), 0);
    const double pct_zero = 100.0 * static_cast<double>(zeros) / static_cast<double>(total);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f%% zero cells", pct_zero);
    expect(std::fabs(pct_zero - 82.26) <= 1.0, std::string(buf) + ", wanted 82.26% +/- 1.0pp");
    g_detail = buf;
}

void criterion_lengths() {
    struct Case {
        const char* file;
        Language lang;
        double pre_median, post_median;
    };
    const Case cases[] = {
        {"official_ja.csv", Language::Japanese, 7, 8},
        {"official_ko.csv", Language::Korean, 7, 8},
        {"official_zh.csv", Language::Chinese, 9, 9},
        {"elicited_ja.csv", Language::Japanese, 7, 8},
    };
    for (const Case& c : cases) {
        const LengthStats ls = length_stats(corpus(c.file, c.lang, true));
        expect(ls.pre_median == c.pre_median && ls.post_median == c.post_median,
               std::string(c.file) + " medians " + std::to_string(ls.pre_median) + "/" +
                   std::to_string(ls.post_median) + ", wanted " +
                   std::to_string(c.pre_median) + "/" + std::to_string(c.post_median));
    }
    const LengthStats ja = length_stats(corpus("official_ja.csv", Language::Japanese, true));
    expect(std::fabs(ja.pre_mean - 7.28) <= 0.1,
           "official pre-class mean length " + std::to_string(ja.pre_mean) +
               ", wanted 7.28 +/- 0.1");
    expect(std::fabs(ja.post_mean - 8.18) <= 0.1,
           "official post-class mean length " + std::to_string(ja.post_mean) +
               ", wanted 8.18 +/- 0.1");
    g_detail = "medians 7/8, 7/8, 9/9, 7/8";
}

void criterion_sweeps() {
    struct Band {
        const char* label;
        const char* file;
        Language lang;
        bool with_length;
        double mean_pct, sd_pct;  // target mean and tolerance = 2 sd
    };
    const Band bands[] = {
        {"ja", "official_ja.csv", Language::Japanese, false, 34.07, 4.80},
        {"ja+len", "official_ja.csv", Language::Japanese, true, 31.69, 6.02},
        {"zh", "official_zh.csv", Language::Chinese, false, 40.85, 6.70},
        {"ko", "official_ko.csv", Language::Korean, false, 43.28, 6.18},
        {"elicited", "elicited_ja.csv", Language::Japanese, false, 36.29, 3.96},
    };
    std::string detail;
    for (const Band& b : bands) {
        const MrfResult& result =
            (!b.with_length && std::string(b.file) == "official_ja.csv")
                ? tuned_japanese_sweep()
                : [&]() -> const MrfResult& {
                      static std::map<std::string, MrfResult> cache;
                      const std::string key = std::string(b.file) + (b.with_length ? "+L" : "-L");
                      auto it = cache.find(key);
                      if (it == cache.end()) {
                          const Dataset& ds = corpus(b.file, b.lang, b.with_length);
                          it = cache.emplace(key, run_mrf(ds, sweep_config(b.lang, b.with_length)))
                                   .first;
                      }
                      return it->second;
                  }();
        const double mean_pct = result.mean_test_error * 100.0;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s %.2f%%", b.label, mean_pct);
        expect(std::fabs(mean_pct - b.mean_pct) <= 2.0 * b.sd_pct,
               std::string(buf) + " outside " + std::to_string(b.mean_pct) + " +/- " +
                   std::to_string(2.0 * b.sd_pct) + "pp");
        if (!detail.empty()) detail += ", ";
        detail += buf;
    }
    g_detail = detail;
}

void criterion_cross() {
    ExperimentConfig to_elicited = sweep_config(Language::Japanese, false);
    const MrfResult fwd = run_cross(corpus("official_ja.csv", Language::Japanese, false),
                                    corpus("elicited_ja.csv", Language::Japanese, false),
                                    to_elicited);
    const double fwd_pct = fwd.mean_test_error * 100.0;
    expect(std::fabs(fwd_pct - 37.31) <= 4.0,
           "official->elicited mean " + pct(fwd.mean_test_error) + ", wanted 37.31% +/- 4pp");

    ExperimentConfig to_official = sweep_config(Language::Japanese, true);
    const MrfResult rev = run_cross(corpus("elicited_ja.csv", Language::Japanese, true),
                                    corpus("official_ja.csv", Language::Japanese, true),
                                    to_official);
    const double rev_pct = rev.mean_test_error * 100.0;
    expect(std::fabs(rev_pct - 33.19) <= 6.0,
           "elicited->official mean " + pct(rev.mean_test_error) + ", wanted 33.19% +/- 6pp");
    g_detail = pct(fwd.mean_test_error) + " and " + pct(rev.mean_test_error);
}

void criterion_untuned() {
    const MrfResult& tuned = tuned_japanese_sweep();

    ExperimentConfig cfg = sweep_config(Language::Japanese, false);
    cfg.tune = false;
    cfg.hp.mtry = 0;
    cfg.hp.sample_fraction = 1.0;
    cfg.hp.replace = true;
    cfg.hp.min_node_size = 1;
    const Dataset& ds = corpus("official_ja.csv", Language::Japanese, false);
    const MrfResult untuned = run_mrf(ds, cfg);

    expect(untuned.mean_test_error >= tuned.mean_test_error,
           "untuned mean " + pct(untuned.mean_test_error) + " below tuned " +
               pct(tuned.mean_test_error));
    expect(untuned.sd_test_error <= tuned.sd_test_error,
           "untuned sd " + pct(untuned.sd_test_error) + " above tuned " +
               pct(tuned.sd_test_error));
    g_detail = "untuned " + pct(untuned.mean_test_error) + " vs tuned " +
               pct(tuned.mean_test_error);
}

void criterion_importance() {
    const MrfResult& sweep = tuned_japanese_sweep();
    const Dataset& ds = corpus("official_ja.csv", Language::Japanese, false);

    std::vector<std::size_t> order(sweep.mean_importance.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sweep.mean_importance[a] > sweep.mean_importance[b];
    });
    std::set<std::string> top5;
    for (std::size_t i = 0; i < 5 && i < order.size(); ++i)
        top5.insert(sweep.feature_names[order[i]]);
    expect(top5.count("N") == 1, "coda nasal not in the top 5 by mean importance");
    expect(top5.count(":") == 1, "long vowel not in the top 5 by mean importance");

    // Directional pull measured as per-class mean counts over the corpus.
    ImportanceReport direction;
    direction.features.resize(ds.n_features);
    for (std::size_t j = 0; j < ds.n_features; ++j)
        direction.features[j].feature = ds.feature_names[j];
    directionality(ds, direction);
    const FeatureImportance* nasal = direction.find("N");
    const FeatureImportance* lengthener = direction.find(":");
    const FeatureImportance* m = direction.find("m");
    expect(nasal && nasal->skew() == "post", "coda nasal does not skew post-evolution");
    expect(lengthener && lengthener->skew() == "post",
           "long vowel does not skew post-evolution");
    expect(m && m->skew() == "pre", "/m/ does not skew pre-evolution");
    g_detail = "N and : in top 5, skew post; m skews pre";
}

void criterion_human() {
    const std::string votes = data_file("human_votes.csv");
    const std::string truth = data_file("human_truth.csv");
    const std::string samples_csv = data_file("human_samples.csv");

    const HumanResponses responses = load_responses(votes, truth);
    const Dataset& official = corpus("official_ja.csv", Language::Japanese, true);
    const Dataset samples = load_corpus(samples_csv, inventory(Language::Japanese), true);

    ExperimentConfig cfg = sweep_config(Language::Japanese, true);
    const HumanVsMrfResult result = human_vs_mrf(official, samples, responses, cfg);

    expect(std::fabs(result.human.majority_accuracy - 0.71) < 1e-12,
           "majority-vote accuracy " + pct(result.human.majority_accuracy) +
               ", wanted exactly 71%");
    const double resp_pct = result.human.respondent_mean * 100.0;
    expect(std::fabs(resp_pct - 61.58) <= 0.01 + 1e-9,
           "respondent mean " + pct(result.human.respondent_mean) +
               ", wanted 61.58% +/- 0.01");
    const double forest_pct = result.forest_mean * 100.0;
    expect(std::fabs(forest_pct - 75.88) <= 4.0,
           "forest mean " + pct(result.forest_mean) + ", wanted 75.88% +/- 4pp");
    g_detail = "majority " + pct(result.human.majority_accuracy) + ", forests " +
               pct(result.forest_mean);
}

// ---------------------------------------------------------------------------
// Always-runnable property suite

const Dataset& demo_corpus() {
    static const Dataset ds =
        load_corpus(EVORF_SOURCE_DIR "/tests/fixtures/demo_ja.csv",
                    inventory(Language::Japanese), false);
    return ds;
}

void criterion_determinism() {
    ExperimentConfig cfg;
    cfg.n_runs = 2;
    cfg.hp.num_trees = 30;
    cfg.hp.mtry = 6;
    cfg.tune = true;
    cfg.tuning_trees = 10;
    cfg.altmann = 2;
    cfg.altmann_trees = 15;

    std::vector<std::string> manifests;
    for (const unsigned threads : {1u, 4u, 8u}) {
        cfg.threads = threads;
        manifests.push_back(manifest_mrf(run_mrf(demo_corpus(), cfg), cfg).dump(2));
    }
    expect(manifests[0] == manifests[1], "manifests differ between 1 and 4 threads");
    expect(manifests[0] == manifests[2], "manifests differ between 1 and 8 threads");
    g_detail = "identical manifests at 1/4/8 threads";
}

Dataset tiny_dataset(Rng& rng, int max_value) {
    Dataset ds;
    const std::size_t n = 2 + rng.next_below(7);   // 2..8 rows
    const std::size_t p = 1 + rng.next_below(3);   // 1..3 features
    ds.n_rows = n;
    ds.n_features = p;
    for (std::size_t f = 0; f < p; ++f) ds.feature_names.push_back("f" + std::to_string(f));
    for (std::size_t i = 0; i < n * p; ++i)
        ds.values.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_value) + 1)));
    for (std::size_t i = 0; i < n; ++i)
        ds.labels.push_back(rng.next_below(2) ? Label::Post : Label::Pre);
    ds.provenance = "tiny";
    return ds;
}

void criterion_split_oracle() {
    for (int rep = 0; rep < 200; ++rep) {
        Rng rng(derive_key(2024, 0x10, static_cast<std::uint64_t>(rep)));
        const Dataset ds = tiny_dataset(rng, 1);  // binary feature values
        std::vector<std::uint32_t> rows(ds.n_rows);
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<std::uint32_t>(i);
        std::vector<int> candidates(ds.n_features);
        for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = static_cast<int>(i);

        // Exhaustive exact-rational reference.
        const long long n = static_cast<long long>(ds.n_rows);
        long long total_pre = 0;
        for (const Label l : ds.labels) total_pre += l == Label::Pre;
        const long long total_post = n - total_pre;
        const long long parent_sq = total_pre * total_pre + total_post * total_post;

        bool found = false;
        long long best_num = 0, best_den = 1;
        int best_feature = -1;
        double best_threshold = 0.0;
        for (const int f : candidates) {
            std::set<int> distinct;
            for (std::size_t r = 0; r < ds.n_rows; ++r)
                distinct.insert(ds.at(r, static_cast<std::size_t>(f)));
            std::vector<int> vals(distinct.begin(), distinct.end());
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                const double thr = (vals[i] + vals[i + 1]) / 2.0;
                long long l_pre = 0, l_post = 0;
                for (std::size_t r = 0; r < ds.n_rows; ++r) {
                    if (ds.at(r, static_cast<std::size_t>(f)) <= thr)
                        (ds.labels[r] == Label::Pre ? l_pre : l_post)++;
                }
                const long long n_left = l_pre + l_post;
                const long long n_right = n - n_left;
                const long long a = l_pre * l_pre + l_post * l_post;
                const long long b = (total_pre - l_pre) * (total_pre - l_pre) +
                                    (total_post - l_post) * (total_post - l_post);
                const long long num = a * n_right + b * n_left;
                const long long den = n_left * n_right;
                if (num * n <= parent_sq * den) continue;
                if (found && num * best_den <= best_num * den) continue;
                found = true;
                best_num = num;
                best_den = den;
                best_feature = f;
                best_threshold = thr;
            }
        }

        const auto actual = best_split(ds, rows, candidates);
        expect(actual.has_value() == found,
               "split presence mismatch on instance " + std::to_string(rep));
        if (found) {
            expect(actual->feature_index == best_feature && actual->threshold == best_threshold,
                   "split choice mismatch on instance " + std::to_string(rep));
        }
    }

    // Fully grown trees memorize any sample whose labels are a function of
    // the row values.
    for (int rep = 0; rep < 200; ++rep) {
        Rng rng(derive_key(2025, 0x11, static_cast<std::uint64_t>(rep)));
        Dataset ds = tiny_dataset(rng, 3);
        for (std::size_t r = 0; r < ds.n_rows; ++r) {
            int h = 0;
            for (std::size_t c = 0; c < ds.n_features; ++c)
                h += (static_cast<int>(c) + 1) * ds.at(r, c);
            ds.labels[r] = (h % 2) ? Label::Post : Label::Pre;
        }
        Hyperparameters hp;
        hp.num_trees = 1;
        hp.mtry = static_cast<int>(ds.n_features);
        hp.sample_fraction = 1.0;
        hp.replace = false;
        hp.min_node_size = 1;
        const DecisionTree tree = train_tree(ds, hp, derive_key(30 + rep, stream::kTree, 0));
        for (std::size_t r = 0; r < ds.n_rows; ++r)
            expect(tree.predict(ds.row(r)) == ds.labels[r],
                   "fully grown tree missed training row " + std::to_string(r) +
                       " on instance " + std::to_string(rep));
    }
    g_detail = "200 split instances + 200 memorization instances";
}

void criterion_oracle_feature() {
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        Rng noise(derive_key(rep, 0x12, 0));
        Dataset ds;
        ds.n_features = 3;
        ds.feature_names = {"copy", "noise_a", "noise_b"};
        ds.provenance = "oracle";
        for (int r = 0; r < 60; ++r) {
            const Label l = r < 30 ? Label::Pre : Label::Post;
            ds.values.push_back(l == Label::Post ? 1 : 0);
            ds.values.push_back(static_cast<int>(noise.next_below(4)));
            ds.values.push_back(static_cast<int>(noise.next_below(4)));
            ds.labels.push_back(l);
        }
        ds.n_rows = 60;

        Hyperparameters hp;
        hp.num_trees = 120;
        hp.mtry = 2;
        hp.seed = 900 + rep;
        const RandomForest forest = train_forest(ds, hp, 0);

        AltmannOptions opts;
        opts.n_perm = 9;
        opts.trees_override = 50;
        const ImportanceReport report = importance_report(forest, ds, hp.seed, opts, 0);

        const double copy_imp = report.features[0].importance;
        expect(copy_imp > report.features[1].importance &&
                   copy_imp > report.features[2].importance,
               "label copy not strictly top in repetition " + std::to_string(rep));
        expect(report.features[0].p_value.has_value() &&
                   *report.features[0].p_value == 1.0 / 10.0,
               "label copy p-value off its floor in repetition " + std::to_string(rep));
    }
    g_detail = "20/20 repetitions at the p-value floor";
}

void criterion_oob_fixture() {
    const Dataset ds = [] {
        Dataset d;
        d.feature_names = {"f0"};
        d.n_features = 1;
        d.n_rows = 4;
        d.values = {0, 0, 1, 1};
        d.labels = {Label::Pre, Label::Pre, Label::Post, Label::Post};
        d.provenance = "fixture";
        return d;
    }();

    auto leaf = [](std::uint16_t pre, std::uint16_t post) {
        TreeNode n;
        n.count_pre = pre;
        n.count_post = post;
        return n;
    };
    auto inner = [](float thr) {
        TreeNode n;
        n.feature = 0;
        n.threshold = thr;
        n.left = 1;
        n.right = 2;
        return n;
    };

    RandomForest forest;
    forest.feature_names = {"f0"};
    forest.train_size = 4;
    forest.train_pre = 2;
    forest.train_post = 2;
    forest.hp.num_trees = 2;
    DecisionTree a;
    a.bag = {0, 1};
    a.nodes = {inner(0.5f), leaf(2, 0), leaf(0, 2)};
    DecisionTree b;
    b.bag = {2, 3};
    b.nodes = {inner(0.5f), leaf(1, 0), leaf(0, 1)};
    forest.trees = {a, b};

    const OobResult oob = oob_predictions(forest, ds, 1);
    for (std::size_t r = 0; r < 4; ++r) {
        expect(oob.votes_pre[r] + oob.votes_post[r] == 1,
               "row " + std::to_string(r) + " has " +
                   std::to_string(oob.votes_pre[r] + oob.votes_post[r]) +
                   " out-of-bag votes, wanted exactly 1");
        expect(oob.predictions[r].has_value() && *oob.predictions[r] == ds.labels[r],
               "row " + std::to_string(r) + " misclassified by its excluding tree");
    }
    expect(oob.error() == 0.0, "fixture error not exactly 0");

    // Permute a column and undo the permutation: the error comes back exactly.
    Rng rng(derive_key(77, 0x13, 0));
    const std::vector<std::size_t> perm = rng.permutation(ds.n_rows);
    std::vector<int> permuted(ds.n_rows), restored(ds.n_rows);
    for (std::size_t r = 0; r < ds.n_rows; ++r) permuted[r] = ds.at(perm[r], 0);
    for (std::size_t r = 0; r < ds.n_rows; ++r) restored[perm[r]] = permuted[r];
    const double base = oob.error();
    expect(oob_error_with_column(forest, ds, 0, restored, 1) == base,
           "permute-then-unpermute did not restore the error");
    g_detail = "one vote per row; round-trip restores the error";
}

void criterion_baseline() {
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng(derive_key(55, 0x14, static_cast<std::uint64_t>(rep)));
        const std::size_t n = 1 + rng.next_below(300);
        std::vector<Label> labels(n);
        for (auto& l : labels) l = rng.next_below(2) ? Label::Post : Label::Pre;
        int pre = 0;
        for (const Label l : labels) pre += l == Label::Pre;
        const int post = static_cast<int>(n) - pre;
        const double want =
            static_cast<double>(std::max(pre, post)) / static_cast<double>(n);
        expect(naive_baseline(labels) == want,
               "baseline mismatch on vector " + std::to_string(rep));
    }
    g_detail = "100/100 vectors exact";
}

void criterion_ols() {
    const stats::Ols three =
        stats::ols(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 2});
    expect(std::fabs(three.slope - 0.5) < 1e-9, "3-point slope off");
    expect(std::fabs(three.r_squared - 0.75) < 1e-9, "3-point R^2 off");
    expect(std::fabs(three.f_statistic - 3.0) < 1e-9, "3-point F off");
    expect(std::fabs(three.p_value - 1.0 / 3.0) < 1e-9, "3-point p off");

    const stats::Ols five = stats::ols(std::vector<double>{1, 2, 3, 4, 5},
                                       std::vector<double>{2.0, 2.9, 4.1, 5.2, 5.8});
    expect(std::fabs(five.slope - 0.99) < 1e-9, "5-point slope off");
    expect(std::fabs(five.r_squared - 0.99) < 1e-9, "5-point R^2 off");
    expect(std::fabs(five.f_statistic - 297.0) < 1e-6, "5-point F off");
    expect(std::fabs(five.p_value - 4.2569328657789e-4) < 1e-9, "5-point p off");

    const stats::Ols perfect =
        stats::ols(std::vector<double>{1, 2, 3, 4}, std::vector<double>{3, 5, 7, 9});
    expect(perfect.r_squared == 1.0, "perfect fit R^2 not exactly 1");
    expect(perfect.p_value == 0.0, "perfect fit p not 0");
    g_detail = "fixtures within 1e-9; perfect fit exact";
}

struct GoldenEntry {
    std::string name;
    std::vector<std::string> symbols;
};

std::vector<GoldenEntry> load_golden(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckFail{"cannot open fixture " + path};
    std::vector<GoldenEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) throw CheckFail{"fixture line without a tab: " + line};
        GoldenEntry e;
        e.name = line.substr(0, tab);
        std::stringstream ss(line.substr(tab + 1));
        std::string sym;
        while (ss >> sym) e.symbols.push_back(sym);
        entries.push_back(std::move(e));
    }
    return entries;
}

void criterion_goldens() {
    struct Suite {
        const char* file;
        Language lang;
    };
    const Suite suites[] = {
        {EVORF_SOURCE_DIR "/tests/fixtures/tokenizer_ja.tsv", Language::Japanese},
        {EVORF_SOURCE_DIR "/tests/fixtures/tokenizer_zh.tsv", Language::Chinese},
        {EVORF_SOURCE_DIR "/tests/fixtures/tokenizer_ko.tsv", Language::Korean},
    };
    std::string detail;
    for (const Suite& suite : suites) {
        const PhonemeInventory& inv = inventory(suite.lang);
        const auto entries = load_golden(suite.file);
        expect(entries.size() >= 30, std::string(suite.file) + " has only " +
                                         std::to_string(entries.size()) + " fixtures");
        for (const auto& e : entries) {
            const TokenSequence tokens = tokenize(e.name, inv);
            std::vector<std::string> got;
            for (const int id : tokens.ids) got.push_back(inv.symbol(id));
            expect(got == e.symbols, "token mismatch for " + e.name);

            const FeatureVector fv = featurize(tokens, inv, true);
            int total = 0;
            for (const int c : fv.counts) total += c;
            expect(total == static_cast<int>(tokens.ids.size()),
                   "feature counts do not conserve tokens for " + e.name);
            int non_tone = 0;
            for (const int id : tokens.ids) non_tone += !inv.is_tone(id);
            expect(fv.length == non_tone, "length mismatch for " + e.name);
        }
        if (!detail.empty()) detail += ", ";
        detail += std::to_string(entries.size());
    }
    g_detail = detail + " fixtures bit-exact";
}

}  // namespace

int main() {
    std::printf("acceptance gate (data dir: %s)\n", data_dir().c_str());

    run_criterion(1, "corpora filter to the documented shapes", criterion_shapes);
    run_criterion(2, "feature matrix sparsity matches the documented zero rate",
                  criterion_sparsity);
    run_criterion(3, "per-language length medians and means", criterion_lengths);
    run_criterion(4, "tuned nine-seed sweeps land in their reproduction bands",
                  criterion_sweeps);
    run_criterion(5, "cross-dataset transfer errors land in their bands", criterion_cross);
    run_criterion(6, "untuned sweep shows higher mean and lower spread than tuned",
                  criterion_untuned);
    run_criterion(7, "prosodic features rank and skew as documented", criterion_importance);
    run_criterion(8, "panel majority, respondent mean, and forest accuracy align",
                  criterion_human);
    run_criterion(9, "manifests are byte-identical across thread counts",
                  criterion_determinism);
    run_criterion(10, "splits match exhaustive enumeration; full trees memorize",
                  criterion_split_oracle);
    run_criterion(11, "label-copy feature dominates importance with floor p-values",
                  criterion_oracle_feature);
    run_criterion(12, "out-of-bag pools exclude exactly the in-bag trees",
                  criterion_oob_fixture);
    run_criterion(13, "naive baseline equals the majority proportion exactly",
                  criterion_baseline);
    run_criterion(14, "least squares matches closed-form fixtures", criterion_ols);
    run_criterion(15, "tokenizer golden fixtures are bit-exact", criterion_goldens);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all runnable criteria passed\n");
    return 0;
}
