#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "evorf/dataset.hpp"
#include "evorf/error.hpp"
#include "evorf/rng.hpp"

using namespace evorf;

namespace {

const PhonemeInventory& ja_inventory() {
    static const PhonemeInventory inv = PhonemeInventory::load(
        EVORF_SOURCE_DIR "/data/inventories/japanese.tsv", Language::Japanese);
    return inv;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("tmp_" + name) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("train/test split partitions exactly") {
    for (std::size_t n = 3; n <= 40; ++n) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const SplitPair sp = split(n, seed);
            CHECK_EQ(sp.train_indices.size(), n * 2 / 3);
            CHECK_EQ(sp.test_indices.size(), n - n * 2 / 3);
            CHECK(std::is_sorted(sp.train_indices.begin(), sp.train_indices.end()));
            CHECK(std::is_sorted(sp.test_indices.begin(), sp.test_indices.end()));
            std::set<std::size_t> all;
            all.insert(sp.train_indices.begin(), sp.train_indices.end());
            all.insert(sp.test_indices.begin(), sp.test_indices.end());
            CHECK_EQ(all.size(), n);
            CHECK_EQ(*all.rbegin(), n - 1);
        }
    }
}

TEST_CASE("split sizes use floor arithmetic") {
    const SplitPair sp = split(628, 1);
    CHECK_EQ(sp.train_indices.size(), 418);
    CHECK_EQ(sp.test_indices.size(), 210);
}

TEST_CASE("split is seed-deterministic") {
    const SplitPair a = split(100, 7);
    const SplitPair b = split(100, 7);
    CHECK(a.train_indices == b.train_indices);
    CHECK(a.test_indices == b.test_indices);
    const SplitPair c = split(100, 8);
    CHECK(a.train_indices != c.train_indices);
}

TEST_CASE("split rejects tiny inputs") {
    CHECK_THROWS_AS(split(2, 1), ValidationError);
}

TEST_CASE("naive baseline equals the majority-class proportion") {
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng(derive_key(42, 0x77, static_cast<std::uint64_t>(rep)));
        const std::size_t n = 1 + rng.next_below(200);
        std::vector<Label> labels(n);
        for (auto& l : labels) l = rng.next_below(2) ? Label::Post : Label::Pre;
        const long pre = std::count(labels.begin(), labels.end(), Label::Pre);
        const long post = static_cast<long>(n) - pre;
        const double expected =
            static_cast<double>(std::max(pre, post)) / static_cast<double>(n);
        CHECK_EQ(naive_baseline(labels), expected);
        CHECK(naive_baseline(labels) >= 0.5);
    }
    CHECK_THROWS_AS(naive_baseline({}), ValidationError);
}

TEST_CASE("record loading validates and deduplicates") {
    SUBCASE("duplicates are dropped with one warning") {
        TempFile f("dup.csv",
                   "id,name,language,stage\n"
                   "a,カミ,ja,pre\n"
                   "b,ホシ,ja,post\n"
                   "c,カミ,ja,post\n");
        const RecordFile rf = load_records(f.path);
        CHECK_EQ(rf.records.size(), 2);
        REQUIRE_EQ(rf.warnings.size(), 1);
        CHECK(rf.warnings[0].find("1 duplicate") != std::string::npos);
        CHECK_EQ(rf.records[0].name, "カミ");
    }
    SUBCASE("missing required columns") {
        TempFile f("nocol.csv", "id,name\nx,カミ\n");
        CHECK_THROWS_AS(load_records(f.path), DataError);
    }
    SUBCASE("needs stage or label") {
        TempFile f("nostage.csv", "id,name,language\nx,カミ,ja\n");
        CHECK_THROWS_AS(load_records(f.path), DataError);
    }
    SUBCASE("case-insensitive stages and labels") {
        TempFile f("case.csv",
                   "id,name,language,stage,label\n"
                   "a,カミ,JA,Pre,\n"
                   "b,ホシ,ja,MEGA,\n"
                   "c,ルビ,ja,,Post-Evolution\n");
        const RecordFile rf = load_records(f.path);
        REQUIRE_EQ(rf.records.size(), 3);
        CHECK(rf.records[0].stage == Stage::Pre);
        CHECK(rf.records[1].stage == Stage::Mega);
        CHECK(rf.records[2].label == Label::Post);
        CHECK_FALSE(rf.records[2].stage.has_value());
    }
    SUBCASE("empty names are data errors") {
        TempFile f("empty.csv", "id,name,language,stage\na, ,ja,pre\n");
        CHECK_THROWS_AS(load_records(f.path), DataError);
    }
}

TEST_CASE("stage filtering keeps the binary classes") {
    const RecordFile rf = load_records(EVORF_SOURCE_DIR "/tests/fixtures/demo_ja.csv");
    CHECK(rf.warnings.empty());
    CHECK_EQ(rf.records.size(), 66);
    const std::vector<NameRecord> kept = filter_records(rf.records);
    CHECK_EQ(kept.size(), 60);
    int pre = 0, post = 0;
    for (const auto& rec : kept) {
        REQUIRE(rec.label.has_value());
        (*rec.label == Label::Pre ? pre : post)++;
    }
    CHECK_EQ(pre, 30);
    CHECK_EQ(post, 30);
}

TEST_CASE("filtering requires stage metadata on every record") {
    std::vector<NameRecord> records(2);
    records[0].id = "a";
    records[0].name = "カミ";
    records[0].stage = Stage::Pre;
    records[1].id = "b";
    records[1].name = "ホシ";
    try {
        filter_records(records);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("b") != std::string::npos);
    }
}

TEST_CASE("dataset construction from records") {
    const PhonemeInventory& inv = ja_inventory();
    const RecordFile rf = load_records(EVORF_SOURCE_DIR "/tests/fixtures/demo_ja.csv");
    const std::vector<NameRecord> kept = filter_records(rf.records);

    const Dataset plain = build_dataset(kept, inv, false);
    CHECK_EQ(plain.n_rows, 60);
    CHECK_EQ(plain.n_features, inv.size());
    CHECK_EQ(plain.class_counts(), std::pair<int, int>(30, 30));

    const Dataset with_len = build_dataset(kept, inv, true);
    CHECK_EQ(with_len.n_features, inv.size() + 1);
    CHECK_EQ(with_len.feature_names.back(), "length");

    // Row values are the exact featurization of the record's name.
    const FeatureVector fv = featurize(tokenize(kept[0].name, inv), inv, true);
    for (std::size_t c = 0; c < inv.size(); ++c)
        CHECK_EQ(with_len.at(0, c), fv.counts[c]);
    CHECK_EQ(with_len.at(0, inv.size()), fv.length);

    SUBCASE("language mismatch is rejected") {
        std::vector<NameRecord> wrong = kept;
        wrong[0].language = Language::Korean;
        CHECK_THROWS_AS(build_dataset(wrong, inv, false), ValidationError);
    }
    SUBCASE("unlabeled records are rejected") {
        std::vector<NameRecord> unlabeled = kept;
        unlabeled[3].label.reset();
        CHECK_THROWS_AS(build_dataset(unlabeled, inv, false), ValidationError);
    }
}

TEST_CASE("dataset CSV round-trip is exact") {
    const PhonemeInventory& inv = ja_inventory();
    const RecordFile rf = load_records(EVORF_SOURCE_DIR "/tests/fixtures/demo_ja.csv");
    const Dataset ds = build_dataset(filter_records(rf.records), inv, true);

    const std::string path = "tmp_roundtrip.csv";
    write_dataset_csv(ds, path);
    const Dataset back = load_dataset_csv(path);
    std::remove(path.c_str());

    CHECK(back.feature_names == ds.feature_names);
    CHECK(back.values == ds.values);
    CHECK(back.labels == ds.labels);
    CHECK_EQ(back.n_rows, ds.n_rows);
    CHECK_EQ(back.n_features, ds.n_features);
}

TEST_CASE("dataset CSV loading rejects malformed files") {
    SUBCASE("no label column") {
        TempFile f("nolabel.csv", "a,b\n1,2\n");
        CHECK_THROWS_AS(load_dataset_csv(f.path), DataError);
    }
    SUBCASE("non-integer count") {
        TempFile f("badcount.csv", "a,label\nx,pre\n");
        CHECK_THROWS_AS(load_dataset_csv(f.path), ParseError);
    }
    SUBCASE("negative count") {
        TempFile f("negcount.csv", "a,label\n-1,pre\n");
        CHECK_THROWS_AS(load_dataset_csv(f.path), ParseError);
    }
}

TEST_CASE("subsetting selects rows in order") {
    Dataset ds;
    ds.feature_names = {"f0", "f1"};
    ds.n_features = 2;
    ds.n_rows = 3;
    ds.values = {1, 2, 3, 4, 5, 6};
    ds.labels = {Label::Pre, Label::Post, Label::Pre};
    ds.provenance = "demo";

    const Dataset sub = subset(ds, {2, 0}, "pick");
    CHECK_EQ(sub.n_rows, 2);
    CHECK(sub.values == std::vector<int>{5, 6, 1, 2});
    CHECK(sub.labels == std::vector<Label>{Label::Pre, Label::Pre});
    CHECK_EQ(sub.provenance, "demo/pick");
    CHECK_THROWS_AS(subset(ds, {5}, "oops"), ValidationError);
}
