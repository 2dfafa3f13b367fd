#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "evorf/error.hpp"
#include "evorf/rng.hpp"
#include "evorf/tuning.hpp"

using namespace evorf;

namespace {

Dataset signal_dataset() {
    Rng rng(derive_key(13, 0x71, 0));
    Dataset ds;
    ds.n_features = 4;
    ds.feature_names = {"f0", "f1", "f2", "f3"};
    ds.provenance = "synthetic";
    for (int r = 0; r < 40; ++r) {
        const Label l = r % 2 ? Label::Post : Label::Pre;
        ds.values.push_back(l == Label::Post ? 1 : 0);
        ds.values.push_back(static_cast<int>(rng.next_below(4)));
        ds.values.push_back(static_cast<int>(rng.next_below(4)));
        ds.values.push_back(static_cast<int>(rng.next_below(2)));
        ds.labels.push_back(l);
    }
    ds.n_rows = 40;
    return ds;
}

struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& content) : path("tmp_" + name) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("default grids follow the size heuristics") {
    const GridSpec g4 = GridSpec::defaults(4);
    CHECK(g4.mtry == std::vector<int>{1, 2, 4});
    CHECK(g4.sample_fraction == std::vector<double>{0.4, 0.632, 0.8, 1.0});
    CHECK(g4.min_node_size == std::vector<int>{1, 5, 10});

    const GridSpec g9 = GridSpec::defaults(9);
    CHECK(g9.mtry == std::vector<int>{1, 3, 2, 4, 9});

    const GridSpec g1 = GridSpec::defaults(1);
    CHECK(g1.mtry == std::vector<int>{1});
}

TEST_CASE("grid files override individual keys") {
    SUBCASE("partial override keeps defaults elsewhere") {
        TempFile f("grid_ok.txt",
                   "# comment line\n"
                   "mtry = 1, 3\n"
                   "\n"
                   "sample_fraction = 0.5  # trailing comment\n");
        const GridSpec g = GridSpec::from_file(f.path, 9);
        CHECK(g.mtry == std::vector<int>{1, 3});
        CHECK(g.sample_fraction == std::vector<double>{0.5});
        CHECK(g.min_node_size == std::vector<int>{1, 5, 10});
    }
    SUBCASE("unknown keys are parse errors") {
        TempFile f("grid_badkey.txt", "depth = 3\n");
        CHECK_THROWS_AS(GridSpec::from_file(f.path, 4), ParseError);
    }
    SUBCASE("bad numbers are parse errors") {
        TempFile f("grid_badnum.txt", "mtry = one\n");
        CHECK_THROWS_AS(GridSpec::from_file(f.path, 4), ParseError);
    }
    SUBCASE("lines need a key = value shape") {
        TempFile f("grid_noeq.txt", "mtry 1 2\n");
        CHECK_THROWS_AS(GridSpec::from_file(f.path, 4), ParseError);
    }
    SUBCASE("missing files are data errors") {
        CHECK_THROWS_AS(GridSpec::from_file("tmp_no_such_grid.txt", 4), DataError);
    }
}

TEST_CASE("a single-point grid is chosen verbatim") {
    const Dataset ds = signal_dataset();
    GridSpec grid;
    grid.mtry = {2};
    grid.sample_fraction = {0.632};
    grid.min_node_size = {5};

    Hyperparameters base;
    base.num_trees = 500;
    base.seed = 42;

    const TuningResult result = tune(ds, grid, base, 7, 30, 1);
    REQUIRE_EQ(result.trials.size(), 1);
    CHECK_EQ(result.seed, 7);

    // The trial runs cheap and under its own derived seed...
    CHECK_EQ(result.trials[0].hp.num_trees, 30);
    CHECK_EQ(result.trials[0].hp.seed, derive_key(7, stream::kTune, 0));
    CHECK_EQ(result.trials[0].hp.mtry, 2);
    CHECK_EQ(result.trials[0].hp.sample_fraction, 0.632);
    CHECK_FALSE(result.trials[0].hp.replace);  // sub-full fractions draw without replacement
    CHECK_EQ(result.trials[0].hp.min_node_size, 5);

    // ...while the chosen configuration restores the production settings.
    CHECK_EQ(result.chosen.mtry, 2);
    CHECK_EQ(result.chosen.sample_fraction, 0.632);
    CHECK_FALSE(result.chosen.replace);
    CHECK_EQ(result.chosen.min_node_size, 5);
    CHECK_EQ(result.chosen.num_trees, 500);
    CHECK_EQ(result.chosen.seed, 42);
}

TEST_CASE("full sample fraction switches to bootstrap resampling") {
    const Dataset ds = signal_dataset();
    GridSpec grid;
    grid.mtry = {2};
    grid.sample_fraction = {1.0};
    grid.min_node_size = {1};
    const TuningResult result = tune(ds, grid, Hyperparameters{}, 3, 20, 1);
    REQUIRE_EQ(result.trials.size(), 1);
    CHECK(result.trials[0].hp.replace);
    CHECK(result.chosen.replace);
}

TEST_CASE("tuning scans the grid in declared order and keeps the first minimum") {
    const Dataset ds = signal_dataset();
    GridSpec grid;
    grid.mtry = {1, 2, 4};
    grid.sample_fraction = {0.632, 1.0};
    grid.min_node_size = {1, 10};

    Hyperparameters base;
    base.num_trees = 200;
    base.seed = 5;
    const TuningResult result = tune(ds, grid, base, 11, 25, 1);
    REQUIRE_EQ(result.trials.size(), 12);

    // Scan order: mtry outermost, then fraction, then node size.
    CHECK_EQ(result.trials[0].hp.mtry, 1);
    CHECK_EQ(result.trials[0].hp.sample_fraction, 0.632);
    CHECK_EQ(result.trials[0].hp.min_node_size, 1);
    CHECK_EQ(result.trials[1].hp.min_node_size, 10);
    CHECK_EQ(result.trials[2].hp.sample_fraction, 1.0);
    CHECK_EQ(result.trials[4].hp.mtry, 2);

    // Trial seeds advance with the scan index.
    for (std::size_t i = 0; i < result.trials.size(); ++i)
        CHECK_EQ(result.trials[i].hp.seed, derive_key(11, stream::kTune, i));

    // The chosen configuration is the earliest strict minimizer.
    std::size_t expect = 0;
    for (std::size_t i = 1; i < result.trials.size(); ++i)
        if (result.trials[i].oob_error < result.trials[expect].oob_error) expect = i;
    CHECK_EQ(result.chosen.mtry, result.trials[expect].hp.mtry);
    CHECK_EQ(result.chosen.sample_fraction, result.trials[expect].hp.sample_fraction);
    CHECK_EQ(result.chosen.min_node_size, result.trials[expect].hp.min_node_size);

    SUBCASE("the whole scan is deterministic") {
        const TuningResult again = tune(ds, grid, base, 11, 25, 4);
        REQUIRE_EQ(again.trials.size(), result.trials.size());
        for (std::size_t i = 0; i < result.trials.size(); ++i) {
            CHECK_EQ(again.trials[i].oob_error, result.trials[i].oob_error);
            CHECK_EQ(again.trials[i].hp.seed, result.trials[i].hp.seed);
        }
        CHECK_EQ(again.chosen.mtry, result.chosen.mtry);
        CHECK_EQ(again.chosen.sample_fraction, result.chosen.sample_fraction);
        CHECK_EQ(again.chosen.min_node_size, result.chosen.min_node_size);
    }
}

TEST_CASE("tuning rejects empty grids") {
    const Dataset ds = signal_dataset();
    GridSpec empty;
    CHECK_THROWS_AS(tune(ds, empty, Hyperparameters{}, 1, 10, 1), ValidationError);
}

TEST_CASE("tree-count scan applies the plateau rule") {
    const Dataset ds = signal_dataset();
    Hyperparameters base;
    base.mtry = 2;
    base.seed = 9;

    const TreeCountResult result = tune_num_trees(ds, {15, 60}, base, 3, 1);
    REQUIRE_EQ(result.trials.size(), 2);
    CHECK_EQ(result.trials[0].num_trees, 15);
    CHECK_EQ(result.trials[1].num_trees, 60);

    std::size_t best = 0;
    if (result.trials[1].mean_oob < result.trials[0].mean_oob) best = 1;
    const double plateau = result.trials[best].mean_oob + result.trials[best].sd_oob;
    int expect = 0;
    bool have = false;
    for (const auto& t : result.trials) {
        if (t.mean_oob <= plateau && (!have || t.num_trees < expect)) {
            have = true;
            expect = t.num_trees;
        }
    }
    CHECK_EQ(result.chosen, expect);

    // Recompute one cell from scratch with the documented seed chain.
    {
        Hyperparameters hp = base;
        hp.num_trees = 15;
        const std::uint64_t count_key = derive_key(base.seed, stream::kTreeCount, 0);
        double total = 0.0;
        for (int s = 0; s < 3; ++s) {
            hp.seed = derive_key(count_key, stream::kTreeCount, static_cast<std::uint64_t>(s));
            total += oob_predictions(train_forest(ds, hp, 1), ds, 1).error();
        }
        CHECK_EQ(result.trials[0].mean_oob, doctest::Approx(total / 3.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS(tune_num_trees(ds, {}, base, 3, 1), ValidationError);
    CHECK_THROWS_AS(tune_num_trees(ds, {10}, base, 0, 1), ValidationError);
}

TEST_CASE("tuning trials export marks the chosen row") {
    const Dataset ds = signal_dataset();
    GridSpec grid;
    grid.mtry = {1, 2};
    grid.sample_fraction = {0.632};
    grid.min_node_size = {1};
    const TuningResult result = tune(ds, grid, Hyperparameters{}, 2, 20, 1);

    const std::string path = "tmp_trials.csv";
    write_trials_csv(result, path);
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    in.close();
    std::remove(path.c_str());

    REQUIRE_EQ(lines.size(), 3);
    CHECK_EQ(lines[0], "trial,mtry,sample_fraction,replace,min_node_size,oob_error,chosen");
    int chosen_rows = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK_EQ(lines[i].substr(0, 2), std::to_string(i - 1) + ",");
        if (lines[i].back() == '1') ++chosen_rows;
    }
    CHECK_EQ(chosen_rows, 1);
}
