#include "evorf/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "evorf/csv.hpp"
#include "evorf/error.hpp"
#include "evorf/rng.hpp"

namespace evorf {

std::string to_string(Label label) { return label == Label::Pre ? "pre" : "post"; }

std::string to_string(Stage stage) {
    switch (stage) {
        case Stage::NonEvolving: return "non_evolving";
        case Stage::Pre: return "pre";
        case Stage::Mid: return "mid";
        case Stage::Post: return "post";
        case Stage::Mega: return "mega";
    }
    return "?";
}

namespace {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

Label label_from_string(std::string_view s) {
    const std::string t = lower_ascii(s);
    if (t == "pre" || t == "pre_evolution" || t == "pre-evolution") return Label::Pre;
    if (t == "post" || t == "post_evolution" || t == "post-evolution") return Label::Post;
    throw DataError("unknown label '" + std::string(s) + "' (expected pre or post)");
}

Stage stage_from_string(std::string_view s) {
    const std::string t = lower_ascii(s);
    if (t == "pre") return Stage::Pre;
    if (t == "post") return Stage::Post;
    if (t == "mid") return Stage::Mid;
    if (t == "mega") return Stage::Mega;
    if (t == "non_evolving" || t == "nonevolving" || t == "none") return Stage::NonEvolving;
    throw DataError("unknown stage '" + std::string(s) +
                    "' (expected pre, mid, post, mega, or non_evolving)");
}

RecordFile load_records(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    const int col_id = table.column("id");
    const int col_name = table.column("name");
    const int col_lang = table.column("language");
    const int col_stage = table.column("stage");
    const int col_label = table.column("label");
    if (col_name < 0 || col_lang < 0)
        throw DataError(path + ": need 'name' and 'language' columns");
    if (col_stage < 0 && col_label < 0)
        throw DataError(path + ": need a 'stage' or 'label' column");

    RecordFile out;
    std::unordered_set<std::string> seen;
    std::size_t dropped = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        NameRecord rec;
        if (col_id >= 0) rec.id = row[static_cast<std::size_t>(col_id)];
        rec.name = trim(row[static_cast<std::size_t>(col_name)]);
        if (rec.name.empty())
            throw DataError(path + ": empty name in data row " + std::to_string(r + 1));
        rec.language = language_from_string(lower_ascii(row[static_cast<std::size_t>(col_lang)]));
        if (col_stage >= 0) {
            const std::string& s = row[static_cast<std::size_t>(col_stage)];
            if (!trim(s).empty()) rec.stage = stage_from_string(trim(s));
        }
        if (col_label >= 0) {
            const std::string& s = row[static_cast<std::size_t>(col_label)];
            if (!trim(s).empty()) rec.label = label_from_string(trim(s));
        }
        if (!seen.insert(rec.name).second) {
            ++dropped;
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    if (dropped > 0)
        out.warnings.push_back(path + ": dropped " + std::to_string(dropped) +
                               " duplicate name(s), keeping first occurrence");
    return out;
}

std::vector<NameRecord> filter_records(const std::vector<NameRecord>& records) {
    std::vector<std::string> missing;
    for (const auto& rec : records) {
        if (!rec.stage) missing.push_back(rec.id.empty() ? rec.name : rec.id);
    }
    if (!missing.empty()) {
        std::string msg = "records missing stage metadata: ";
        for (std::size_t i = 0; i < missing.size() && i < 10; ++i) {
            if (i) msg += ", ";
            msg += missing[i];
        }
        if (missing.size() > 10) msg += ", … (" + std::to_string(missing.size()) + " total)";
        throw ValidationError(msg);
    }
    std::vector<NameRecord> out;
    for (const auto& rec : records) {
        if (*rec.stage == Stage::Pre || *rec.stage == Stage::Post) {
            NameRecord kept = rec;
            kept.label = *rec.stage == Stage::Pre ? Label::Pre : Label::Post;
            out.push_back(std::move(kept));
        }
    }
    return out;
}

std::pair<int, int> Dataset::class_counts() const {
    int pre = 0, post = 0;
    for (const Label l : labels) (l == Label::Pre ? pre : post)++;
    return {pre, post};
}

Dataset build_dataset(const std::vector<NameRecord>& records, const PhonemeInventory& inv,
                      bool with_length) {
    Dataset ds;
    ds.feature_names = inv.symbols();
    if (with_length) ds.feature_names.push_back("length");
    ds.n_features = ds.feature_names.size();
    ds.n_rows = records.size();
    ds.values.reserve(ds.n_rows * ds.n_features);
    ds.labels.reserve(ds.n_rows);
    ds.provenance = to_string(inv.language()) + (with_length ? "+L" : "-L");

    std::vector<std::string> failures;
    for (const auto& rec : records) {
        if (rec.language != inv.language())
            throw ValidationError("record '" + rec.name + "' is " + to_string(rec.language) +
                                  " but the inventory is " + to_string(inv.language()));
        if (!rec.label)
            throw ValidationError("record '" + rec.name +
                                  "' has no label; filter by stage or supply a label column");
        try {
            const TokenSequence tokens = tokenize(rec.name, inv);
            const FeatureVector fv = featurize(tokens, inv, with_length);
            ds.values.insert(ds.values.end(), fv.counts.begin(), fv.counts.end());
            if (with_length) ds.values.push_back(fv.length);
            ds.labels.push_back(*rec.label);
        } catch (const DataError& e) {
            failures.push_back(e.what());
        }
    }
    if (!failures.empty()) {
        std::string msg = std::to_string(failures.size()) + " record(s) failed to tokenize:";
        for (std::size_t i = 0; i < failures.size() && i < 10; ++i) msg += "\n  " + failures[i];
        if (failures.size() > 10) msg += "\n  …";
        throw DataError(msg);
    }
    return ds;
}

SplitPair split(std::size_t n_rows, std::uint64_t seed) {
    if (n_rows < 3)
        throw ValidationError("need at least 3 rows to split (got " + std::to_string(n_rows) +
                              ")");
    Rng rng(derive_key(seed, stream::kSplit, 0));
    std::vector<std::size_t> perm = rng.permutation(n_rows);
    const std::size_t n_train = n_rows * 2 / 3;
    SplitPair sp;
    sp.seed = seed;
    sp.train_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    sp.test_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(sp.train_indices.begin(), sp.train_indices.end());
    std::sort(sp.test_indices.begin(), sp.test_indices.end());
    return sp;
}

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices,
               const std::string& tag) {
    Dataset out;
    out.feature_names = ds.feature_names;
    out.n_features = ds.n_features;
    out.n_rows = indices.size();
    out.provenance = ds.provenance + "/" + tag;
    out.values.reserve(out.n_rows * out.n_features);
    out.labels.reserve(out.n_rows);
    for (const std::size_t r : indices) {
        if (r >= ds.n_rows) throw ValidationError("subset index out of range");
        const auto row = ds.row(r);
        out.values.insert(out.values.end(), row.begin(), row.end());
        out.labels.push_back(ds.labels[r]);
    }
    return out;
}

double naive_baseline(const std::vector<Label>& labels) {
    if (labels.empty()) throw ValidationError("naive baseline needs a non-empty label list");
    int pre = 0;
    for (const Label l : labels) pre += l == Label::Pre;
    const int post = static_cast<int>(labels.size()) - pre;
    return static_cast<double>(std::max(pre, post)) / static_cast<double>(labels.size());
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    std::vector<std::string> header = ds.feature_names;
    header.push_back("label");
    out << csv::join_row(header) << "\n";
    for (std::size_t r = 0; r < ds.n_rows; ++r) {
        for (std::size_t c = 0; c < ds.n_features; ++c) out << ds.at(r, c) << ',';
        out << to_string(ds.labels[r]) << "\n";
    }
    if (!out) throw DataError("failed writing " + path);
}

Dataset load_dataset_csv(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    if (table.header.empty() || table.header.back() != "label")
        throw DataError(path + ": last column must be 'label'");
    Dataset ds;
    ds.feature_names.assign(table.header.begin(), table.header.end() - 1);
    ds.n_features = ds.feature_names.size();
    if (ds.n_features == 0) throw DataError(path + ": no feature columns");
    ds.n_rows = table.rows.size();
    ds.provenance = path;
    ds.values.reserve(ds.n_rows * ds.n_features);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        for (std::size_t c = 0; c < ds.n_features; ++c) {
            const std::string& cell = row[c];
            try {
                std::size_t used = 0;
                const int v = std::stoi(cell, &used);
                if (used != cell.size() || v < 0) throw std::invalid_argument(cell);
                ds.values.push_back(v);
            } catch (const std::exception&) {
                throw ParseError(path, static_cast<long>(r) + 2,
                                 "bad count '" + cell + "' in column " + ds.feature_names[c]);
            }
        }
        ds.labels.push_back(label_from_string(row[ds.n_features]));
    }
    return ds;
}

}  // namespace evorf
