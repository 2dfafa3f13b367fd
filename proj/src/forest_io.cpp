#include "evorf/forest_io.hpp"

#include <fstream>

#include <json.hpp>

#include "evorf/error.hpp"

namespace evorf {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {
constexpr int kFormatVersion = 1;
}

void save_forest(const RandomForest& forest, const std::string& path) {
    ordered_json doc;
    doc["format"] = "evorf-forest";
    doc["version"] = kFormatVersion;
    doc["hyperparameters"] = {
        {"num_trees", forest.hp.num_trees},
        {"mtry", forest.hp.mtry},
        {"sample_fraction", forest.hp.sample_fraction},
        {"replace", forest.hp.replace},
        {"min_node_size", forest.hp.min_node_size},
        {"seed", forest.hp.seed},
    };
    doc["feature_names"] = forest.feature_names;
    doc["train_size"] = forest.train_size;
    doc["train_pre"] = forest.train_pre;
    doc["train_post"] = forest.train_post;

    ordered_json trees = ordered_json::array();
    for (const DecisionTree& tree : forest.trees) {
        ordered_json nodes = ordered_json::array();
        for (const TreeNode& node : tree.nodes) {
            nodes.push_back({node.feature, static_cast<double>(node.threshold), node.left,
                             node.right, node.count_pre, node.count_post});
        }
        trees.push_back({{"nodes", std::move(nodes)}, {"bag", tree.bag}});
    }
    doc["trees"] = std::move(trees);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << doc.dump() << "\n";
    if (!out) throw DataError("failed writing " + path);
}

RandomForest load_forest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    try {
        if (doc.at("format") != "evorf-forest")
            throw DataError(path + ": not a forest file");
        if (doc.at("version") != kFormatVersion)
            throw DataError(path + ": unsupported forest format version");

        RandomForest forest;
        const json& hp = doc.at("hyperparameters");
        forest.hp.num_trees = hp.at("num_trees").get<int>();
        forest.hp.mtry = hp.at("mtry").get<int>();
        forest.hp.sample_fraction = hp.at("sample_fraction").get<double>();
        forest.hp.replace = hp.at("replace").get<bool>();
        forest.hp.min_node_size = hp.at("min_node_size").get<int>();
        forest.hp.seed = hp.at("seed").get<std::uint64_t>();
        forest.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
        forest.train_size = doc.at("train_size").get<std::size_t>();
        forest.train_pre = doc.at("train_pre").get<int>();
        forest.train_post = doc.at("train_post").get<int>();

        for (const json& jt : doc.at("trees")) {
            DecisionTree tree;
            for (const json& jn : jt.at("nodes")) {
                TreeNode node;
                node.feature = jn.at(0).get<std::int16_t>();
                node.threshold = static_cast<float>(jn.at(1).get<double>());
                node.left = jn.at(2).get<std::int32_t>();
                node.right = jn.at(3).get<std::int32_t>();
                node.count_pre = jn.at(4).get<std::uint16_t>();
                node.count_post = jn.at(5).get<std::uint16_t>();
                tree.nodes.push_back(node);
            }
            tree.bag = jt.at("bag").get<std::vector<std::uint32_t>>();
            for (const std::uint32_t r : tree.bag)
                if (r >= forest.train_size) throw DataError(path + ": bag index out of range");
            for (const TreeNode& node : tree.nodes) {
                if (node.is_leaf()) continue;
                const auto n = static_cast<std::int32_t>(tree.nodes.size());
                if (node.left < 0 || node.left >= n || node.right < 0 || node.right >= n ||
                    node.feature >= static_cast<std::int32_t>(forest.feature_names.size()))
                    throw DataError(path + ": malformed tree node");
            }
            forest.trees.push_back(std::move(tree));
        }
        if (forest.trees.size() != static_cast<std::size_t>(forest.hp.num_trees))
            throw DataError(path + ": tree count does not match hyperparameters");
        return forest;
    } catch (const json::exception& e) {
        throw DataError(path + ": malformed forest file: " + e.what());
    }
}

}  // namespace evorf
