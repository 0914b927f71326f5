#include "triage/error.hpp"
#include "triage/model.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>

namespace triage {

using ordered_json = nlohmann::ordered_json;

namespace {

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
    write_text_file(path, doc.dump(1, '\t') + "\n");
}

ordered_json read_artifact(const std::filesystem::path& dir, std::string_view name) {
    const auto path = dir / name;
    if (!std::filesystem::is_regular_file(path)) {
        throw Error(ErrorKind::io, fmt::format("missing model artifact: {}", path.string()));
    }
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::format, fmt::format("corrupt model artifact {}: {}", path.string(), e.what()));
    }
    if (!doc.is_object() || !doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
        throw Error(ErrorKind::format, fmt::format("model artifact {} has no format_version", path.string()));
    }
    const auto version = doc["format_version"].get<long long>();
    if (version != kModelFormatVersion) {
        throw Error(ErrorKind::format, fmt::format("unsupported format version {} in {} (expected {})", version,
                                                   path.string(), kModelFormatVersion));
    }
    return doc;
}

ordered_json tree_to_json(const RegressionTree& tree) {
    ordered_json nodes = ordered_json::array();
    for (const auto& node : tree.nodes) {
        if (node.is_leaf()) {
            nodes.push_back(ordered_json::array({node.value}));
        } else {
            nodes.push_back(ordered_json::array({node.feature, node.threshold, node.left, node.right}));
        }
    }
    return nodes;
}

RegressionTree tree_from_json(const ordered_json& nodes) {
    RegressionTree tree;
    for (const auto& entry : nodes) {
        TreeNode node;
        if (entry.size() == 1) {
            node.value = entry[0].get<double>();
        } else if (entry.size() == 4) {
            node.feature = entry[0].get<int>();
            node.threshold = entry[1].get<double>();
            node.left = entry[2].get<int>();
            node.right = entry[3].get<int>();
            if (node.feature < 0) {
                throw Error(ErrorKind::format, "split node with negative feature index");
            }
        } else {
            throw Error(ErrorKind::format, "tree node must have 1 or 4 fields");
        }
        tree.nodes.push_back(node);
    }
    return tree;
}

}  // namespace

void save_model(const TrainedModel& model, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!std::filesystem::is_directory(dir)) {
        throw Error(ErrorKind::io, fmt::format("cannot create model directory '{}'", dir.string()));
    }

    const auto& cfg = model.config();
    ordered_json doc;
    doc["format_version"] = kModelFormatVersion;
    doc["classifier"] = std::string(classifier_name(model.kind()));
    doc["config"] = {{"rounds", cfg.gbt.rounds},
                     {"max_depth", cfg.gbt.max_depth},
                     {"learning_rate", cfg.gbt.learning_rate},
                     {"min_samples_leaf", cfg.gbt.min_samples_leaf},
                     {"alpha", cfg.nb.alpha},
                     {"seed", cfg.seed}};
    doc["metadata"] = {{"corpus_fingerprint", model.metadata().corpus_fingerprint},
                       {"n_train", model.metadata().n_train},
                       {"test_fraction", model.metadata().test_fraction}};
    if (const auto* gbt = std::get_if<GbtModel>(&model.parameters())) {
        ordered_json trees = ordered_json::array();
        for (const auto& tree : gbt->trees) {
            trees.push_back(tree_to_json(tree));
        }
        doc["gbt"] = {{"classes", gbt->classes},
                      {"learning_rate", gbt->learning_rate},
                      {"loss_history", gbt->loss_history},
                      {"trees", std::move(trees)}};
    } else {
        const auto& nb = std::get<NbModel>(model.parameters());
        doc["nb"] = {{"log_prior", nb.log_prior}, {"log_likelihood", nb.log_likelihood}};
    }

    const auto& vocab = model.vocabulary();
    ordered_json vec;
    vec["format_version"] = kModelFormatVersion;
    vec["min_df"] = vocab.options().min_df;
    vec["bigrams"] = vocab.options().bigrams;
    vec["structure_terms"] = vocab.options().structure_terms;
    vec["n_documents"] = vocab.n_documents();
    ordered_json terms = ordered_json::array();
    for (const auto& entry : vocab.entries()) {
        terms.push_back(ordered_json::array({entry.term, entry.document_frequency}));
    }
    vec["terms"] = std::move(terms);

    ordered_json labels;
    labels["format_version"] = kModelFormatVersion;
    ordered_json mapping = ordered_json::object();
    for (std::size_t i = 0; i < model.labels().size(); ++i) {
        mapping[model.labels().name(i)] = i;
    }
    labels["label_to_index"] = std::move(mapping);

    write_json(dir / kModelFile, doc);
    write_json(dir / kVectorizerFile, vec);
    write_json(dir / kLabelFile, labels);
}

TrainedModel load_model(const std::filesystem::path& dir) {
    const auto doc = read_artifact(dir, kModelFile);
    const auto vec = read_artifact(dir, kVectorizerFile);
    const auto lab = read_artifact(dir, kLabelFile);

    try {
        VectorizerOptions options;
        options.min_df = vec.at("min_df").get<std::size_t>();
        options.bigrams = vec.at("bigrams").get<bool>();
        options.structure_terms = vec.at("structure_terms").get<bool>();
        std::vector<Vocabulary::Entry> entries;
        for (const auto& term : vec.at("terms")) {
            entries.push_back({term.at(0).get<std::string>(), term.at(1).get<std::size_t>()});
        }
        Vocabulary vocabulary(std::move(entries), vec.at("n_documents").get<std::size_t>(), options);

        const auto& mapping = lab.at("label_to_index");
        std::vector<std::string> names(mapping.size());
        std::vector<bool> filled(mapping.size(), false);
        for (const auto& [name, index] : mapping.items()) {
            const auto i = index.get<std::size_t>();
            if (i >= names.size() || filled[i]) {
                throw Error(ErrorKind::format, "label_to_index indices must be dense and unique");
            }
            names[i] = name;
            filled[i] = true;
        }
        LabelSet labels(std::move(names));

        TrainConfig cfg;
        cfg.kind = parse_classifier(doc.at("classifier").get<std::string>());
        const auto& c = doc.at("config");
        cfg.gbt.rounds = c.at("rounds").get<int>();
        cfg.gbt.max_depth = c.at("max_depth").get<int>();
        cfg.gbt.learning_rate = c.at("learning_rate").get<double>();
        cfg.gbt.min_samples_leaf = c.at("min_samples_leaf").get<int>();
        cfg.nb.alpha = c.at("alpha").get<double>();
        cfg.seed = c.at("seed").get<std::uint64_t>();
        cfg.vectorizer = options;

        TrainingMetadata metadata;
        const auto& m = doc.at("metadata");
        metadata.corpus_fingerprint = m.at("corpus_fingerprint").get<std::string>();
        metadata.n_train = m.at("n_train").get<std::size_t>();
        metadata.test_fraction = m.at("test_fraction").get<double>();

        std::variant<GbtModel, NbModel> params;
        if (cfg.kind == ClassifierKind::gbt) {
            const auto& g = doc.at("gbt");
            GbtModel gbt;
            gbt.classes = g.at("classes").get<std::size_t>();
            gbt.learning_rate = g.at("learning_rate").get<double>();
            gbt.loss_history = g.at("loss_history").get<std::vector<double>>();
            for (const auto& tree : g.at("trees")) {
                gbt.trees.push_back(tree_from_json(tree));
            }
            params = std::move(gbt);
        } else {
            const auto& n = doc.at("nb");
            NbModel nb;
            nb.log_prior = n.at("log_prior").get<std::vector<double>>();
            nb.log_likelihood = n.at("log_likelihood").get<std::vector<std::vector<double>>>();
            params = std::move(nb);
        }
        return TrainedModel(std::move(params), std::move(vocabulary), std::move(labels), cfg, std::move(metadata));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::format, fmt::format("corrupt model artifact in {}: {}", dir.string(), e.what()));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::format) {
            throw;
        }
        throw Error(ErrorKind::format, fmt::format("corrupt model artifact in {}: {}", dir.string(), e.what()));
    }
}

}  // namespace triage
