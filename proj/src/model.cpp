#include "triage/model.hpp"

#include "triage/error.hpp"
#include "triage/random.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace triage {

std::string_view classifier_name(ClassifierKind kind) {
    return kind == ClassifierKind::gbt ? "gbt" : "nb";
}

ClassifierKind parse_classifier(std::string_view name) {
    if (name == "gbt") {
        return ClassifierKind::gbt;
    }
    if (name == "nb") {
        return ClassifierKind::nb;
    }
    throw Error(ErrorKind::usage, fmt::format("unknown classifier '{}' (expected gbt or nb)", name));
}

void TrainConfig::validate() const {
    if (gbt.rounds < 1) {
        throw Error(ErrorKind::usage, "rounds must be at least 1");
    }
    if (gbt.max_depth < 1) {
        throw Error(ErrorKind::usage, "max_depth must be at least 1");
    }
    if (!(gbt.learning_rate > 0.0 && gbt.learning_rate <= 1.0)) {
        throw Error(ErrorKind::usage, "learning_rate must lie in (0, 1]");
    }
    if (gbt.min_samples_leaf < 1) {
        throw Error(ErrorKind::usage, "min_samples_leaf must be at least 1");
    }
    if (!(nb.alpha > 0.0)) {
        throw Error(ErrorKind::usage, "alpha must be positive");
    }
    if (vectorizer.min_df < 1) {
        throw Error(ErrorKind::usage, "min_df must be at least 1");
    }
}

std::vector<double> softmax(std::span<const double> scores) {
    std::vector<double> out(scores.size());
    if (scores.empty()) {
        return out;
    }
    const double top = *std::max_element(scores.begin(), scores.end());
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::exp(scores[i] - top);
        total += out[i];
    }
    for (auto& p : out) {
        p /= total;
    }
    return out;
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) {
            best = i;
        }
    }
    return best;
}

std::vector<double> NbModel::log_posterior(const FeatureVector& x) const {
    std::vector<double> out = log_prior;
    for (std::size_t c = 0; c < out.size(); ++c) {
        for (const auto& e : x.entries) {
            out[c] += e.count * log_likelihood[c][e.index];
        }
    }
    return out;
}

NbModel train_nb(const EncodedDataset& data, std::size_t classes, std::size_t dimension, const NbParams& params) {
    if (data.features.empty()) {
        throw Error(ErrorKind::data, "cannot train on an empty dataset");
    }
    std::vector<std::vector<double>> counts(classes, std::vector<double>(dimension, 0.0));
    std::vector<double> docs(classes, 0.0);
    for (std::size_t i = 0; i < data.features.size(); ++i) {
        const std::size_t c = data.labels[i];
        docs[c] += 1.0;
        for (const auto& e : data.features[i].entries) {
            counts[c][e.index] += e.count;
        }
    }
    NbModel model;
    const double n = static_cast<double>(data.features.size());
    for (std::size_t c = 0; c < classes; ++c) {
        model.log_prior.push_back(std::log(docs[c] / n));
        const double total = std::accumulate(counts[c].begin(), counts[c].end(), 0.0);
        const double denominator = total + params.alpha * static_cast<double>(dimension);
        std::vector<double> row(dimension);
        for (std::size_t t = 0; t < dimension; ++t) {
            row[t] = std::log((counts[c][t] + params.alpha) / denominator);
        }
        model.log_likelihood.push_back(std::move(row));
    }
    return model;
}

TrainedModel::TrainedModel(std::variant<GbtModel, NbModel> parameters, Vocabulary vocabulary, LabelSet labels,
                           TrainConfig config, TrainingMetadata metadata)
    : parameters_(std::move(parameters)),
      vocabulary_(std::move(vocabulary)),
      labels_(std::move(labels)),
      config_(config),
      metadata_(std::move(metadata)) {
    if (const auto* gbt = std::get_if<GbtModel>(&parameters_)) {
        if (gbt->classes != labels_.size()) {
            throw Error(ErrorKind::format, "model class count does not match its label map");
        }
        if (gbt->trees.size() % std::max<std::size_t>(1, gbt->classes) != 0) {
            throw Error(ErrorKind::format, "tree count is not a multiple of the class count");
        }
        for (const auto& tree : gbt->trees) {
            if (tree.nodes.empty()) {
                throw Error(ErrorKind::format, "empty regression tree");
            }
            for (const auto& node : tree.nodes) {
                if (node.is_leaf()) {
                    continue;
                }
                const auto limit = static_cast<int>(tree.nodes.size());
                if (static_cast<std::size_t>(node.feature) >= vocabulary_.size() || node.left <= 0 ||
                    node.right <= 0 || node.left >= limit || node.right >= limit) {
                    throw Error(ErrorKind::format, "regression tree references an invalid node or feature");
                }
            }
        }
    } else {
        const auto& nb = std::get<NbModel>(parameters_);
        if (nb.log_prior.size() != labels_.size() || nb.log_likelihood.size() != labels_.size()) {
            throw Error(ErrorKind::format, "naive Bayes class count does not match its label map");
        }
        for (const auto& row : nb.log_likelihood) {
            if (row.size() != vocabulary_.size()) {
                throw Error(ErrorKind::format, "naive Bayes likelihood table does not match the vocabulary");
            }
        }
    }
}

ClassifierKind TrainedModel::kind() const {
    return std::holds_alternative<GbtModel>(parameters_) ? ClassifierKind::gbt : ClassifierKind::nb;
}

std::vector<double> TrainedModel::predict_scores(const FeatureVector& x) const {
    if (x.dimension != vocabulary_.size()) {
        throw Error(ErrorKind::data, fmt::format("feature vector has dimension {} but the model expects {}",
                                                 x.dimension, vocabulary_.size()));
    }
    if (const auto* gbt = std::get_if<GbtModel>(&parameters_)) {
        return softmax(gbt->raw_scores(x));
    }
    return softmax(std::get<NbModel>(parameters_).log_posterior(x));
}

std::size_t TrainedModel::predict_index(const FeatureVector& x) const {
    return argmax(predict_scores(x));
}

const std::string& TrainedModel::predict_label(const FeatureVector& x) const {
    return labels_.name(predict_index(x));
}

EncodedDataset encode(const Dataset& dataset, const Vocabulary& vocabulary) {
    EncodedDataset out;
    out.features.reserve(dataset.size());
    for (const auto& snippet : dataset.snippets()) {
        out.features.push_back(vectorize(snippet.code, vocabulary));
    }
    out.labels = dataset.label_indices();
    return out;
}

TrainedModel train(const Dataset& train_set, const Vocabulary& vocabulary, const TrainConfig& cfg) {
    cfg.validate();
    if (train_set.empty()) {
        throw Error(ErrorKind::data, "cannot train on an empty dataset");
    }
    if (vocabulary.size() == 0) {
        throw Error(ErrorKind::data, "cannot train with an empty vocabulary");
    }
    const auto counts = train_set.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            throw Error(ErrorKind::data,
                        fmt::format("class {} has no training samples", train_set.labels().name(c)));
        }
    }
    const auto data = encode(train_set, vocabulary);
    const std::size_t classes = train_set.labels().size();
    TrainingMetadata metadata;
    metadata.corpus_fingerprint = train_set.fingerprint();
    metadata.n_train = train_set.size();
    std::variant<GbtModel, NbModel> params;
    if (cfg.kind == ClassifierKind::gbt) {
        params = train_gbt(data, classes, vocabulary.size(), cfg.gbt);
    } else {
        params = train_nb(data, classes, vocabulary.size(), cfg.nb);
    }
    return TrainedModel(std::move(params), vocabulary, train_set.labels(), cfg, std::move(metadata));
}

TrainedModel fit(const Dataset& train_set, const TrainConfig& cfg) {
    cfg.validate();
    if (train_set.empty()) {
        throw Error(ErrorKind::data, "cannot train on an empty dataset");
    }
    std::vector<std::vector<Token>> corpus;
    corpus.reserve(train_set.size());
    for (const auto& snippet : train_set.snippets()) {
        corpus.push_back(tokenize(snippet.code));
    }
    const auto vocabulary = fit_vocabulary(corpus, cfg.vectorizer);
    return train(train_set, vocabulary, cfg);
}

double accuracy(const TrainedModel& model, const EncodedDataset& data) {
    if (data.features.empty()) {
        return 0.0;
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.features.size(); ++i) {
        correct += model.predict_index(data.features[i]) == data.labels[i] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(data.features.size());
}

std::vector<std::size_t> stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw Error(ErrorKind::usage, "cross-validation needs at least 2 folds");
    }
    const auto& labels = dataset.labels();
    const auto indices = dataset.label_indices();
    std::vector<std::vector<std::size_t>> members(labels.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        members[indices[i]].push_back(i);
    }
    std::vector<std::size_t> fold_of(dataset.size(), 0);
    std::size_t position = 0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        auto& group = members[c];
        if (group.size() < k) {
            throw Error(ErrorKind::data, fmt::format("class {} has {} samples, fewer than {} folds", labels.name(c),
                                                     group.size(), k));
        }
        Rng rng(derive_seed(seed ^ 0x6b666f6c64ULL, c));
        rng.shuffle(std::span<std::size_t>(group));
        for (std::size_t i : group) {
            fold_of[i] = position++ % k;
        }
    }
    return fold_of;
}

CrossValidation cross_validate(const Dataset& dataset, const TrainConfig& cfg, std::size_t k) {
    cfg.validate();
    CrossValidation result;
    result.fold_of = stratified_folds(dataset, k, cfg.seed);
    for (std::size_t fold = 0; fold < k; ++fold) {
        std::vector<std::size_t> train_idx;
        std::vector<std::size_t> test_idx;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            (result.fold_of[i] == fold ? test_idx : train_idx).push_back(i);
        }
        const auto train_part = dataset.subset(train_idx);
        const auto test_part = dataset.subset(test_idx);
        const auto model = fit(train_part, cfg);
        result.fold_accuracy.push_back(accuracy(model, encode(test_part, model.vocabulary())));
    }
    result.mean_accuracy = std::accumulate(result.fold_accuracy.begin(), result.fold_accuracy.end(), 0.0) /
                           static_cast<double>(k);
    return result;
}

GridSearchResult grid_search(const Dataset& dataset, std::span<const TrainConfig> grid, std::size_t k) {
    if (grid.empty()) {
        throw Error(ErrorKind::usage, "grid search needs at least one configuration");
    }
    GridSearchResult result;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        result.table.push_back(cross_validate(dataset, grid[i], k));
        if (result.table[i].mean_accuracy > result.table[result.best_index].mean_accuracy) {
            result.best_index = i;
        }
    }
    result.best = grid[result.best_index];
    return result;
}

std::vector<TrainConfig> parse_grid(std::string_view json_text, const TrainConfig& base) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::usage, fmt::format("grid file is not valid JSON: {}", e.what()));
    }
    if (!root.is_array() || root.empty()) {
        throw Error(ErrorKind::usage, "grid file must be a non-empty array of configurations");
    }
    std::vector<TrainConfig> grid;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const auto& entry = root[i];
        if (!entry.is_object()) {
            throw Error(ErrorKind::usage, fmt::format("grid entry {} is not an object", i));
        }
        TrainConfig cfg = base;
        try {
            for (const auto& [key, value] : entry.items()) {
                if (key == "classifier") {
                    cfg.kind = parse_classifier(value.get<std::string>());
                } else if (key == "rounds") {
                    cfg.gbt.rounds = value.get<int>();
                } else if (key == "max_depth") {
                    cfg.gbt.max_depth = value.get<int>();
                } else if (key == "learning_rate") {
                    cfg.gbt.learning_rate = value.get<double>();
                } else if (key == "min_samples_leaf") {
                    cfg.gbt.min_samples_leaf = value.get<int>();
                } else if (key == "alpha") {
                    cfg.nb.alpha = value.get<double>();
                } else if (key == "min_df") {
                    cfg.vectorizer.min_df = value.get<std::size_t>();
                } else if (key == "bigrams") {
                    cfg.vectorizer.bigrams = value.get<bool>();
                } else if (key == "structure_terms") {
                    cfg.vectorizer.structure_terms = value.get<bool>();
                } else {
                    throw Error(ErrorKind::usage, fmt::format("grid entry {}: unknown field '{}'", i, key));
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::usage, fmt::format("grid entry {}: {}", i, e.what()));
        }
        cfg.validate();
        grid.push_back(cfg);
    }
    return grid;
}

}  // namespace triage
