#pragma once

#include "triage/corpus.hpp"
#include "triage/features.hpp"
#include "triage/labels.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace triage {

enum class ClassifierKind { gbt, nb };

std::string_view classifier_name(ClassifierKind kind);
ClassifierKind parse_classifier(std::string_view name);

struct GbtParams {
    int rounds = 100;
    int max_depth = 3;
    double learning_rate = 0.1;
    int min_samples_leaf = 2;

    friend bool operator==(const GbtParams&, const GbtParams&) = default;
};

struct NbParams {
    double alpha = 1.0;

    friend bool operator==(const NbParams&, const NbParams&) = default;
};

struct TrainConfig {
    ClassifierKind kind = ClassifierKind::gbt;
    GbtParams gbt;
    NbParams nb;
    VectorizerOptions vectorizer;
    std::uint64_t seed = 0;

    /// Throws Error(usage) when a hyperparameter is out of range.
    void validate() const;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Flat binary regression tree. Internal nodes send x[feature] <= threshold
/// to `left`; leaves carry `value`.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(const FeatureVector& x) const;
    /// Index of the leaf reached by `x`.
    std::size_t leaf_for(const FeatureVector& x) const;

    friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

/// Softmax gradient boosting: trees are stored round-major, one per class
/// per round, so tree r*K + k belongs to class k of round r.
struct GbtModel {
    std::size_t classes = 0;
    double learning_rate = 0.1;
    std::vector<RegressionTree> trees;
    /// Mean training cross-entropy before the first round and after each round.
    std::vector<double> loss_history;

    std::vector<double> raw_scores(const FeatureVector& x) const;

    friend bool operator==(const GbtModel&, const GbtModel&) = default;
};

/// Multinomial naive Bayes over raw term counts.
struct NbModel {
    std::vector<double> log_prior;                    // [class]
    std::vector<std::vector<double>> log_likelihood;  // [class][term]

    std::vector<double> log_posterior(const FeatureVector& x) const;

    friend bool operator==(const NbModel&, const NbModel&) = default;
};

struct TrainingMetadata {
    std::string corpus_fingerprint;
    std::size_t n_train = 0;
    double test_fraction = 0.2;

    friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

class TrainedModel {
public:
    TrainedModel(std::variant<GbtModel, NbModel> parameters, Vocabulary vocabulary, LabelSet labels,
                 TrainConfig config, TrainingMetadata metadata);

    ClassifierKind kind() const;
    const std::variant<GbtModel, NbModel>& parameters() const noexcept { return parameters_; }
    const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
    const LabelSet& labels() const noexcept { return labels_; }
    const TrainConfig& config() const noexcept { return config_; }
    const TrainingMetadata& metadata() const noexcept { return metadata_; }
    TrainingMetadata& metadata() noexcept { return metadata_; }

    /// Class probabilities, non-negative and summing to 1.
    std::vector<double> predict_scores(const FeatureVector& x) const;
    std::size_t predict_index(const FeatureVector& x) const;
    const std::string& predict_label(const FeatureVector& x) const;

private:
    std::variant<GbtModel, NbModel> parameters_;
    Vocabulary vocabulary_;
    LabelSet labels_;
    TrainConfig config_;
    TrainingMetadata metadata_;
};

/// Numerically stable softmax, renormalised so the entries sum to 1.
std::vector<double> softmax(std::span<const double> scores);
/// Lowest index among the maxima.
std::size_t argmax(std::span<const double> values);

struct EncodedDataset {
    std::vector<FeatureVector> features;
    std::vector<std::size_t> labels;
};

EncodedDataset encode(const Dataset& dataset, const Vocabulary& vocabulary);

/// Fits the vocabulary on `train_set` with cfg.vectorizer, then trains.
TrainedModel fit(const Dataset& train_set, const TrainConfig& cfg);
/// Trains on a dataset with an already fitted vocabulary.
TrainedModel train(const Dataset& train_set, const Vocabulary& vocabulary, const TrainConfig& cfg);

GbtModel train_gbt(const EncodedDataset& data, std::size_t classes, std::size_t dimension, const GbtParams& params);
NbModel train_nb(const EncodedDataset& data, std::size_t classes, std::size_t dimension, const NbParams& params);

/// Fits one regression tree to `targets` with greedy variance-reduction
/// splits; leaves hold the mean target. Exposed for oracle tests; boosting
/// replaces the leaf values with Newton steps.
RegressionTree fit_regression_tree(std::span<const FeatureVector> features, std::span<const double> targets,
                                   std::size_t dimension, int max_depth, int min_samples_leaf);

double accuracy(const TrainedModel& model, const EncodedDataset& data);

struct CrossValidation {
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
    /// Fold number of each sample in the input dataset.
    std::vector<std::size_t> fold_of;
};

/// Stratified k-fold assignment: each class is shuffled with a derived seed,
/// then dealt round-robin continuing across classes, so fold sizes differ by
/// at most one.
std::vector<std::size_t> stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed);

CrossValidation cross_validate(const Dataset& dataset, const TrainConfig& cfg, std::size_t k);

struct GridSearchResult {
    std::size_t best_index = 0;
    TrainConfig best;
    std::vector<CrossValidation> table;  // parallel to the grid
};

GridSearchResult grid_search(const Dataset& dataset, std::span<const TrainConfig> grid, std::size_t k);

/// Parses an array of partial configuration objects; absent fields keep the
/// values of `base`.
std::vector<TrainConfig> parse_grid(std::string_view json_text, const TrainConfig& base);

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelFile = "model.json";
inline constexpr std::string_view kVectorizerFile = "vectorizer.json";
inline constexpr std::string_view kLabelFile = "label_to_index.json";

void save_model(const TrainedModel& model, const std::filesystem::path& dir);
TrainedModel load_model(const std::filesystem::path& dir);

}  // namespace triage
