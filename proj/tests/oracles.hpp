#pragma once

#include "triage/features.hpp"
#include "triage/labels.hpp"
#include "triage/metrics.hpp"
#include "triage/model.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace oracle {

/// Posterior of the smoothed multinomial Bayes formula, evaluated directly
/// from per-document count tables.
std::vector<double> naive_bayes_posterior(const std::vector<std::vector<int>>& doc_counts,
                                          const std::vector<std::size_t>& labels, std::size_t classes, double alpha,
                                          const std::vector<int>& query);

struct Stump {
    std::size_t feature = 0;
    double threshold = 0.0;
    double sse = 0.0;  // residual sum of squares after the split
};

/// Exhaustive search over every (feature, midpoint threshold) split,
/// minimising the summed squared error of mean-valued halves.
Stump best_stump(const std::vector<std::vector<double>>& dense, const std::vector<double>& targets,
                 std::size_t min_leaf);

triage::FeatureVector sparse(const std::vector<double>& dense);

struct PublishedRow {
    double precision, recall, f1, support;
};

const std::vector<PublishedRow>& initial_rows();
const std::vector<PublishedRow>& retrained_rows();
inline constexpr double kInitialAccuracy = 0.801641586867305;
inline constexpr double kRetrainedAccuracy = 0.8030095759233926;

triage::AggregateMetrics aggregate_published(const std::vector<PublishedRow>& rows);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

/// Concatenated bytes of every file under `dir`, keyed by relative path.
std::string directory_digest(const std::filesystem::path& dir);

}  // namespace oracle
