#pragma once

#include "triage/labels.hpp"
#include "triage/lint.hpp"
#include "triage/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace triage {

enum class VerdictSource { rule, model };

std::string_view source_name(VerdictSource source);

inline constexpr double kLowConfidence = 0.5;

struct Verdict {
    std::string category;
    VerdictSource source = VerdictSource::model;
    std::vector<double> model_scores;
    std::vector<Finding> findings;
    double confidence = 0.0;  // top model probability
    bool low_confidence = false;
};

/// Arbitration between lint findings and model scores: the earliest definite
/// finding whose category exists in `labels` decides; otherwise the model's
/// argmax does. All findings are attached either way.
Verdict fuse(std::vector<Finding> findings, std::vector<double> model_scores, const LabelSet& labels);

/// tokenize -> run_rules -> transform -> predict_scores -> fuse.
Verdict check(std::string_view code, const TrainedModel& model);

/// First line `<category>\t<source>\t<confidence, 4 decimals>[\tlow-confidence]`,
/// then one line per finding in lint format.
std::string render_verdict(const Verdict& verdict);

}  // namespace triage
