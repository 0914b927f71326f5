#include "triage/fusion.hpp"

#include "triage/error.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace triage {

std::string_view source_name(VerdictSource source) {
    return source == VerdictSource::rule ? "rule" : "model";
}

Verdict fuse(std::vector<Finding> findings, std::vector<double> model_scores, const LabelSet& labels) {
    if (model_scores.size() != labels.size()) {
        throw Error(ErrorKind::data, "model scores do not match the label set");
    }
    Verdict verdict;
    verdict.findings = std::move(findings);
    verdict.model_scores = std::move(model_scores);
    const std::size_t top = argmax(verdict.model_scores);
    verdict.confidence = verdict.model_scores[top];

    const Finding* decisive = nullptr;
    for (const auto& finding : verdict.findings) {
        if (finding.certainty == Certainty::definite && labels.contains(finding.category) &&
            (decisive == nullptr || finding.line < decisive->line)) {
            decisive = &finding;
        }
    }
    if (decisive != nullptr) {
        verdict.category = decisive->category;
        verdict.source = VerdictSource::rule;
    } else {
        verdict.category = labels.name(top);
        verdict.source = VerdictSource::model;
        verdict.low_confidence = verdict.confidence < kLowConfidence;
    }
    return verdict;
}

Verdict check(std::string_view code, const TrainedModel& model) {
    const auto tokens = tokenize(code);
    auto findings = run_rules(tokens);
    auto scores = model.predict_scores(transform(tokens, model.vocabulary()));
    return fuse(std::move(findings), std::move(scores), model.labels());
}

std::string render_verdict(const Verdict& verdict) {
    std::string out = fmt::format("{}\t{}\t{:.4f}", verdict.category, source_name(verdict.source), verdict.confidence);
    if (verdict.low_confidence) {
        out += "\tlow-confidence";
    }
    out += '\n';
    for (const auto& finding : verdict.findings) {
        out += render_finding(finding);
        out += '\n';
    }
    return out;
}

}  // namespace triage
