#pragma once

#include "triage/labels.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace triage {

/// Rows are true classes, columns predicted classes, both in label-set order.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(LabelSet labels);

    const LabelSet& labels() const noexcept { return labels_; }
    std::size_t classes() const noexcept { return labels_.size(); }

    std::size_t at(std::size_t truth, std::size_t predicted) const { return counts_.at(truth * classes() + predicted); }
    void add(std::size_t truth, std::size_t predicted, std::size_t n = 1);

    std::size_t row_sum(std::size_t truth) const;
    std::size_t column_sum(std::size_t predicted) const;
    std::size_t trace() const;
    std::size_t total() const;
    double accuracy() const;

    /// Header row `true\predicted,<names...>`, then one row per true class.
    std::string to_csv() const;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    LabelSet labels_;
    std::vector<std::size_t> counts_;
};

ConfusionMatrix confusion_matrix(std::span<const std::string> truth, std::span<const std::string> predicted,
                                 const LabelSet& labels);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double support = 0.0;
    /// Correct predictions of the class. Exact for matrix-derived rows;
    /// recall * support when only rounded values are known.
    double true_positives = 0.0;
};

/// 2PR/(P+R), and 0 when P+R = 0.
double f1_score(double precision, double recall);

/// Row from published precision/recall/f1/support values.
ClassMetrics metrics_from_rounded(double precision, double recall, double f1, double support);

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

struct AggregateMetrics {
    double accuracy = 0.0;
    ClassMetrics macro;
    ClassMetrics weighted;
    double total_support = 0.0;
};

/// Macro rows average over classes; weighted rows average by support.
/// Accuracy is the sum of true positives over total support, so it equals
/// the weighted recall by construction. Throws on zero total support.
AggregateMetrics aggregate_metrics(std::span<const ClassMetrics> rows);

struct EvaluationReport {
    LabelSet labels;
    std::vector<ClassMetrics> rows;
    AggregateMetrics aggregate;
};

EvaluationReport make_report(const ConfusionMatrix& cm);
EvaluationReport make_report(LabelSet labels, std::vector<ClassMetrics> rows);

/// Half-away-from-zero rounding to two decimals.
double round2(double value);

/// Shortest decimal text that round-trips to `value`.
std::string format_full(double value);

/// Classification report text: optional heading line, the full-precision
/// `Model accuracy:` line, a precision/recall/f1-score/support table keyed by
/// class index with accuracy, macro avg and weighted avg rows, then the
/// index-to-name legend.
std::string render_report(const EvaluationReport& report, std::string_view heading = {});

struct ParsedReport {
    std::optional<double> model_accuracy;
    struct Row {
        std::string key;
        double precision = 0.0;
        double recall = 0.0;
        double f1 = 0.0;
        double support = 0.0;
    };
    std::vector<Row> classes;
    double accuracy = 0.0;
    double accuracy_support = 0.0;
    Row macro;
    Row weighted;
    std::vector<std::string> label_names;  // legend, by index
};

/// Reads back every numeric cell of render_report output.
ParsedReport parse_report(std::string_view text);

}  // namespace triage
