#include "triage/metrics.hpp"

#include "triage/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <sstream>

namespace triage {

ConfusionMatrix::ConfusionMatrix(LabelSet labels)
    : labels_(std::move(labels)), counts_(labels_.size() * labels_.size(), 0) {}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::size_t n) {
    if (truth >= classes() || predicted >= classes()) {
        throw Error(ErrorKind::data, "confusion matrix index out of range");
    }
    counts_[truth * classes() + predicted] += n;
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
    std::size_t sum = 0;
    for (std::size_t j = 0; j < classes(); ++j) {
        sum += at(truth, j);
    }
    return sum;
}

std::size_t ConfusionMatrix::column_sum(std::size_t predicted) const {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < classes(); ++i) {
        sum += at(i, predicted);
    }
    return sum;
}

std::size_t ConfusionMatrix::trace() const {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < classes(); ++i) {
        sum += at(i, i);
    }
    return sum;
}

std::size_t ConfusionMatrix::total() const {
    std::size_t sum = 0;
    for (auto c : counts_) {
        sum += c;
    }
    return sum;
}

double ConfusionMatrix::accuracy() const {
    const auto n = total();
    return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
}

namespace {

std::string csv_cell(std::string_view text) {
    if (text.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(text);
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

double ratio(double numerator, double denominator) {
    return denominator == 0.0 ? 0.0 : numerator / denominator;
}

}  // namespace

std::string ConfusionMatrix::to_csv() const {
    std::string out = "true\\predicted";
    for (const auto& name : labels_.names()) {
        out += ',';
        out += csv_cell(name);
    }
    out += '\n';
    for (std::size_t i = 0; i < classes(); ++i) {
        out += csv_cell(labels_.name(i));
        for (std::size_t j = 0; j < classes(); ++j) {
            out += fmt::format(",{}", at(i, j));
        }
        out += '\n';
    }
    return out;
}

ConfusionMatrix confusion_matrix(std::span<const std::string> truth, std::span<const std::string> predicted,
                                 const LabelSet& labels) {
    if (truth.size() != predicted.size()) {
        throw Error(ErrorKind::data, fmt::format("{} true labels but {} predictions", truth.size(), predicted.size()));
    }
    if (truth.empty()) {
        throw Error(ErrorKind::data, "confusion matrix needs at least one sample");
    }
    ConfusionMatrix cm(labels);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        cm.add(labels.require(truth[i]), labels.require(predicted[i]));
    }
    return cm;
}

double f1_score(double precision, double recall) {
    const double sum = precision + recall;
    return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

ClassMetrics metrics_from_rounded(double precision, double recall, double f1, double support) {
    return {precision, recall, f1, support, recall * support};
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
    std::vector<ClassMetrics> rows;
    for (std::size_t k = 0; k < cm.classes(); ++k) {
        const auto tp = static_cast<double>(cm.at(k, k));
        ClassMetrics row;
        row.precision = ratio(tp, static_cast<double>(cm.column_sum(k)));
        row.recall = ratio(tp, static_cast<double>(cm.row_sum(k)));
        row.f1 = f1_score(row.precision, row.recall);
        row.support = static_cast<double>(cm.row_sum(k));
        row.true_positives = tp;
        rows.push_back(row);
    }
    return rows;
}

AggregateMetrics aggregate_metrics(std::span<const ClassMetrics> rows) {
    AggregateMetrics out;
    double correct = 0.0;
    for (const auto& row : rows) {
        out.total_support += row.support;
        correct += row.true_positives;
    }
    if (rows.empty() || out.total_support <= 0.0) {
        throw Error(ErrorKind::data, "aggregate metrics need a positive total support");
    }
    const auto k = static_cast<double>(rows.size());
    for (const auto& row : rows) {
        out.macro.precision += row.precision / k;
        out.macro.recall += row.recall / k;
        out.macro.f1 += row.f1 / k;
        out.weighted.precision += row.precision * row.support;
        out.weighted.f1 += row.f1 * row.support;
    }
    out.weighted.precision /= out.total_support;
    out.weighted.f1 /= out.total_support;
    out.weighted.recall = correct / out.total_support;
    out.accuracy = correct / out.total_support;
    out.macro.support = out.total_support;
    out.weighted.support = out.total_support;
    out.macro.true_positives = correct;
    out.weighted.true_positives = correct;
    return out;
}

EvaluationReport make_report(const ConfusionMatrix& cm) {
    return make_report(cm.labels(), per_class_metrics(cm));
}

EvaluationReport make_report(LabelSet labels, std::vector<ClassMetrics> rows) {
    if (rows.size() != labels.size()) {
        throw Error(ErrorKind::data, "one metrics row per class is required");
    }
    EvaluationReport report{std::move(labels), std::move(rows), {}};
    report.aggregate = aggregate_metrics(report.rows);
    return report;
}

double round2(double value) {
    return std::round(value * 100.0) / 100.0;
}

std::string format_full(double value) {
    return fmt::format("{}", value);
}

namespace {

std::string support_text(double support) {
    if (support == std::floor(support) && std::abs(support) < 1e15) {
        return fmt::format("{}", static_cast<long long>(support));
    }
    return fmt::format("{:.2f}", support);
}

std::string metric_row(std::string_view key, const ClassMetrics& row) {
    return fmt::format("{:>12} {:>9.2f} {:>9.2f} {:>9.2f} {:>9}\n", key, round2(row.precision), round2(row.recall),
                       round2(row.f1), support_text(row.support));
}

std::vector<std::string> split_words(std::string_view line) {
    std::vector<std::string> words;
    std::istringstream in{std::string(line)};
    std::string word;
    while (in >> word) {
        words.push_back(word);
    }
    return words;
}

double parse_number(std::string_view text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::format, fmt::format("'{}' is not a number", text));
    }
    return value;
}

}  // namespace

std::string render_report(const EvaluationReport& report, std::string_view heading) {
    std::string out;
    if (!heading.empty()) {
        out += fmt::format("{}\n", heading);
    }
    out += fmt::format("Model accuracy: {}\n", format_full(report.aggregate.accuracy));
    out += "Classification report:\n";
    out += fmt::format("{:>12} {:>9} {:>9} {:>9} {:>9}\n\n", "", "precision", "recall", "f1-score", "support");
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        out += metric_row(std::to_string(k), report.rows[k]);
    }
    out += '\n';
    out += fmt::format("{:>12} {:>9} {:>9} {:>9.2f} {:>9}\n", "accuracy", "", "", round2(report.aggregate.accuracy),
                       support_text(report.aggregate.total_support));
    out += metric_row("macro avg", report.aggregate.macro);
    out += metric_row("weighted avg", report.aggregate.weighted);
    out += "\nLabels:\n";
    for (std::size_t k = 0; k < report.labels.size(); ++k) {
        out += fmt::format("{:>12} = {}\n", k, report.labels.name(k));
    }
    return out;
}

ParsedReport parse_report(std::string_view text) {
    ParsedReport parsed;
    bool in_table = false;
    bool in_legend = false;
    bool saw_accuracy = false;
    bool saw_macro = false;
    bool saw_weighted = false;
    std::istringstream in{std::string(text)};
    std::string line;
    auto read_row = [](const std::vector<std::string>& words, std::size_t key_words) {
        if (words.size() != key_words + 4) {
            throw Error(ErrorKind::format, "report row does not have four numeric cells");
        }
        ParsedReport::Row row;
        for (std::size_t i = 0; i < key_words; ++i) {
            row.key += (i ? " " : "") + words[i];
        }
        row.precision = parse_number(words[key_words]);
        row.recall = parse_number(words[key_words + 1]);
        row.f1 = parse_number(words[key_words + 2]);
        row.support = parse_number(words[key_words + 3]);
        return row;
    };
    while (std::getline(in, line)) {
        const auto words = split_words(line);
        if (words.empty()) {
            continue;
        }
        if (line.starts_with("Model accuracy:")) {
            parsed.model_accuracy = parse_number(words.back());
            continue;
        }
        if (words[0] == "precision") {
            in_table = true;
            continue;
        }
        if (words[0] == "Labels:") {
            in_table = false;
            in_legend = true;
            continue;
        }
        if (in_legend) {
            const auto eq = line.find(" = ");
            if (eq == std::string::npos) {
                throw Error(ErrorKind::format, "malformed legend line");
            }
            parsed.label_names.push_back(line.substr(eq + 3));
            continue;
        }
        if (!in_table) {
            continue;
        }
        if (words[0] == "accuracy") {
            if (words.size() != 3) {
                throw Error(ErrorKind::format, "accuracy row must have two cells");
            }
            parsed.accuracy = parse_number(words[1]);
            parsed.accuracy_support = parse_number(words[2]);
            saw_accuracy = true;
        } else if (words[0] == "macro") {
            parsed.macro = read_row(words, 2);
            saw_macro = true;
        } else if (words[0] == "weighted") {
            parsed.weighted = read_row(words, 2);
            saw_weighted = true;
        } else {
            parsed.classes.push_back(read_row(words, 1));
        }
    }
    if (!saw_accuracy || !saw_macro || !saw_weighted) {
        throw Error(ErrorKind::format, "report is missing its aggregate rows");
    }
    return parsed;
}

}  // namespace triage
