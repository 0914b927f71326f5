#include "oracles.hpp"

#include "triage/error.hpp"
#include "triage/metrics.hpp"
#include "triage/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace triage;

namespace {

ConfusionMatrix hand_matrix() {
    const std::vector<std::string> truth = {"A", "A", "B"};
    const std::vector<std::string> pred = {"A", "B", "B"};
    return confusion_matrix(truth, pred, LabelSet({"A", "B"}));
}

EvaluationReport published_report(const std::vector<oracle::PublishedRow>& rows) {
    std::vector<ClassMetrics> metrics;
    for (const auto& r : rows) {
        metrics.push_back(metrics_from_rounded(r.precision, r.recall, r.f1, r.support));
    }
    return make_report(LabelSet::default_set(), metrics);
}

}  // namespace

TEST_CASE("confusion matrix hand cases") {
    const auto cm = hand_matrix();
    CHECK(cm.at(0, 0) == 1);
    CHECK(cm.at(0, 1) == 1);
    CHECK(cm.at(1, 0) == 0);
    CHECK(cm.at(1, 1) == 1);
    CHECK(cm.accuracy() == doctest::Approx(2.0 / 3.0));

    const std::vector<std::string> same = {"A", "B", "B", "A"};
    const auto diag = confusion_matrix(same, same, LabelSet({"A", "B"}));
    CHECK(diag.at(0, 1) == 0);
    CHECK(diag.at(1, 0) == 0);
    CHECK(diag.accuracy() == 1.0);

    const std::vector<std::string> all_a(5, "A");
    const std::vector<std::string> all_b(5, "B");
    const auto off = confusion_matrix(all_a, all_b, LabelSet({"A", "B"}));
    CHECK(off.at(0, 1) == 5);
    CHECK(off.trace() == 0);

    CHECK_THROWS_AS(confusion_matrix(all_a, same, LabelSet({"A", "B"})), Error);
    CHECK(hand_matrix().to_csv() == "true\\predicted,A,B\nA,1,1\nB,0,1\n");
}

TEST_CASE("per class metrics") {
    const auto rows = per_class_metrics(hand_matrix());
    CHECK(rows[0].precision == 1.0);
    CHECK(rows[0].recall == 0.5);
    CHECK(rows[0].f1 == doctest::Approx(2.0 / 3.0));
    CHECK(rows[0].support == 2);

    CHECK(f1_score(0.96, 0.91) == doctest::Approx(2 * 0.96 * 0.91 / 1.87));
    CHECK(round2(f1_score(0.96, 0.91)) == 0.93);
    CHECK(f1_score(0.0, 0.0) == 0.0);

    ConfusionMatrix cm(LabelSet({"A", "B", "C"}));
    cm.add(0, 0, 3);
    const auto empty_row = per_class_metrics(cm)[2];
    CHECK(empty_row.precision == 0.0);
    CHECK(empty_row.recall == 0.0);
    CHECK(empty_row.f1 == 0.0);
    CHECK(empty_row.support == 0.0);
}

TEST_CASE("published report aggregates") {
    const auto initial = oracle::aggregate_published(oracle::initial_rows());
    CHECK(initial.total_support == 731);
    CHECK(initial.macro.precision == doctest::Approx(5.70 / 7));
    CHECK(round2(initial.macro.precision) == 0.81);
    CHECK(round2(initial.macro.recall) == 0.82);
    CHECK(round2(initial.macro.f1) == 0.81);
    CHECK(round2(initial.weighted.precision) == 0.81);
    CHECK(round2(initial.weighted.recall) == 0.80);
    CHECK(round2(initial.weighted.f1) == 0.80);
    CHECK(initial.weighted.recall == doctest::Approx(587.29 / 731).epsilon(1e-12));
    CHECK(std::abs(initial.weighted.recall - oracle::kInitialAccuracy) < 0.005);

    const auto retrained = oracle::aggregate_published(oracle::retrained_rows());
    CHECK(round2(retrained.macro.precision) == 0.81);
    CHECK(round2(retrained.macro.recall) == 0.80);
    CHECK(round2(retrained.macro.f1) == 0.80);
    CHECK(std::abs(retrained.weighted.recall - oracle::kRetrainedAccuracy) < 0.005);
}

TEST_CASE("single class aggregates equal the row") {
    ConfusionMatrix cm(LabelSet({"Only"}));
    cm.add(0, 0, 4);
    const auto report = make_report(cm);
    CHECK(report.aggregate.macro.f1 == report.rows[0].f1);
    CHECK(report.aggregate.weighted.precision == report.rows[0].precision);
    CHECK(render_report(report).find("1.00") != std::string::npos);
}

TEST_CASE("weighted recall equals accuracy and rows sum to supports") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + rng.below(7);
        std::vector<std::string> names;
        for (std::size_t c = 0; c < k; ++c) {
            names.push_back("c" + std::to_string(c));
        }
        ConfusionMatrix cm{LabelSet(names)};
        const std::size_t n = 1 + rng.below(300);
        for (std::size_t i = 0; i < n; ++i) {
            cm.add(rng.below(k), rng.below(k));
        }
        const auto report = make_report(cm);
        CHECK(std::abs(report.aggregate.weighted.recall - cm.accuracy()) <= 1e-12);
        CHECK(report.aggregate.accuracy == cm.accuracy());
        double total = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            CHECK(report.rows[c].support == static_cast<double>(cm.row_sum(c)));
            total += report.rows[c].support;
            const auto& r = report.rows[c];
            if (r.precision > 0 && r.recall > 0) {
                CHECK(r.f1 > 0);
            }
            CHECK(r.f1 <= (r.precision + r.recall) / 2 + 1e-12);
        }
        CHECK(total == static_cast<double>(cm.total()));
    }
}

TEST_CASE("report rendering and parsing") {
    const auto report = published_report(oracle::initial_rows());
    const std::string text = render_report(report);
    CHECK(text.find("Classification report:\n") != std::string::npos);
    CHECK(text.find("           0      0.96      0.91      0.93        95\n") != std::string::npos);
    CHECK(text.find("weighted avg      0.81      0.80      0.80       731\n") != std::string::npos);
    CHECK(text.find("    accuracy                          0.80       731\n") != std::string::npos);

    const auto parsed = parse_report(text);
    REQUIRE(parsed.classes.size() == 7);
    CHECK(parsed.classes[4].support == 145);
    CHECK(parsed.classes[0].precision == 0.96);
    CHECK(parsed.macro.recall == 0.82);
    CHECK(parsed.accuracy_support == 731);
    CHECK(parsed.label_names == LabelSet::default_set().names());
    CHECK(*parsed.model_accuracy == report.aggregate.accuracy);

    EvaluationReport second = published_report(oracle::retrained_rows());
    second.aggregate.accuracy = oracle::kRetrainedAccuracy;
    const std::string text2 = render_report(second, "Model retrained and saved with updated classifications.");
    CHECK(text2.starts_with("Model retrained and saved with updated classifications.\n"
                            "Model accuracy: 0.8030095759233926\n"));
    CHECK(*parse_report(text2).model_accuracy == oracle::kRetrainedAccuracy);
}

TEST_CASE("rounding is half away from zero") {
    CHECK(round2(0.125) == 0.13);
    CHECK(round2(0.8034) == 0.80);
    CHECK(format_full(0.801641586867305) == "0.801641586867305");
}
