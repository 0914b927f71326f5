#include "triage/corpus.hpp"
#include "triage/fusion.hpp"
#include "triage/lint.hpp"

#include <doctest.h>

using namespace triage;

namespace {

Finding make_finding(std::string id, std::size_t line) {
    const auto& info = rule_info(id);
    return {std::move(id), "test", line, std::string(info.category), info.certainty};
}

const LabelSet kLabels = LabelSet::default_set();

std::vector<double> peaked(std::size_t at, double top = 0.9) {
    std::vector<double> s(kLabels.size(), (1.0 - top) / static_cast<double>(kLabels.size() - 1));
    s[at] = top;
    return s;
}

}  // namespace

TEST_CASE("definite findings override the model") {
    const auto v = fuse({make_finding("R001", 5)}, peaked(0), kLabels);
    CHECK(v.category == "Compatibility Issue");
    CHECK(v.source == VerdictSource::rule);
    for (std::size_t k = 0; k < kLabels.size(); ++k) {
        CHECK(fuse({make_finding("R001", 5)}, peaked(k), kLabels).category == "Compatibility Issue");
    }
}

TEST_CASE("earliest definite finding decides") {
    const auto v = fuse({make_finding("R005", 2), make_finding("R001", 7)}, peaked(0), kLabels);
    CHECK(v.category == "Syntax Error");
    CHECK(v.findings.size() == 2);
}

TEST_CASE("model decides without definite findings") {
    const auto v = fuse({}, peaked(2), kLabels);
    CHECK(v.category == "Performance Issue");
    CHECK(v.source == VerdictSource::model);
    CHECK(!v.low_confidence);

    const auto advisory = fuse({make_finding("R004", 1)}, peaked(0), kLabels);
    CHECK(advisory.category == "Correct Code");
    CHECK(advisory.source == VerdictSource::model);
    REQUIRE(advisory.findings.size() == 1);
    CHECK(advisory.findings[0].rule_id == "R004");
}

TEST_CASE("low confidence is flagged without changing the category") {
    const auto v = fuse({}, peaked(3, 0.4), kLabels);
    CHECK(v.category == "Runtime Error");
    CHECK(v.low_confidence);
    CHECK(render_verdict(v) == "Runtime Error\tmodel\t0.4000\tlow-confidence\n");
}

TEST_CASE("rule categories missing from the label set fall back to the model") {
    const LabelSet two({"Correct Code", "Logic Error"});
    const auto v = fuse({make_finding("R001", 1)}, {0.2, 0.8}, two);
    CHECK(v.category == "Logic Error");
    CHECK(v.source == VerdictSource::model);
}

TEST_CASE("verdict rendering lists findings") {
    const auto v = fuse({make_finding("R002", 1)}, peaked(1), kLabels);
    CHECK(render_verdict(v) == "Compatibility Issue\trule\t0.9000\n1:R002:Compatibility Issue:test\n");
}
