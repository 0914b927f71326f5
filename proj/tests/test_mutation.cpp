#include "triage/corpus.hpp"
#include "triage/error.hpp"
#include "triage/lint.hpp"
#include "triage/mutation.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace triage;

namespace {

const std::vector<CodeSnippet>& pool() {
    static const auto p = synthesize_clean_pool(150, 21);
    return p;
}

}  // namespace

TEST_CASE("catalog covers every defect category") {
    const LabelSet labels = LabelSet::default_set();
    for (const auto& name : labels.names()) {
        if (name != "Correct Code") {
            CHECK(!operators_for(name).empty());
        }
    }
    for (const char* op : {"Py2PrintStatement", "Py2ExecStatement", "QuadraticStringConcat", "ReturnInsideLoopBody",
                           "OpenNonexistentFile", "IndexPastEnd", "DropTrailingColon", "UnbalanceDelimiter",
                           "OffByOneRange", "EvalOnInput", "HardcodedCredential"}) {
        CHECK_NOTHROW(find_operator(op));
    }
}

TEST_CASE("print call becomes a python 2 print statement") {
    const auto& op = find_operator("Py2PrintStatement");
    CHECK(op.target_label == "Compatibility Issue");
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto out = apply_operator(op, "print(\"hi\")", seed);
        CHECK(out.find("print \"hi\"") != std::string::npos);
    }
}

TEST_CASE("targeted rewrites") {
    const std::string loop = "def f(xs):\n    total = 0\n    for x in range(len(xs)):\n        total += xs[x]\n    return total\n";
    const auto drop = apply_operator(find_operator("DropTrailingColon"), loop, 1);
    CHECK(std::count(drop.begin(), drop.end(), ':') == std::count(loop.begin(), loop.end(), ':') - 1);

    const auto ret = apply_operator(find_operator("ReturnInsideLoopBody"), loop, 3);
    bool in_loop = false;
    for (const auto& f : run_rules(tokenize(ret))) {
        in_loop = in_loop || f.rule_id == "R003";
    }
    CHECK(in_loop);

    const auto off = apply_operator(find_operator("OffByOneRange"), loop, 4);
    CHECK(off != loop);
    CHECK((off.find("+ 1") != std::string::npos || off.find("- 1") != std::string::npos));

    CHECK_THROWS_AS(apply_operator(find_operator("OffByOneRange"), "x = 1\n", 0), Error);
}

TEST_CASE("generated corpus is uniform, labelled and reproducible") {
    const LabelSet labels = LabelSet::default_set();
    const auto detailed = generate_corpus_detailed(pool(), 2, labels, 9);
    REQUIRE(detailed.size() == 14);
    const Dataset ds = generate_corpus(pool(), 2, labels, 9);
    CHECK(ds.class_counts() == std::vector<std::size_t>(7, 2));
    CHECK(generate_corpus(pool(), 2, labels, 9) == ds);
    CHECK(serialize_dataset(generate_corpus(pool(), 2, labels, 9)) == serialize_dataset(ds));
    CHECK(generate_corpus(pool(), 2, labels, 10) != ds);
}

TEST_CASE("mutations change their source and correct samples are pool members") {
    const auto detailed = generate_corpus_detailed(pool(), 40, LabelSet::default_set(), 4);
    std::set<std::string> pool_codes;
    for (const auto& s : pool()) {
        pool_codes.insert(s.code);
    }
    for (const auto& g : detailed) {
        const auto& source = pool()[g.source_index].code;
        if (g.snippet.classification == "Correct Code") {
            CHECK(g.operator_name.empty());
            CHECK(pool_codes.contains(g.snippet.code));
            CHECK(g.snippet.code == source);
        } else {
            CHECK(g.snippet.code != source);
            CHECK(find_operator(g.operator_name).target_label == g.snippet.classification);
        }
    }
}

TEST_CASE("generation preconditions") {
    CHECK_THROWS_AS(generate_corpus({}, 2, LabelSet::default_set(), 0), Error);
    CHECK_THROWS_AS(generate_corpus(pool(), 2, LabelSet({"Correct Code", "Mystery"}), 0), Error);
    CHECK_THROWS_AS(generate_corpus(std::span(pool()).first(3), 5, LabelSet::default_set(), 0), Error);
}

TEST_CASE("synthesized pool is distinct and deterministic") {
    const auto a = synthesize_clean_pool(100, 3);
    CHECK(a == synthesize_clean_pool(100, 3));
    std::set<std::string> ids;
    for (const auto& s : a) {
        ids.insert(s.id);
    }
    CHECK(ids.size() == 100);
}
