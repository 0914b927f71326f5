#include "triage/error.hpp"
#include "triage/features.hpp"
#include "triage/mutation.hpp"
#include "triage/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace triage;

namespace {

using Docs = std::vector<std::vector<std::string>>;

VectorizerOptions plain(std::size_t min_df) { return {min_df, false, false}; }

}  // namespace

TEST_CASE("hand computed two document vocabulary") {
    const Docs docs = {{"a", "b"}, {"a", "c"}};
    const Vocabulary v = fit_vocabulary_terms(docs, plain(1));
    REQUIRE(v.size() == 3);
    CHECK(v.index_of("a") == 0u);
    CHECK(v.index_of("b") == 1u);
    CHECK(v.index_of("c") == 2u);
    CHECK(v.document_frequency(0) == 2);
    CHECK(v.document_frequency(1) == 1);
    CHECK(v.n_documents() == 2);
    CHECK(v.idf(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(v.idf(1) - 1.405465) < 1e-6);
    CHECK(std::abs(v.idf(2) - 1.405465) < 1e-6);

    const FeatureVector x = transform_terms(docs[0], v);
    CHECK(std::abs(x.weight(0) - 0.579739) < 1e-6);
    CHECK(std::abs(x.weight(1) - 0.814802) < 1e-6);
    CHECK(x.weight(2) == 0.0);
    CHECK(x.entries[0].count == 1.0);

    const Vocabulary pruned = fit_vocabulary_terms(docs, plain(2));
    REQUIRE(pruned.size() == 1);
    CHECK(pruned.term(0) == "a");
}

TEST_CASE("empty corpus is rejected") {
    CHECK_THROWS_AS(fit_vocabulary_terms(Docs{}, plain(1)), Error);
}

TEST_CASE("single document corpus has unit idf") {
    const Docs docs = {{"a", "a", "b"}};
    const Vocabulary v = fit_vocabulary_terms(docs, plain(1));
    CHECK(v.idf(0) == 1.0);
    CHECK(v.idf(1) == 1.0);
    const FeatureVector x = transform_terms(docs[0], v);
    CHECK(x.weight(0) == doctest::Approx(2.0 / std::sqrt(5.0)));
    CHECK(x.weight(1) == doctest::Approx(1.0 / std::sqrt(5.0)));
}

TEST_CASE("out of vocabulary document is the zero vector") {
    const Vocabulary v = fit_vocabulary_terms(Docs{{"a"}, {"a"}}, plain(1));
    const FeatureVector x = transform_terms(std::vector<std::string>{"zzz", "yyy"}, v);
    CHECK(x.is_zero());
    CHECK(x.dimension == 1);
}

TEST_CASE("term extraction uses placeholders, bigrams and structure terms") {
    VectorizerOptions opts{1, true, true};
    const auto terms = extract_terms(tokenize("print 'hi' + 3  # note\n"), opts);
    CHECK(terms[0] == "print");
    CHECK(terms[1] == "<STR>");
    CHECK(terms[2] == "+");
    CHECK(terms[3] == "<NUM>");
    CHECK(std::find(terms.begin(), terms.end(), "print <STR>") != terms.end());
    CHECK(std::find(terms.begin(), terms.end(), "# note") == terms.end());

    const auto loop = extract_terms(tokenize("for x in y:\n    return x\n"), opts);
    CHECK(std::find(loop.begin(), loop.end(), "ctx:for>return") != loop.end());
    const auto broken = extract_terms(tokenize("f(1\n"), opts);
    CHECK(std::find(broken.begin(), broken.end(), std::string(kUnbalancedTerm)) != broken.end());

    const auto bare = extract_terms(tokenize("a b"), plain(1));
    CHECK(bare == std::vector<std::string>{"a", "b"});
}

TEST_CASE("unit norms, idf monotonicity and bag-of-terms invariance") {
    const auto pool = synthesize_clean_pool(200, 3);
    std::vector<std::vector<Token>> corpus;
    for (const auto& s : pool) {
        corpus.push_back(tokenize(s.code));
    }
    const Vocabulary v = fit_vocabulary(corpus, VectorizerOptions{});
    CHECK(v.n_documents() == corpus.size());
    for (const auto& tokens : corpus) {
        const FeatureVector x = transform(tokens, v);
        if (!x.is_zero()) {
            CHECK(std::abs(x.norm() - 1.0) <= 1e-9);
        }
        CHECK(std::is_sorted(x.entries.begin(), x.entries.end(),
                             [](const FeatureEntry& a, const FeatureEntry& b) { return a.index < b.index; }));
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v.document_frequency(i) > v.document_frequency(j)) {
                REQUIRE(v.idf(i) < v.idf(j));
            }
        }
    }

    Rng rng(9);
    const Vocabulary bag = fit_vocabulary_terms(Docs{{"a", "b", "c"}, {"a", "d"}}, plain(1));
    std::vector<std::string> doc = {"a", "a", "b", "c", "d", "d", "d"};
    const FeatureVector base = transform_terms(doc, bag);
    for (int i = 0; i < 20; ++i) {
        rng.shuffle(std::span<std::string>(doc));
        CHECK(transform_terms(doc, bag) == base);
    }
}
