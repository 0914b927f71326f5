#include "oracles.hpp"

#include "triage/corpus.hpp"
#include "triage/error.hpp"

#include <doctest.h>

#include <map>

using namespace triage;

namespace {

std::filesystem::path sample_path() { return std::filesystem::path(TRIAGE_TEST_DATA) / "reference_sample.json"; }

std::string what_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

Dataset two_class(std::size_t a, std::size_t b) {
    std::vector<CodeSnippet> s;
    for (std::size_t i = 0; i < a; ++i) {
        s.push_back(CodeSnippet::make("a = " + std::to_string(i), "A"));
    }
    for (std::size_t i = 0; i < b; ++i) {
        s.push_back(CodeSnippet::make("b = " + std::to_string(i), "B"));
    }
    return Dataset(s, LabelSet({"A", "B"}));
}

}  // namespace

TEST_CASE("snippet ids are a pure function of code") {
    CHECK(snippet_id("x = 1") == snippet_id("x = 1"));
    CHECK(snippet_id("x = 1") != snippet_id("x = 2"));
    CHECK(snippet_id("x = 1").size() == 16);
}

TEST_CASE("reference sample loads with its label histogram") {
    const Dataset ds = load_dataset(sample_path());
    REQUIRE(ds.size() == 7);
    std::map<std::string, int> hist;
    for (const auto& s : ds.snippets()) {
        ++hist[s.classification];
    }
    CHECK(hist["Compatibility Issue"] == 2);
    CHECK(hist["Performance Issue"] == 2);
    CHECK(hist["Correct Code"] == 2);
    CHECK(hist["Runtime Error"] == 1);
    CHECK(ds[0].code.starts_with("class Cat:\n def __init__"));
    CHECK(ds.labels().names() ==
          std::vector<std::string>{"Correct Code", "Compatibility Issue", "Performance Issue", "Runtime Error"});
}

TEST_CASE("empty array is a valid empty dataset") {
    const Dataset ds = parse_dataset("[]");
    CHECK(ds.empty());
}

TEST_CASE("malformed records name their index") {
    const std::string text = R"([{"code":"a","classification":"Correct Code"},{"code":"b","classification":"Correct Code"},
        {"code":"c","classification":"Correct Code"},{"code":"d"}])";
    CHECK(what_of([&] { parse_dataset(text); }) == "record 3: missing classification");
    CHECK(what_of([] { parse_dataset(R"([{"code": 5, "classification": "x"}])"); }) ==
          "record 0: code is not a string");
    const auto msg = what_of([] { parse_dataset(R"([{"code":"a","classification":"Nope"}])", LabelSet::default_set()); });
    CHECK(msg.find("Nope") != std::string::npos);
}

TEST_CASE("missing dataset file is an io error") {
    try {
        load_dataset("/nonexistent/dir/data.json");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io);
    }
}

TEST_CASE("save then load is the identity") {
    const Dataset ds = load_dataset(sample_path());
    const auto dir = oracle::scratch_dir("corpus");
    save_dataset(ds, dir / "copy.json");
    CHECK(load_dataset(dir / "copy.json", ds.labels()) == ds);

    save_dataset(Dataset({}, LabelSet::default_set()), dir / "empty.json");
    CHECK(read_text_file(dir / "empty.json") == "[]\n");
    std::filesystem::remove_all(dir);
}

TEST_CASE("saving to an unwritable location fails") {
    const Dataset ds = load_dataset(sample_path());
    CHECK_THROWS_AS(save_dataset(ds, "/proc/triage-no-such/data.json"), Error);
}

TEST_CASE("stratified split keeps class proportions") {
    const Dataset ds = two_class(5, 5);
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        const Split s = stratified_split(ds, 0.2, seed);
        CHECK(s.test.size() == 2);
        CHECK(s.test.class_counts() == std::vector<std::size_t>{1, 1});
        CHECK(s.train.class_counts() == std::vector<std::size_t>{4, 4});
        const Split again = stratified_split(ds, 0.2, seed);
        CHECK(again.train == s.train);
        CHECK(again.test == s.test);
    }
    CHECK(what_of([] { stratified_split(two_class(1, 9), 0.2, 0); }) == "class A has fewer than 2 samples");
}

TEST_CASE("stratified split partitions every class") {
    const Dataset ds = two_class(17, 3);
    for (double f : {0.01, 0.2, 0.5, 0.99}) {
        const Split s = stratified_split(ds, f, 7);
        const auto train = s.train.class_counts();
        const auto test = s.test.class_counts();
        for (std::size_t c = 0; c < 2; ++c) {
            CHECK(train[c] + test[c] == ds.class_counts()[c]);
            CHECK(test[c] >= 1);
            CHECK(train[c] >= 1);
        }
    }
}

TEST_CASE("corrections change labels and are idempotent") {
    const Dataset ds = load_dataset(sample_path(), LabelSet::default_set());
    const std::string perf_id = ds[1].id;
    REQUIRE(ds[1].classification == "Performance Issue");

    const auto once = apply_corrections(ds, {{perf_id, "Logic Error"}});
    CHECK(once.changed == 1);
    CHECK(once.dataset[1].classification == "Logic Error");
    const auto twice = apply_corrections(once.dataset, {{perf_id, "Logic Error"}});
    CHECK(twice.changed == 0);
    CHECK(twice.dataset == once.dataset);

    CHECK(apply_corrections(ds, {{perf_id, "Performance Issue"}}).changed == 0);
    CHECK(what_of([&] { apply_corrections(ds, {{"deadbeef", "Logic Error"}}); }).find("deadbeef") != std::string::npos);
    CHECK(what_of([&] { apply_corrections(ds, {{perf_id, "Bogus"}}); }).find("Bogus") != std::string::npos);
}

TEST_CASE("corrections file parsing") {
    const auto fixes = parse_corrections(R"([{"id": "abc", "classification": "Logic Error"}])");
    REQUIRE(fixes.size() == 1);
    CHECK(fixes[0].id == "abc");
    CHECK_THROWS_AS(parse_corrections(R"([{"id": "abc"}])"), Error);
}
