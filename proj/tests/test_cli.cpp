#include "oracles.hpp"

#include "triage/cli.hpp"
#include "triage/corpus.hpp"
#include "triage/metrics.hpp"
#include "triage/mutation.hpp"

#include <doctest.h>

#include <sstream>

using namespace triage;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "codetriage");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

/// Scratch area with a generated corpus, a trained model and the reference snippets as files.
struct Workspace {
    fs::path root = oracle::scratch_dir("cli");
    fs::path data = root / "corpus.json";
    fs::path model = root / "model";

    Workspace() {
        REQUIRE(cli({"synth-pool", "--count", "200", "--seed", "3", "--out", (root / "pool").string()}).code == 0);
        REQUIRE(cli({"generate", "--clean-pool", (root / "pool").string(), "--per-class", "40", "--seed", "5", "--out",
                     data.string()})
                    .code == 0);
        const auto run = cli({"train", "--data", data.string(), "--model-dir", model.string(), "--seed", "1",
                              "--rounds", "30", "--report", (root / "report.txt").string(), "--confusion",
                              (root / "confusion.csv").string()});
        REQUIRE(run.code == 0);
        const auto sample = load_dataset(fs::path(TRIAGE_TEST_DATA) / "reference_sample.json");
        for (std::size_t i = 0; i < sample.size(); ++i) {
            write_text_file(snippet(i), sample[i].code);
        }
    }
    ~Workspace() { fs::remove_all(root); }

    fs::path snippet(std::size_t i) const { return root / ("sample_" + std::to_string(i) + ".py"); }
};

Workspace& workspace() {
    static Workspace ws;
    return ws;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
    CHECK(cli({"lint", "--bogus", "x.py"}).code == kExitUsage);
    CHECK(cli({"train", "--data", "x.json"}).code == kExitUsage);
    CHECK(cli({"train", "--data", "x.json", "--model-dir", "m", "--classifier", "svm"}).code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("train output and report files") {
    auto& ws = workspace();
    const auto report = read_text_file(ws.root / "report.txt");
    const auto parsed = parse_report(report);
    CHECK(parsed.classes.size() == 7);
    CHECK(parsed.accuracy_support == 56);
    CHECK(read_text_file(ws.root / "confusion.csv").starts_with("true\\predicted,Correct Code,"));
    for (const auto name : {"model.json", "vectorizer.json", "label_to_index.json"}) {
        CHECK(fs::exists(ws.model / name));
    }
}

TEST_CASE("train is byte-for-byte reproducible") {
    auto& ws = workspace();
    const auto again = ws.root / "again";
    const auto run = cli({"train", "--data", ws.data.string(), "--model-dir", again.string(), "--seed", "1",
                          "--rounds", "30", "--report", (ws.root / "report2.txt").string()});
    REQUIRE(run.code == 0);
    CHECK(run.out.starts_with("Loading data...\nData loaded.\nModel, vectorizer, and label_to_index saved.\n"));
    CHECK(oracle::directory_digest(again) == oracle::directory_digest(ws.model));
    CHECK(read_text_file(ws.root / "report2.txt") == read_text_file(ws.root / "report.txt"));
}

TEST_CASE("check applies the quality gate") {
    auto& ws = workspace();
    const auto exec = cli({"check", "--model-dir", ws.model.string(), ws.snippet(6).string(), "--fail-on",
                           "Compatibility Issue"});
    CHECK(exec.code == kExitGate);
    CHECK(exec.out.starts_with("Compatibility Issue\trule\t"));
    const auto circle = cli({"check", "--model-dir", ws.model.string(), ws.snippet(5).string(), "--fail-on",
                             "Compatibility Issue"});
    CHECK(circle.code == kExitOk);
    CHECK(cli({"check", "--model-dir", ws.model.string(), ws.snippet(5).string(), "--fail-on", "Nonsense"}).code ==
          kExitUsage);
}

TEST_CASE("lint, classify and evaluate") {
    auto& ws = workspace();
    const auto lint = cli({"lint", ws.snippet(0).string()});
    CHECK(lint.code == 0);
    CHECK(lint.out == "5:R001:Compatibility Issue:print used as a statement (Python 2 syntax)\n");
    const auto classify = cli({"classify", "--model-dir", ws.model.string(), ws.snippet(4).string()});
    CHECK(classify.code == 0);
    CHECK(classify.out.find('\t') != std::string::npos);
    const auto evaluate = cli({"evaluate", "--model-dir", ws.model.string(), "--data", ws.data.string()});
    CHECK(evaluate.code == 0);
    CHECK(parse_report(evaluate.out).accuracy_support == 280);
}

TEST_CASE("runtime failures exit with 3") {
    auto& ws = workspace();
    CHECK(cli({"lint", (ws.root / "absent.py").string()}).code == kExitRuntime);
    CHECK(cli({"classify", "--model-dir", (ws.root / "nowhere").string(), ws.snippet(0).string()}).code ==
          kExitRuntime);
    CHECK(cli({"train", "--data", (ws.root / "absent.json").string(), "--model-dir", (ws.root / "x").string()}).code ==
          kExitRuntime);
    const auto broken = ws.root / "broken";
    fs::create_directories(broken);
    for (const auto name : {"model.json", "vectorizer.json", "label_to_index.json"}) {
        fs::copy_file(ws.model / name, broken / name, fs::copy_options::overwrite_existing);
    }
    write_text_file(broken / "model.json", "{ not json");
    CHECK(cli({"check", "--model-dir", broken.string(), ws.snippet(0).string()}).code == kExitRuntime);
}

TEST_CASE("retrain writes only to the new directory") {
    auto& ws = workspace();
    const Dataset ds = load_dataset(ws.data);
    std::string fixes = "[";
    for (std::size_t i = 0; i < 10; ++i) {
        fixes += (i ? "," : "") + std::string("{\"id\":\"") + ds[i].id + "\",\"classification\":\"Logic Error\"}";
    }
    fixes += "]";
    write_text_file(ws.root / "fixes.json", fixes);
    const auto before = oracle::directory_digest(ws.model);
    const auto out_dir = ws.root / "retrained";
    const auto run = cli({"retrain", "--model-dir", ws.model.string(), "--data", ws.data.string(), "--corrections",
                          (ws.root / "fixes.json").string(), "--out-model-dir", out_dir.string(), "--report",
                          (ws.root / "retrain.txt").string()});
    REQUIRE(run.code == 0);
    CHECK(run.out.starts_with("Updated data saved.\nModel, vectorizer, and label_to_index saved.\n"
                              "Model retrained and saved with updated classifications.\nModel accuracy: "));
    CHECK(oracle::directory_digest(ws.model) == before);
    const Dataset updated = load_dataset(out_dir / "updated_data.json", ds.labels());
    CHECK(updated[0].classification == "Logic Error");
    CHECK(parse_report(read_text_file(ws.root / "retrain.txt")).classes.size() == 7);
    CHECK(cli({"retrain", "--model-dir", ws.model.string(), "--data", ws.data.string(), "--corrections",
               (ws.root / "fixes.json").string(), "--out-model-dir", ws.model.string()})
              .code == kExitUsage);
}
