#include "triage/cli.hpp"

#include "triage/corpus.hpp"
#include "triage/error.hpp"
#include "triage/fusion.hpp"
#include "triage/lint.hpp"
#include "triage/metrics.hpp"
#include "triage/model.hpp"
#include "triage/mutation.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <filesystem>
#include <ostream>

namespace triage {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string clean_pool;
    std::size_t per_class = 0;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> seed_override;
    std::string out;
    std::string data;
    std::string model_dir;
    std::string out_model_dir;
    std::string classifier = "gbt";
    double test_split = 0.2;
    std::string grid;
    std::size_t cv = 0;
    std::string report;
    std::string confusion;
    std::string corrections;
    std::string updated_data;
    std::string path;
    std::string fail_on;
    GbtParams gbt;
    NbParams nb;
    VectorizerOptions vectorizer;
};

struct Evaluation {
    ConfusionMatrix matrix;
    EvaluationReport report;
};

Evaluation evaluate_on(const TrainedModel& model, const Dataset& data) {
    const auto encoded = encode(data, model.vocabulary());
    ConfusionMatrix cm(model.labels());
    for (std::size_t i = 0; i < encoded.features.size(); ++i) {
        cm.add(encoded.labels[i], model.predict_index(encoded.features[i]));
    }
    auto report = make_report(cm);
    return {std::move(cm), std::move(report)};
}

void write_outputs(const Evaluation& ev, const Options& opt, std::ostream& out) {
    const std::string text = render_report(ev.report);
    out << text;
    if (!opt.report.empty()) {
        write_text_file(opt.report, text);
    }
    if (!opt.confusion.empty()) {
        write_text_file(opt.confusion, ev.matrix.to_csv());
    }
}

std::string read_source(const std::string& path) {
    if (!fs::is_regular_file(path)) {
        throw Error(ErrorKind::io, fmt::format("cannot read {}", path));
    }
    return read_text_file(path);
}

/// Fits on the training split and reports on the held-out split.
TrainedModel fit_and_report(const Dataset& dataset, double test_fraction, const TrainConfig& cfg,
                            Evaluation& evaluation) {
    const Split split = stratified_split(dataset, test_fraction, cfg.seed);
    TrainedModel model = fit(split.train, cfg);
    model.metadata().corpus_fingerprint = dataset.fingerprint();
    model.metadata().test_fraction = test_fraction;
    evaluation = evaluate_on(model, split.test);
    return model;
}

int cmd_generate(const Options& opt, std::ostream& out) {
    const auto pool = load_clean_pool(opt.clean_pool);
    const Dataset ds = generate_corpus(pool, opt.per_class, LabelSet::default_set(), opt.seed);
    save_dataset(ds, opt.out);
    out << fmt::format("Generated {} snippets from {} clean snippets.\n", ds.size(), pool.size());
    return kExitOk;
}

int cmd_synth_pool(const Options& opt, std::ostream& out) {
    const auto pool = synthesize_clean_pool(opt.count, opt.seed);
    fs::create_directories(opt.out);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        write_text_file(fs::path(opt.out) / fmt::format("clean_{:05}.py", i), pool[i].code);
    }
    out << fmt::format("Wrote {} clean snippets to {}.\n", pool.size(), opt.out);
    return kExitOk;
}

TrainConfig config_from(const Options& opt) {
    TrainConfig cfg;
    cfg.kind = parse_classifier(opt.classifier);
    cfg.gbt = opt.gbt;
    cfg.nb = opt.nb;
    cfg.vectorizer = opt.vectorizer;
    cfg.seed = opt.seed;
    cfg.validate();
    return cfg;
}

int cmd_train(const Options& opt, std::ostream& out) {
    TrainConfig cfg = config_from(opt);
    if (!(opt.test_split > 0.0 && opt.test_split < 1.0)) {
        throw Error(ErrorKind::usage, "--test-split must be in (0, 1)");
    }
    out << "Loading data...\n";
    const Dataset dataset = load_dataset(opt.data);
    out << "Data loaded.\n";

    if (!opt.grid.empty()) {
        const auto grid = parse_grid(read_text_file(opt.grid), cfg);
        const std::size_t k = opt.cv > 0 ? opt.cv : 5;
        const Split split = stratified_split(dataset, opt.test_split, cfg.seed);
        const auto result = grid_search(split.train, grid, k);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out << fmt::format("Grid {}: mean CV accuracy {:.4f}{}\n", i, result.table[i].mean_accuracy,
                               i == result.best_index ? " (best)" : "");
        }
        cfg = result.best;
    } else if (opt.cv > 0) {
        const Split split = stratified_split(dataset, opt.test_split, cfg.seed);
        const auto cv = cross_validate(split.train, cfg, opt.cv);
        for (std::size_t i = 0; i < cv.fold_accuracy.size(); ++i) {
            out << fmt::format("Fold {}: accuracy {:.4f}\n", i, cv.fold_accuracy[i]);
        }
        out << fmt::format("Mean CV accuracy: {:.4f}\n", cv.mean_accuracy);
    }

    Evaluation evaluation{ConfusionMatrix(dataset.labels()), {}};
    const TrainedModel model = fit_and_report(dataset, opt.test_split, cfg, evaluation);
    save_model(model, opt.model_dir);
    out << "Model, vectorizer, and label_to_index saved.\n";
    write_outputs(evaluation, opt, out);
    return kExitOk;
}

int cmd_evaluate(const Options& opt, std::ostream& out) {
    const TrainedModel model = load_model(opt.model_dir);
    const Dataset dataset = load_dataset(opt.data, model.labels());
    write_outputs(evaluate_on(model, dataset), opt, out);
    return kExitOk;
}

int cmd_classify(const Options& opt, std::ostream& out) {
    const TrainedModel model = load_model(opt.model_dir);
    const auto scores = model.predict_scores(vectorize(read_source(opt.path), model.vocabulary()));
    const std::size_t best = argmax(scores);
    out << fmt::format("{}\t{:.4f}\n", model.labels().name(best), scores[best]);
    for (std::size_t k = 0; k < scores.size(); ++k) {
        out << fmt::format("  {:.4f}  {}\n", scores[k], model.labels().name(k));
    }
    return kExitOk;
}

int cmd_lint(const Options& opt, std::ostream& out) {
    const auto findings = run_rules(tokenize(read_source(opt.path)));
    for (const auto& f : findings) {
        out << render_finding(f) << '\n';
    }
    return kExitOk;
}

std::vector<std::string> split_categories(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        std::string item = text.substr(start, comma - start);
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first != std::string::npos) {
            out.push_back(item.substr(first, last - first + 1));
        }
        start = comma + 1;
    }
    return out;
}

int cmd_check(const Options& opt, std::ostream& out) {
    const TrainedModel model = load_model(opt.model_dir);
    const auto gate = split_categories(opt.fail_on);
    for (const auto& name : gate) {
        if (!model.labels().contains(name)) {
            throw Error(ErrorKind::usage, fmt::format("unknown category '{}' in --fail-on", name));
        }
    }
    const Verdict verdict = check(read_source(opt.path), model);
    out << render_verdict(verdict);
    return std::find(gate.begin(), gate.end(), verdict.category) != gate.end() ? kExitGate : kExitOk;
}

int cmd_retrain(const Options& opt, std::ostream& out) {
    if (fs::exists(opt.out_model_dir) && fs::exists(opt.model_dir) &&
        fs::equivalent(opt.out_model_dir, opt.model_dir)) {
        throw Error(ErrorKind::usage, "--out-model-dir must differ from --model-dir");
    }
    const TrainedModel previous = load_model(opt.model_dir);
    const Dataset dataset = load_dataset(opt.data, previous.labels());
    const auto corrected = apply_corrections(dataset, load_corrections(opt.corrections));

    fs::create_directories(opt.out_model_dir);
    const fs::path updated =
        opt.updated_data.empty() ? fs::path(opt.out_model_dir) / "updated_data.json" : fs::path(opt.updated_data);
    save_dataset(corrected.dataset, updated);
    out << "Updated data saved.\n";

    TrainConfig cfg = previous.config();
    if (opt.seed_override) {
        cfg.seed = *opt.seed_override;
    }
    Evaluation evaluation{ConfusionMatrix(previous.labels()), {}};
    const TrainedModel model =
        fit_and_report(corrected.dataset, previous.metadata().test_fraction, cfg, evaluation);
    save_model(model, opt.out_model_dir);
    out << "Model, vectorizer, and label_to_index saved.\n";
    out << "Model retrained and saved with updated classifications.\n";
    write_outputs(evaluation, opt, out);
    return kExitOk;
}

int exit_code(ErrorKind kind) { return kind == ErrorKind::usage ? kExitUsage : kExitRuntime; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Python code defect triage: lint rules plus a learned classifier"};
    app.require_subcommand(1);
    Options opt;

    auto* generate = app.add_subcommand("generate", "Build a labelled corpus by mutating clean snippets");
    generate->add_option("--clean-pool", opt.clean_pool, "Directory of clean *.py files")->required();
    generate->add_option("--per-class", opt.per_class, "Snippets per category")->required()->check(CLI::PositiveNumber);
    generate->add_option("--seed", opt.seed, "Random seed");
    generate->add_option("--out", opt.out, "Output dataset file")->required();

    auto* synth = app.add_subcommand("synth-pool", "Write synthetic clean snippets to a directory");
    synth->add_option("--count", opt.count, "Number of snippets")->required()->check(CLI::PositiveNumber);
    synth->add_option("--seed", opt.seed, "Random seed");
    synth->add_option("--out", opt.out, "Output directory")->required();

    auto add_hyper = [&opt](CLI::App* cmd) {
        cmd->add_option("--classifier", opt.classifier, "gbt or nb")->check(CLI::IsMember({"gbt", "nb"}));
        cmd->add_option("--rounds", opt.gbt.rounds, "Boosting rounds");
        cmd->add_option("--max-depth", opt.gbt.max_depth, "Tree depth");
        cmd->add_option("--learning-rate", opt.gbt.learning_rate, "Shrinkage");
        cmd->add_option("--min-samples-leaf", opt.gbt.min_samples_leaf, "Minimum samples per leaf");
        cmd->add_option("--alpha", opt.nb.alpha, "Naive Bayes smoothing");
        cmd->add_option("--min-df", opt.vectorizer.min_df, "Minimum document frequency");
    };

    auto* train = app.add_subcommand("train", "Train a model and report held-out metrics");
    train->add_option("--data", opt.data, "Dataset file")->required();
    train->add_option("--model-dir", opt.model_dir, "Output model directory")->required();
    add_hyper(train);
    train->add_option("--test-split", opt.test_split, "Held-out fraction");
    train->add_option("--seed", opt.seed, "Random seed");
    train->add_option("--grid-search", opt.grid, "JSON array of configurations to compare by CV");
    train->add_option("--cv", opt.cv, "Cross-validation folds")->check(CLI::Range(2, 1000));
    train->add_option("--report", opt.report, "Report output file");
    train->add_option("--confusion", opt.confusion, "Confusion matrix CSV output file");

    auto* evaluate = app.add_subcommand("evaluate", "Score a saved model on a dataset");
    evaluate->add_option("--model-dir", opt.model_dir, "Model directory")->required();
    evaluate->add_option("--data", opt.data, "Dataset file")->required();
    evaluate->add_option("--report", opt.report, "Report output file");
    evaluate->add_option("--confusion", opt.confusion, "Confusion matrix CSV output file");

    auto* classify = app.add_subcommand("classify", "Model prediction for one source file");
    classify->add_option("--model-dir", opt.model_dir, "Model directory")->required();
    classify->add_option("path", opt.path, "Python source file")->required();

    auto* lint = app.add_subcommand("lint", "Run the rule catalog on one source file");
    lint->add_option("path", opt.path, "Python source file")->required();

    auto* check_cmd = app.add_subcommand("check", "Fused verdict with a quality gate");
    check_cmd->add_option("--model-dir", opt.model_dir, "Model directory")->required();
    check_cmd->add_option("path", opt.path, "Python source file")->required();
    check_cmd->add_option("--fail-on", opt.fail_on, "Comma-separated categories that fail the gate");

    auto* retrain = app.add_subcommand("retrain", "Apply label corrections and retrain from scratch");
    retrain->add_option("--model-dir", opt.model_dir, "Existing model directory")->required();
    retrain->add_option("--data", opt.data, "Dataset file")->required();
    retrain->add_option("--corrections", opt.corrections, "Corrections file")->required();
    retrain->add_option("--out-model-dir", opt.out_model_dir, "Output model directory")->required();
    retrain->add_option("--report", opt.report, "Report output file");
    retrain->add_option("--confusion", opt.confusion, "Confusion matrix CSV output file");
    retrain->add_option("--updated-data", opt.updated_data, "Where to save the corrected dataset");
    retrain->add_option("--seed", opt.seed_override, "Override the recorded seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*generate) return cmd_generate(opt, out);
        if (*synth) return cmd_synth_pool(opt, out);
        if (*train) return cmd_train(opt, out);
        if (*evaluate) return cmd_evaluate(opt, out);
        if (*classify) return cmd_classify(opt, out);
        if (*lint) return cmd_lint(opt, out);
        if (*check_cmd) return cmd_check(opt, out);
        if (*retrain) return cmd_retrain(opt, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace triage
