#include "triage/corpus.hpp"

#include "triage/error.hpp"
#include "triage/random.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace triage {

using ordered_json = nlohmann::ordered_json;

namespace {

bool is_blank(std::string_view text) {
    return std::all_of(text.begin(), text.end(),
                       [](unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; });
}

LabelSet infer_labels(const std::vector<std::string>& seen) {
    const LabelSet defaults = LabelSet::default_set();
    std::vector<std::string> names;
    for (const auto& name : defaults.names()) {
        if (std::find(seen.begin(), seen.end(), name) != seen.end()) {
            names.push_back(name);
        }
    }
    for (const auto& name : seen) {
        if (!defaults.contains(name) && std::find(names.begin(), names.end(), name) == names.end()) {
            names.push_back(name);
        }
    }
    return LabelSet(std::move(names));
}

}  // namespace

std::string snippet_id(std::string_view code) {
    return fmt::format("{:016x}", fnv1a64(code));
}

CodeSnippet CodeSnippet::make(std::string code, std::string classification) {
    CodeSnippet snippet;
    snippet.id = snippet_id(code);
    snippet.code = std::move(code);
    snippet.classification = std::move(classification);
    return snippet;
}

Dataset::Dataset(std::vector<CodeSnippet> snippets, LabelSet labels)
    : snippets_(std::move(snippets)), labels_(std::move(labels)) {
    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < snippets_.size(); ++i) {
        const auto& s = snippets_[i];
        if (is_blank(s.code)) {
            throw Error(ErrorKind::data, fmt::format("record {}: code is empty", i));
        }
        if (!labels_.contains(s.classification)) {
            throw Error(ErrorKind::data, fmt::format("record {}: unknown label '{}'", i, s.classification));
        }
        if (s.id != snippet_id(s.code)) {
            throw Error(ErrorKind::data, fmt::format("record {}: id '{}' does not match its code", i, s.id));
        }
        if (!ids.insert(s.id).second) {
            throw Error(ErrorKind::data, fmt::format("record {}: duplicate id '{}'", i, s.id));
        }
    }
}

std::vector<std::size_t> Dataset::label_indices() const {
    std::vector<std::size_t> out;
    out.reserve(snippets_.size());
    for (const auto& s : snippets_) {
        out.push_back(labels_.require(s.classification));
    }
    return out;
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(labels_.size(), 0);
    for (const auto& s : snippets_) {
        ++counts[labels_.require(s.classification)];
    }
    return counts;
}

std::string Dataset::fingerprint() const {
    std::string buffer;
    for (const auto& s : snippets_) {
        buffer += s.id;
        buffer += '\t';
        buffer += s.classification;
        buffer += '\n';
    }
    return fmt::format("{:016x}", fnv1a64(buffer));
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
    std::vector<CodeSnippet> picked;
    picked.reserve(indices.size());
    for (std::size_t i : indices) {
        picked.push_back(snippets_.at(i));
    }
    return Dataset(std::move(picked), labels_);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in || std::filesystem::is_directory(path)) {
        throw Error(ErrorKind::io, fmt::format("cannot read '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::io, fmt::format("cannot write '{}'", path.string()));
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw Error(ErrorKind::io, fmt::format("failed writing '{}'", path.string()));
    }
}

Dataset parse_dataset(std::string_view json_text, const std::optional<LabelSet>& labels) {
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::format, fmt::format("dataset is not valid JSON: {}", e.what()));
    }
    if (!root.is_array()) {
        throw Error(ErrorKind::format, "dataset must be an array of records");
    }

    std::vector<CodeSnippet> snippets;
    std::vector<std::string> seen_labels;
    std::unordered_map<std::string, std::size_t> first_index;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const auto& record = root[i];
        if (!record.is_object()) {
            throw Error(ErrorKind::format, fmt::format("record {}: not an object", i));
        }
        for (const char* field : {"code", "classification"}) {
            if (!record.contains(field)) {
                throw Error(ErrorKind::format, fmt::format("record {}: missing {}", i, field));
            }
            if (!record[field].is_string()) {
                throw Error(ErrorKind::format, fmt::format("record {}: {} is not a string", i, field));
            }
        }
        auto snippet = CodeSnippet::make(record["code"].get<std::string>(), record["classification"].get<std::string>());
        if (record.contains("id")) {
            if (!record["id"].is_string()) {
                throw Error(ErrorKind::format, fmt::format("record {}: id is not a string", i));
            }
            if (record["id"].get<std::string>() != snippet.id) {
                throw Error(ErrorKind::data, fmt::format("record {}: id does not match its code", i));
            }
        }
        if (is_blank(snippet.code)) {
            throw Error(ErrorKind::data, fmt::format("record {}: code is empty", i));
        }
        if (labels && !labels->contains(snippet.classification)) {
            throw Error(ErrorKind::data, fmt::format("record {}: label '{}' is not in the label set", i,
                                                     snippet.classification));
        }
        // Exact repeats collapse onto the first occurrence.
        if (auto it = first_index.find(snippet.id); it != first_index.end()) {
            if (snippets[it->second].classification != snippet.classification) {
                throw Error(ErrorKind::data, fmt::format("record {}: same code as record {} but labelled '{}'", i,
                                                         it->second, snippet.classification));
            }
            continue;
        }
        first_index.emplace(snippet.id, snippets.size());
        if (std::find(seen_labels.begin(), seen_labels.end(), snippet.classification) == seen_labels.end()) {
            seen_labels.push_back(snippet.classification);
        }
        snippets.push_back(std::move(snippet));
    }

    LabelSet set;
    if (labels) {
        set = *labels;
    } else if (!seen_labels.empty()) {
        set = infer_labels(seen_labels);
    } else {
        set = LabelSet::default_set();
    }
    return Dataset(std::move(snippets), std::move(set));
}

Dataset load_dataset(const std::filesystem::path& path, const std::optional<LabelSet>& labels) {
    if (!std::filesystem::exists(path)) {
        throw Error(ErrorKind::io, fmt::format("dataset file '{}' does not exist", path.string()));
    }
    return parse_dataset(read_text_file(path), labels);
}

std::string serialize_dataset(const Dataset& dataset) {
    ordered_json root = ordered_json::array();
    for (const auto& s : dataset.snippets()) {
        ordered_json record;
        record["code"] = s.code;
        record["classification"] = s.classification;
        record["id"] = s.id;
        root.push_back(std::move(record));
    }
    return root.dump(2) + "\n";
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    write_text_file(path, serialize_dataset(dataset));
}

Split stratified_split(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error(ErrorKind::usage, fmt::format("test fraction must lie in (0, 1), got {}", test_fraction));
    }
    const auto& labels = dataset.labels();
    const auto indices = dataset.label_indices();
    std::vector<std::vector<std::size_t>> members(labels.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        members[indices[i]].push_back(i);
    }

    std::vector<bool> in_test(dataset.size(), false);
    for (std::size_t c = 0; c < labels.size(); ++c) {
        auto& group = members[c];
        if (group.size() < 2) {
            throw Error(ErrorKind::data, fmt::format("class {} has fewer than 2 samples", labels.name(c)));
        }
        auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(group.size()) * test_fraction));
        n_test = std::clamp<std::size_t>(n_test, 1, group.size() - 1);
        Rng rng(derive_seed(seed, c));
        rng.shuffle(std::span<std::size_t>(group));
        for (std::size_t j = 0; j < n_test; ++j) {
            in_test[group[j]] = true;
        }
    }

    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        (in_test[i] ? test_idx : train_idx).push_back(i);
    }
    return Split{dataset.subset(train_idx), dataset.subset(test_idx)};
}

std::vector<Correction> parse_corrections(std::string_view json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::format, fmt::format("corrections file is not valid JSON: {}", e.what()));
    }
    if (!root.is_array()) {
        throw Error(ErrorKind::format, "corrections must be an array of records");
    }
    std::vector<Correction> out;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const auto& record = root[i];
        for (const char* field : {"id", "classification"}) {
            if (!record.is_object() || !record.contains(field) || !record[field].is_string()) {
                throw Error(ErrorKind::format, fmt::format("correction {}: missing {}", i, field));
            }
        }
        out.push_back({record["id"].get<std::string>(), record["classification"].get<std::string>()});
    }
    return out;
}

std::vector<Correction> load_corrections(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw Error(ErrorKind::io, fmt::format("corrections file '{}' does not exist", path.string()));
    }
    return parse_corrections(read_text_file(path));
}

CorrectionResult apply_corrections(const Dataset& dataset, const std::vector<Correction>& corrections) {
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        position.emplace(dataset[i].id, i);
    }
    std::vector<CodeSnippet> snippets = dataset.snippets();
    for (const auto& fix : corrections) {
        auto it = position.find(fix.id);
        if (it == position.end()) {
            throw Error(ErrorKind::data, fmt::format("correction refers to unknown id '{}'", fix.id));
        }
        if (!dataset.labels().contains(fix.classification)) {
            throw Error(ErrorKind::data, fmt::format("correction uses unknown label '{}'", fix.classification));
        }
        snippets[it->second].classification = fix.classification;
    }
    CorrectionResult result;
    for (std::size_t i = 0; i < snippets.size(); ++i) {
        if (snippets[i].classification != dataset[i].classification) {
            ++result.changed;
        }
    }
    result.dataset = Dataset(std::move(snippets), dataset.labels());
    return result;
}

std::vector<CodeSnippet> load_clean_pool(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error(ErrorKind::io, fmt::format("clean pool '{}' is not a directory", dir.string()));
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".py") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<CodeSnippet> pool;
    std::unordered_set<std::string> ids;
    for (const auto& file : files) {
        auto code = read_text_file(file);
        if (is_blank(code)) {
            continue;
        }
        auto snippet = CodeSnippet::make(std::move(code), std::string(category::correct_code));
        if (ids.insert(snippet.id).second) {
            pool.push_back(std::move(snippet));
        }
    }
    return pool;
}

}  // namespace triage
