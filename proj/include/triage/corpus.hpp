#pragma once

#include "triage/labels.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace triage {

/// Content-derived identifier: 16 lowercase hex digits of FNV-1a over the code bytes.
std::string snippet_id(std::string_view code);

struct CodeSnippet {
    std::string id;
    std::string code;
    std::string classification;

    static CodeSnippet make(std::string code, std::string classification);

    friend bool operator==(const CodeSnippet&, const CodeSnippet&) = default;
};

/// Ordered collection of labelled snippets. Construction validates that every
/// label belongs to the label set, every code body is non-blank and ids are
/// unique; a Dataset is never mutated afterwards.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<CodeSnippet> snippets, LabelSet labels);

    const std::vector<CodeSnippet>& snippets() const noexcept { return snippets_; }
    const LabelSet& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return snippets_.size(); }
    bool empty() const noexcept { return snippets_.empty(); }
    const CodeSnippet& operator[](std::size_t i) const { return snippets_[i]; }

    /// Class index of each snippet, in order.
    std::vector<std::size_t> label_indices() const;
    /// Sample count per class index.
    std::vector<std::size_t> class_counts() const;
    /// Stable hash over ids and labels, recorded in trained models.
    std::string fingerprint() const;

    Dataset subset(const std::vector<std::size_t>& indices) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<CodeSnippet> snippets_;
    LabelSet labels_;
};

/// Reads an array of {"code", "classification"[, "id"]} records. Without an
/// explicit label set, the set is the union of labels found: names from the
/// default set first in default order, then unknown names in first-seen order.
Dataset load_dataset(const std::filesystem::path& path, const std::optional<LabelSet>& labels = std::nullopt);
Dataset parse_dataset(std::string_view json_text, const std::optional<LabelSet>& labels = std::nullopt);

void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string serialize_dataset(const Dataset& dataset);

struct Split {
    Dataset train;
    Dataset test;
};

/// Per class, the test share is round(count * test_fraction) clamped to
/// [1, count - 1]. Each class is shuffled with a seed derived from `seed`,
/// and both halves keep the original record order.
Split stratified_split(const Dataset& dataset, double test_fraction, std::uint64_t seed);

struct Correction {
    std::string id;
    std::string classification;
};

std::vector<Correction> load_corrections(const std::filesystem::path& path);
std::vector<Correction> parse_corrections(std::string_view json_text);

struct CorrectionResult {
    Dataset dataset;
    std::size_t changed = 0;
};

CorrectionResult apply_corrections(const Dataset& dataset, const std::vector<Correction>& corrections);

/// Reads every `*.py` file directly under `dir` (sorted by file name) as a
/// Correct Code snippet.
std::vector<CodeSnippet> load_clean_pool(const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace triage
