#pragma once

#include "triage/lexer.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace triage {

inline constexpr std::string_view kStringTerm = "<STR>";
inline constexpr std::string_view kNumberTerm = "<NUM>";
inline constexpr std::string_view kUnbalancedTerm = "<UNBALANCED>";

struct VectorizerOptions {
    std::size_t min_df = 2;
    /// Adjacent pairs of unigram terms, joined by a space.
    bool bigrams = true;
    /// Block-context terms (`ctx:for>return`), header-shape terms
    /// (`hdr:def>)`) and the bracket-imbalance marker.
    bool structure_terms = true;

    friend bool operator==(const VectorizerOptions&, const VectorizerOptions&) = default;
};

/// Term sequence for one token stream: unigrams in stream order, then
/// bigrams, then structure terms. Literal strings and numbers collapse to
/// placeholders; comments and layout tokens are dropped.
std::vector<std::string> extract_terms(std::span<const Token> tokens, const VectorizerOptions& options);

/// Fitted term dictionary with smoothed inverse document frequencies:
/// idf(t) = ln((1 + N) / (1 + df(t))) + 1.
class Vocabulary {
public:
    Vocabulary() = default;

    struct Entry {
        std::string term;
        std::size_t document_frequency;
    };

    /// Rebuilds a vocabulary from persisted state. Throws on inconsistent input.
    Vocabulary(std::vector<Entry> entries, std::size_t n_documents, VectorizerOptions options);

    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t n_documents() const noexcept { return n_documents_; }
    const VectorizerOptions& options() const noexcept { return options_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }

    std::optional<std::size_t> index_of(std::string_view term) const;
    const std::string& term(std::size_t index) const { return entries_.at(index).term; }
    std::size_t document_frequency(std::size_t index) const { return entries_.at(index).document_frequency; }
    double idf(std::size_t index) const { return idf_.at(index); }

private:
    std::vector<Entry> entries_;
    std::vector<double> idf_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t n_documents_ = 0;
    VectorizerOptions options_;
};

/// Indices are assigned in first-seen order over the corpus; terms appearing
/// in fewer than `options.min_df` documents are dropped.
Vocabulary fit_vocabulary(std::span<const std::vector<Token>> corpus, const VectorizerOptions& options);
Vocabulary fit_vocabulary_terms(std::span<const std::vector<std::string>> documents, const VectorizerOptions& options);

struct FeatureEntry {
    std::size_t index;
    double weight;  // L2-normalised tf-idf
    double count;   // raw term count

    friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

/// Sparse vector with entries sorted by index.
struct FeatureVector {
    std::size_t dimension = 0;
    std::vector<FeatureEntry> entries;

    double weight(std::size_t index) const;
    double norm() const;
    bool is_zero() const { return entries.empty(); }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

FeatureVector transform(std::span<const Token> tokens, const Vocabulary& vocabulary);
FeatureVector transform_terms(std::span<const std::string> terms, const Vocabulary& vocabulary);

/// Tokenize + transform.
FeatureVector vectorize(std::string_view code, const Vocabulary& vocabulary);

}  // namespace triage
