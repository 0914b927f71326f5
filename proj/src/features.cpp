#include "triage/features.hpp"

#include "triage/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace triage {

namespace {

constexpr std::array<std::string_view, 11> kHeaderKeywords = {"def",  "class", "if",     "elif",    "else", "for",
                                                              "while", "try",  "except", "finally", "with"};

std::optional<std::string> unigram(const Token& t) {
    switch (t.kind) {
        case TokenKind::identifier:
        case TokenKind::keyword:
        case TokenKind::op:
        case TokenKind::punctuation:
            return t.text;
        case TokenKind::string:
            return std::string(kStringTerm);
        case TokenKind::number:
            return std::string(kNumberTerm);
        default:
            return std::nullopt;
    }
}

bool has_imbalance(std::span<const Token> tokens) {
    std::vector<char> stack;
    for (const Token& t : tokens) {
        if (t.malformed) {
            return true;
        }
        if (t.kind != TokenKind::punctuation || t.text.size() != 1) {
            continue;
        }
        const char c = t.text[0];
        if (c == '(' || c == '[' || c == '{') {
            stack.push_back(c);
        } else if (c == ')' || c == ']' || c == '}') {
            const char expected = c == ')' ? '(' : c == ']' ? '[' : '{';
            if (stack.empty() || stack.back() != expected) {
                return true;
            }
            stack.pop_back();
        }
    }
    return !stack.empty();
}

void append_structure_terms(std::span<const Token> tokens, std::vector<std::string>& terms) {
    for (const auto& line : logical_lines(tokens)) {
        const Token& head = tokens[line.first];
        if (head.kind != TokenKind::keyword) {
            continue;
        }
        terms.push_back(fmt::format("ctx:{}>{}", line.enclosing.empty() ? "top" : line.enclosing, head.text));
        if (std::find(kHeaderKeywords.begin(), kHeaderKeywords.end(), head.text) != kHeaderKeywords.end()) {
            if (auto tail = unigram(tokens[line.last - 1])) {
                terms.push_back(fmt::format("hdr:{}>{}", head.text, *tail));
            }
        }
    }
    if (has_imbalance(tokens)) {
        terms.emplace_back(kUnbalancedTerm);
    }
}

}  // namespace

std::vector<std::string> extract_terms(std::span<const Token> tokens, const VectorizerOptions& options) {
    std::vector<std::string> terms;
    for (const Token& t : tokens) {
        if (auto term = unigram(t)) {
            terms.push_back(std::move(*term));
        }
    }
    if (options.bigrams) {
        const std::size_t unigrams = terms.size();
        for (std::size_t i = 1; i < unigrams; ++i) {
            terms.push_back(terms[i - 1] + " " + terms[i]);
        }
    }
    if (options.structure_terms) {
        append_structure_terms(tokens, terms);
    }
    return terms;
}

Vocabulary::Vocabulary(std::vector<Entry> entries, std::size_t n_documents, VectorizerOptions options)
    : entries_(std::move(entries)), n_documents_(n_documents), options_(options) {
    if (options_.min_df < 1) {
        throw Error(ErrorKind::usage, "min_df must be at least 1");
    }
    idf_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& entry = entries_[i];
        if (entry.document_frequency < 1 || entry.document_frequency > n_documents_) {
            throw Error(ErrorKind::format,
                        fmt::format("term '{}' has document frequency {} outside [1, {}]", entry.term,
                                    entry.document_frequency, n_documents_));
        }
        if (!index_.emplace(entry.term, i).second) {
            throw Error(ErrorKind::format, fmt::format("duplicate vocabulary term '{}'", entry.term));
        }
        idf_.push_back(std::log((1.0 + static_cast<double>(n_documents_)) /
                                (1.0 + static_cast<double>(entry.document_frequency))) +
                       1.0);
    }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Vocabulary fit_vocabulary_terms(std::span<const std::vector<std::string>> documents, const VectorizerOptions& options) {
    if (documents.empty()) {
        throw Error(ErrorKind::data, "cannot fit a vocabulary on an empty corpus");
    }
    if (options.min_df < 1) {
        throw Error(ErrorKind::usage, "min_df must be at least 1");
    }
    struct Seen {
        std::size_t df = 0;
        std::size_t last_document = 0;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, Seen> seen;
    for (std::size_t d = 0; d < documents.size(); ++d) {
        for (const auto& term : documents[d]) {
            auto [it, inserted] = seen.try_emplace(term);
            if (inserted) {
                order.push_back(term);
            }
            if (inserted || it->second.last_document != d + 1) {
                ++it->second.df;
                it->second.last_document = d + 1;
            }
        }
    }
    std::vector<Vocabulary::Entry> entries;
    for (const auto& term : order) {
        const std::size_t df = seen.at(term).df;
        if (df >= options.min_df) {
            entries.push_back({term, df});
        }
    }
    if (entries.empty()) {
        throw Error(ErrorKind::data, fmt::format("vocabulary is empty after min_df={} filtering", options.min_df));
    }
    return Vocabulary(std::move(entries), documents.size(), options);
}

Vocabulary fit_vocabulary(std::span<const std::vector<Token>> corpus, const VectorizerOptions& options) {
    std::vector<std::vector<std::string>> documents;
    documents.reserve(corpus.size());
    for (const auto& tokens : corpus) {
        documents.push_back(extract_terms(tokens, options));
    }
    return fit_vocabulary_terms(documents, options);
}

double FeatureVector::weight(std::size_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const FeatureEntry& e, std::size_t i) { return e.index < i; });
    return it != entries.end() && it->index == index ? it->weight : 0.0;
}

double FeatureVector::norm() const {
    double sum = 0.0;
    for (const auto& e : entries) {
        sum += e.weight * e.weight;
    }
    return std::sqrt(sum);
}

FeatureVector transform_terms(std::span<const std::string> terms, const Vocabulary& vocabulary) {
    std::map<std::size_t, double> counts;
    for (const auto& term : terms) {
        if (auto index = vocabulary.index_of(term)) {
            counts[*index] += 1.0;
        }
    }
    FeatureVector out;
    out.dimension = vocabulary.size();
    out.entries.reserve(counts.size());
    double squared = 0.0;
    for (const auto& [index, count] : counts) {
        const double w = count * vocabulary.idf(index);
        out.entries.push_back({index, w, count});
        squared += w * w;
    }
    if (squared > 0.0) {
        const double norm = std::sqrt(squared);
        for (auto& e : out.entries) {
            e.weight /= norm;
        }
    }
    return out;
}

FeatureVector transform(std::span<const Token> tokens, const Vocabulary& vocabulary) {
    const auto terms = extract_terms(tokens, vocabulary.options());
    return transform_terms(terms, vocabulary);
}

FeatureVector vectorize(std::string_view code, const Vocabulary& vocabulary) {
    const auto tokens = tokenize(code);
    return transform(tokens, vocabulary);
}

}  // namespace triage
