#pragma once

#include "triage/corpus.hpp"
#include "triage/lexer.hpp"
#include "triage/random.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace triage {

/// Tokenized snippet plus the line geometry the rewrites need.
class SourceView {
public:
    explicit SourceView(std::string code);

    const std::string& code() const noexcept { return code_; }
    const std::vector<Token>& tokens() const noexcept { return tokens_; }
    const std::vector<LogicalLine>& lines() const noexcept { return lines_; }

    const Token& head(std::size_t line) const { return tokens_[lines_[line].first]; }
    /// Byte offset where the physical line holding the logical line's first token begins.
    std::size_t line_start(std::size_t line) const;
    /// Leading whitespace of that physical line.
    std::string indent_of(std::size_t line) const;

    /// Logical lines before which a new statement may be inserted without
    /// breaking block structure.
    std::vector<std::size_t> insertion_sites() const;
    /// Parameter names of every `def` (excluding self/cls), in order of appearance.
    std::vector<std::string> parameter_names() const;

    /// Index of the first logical line after `line`'s block with depth <= its depth.
    std::size_t block_end(std::size_t line) const;

private:
    std::string code_;
    std::vector<Token> tokens_;
    std::vector<LogicalLine> lines_;
};

/// Deterministic defect injector. `applicable` is a pure predicate; `rewrite`
/// is only called on applicable sources and must change the text.
struct MutationOperator {
    std::string name;
    std::string target_label;
    std::function<bool(const SourceView&)> applicable;
    std::function<std::string(const SourceView&, Rng&)> rewrite;
};

std::span<const MutationOperator> mutation_catalog();
const MutationOperator& find_operator(std::string_view name);
std::vector<const MutationOperator*> operators_for(std::string_view label);

/// Applies `op` with a generator seeded from `seed`. Throws if not applicable.
std::string apply_operator(const MutationOperator& op, std::string_view code, std::uint64_t seed);

struct GeneratedSnippet {
    CodeSnippet snippet;
    std::string operator_name;  // empty for unmutated Correct Code samples
    std::size_t source_index;   // position in the clean pool
};

/// `per_class` samples for every label. Correct Code samples are distinct pool
/// members taken unmutated; every other label applies one of its operators to
/// a pool member. Sample i of class c is drawn from a generator seeded by
/// derive_seed(derive_seed(seed, c), i), advancing an attempt counter when a
/// candidate is inapplicable, duplicates an earlier id, or trips a definite
/// lint rule of another category.
std::vector<GeneratedSnippet> generate_corpus_detailed(std::span<const CodeSnippet> clean_pool, std::size_t per_class,
                                                       const LabelSet& labels, std::uint64_t seed);
Dataset generate_corpus(std::span<const CodeSnippet> clean_pool, std::size_t per_class, const LabelSet& labels,
                        std::uint64_t seed);

/// Template-based generator of small, syntactically clean Python functions,
/// classes and import blocks. Returns `count` snippets with distinct ids.
std::vector<CodeSnippet> synthesize_clean_pool(std::size_t count, std::uint64_t seed);

}  // namespace triage
