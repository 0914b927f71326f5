#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace triage {

enum class TokenKind {
    identifier,
    keyword,
    number,
    string,
    op,  // operators, plus any byte the lexer does not recognise
    punctuation,
    newline,
    indent,
    dedent,
    comment,
};

std::string_view kind_name(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::op;
    std::string text;     // exact lexeme; empty for indent/dedent and a synthetic final newline
    std::string leading;  // whitespace, blank lines and line continuations preceding `text`
    std::size_t line = 1;    // 1-based
    std::size_t column = 1;  // 1-based, in bytes
    std::size_t offset = 0;  // byte offset of `text` in the source
    bool malformed = false;  // unterminated string literal or inconsistent dedent

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool is_trivia() const { return kind == TokenKind::comment; }

    friend bool operator==(const Token&, const Token&) = default;
};

/// Lossless tokenizer for Python source. Never fails: bytes it cannot place
/// become single-byte `op` tokens, and broken indentation or unterminated
/// strings are flagged on the affected token instead of raising.
///
/// Newlines inside brackets and on blank or comment-only lines are kept as
/// trivia, so each `newline` token ends one logical line. At end of input a
/// newline is synthesised for an unterminated last line, followed by the
/// dedents that close open blocks.
std::vector<Token> tokenize(std::string_view code);

/// Concatenates `leading + text` over the stream; equals the tokenized input.
std::string reconstruct(std::span<const Token> tokens);

bool is_python_keyword(std::string_view word);

/// One logical line: token range [first, last) without its newline token
/// and without comments at either end.
struct LogicalLine {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t depth = 0;      // number of enclosing indented blocks
    std::string enclosing;      // first keyword of the innermost block header ("" at top level)
    bool opens_block = false;   // followed by an indent token
};

std::vector<LogicalLine> logical_lines(std::span<const Token> tokens);

}  // namespace triage
