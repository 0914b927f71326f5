#include "triage/lint.hpp"

#include "triage/error.hpp"
#include "triage/labels.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <optional>

namespace triage {

namespace {

constexpr std::array<RuleInfo, 6> kCatalog = {{
    {"R001", "PY2_PRINT_STATEMENT", category::compatibility, Certainty::definite},
    {"R002", "PY2_EXEC_STATEMENT", category::compatibility, Certainty::definite},
    {"R003", "RETURN_IN_LOOP_BODY", category::performance, Certainty::advisory},
    {"R004", "OPEN_LITERAL_PATH", category::runtime_error, Certainty::advisory},
    {"R005", "INDENT_OR_DELIMITER_IMBALANCE", category::syntax_error, Certainty::definite},
    {"R006", "EVAL_OR_EXEC_CALL_ON_INPUT", category::security, Certainty::advisory},
}};

constexpr std::array<std::string_view, 11> kCompoundHeaders = {"def",  "class", "if",     "elif",    "else", "for",
                                                               "while", "try",  "except", "finally", "with"};

bool is_compound_header(std::string_view word) {
    return std::find(kCompoundHeaders.begin(), kCompoundHeaders.end(), word) != kCompoundHeaders.end();
}

class RuleRunner {
public:
    explicit RuleRunner(std::span<const Token> tokens) : tokens_(tokens), lines_(logical_lines(tokens)) {}

    std::vector<Finding> run() {
        statements();
        return_in_loop();
        literal_open();
        eval_on_input();
        balance();
        std::stable_sort(findings_.begin(), findings_.end(), [](const Finding& a, const Finding& b) {
            return a.line != b.line ? a.line < b.line : a.rule_id < b.rule_id;
        });
        return std::move(findings_);
    }

private:
    void add(std::string_view rule, std::size_t line, std::string message) {
        const RuleInfo& info = rule_info(rule);
        findings_.push_back({std::string(rule), std::move(message), line, std::string(info.category), info.certainty});
    }

    std::optional<std::size_t> next_significant(std::size_t i) const {
        for (std::size_t j = i + 1; j < tokens_.size(); ++j) {
            if (tokens_[j].kind != TokenKind::comment) {
                return j;
            }
        }
        return std::nullopt;
    }

    // Index of the bracket closing the one at `open`, or tokens_.size().
    std::size_t matching_close(std::size_t open) const {
        std::size_t depth = 0;
        for (std::size_t j = open; j < tokens_.size(); ++j) {
            const Token& t = tokens_[j];
            if (t.kind != TokenKind::punctuation) {
                continue;
            }
            if (t.text == "(" || t.text == "[" || t.text == "{") {
                ++depth;
            } else if (t.text == ")" || t.text == "]" || t.text == "}") {
                if (--depth == 0) {
                    return j;
                }
            }
        }
        return tokens_.size();
    }

    // R001, R002
    void statements() {
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            const Token& t = tokens_[i];
            if (t.is(TokenKind::keyword, "print")) {
                add("R001", t.line, "print used as a statement (Python 2 syntax)");
            } else if (t.is(TokenKind::keyword, "exec")) {
                auto next = next_significant(i);
                if (next && tokens_[*next].kind == TokenKind::string) {
                    add("R002", t.line, "exec used as a statement (Python 2 syntax)");
                }
            }
        }
    }

    // R003: `return` directly inside a for/while body, including the
    // one-line form `for x in xs: return x`.
    void return_in_loop() {
        for (const auto& line : lines_) {
            const Token& head = tokens_[line.first];
            if (head.is(TokenKind::keyword, "return") && (line.enclosing == "for" || line.enclosing == "while")) {
                add("R003", head.line, fmt::format("return inside the body of a {} loop ends it on the first pass",
                                                   line.enclosing));
                continue;
            }
            if (head.is(TokenKind::keyword, "for") || head.is(TokenKind::keyword, "while")) {
                std::size_t depth = 0;
                bool after_colon = false;
                for (std::size_t j = line.first; j < line.last; ++j) {
                    const Token& t = tokens_[j];
                    if (t.kind == TokenKind::punctuation) {
                        if (t.text == "(" || t.text == "[" || t.text == "{") {
                            ++depth;
                        } else if ((t.text == ")" || t.text == "]" || t.text == "}") && depth > 0) {
                            --depth;
                        } else if (t.text == ":" && depth == 0 && !after_colon) {
                            after_colon = true;
                            if (j + 1 < line.last && tokens_[j + 1].is(TokenKind::keyword, "return")) {
                                add("R003", tokens_[j + 1].line,
                                    fmt::format("return inside the body of a {} loop ends it on the first pass",
                                                head.text));
                            }
                        }
                    }
                }
            }
        }
    }

    // R004
    void literal_open() {
        for (std::size_t i = 0; i + 2 < tokens_.size(); ++i) {
            const Token& t = tokens_[i];
            if (t.is(TokenKind::identifier, "open") && tokens_[i + 1].is(TokenKind::punctuation, "(") &&
                tokens_[i + 2].kind == TokenKind::string) {
                add("R004", t.line, fmt::format("open() on hard-coded path {} may fail at runtime", tokens_[i + 2].text));
            }
        }
    }

    // R006
    void eval_on_input() {
        for (std::size_t i = 0; i + 1 < tokens_.size(); ++i) {
            const Token& t = tokens_[i];
            if (t.kind != TokenKind::identifier || (t.text != "eval" && t.text != "exec") ||
                !tokens_[i + 1].is(TokenKind::punctuation, "(")) {
                continue;
            }
            const std::size_t close = matching_close(i + 1);
            for (std::size_t j = i + 2; j < close; ++j) {
                const Token& arg = tokens_[j];
                if (arg.kind == TokenKind::identifier &&
                    (arg.text == "input" || arg.text == "raw_input" || arg.text == "stdin" || arg.text == "argv")) {
                    add("R006", t.line, fmt::format("{}() evaluates external input", t.text));
                    break;
                }
            }
        }
    }

    // R005: bracket mismatches, unterminated strings, broken indentation and
    // compound statements without a colon.
    void balance() {
        struct Open {
            char bracket;
            std::size_t line;
        };
        std::vector<Open> stack;
        for (const Token& t : tokens_) {
            if (t.malformed && t.kind == TokenKind::string) {
                add("R005", t.line, "unterminated string literal");
            } else if (t.malformed && t.kind == TokenKind::dedent) {
                add("R005", t.line, "dedent does not match any outer indentation level");
            }
            if (t.kind != TokenKind::punctuation || t.text.size() != 1) {
                continue;
            }
            const char c = t.text[0];
            if (c == '(' || c == '[' || c == '{') {
                stack.push_back({c, t.line});
            } else if (c == ')' || c == ']' || c == '}') {
                const char expected = c == ')' ? '(' : c == ']' ? '[' : '{';
                if (stack.empty()) {
                    add("R005", t.line, fmt::format("unmatched '{}'", c));
                } else if (stack.back().bracket != expected) {
                    add("R005", t.line, fmt::format("'{}' does not match '{}' opened on line {}", c,
                                                    stack.back().bracket, stack.back().line));
                    stack.pop_back();
                } else {
                    stack.pop_back();
                }
            }
        }
        for (const auto& open : stack) {
            add("R005", open.line, fmt::format("'{}' is never closed", open.bracket));
        }

        for (std::size_t n = 0; n < lines_.size(); ++n) {
            const auto& line = lines_[n];
            const Token& head = tokens_[line.first];
            std::string_view keyword;
            if (head.kind == TokenKind::keyword) {
                keyword = head.text;
                if (keyword == "async" && line.first + 1 < line.last) {
                    keyword = tokens_[line.first + 1].text;
                }
            }
            const bool ends_with_colon = tokens_[line.last - 1].is(TokenKind::punctuation, ":");
            if (is_compound_header(keyword) && !has_top_level_colon(line)) {
                add("R005", head.line, fmt::format("'{}' statement is missing its ':'", keyword));
            }
            if (line.opens_block && !ends_with_colon) {
                const std::size_t next_line = n + 1 < lines_.size() ? tokens_[lines_[n + 1].first].line : head.line;
                add("R005", next_line, "unexpected indent");
            }
            if (ends_with_colon && !line.opens_block) {
                add("R005", head.line, "expected an indented block");
            }
        }
        // Indentation before the first statement.
        for (const Token& t : tokens_) {
            if (t.kind == TokenKind::comment) {
                continue;
            }
            if (t.kind == TokenKind::indent) {
                add("R005", t.line, "unexpected indent");
            }
            break;
        }
    }

    bool has_top_level_colon(const LogicalLine& line) const {
        std::size_t depth = 0;
        for (std::size_t j = line.first; j < line.last; ++j) {
            const Token& t = tokens_[j];
            if (t.kind != TokenKind::punctuation) {
                continue;
            }
            if (t.text == "(" || t.text == "[" || t.text == "{") {
                ++depth;
            } else if ((t.text == ")" || t.text == "]" || t.text == "}") && depth > 0) {
                --depth;
            } else if (t.text == ":" && depth == 0) {
                return true;
            }
        }
        return false;
    }

    std::span<const Token> tokens_;
    std::vector<LogicalLine> lines_;
    std::vector<Finding> findings_;
};

}  // namespace

std::string_view certainty_name(Certainty certainty) {
    return certainty == Certainty::definite ? "definite" : "advisory";
}

std::span<const RuleInfo> rule_catalog() {
    return kCatalog;
}

const RuleInfo& rule_info(std::string_view id) {
    for (const auto& info : kCatalog) {
        if (info.id == id) {
            return info;
        }
    }
    throw Error(ErrorKind::data, fmt::format("unknown rule '{}'", id));
}

std::vector<Finding> run_rules(std::span<const Token> tokens) {
    return RuleRunner(tokens).run();
}

std::string render_finding(const Finding& finding) {
    return fmt::format("{}:{}:{}:{}", finding.line, finding.rule_id, finding.category, finding.message);
}

}  // namespace triage
