#include "triage/lexer.hpp"

#include <algorithm>
#include <array>

namespace triage {

namespace {

constexpr std::array<std::string_view, 35> kKeywords = {
    "False", "None",   "True",    "and",      "as",       "assert", "async", "await",  "break",
    "class", "continue", "def",   "del",      "elif",     "else",   "except", "finally", "for",
    "from",  "global", "if",      "import",   "in",       "is",     "lambda", "nonlocal", "not",
    "or",    "pass",   "raise",   "return",   "try",      "while",  "with",   "yield"};

constexpr std::array<std::string_view, 5> kThreeCharOps = {"**=", "//=", ">>=", "<<=", "..."};
constexpr std::array<std::string_view, 20> kTwoCharOps = {"**", "//", ">>", "<<", "<=", ">=", "==",
                                                          "!=", "->", "+=", "-=", "*=", "/=", "%=",
                                                          "&=", "|=", "^=", "@=", ":=", "<>"};
constexpr std::string_view kOneCharOps = "+-*/%@&|^~<>=";
constexpr std::string_view kPunctuation = "()[]{},:;.";

bool is_ident_start(unsigned char c) { return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80; }
bool is_ident_char(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_string_prefix(std::string_view word) {
    if (word.empty() || word.size() > 2) {
        return false;
    }
    std::string lower;
    for (char c : word) {
        lower += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    }
    return lower == "r" || lower == "u" || lower == "b" || lower == "f" || lower == "br" || lower == "rb" ||
           lower == "fr" || lower == "rf";
}

struct Level {
    std::size_t width;
    bool phantom;  // pushed to absorb an inconsistent dedent; closes without a token
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        while (pos_ < src_.size()) {
            if (line_start_ && depth_ == 0) {
                std::size_t width = 0;
                while (pos_ < src_.size() && (peek() == ' ' || peek() == '\t' || peek() == '\f')) {
                    const char c = peek();
                    width = c == '\t' ? (width / 8 + 1) * 8 : c == '\f' ? 0 : width + 1;
                    take_trivia(1);
                }
                if (pos_ >= src_.size()) {
                    break;
                }
                if (std::size_t nl = newline_length(pos_)) {
                    take_trivia(nl);
                    continue;
                }
                if (peek() == '#') {
                    lex_comment();
                    continue;
                }
                handle_indent(width);
                line_start_ = false;
            }
            lex_token();
        }
        finish();
        mark_statement_keywords();
        return std::move(out_);
    }

private:
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    std::size_t newline_length(std::size_t at) const {
        if (at >= src_.size()) {
            return 0;
        }
        if (src_[at] == '\r') {
            return at + 1 < src_.size() && src_[at + 1] == '\n' ? 2 : 1;
        }
        return src_[at] == '\n' ? 1 : 0;
    }

    void advance(std::size_t n) {
        for (std::size_t k = 0; k < n && pos_ < src_.size(); ++k, ++pos_) {
            const char c = src_[pos_];
            if (c == '\n' || (c == '\r' && (pos_ + 1 >= src_.size() || src_[pos_ + 1] != '\n'))) {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
        }
    }

    void take_trivia(std::size_t n) {
        trivia_.append(src_.substr(pos_, n));
        advance(n);
    }

    void emit(TokenKind kind, std::size_t length, bool malformed = false) {
        Token token;
        token.kind = kind;
        token.text = std::string(src_.substr(pos_, length));
        token.leading = std::move(trivia_);
        token.line = line_;
        token.column = column_;
        token.offset = pos_;
        token.malformed = malformed;
        trivia_.clear();
        advance(length);
        if (kind != TokenKind::comment && kind != TokenKind::newline) {
            line_has_content_ = true;
        }
        out_.push_back(std::move(token));
    }

    void emit_synthetic(TokenKind kind, bool malformed = false) {
        Token token;
        token.kind = kind;
        token.line = line_;
        token.column = column_;
        token.offset = pos_;
        token.malformed = malformed;
        out_.push_back(std::move(token));
    }

    void handle_indent(std::size_t width) {
        if (width > levels_.back().width) {
            levels_.push_back({width, false});
            emit_synthetic(TokenKind::indent);
            return;
        }
        if (width == levels_.back().width) {
            return;
        }
        std::size_t last_real = out_.size();
        while (levels_.size() > 1 && levels_.back().width > width) {
            const bool phantom = levels_.back().phantom;
            levels_.pop_back();
            if (!phantom) {
                emit_synthetic(TokenKind::dedent);
                last_real = out_.size() - 1;
            }
        }
        if (levels_.back().width != width) {
            if (last_real < out_.size()) {
                out_[last_real].malformed = true;
            } else {
                emit_synthetic(TokenKind::dedent, true);
            }
            levels_.push_back({width, true});
        }
    }

    void lex_comment() {
        std::size_t end = pos_;
        while (end < src_.size() && src_[end] != '\n' && src_[end] != '\r') {
            ++end;
        }
        emit(TokenKind::comment, end - pos_);
    }

    void lex_string(std::size_t prefix) {
        const std::size_t open = pos_ + prefix;
        const char quote = src_[open];
        const bool triple = open + 2 < src_.size() && src_[open + 1] == quote && src_[open + 2] == quote;
        std::size_t i = open + (triple ? 3 : 1);
        bool malformed = false;
        std::size_t end = src_.size();
        while (true) {
            if (i >= src_.size()) {
                malformed = true;
                end = src_.size();
                break;
            }
            const char c = src_[i];
            if (c == '\\') {
                i += 1 + std::max<std::size_t>(1, newline_length(i + 1));
                continue;
            }
            if (triple) {
                if (c == quote && i + 2 < src_.size() && src_[i + 1] == quote && src_[i + 2] == quote) {
                    end = i + 3;
                    break;
                }
            } else {
                if (c == quote) {
                    end = i + 1;
                    break;
                }
                if (c == '\n' || c == '\r') {
                    malformed = true;
                    end = i;
                    break;
                }
            }
            ++i;
        }
        emit(TokenKind::string, std::min(end, src_.size()) - pos_, malformed);
    }

    void lex_number() {
        std::size_t i = pos_;
        if (src_[i] == '0' && i + 1 < src_.size() &&
            std::string_view("xXoObB").find(src_[i + 1]) != std::string_view::npos) {
            i += 2;
            while (i < src_.size() && is_ident_char(static_cast<unsigned char>(src_[i]))) {
                ++i;
            }
        } else {
            while (i < src_.size()) {
                const auto c = static_cast<unsigned char>(src_[i]);
                if ((c == 'e' || c == 'E') && i + 1 < src_.size() && (src_[i + 1] == '+' || src_[i + 1] == '-')) {
                    i += 2;
                } else if (is_ident_char(c) || c == '.') {
                    ++i;
                } else {
                    break;
                }
            }
        }
        emit(TokenKind::number, i - pos_);
    }

    void lex_operator() {
        const std::string_view rest = src_.substr(pos_);
        for (auto op : kThreeCharOps) {
            if (rest.starts_with(op)) {
                emit(op == "..." ? TokenKind::punctuation : TokenKind::op, 3);
                return;
            }
        }
        for (auto op : kTwoCharOps) {
            if (rest.starts_with(op)) {
                emit(TokenKind::op, 2);
                return;
            }
        }
        const char c = rest.front();
        if (kPunctuation.find(c) != std::string_view::npos) {
            if (c == '(' || c == '[' || c == '{') {
                ++depth_;
            } else if ((c == ')' || c == ']' || c == '}') && depth_ > 0) {
                --depth_;
            }
            emit(TokenKind::punctuation, 1);
            return;
        }
        // Known operators and unknown bytes alike become single-byte op tokens.
        emit(TokenKind::op, 1);
    }

    void lex_token() {
        const auto c = static_cast<unsigned char>(peek());
        if (c == ' ' || c == '\t' || c == '\f' || c == '\v') {
            take_trivia(1);
            return;
        }
        if (c == '\\' && newline_length(pos_ + 1) > 0) {
            take_trivia(1 + newline_length(pos_ + 1));
            return;
        }
        if (std::size_t nl = newline_length(pos_)) {
            if (depth_ > 0 || !line_has_content_) {
                take_trivia(nl);
                if (depth_ == 0) {
                    line_start_ = true;
                }
                return;
            }
            emit(TokenKind::newline, nl);
            line_has_content_ = false;
            line_start_ = true;
            return;
        }
        if (c == '#') {
            lex_comment();
            return;
        }
        if (c == '\'' || c == '"') {
            lex_string(0);
            return;
        }
        if (is_digit(c) || (c == '.' && is_digit(static_cast<unsigned char>(peek(1))))) {
            lex_number();
            return;
        }
        if (is_ident_start(c)) {
            std::size_t end = pos_;
            while (end < src_.size() && is_ident_char(static_cast<unsigned char>(src_[end]))) {
                ++end;
            }
            const std::string_view word = src_.substr(pos_, end - pos_);
            if (end < src_.size() && (src_[end] == '\'' || src_[end] == '"') && is_string_prefix(word)) {
                lex_string(word.size());
                return;
            }
            emit(is_python_keyword(word) ? TokenKind::keyword : TokenKind::identifier, word.size());
            return;
        }
        lex_operator();
    }

    void finish() {
        const std::size_t eof_start = out_.size();
        if (line_has_content_) {
            emit_synthetic(TokenKind::newline);
            line_has_content_ = false;
        }
        while (levels_.size() > 1) {
            const bool phantom = levels_.back().phantom;
            levels_.pop_back();
            if (!phantom) {
                emit_synthetic(TokenKind::dedent);
            }
        }
        if (!trivia_.empty()) {
            if (out_.size() == eof_start) {
                emit_synthetic(TokenKind::newline);
            }
            out_[eof_start].leading = std::move(trivia_);
            trivia_.clear();
        }
    }

    // Python 2 `print` / `exec` statements: the name starts a statement and
    // the next token does not continue a call, attribute or assignment.
    void mark_statement_keywords() {
        auto significant = [&](std::size_t i) { return out_[i].kind != TokenKind::comment; };
        for (std::size_t i = 0; i < out_.size(); ++i) {
            Token& t = out_[i];
            if (t.kind != TokenKind::identifier || (t.text != "print" && t.text != "exec")) {
                continue;
            }
            std::size_t p = i;
            while (p > 0 && !significant(p - 1)) {
                --p;
            }
            if (p > 0) {
                const Token& prev = out_[p - 1];
                const bool boundary = prev.kind == TokenKind::newline || prev.kind == TokenKind::indent ||
                                      prev.kind == TokenKind::dedent || prev.is(TokenKind::punctuation, ";") ||
                                      prev.is(TokenKind::punctuation, ":");
                if (!boundary) {
                    continue;
                }
            }
            std::size_t n = i + 1;
            while (n < out_.size() && !significant(n)) {
                ++n;
            }
            if (n >= out_.size()) {
                continue;
            }
            const Token& next = out_[n];
            if (next.kind == TokenKind::punctuation &&
                (next.text == "(" || next.text == "." || next.text == "," || next.text == ")" || next.text == "]" ||
                 next.text == "}" || next.text == ":" || next.text == "[")) {
                continue;
            }
            if (next.kind == TokenKind::op && next.text.size() >= 1 && next.text.back() == '=' && next.text != "==" &&
                next.text != "<=" && next.text != ">=" && next.text != "!=") {
                continue;
            }
            t.kind = TokenKind::keyword;
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
    std::size_t depth_ = 0;
    bool line_start_ = true;
    bool line_has_content_ = false;
    std::string trivia_;
    std::vector<Level> levels_{{0, false}};
    std::vector<Token> out_;
};

}  // namespace

std::string_view kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::identifier: return "identifier";
        case TokenKind::keyword: return "keyword";
        case TokenKind::number: return "number";
        case TokenKind::string: return "string";
        case TokenKind::op: return "operator";
        case TokenKind::punctuation: return "punctuation";
        case TokenKind::newline: return "newline";
        case TokenKind::indent: return "indent";
        case TokenKind::dedent: return "dedent";
        case TokenKind::comment: return "comment";
    }
    return "unknown";
}

bool is_python_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view code) {
    return Lexer(code).run();
}

std::string reconstruct(std::span<const Token> tokens) {
    std::string out;
    for (const auto& t : tokens) {
        out += t.leading;
        out += t.text;
    }
    return out;
}

std::vector<LogicalLine> logical_lines(std::span<const Token> tokens) {
    std::vector<LogicalLine> lines;
    std::vector<std::string> blocks;
    std::string last_header;
    bool last_ended_with_colon = false;
    std::size_t i = 0;
    while (i < tokens.size()) {
        const Token& t = tokens[i];
        if (t.kind == TokenKind::indent) {
            blocks.push_back(last_ended_with_colon ? last_header : std::string());
            if (!lines.empty()) {
                lines.back().opens_block = true;
            }
            last_ended_with_colon = false;
            ++i;
            continue;
        }
        if (t.kind == TokenKind::dedent) {
            if (!blocks.empty()) {
                blocks.pop_back();
            }
            ++i;
            continue;
        }
        if (t.kind == TokenKind::newline || t.kind == TokenKind::comment) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < tokens.size() && tokens[end].kind != TokenKind::newline) {
            ++end;
        }
        std::size_t last = end;
        while (last > i && tokens[last - 1].kind == TokenKind::comment) {
            --last;
        }
        LogicalLine line;
        line.first = i;
        line.last = last;
        line.depth = blocks.size();
        line.enclosing = blocks.empty() ? std::string() : blocks.back();
        lines.push_back(line);

        last_header.clear();
        if (t.kind == TokenKind::keyword) {
            last_header = t.text;
            if (t.text == "async" && i + 1 < last && tokens[i + 1].kind == TokenKind::keyword) {
                last_header = tokens[i + 1].text;
            }
        }
        last_ended_with_colon = tokens[last - 1].is(TokenKind::punctuation, ":");
        i = end;
    }
    return lines;
}

}  // namespace triage
