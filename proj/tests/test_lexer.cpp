#include "triage/corpus.hpp"
#include "triage/lexer.hpp"
#include "triage/random.hpp"

#include <doctest.h>

#include <utility>

using namespace triage;

namespace {

std::vector<std::pair<TokenKind, std::string>> shape(std::string_view code) {
    std::vector<std::pair<TokenKind, std::string>> out;
    for (const auto& t : tokenize(code)) {
        out.emplace_back(t.kind, t.text);
    }
    return out;
}

using K = TokenKind;

}  // namespace

TEST_CASE("simple function tokenizes into the expected stream") {
    const std::vector<std::pair<TokenKind, std::string>> expected = {
        {K::keyword, "def"},      {K::identifier, "f"}, {K::punctuation, "("},  {K::identifier, "x"},
        {K::punctuation, ")"},    {K::punctuation, ":"}, {K::newline, "\n"},    {K::indent, ""},
        {K::keyword, "return"},   {K::identifier, "x"}, {K::newline, ""},       {K::dedent, ""},
    };
    CHECK(shape("def f(x):\n    return x") == expected);
}

TEST_CASE("empty input yields no tokens") { CHECK(tokenize("").empty()); }

TEST_CASE("python 2 print is a keyword followed by a string") {
    const auto tokens = tokenize("print 'Meow! I am ' + self.name");
    REQUIRE(tokens.size() >= 2);
    CHECK(tokens[0].is(K::keyword, "print"));
    CHECK(tokens[1].kind == K::string);
    CHECK(tokens[1].text == "'Meow! I am '");
}

TEST_CASE("print and exec calls stay identifiers") {
    CHECK(tokenize("print('x')")[0].kind == K::identifier);
    CHECK(tokenize("exec(code)")[0].kind == K::identifier);
    CHECK(tokenize("exec 'x = 1'")[0].kind == K::keyword);
    CHECK(tokenize("print = 3")[0].kind == K::identifier);
    CHECK(tokenize("x.print y")[2].kind == K::identifier);
}

TEST_CASE("literals are kept verbatim") {
    const auto tokens = tokenize("s = rb'\\x00' + \"\"\"a\nb\"\"\" + 0x1F + 1.5e-3j");
    CHECK(tokens[2].is(K::string, "rb'\\x00'"));
    CHECK(tokens[4].is(K::string, "\"\"\"a\nb\"\"\""));
    CHECK(tokens[6].is(K::number, "0x1F"));
    CHECK(tokens[8].is(K::number, "1.5e-3j"));
}

TEST_CASE("bracketed newlines do not end the logical line") {
    const auto tokens = tokenize("x = (1,\n     2)\ny = 3\n");
    std::size_t newlines = 0;
    for (const auto& t : tokens) {
        newlines += t.kind == K::newline;
    }
    CHECK(newlines == 2);
}

TEST_CASE("inconsistent dedent is flagged, not thrown") {
    const auto tokens = tokenize("if x:\n        a = 1\n    b = 2\n");
    bool flagged = false;
    for (const auto& t : tokens) {
        flagged = flagged || (t.kind == K::dedent && t.malformed);
    }
    CHECK(flagged);
}

TEST_CASE("unterminated string is flagged") {
    const auto tokens = tokenize("x = 'abc\n");
    bool flagged = false;
    for (const auto& t : tokens) {
        flagged = flagged || (t.kind == K::string && t.malformed);
    }
    CHECK(flagged);
}

TEST_CASE("round trip, totality and position monotonicity on arbitrary text") {
    const std::string alphabet = "abc xyz019_()[]{}:;.,'\"\\#\n\t \r=+-*/<>!@$?`\x01\xff";
    Rng rng(42);
    for (int trial = 0; trial < 2000; ++trial) {
        std::string code;
        const std::size_t n = rng.below(80);
        for (std::size_t i = 0; i < n; ++i) {
            code += alphabet[rng.below(alphabet.size())];
        }
        std::vector<Token> tokens;
        REQUIRE_NOTHROW(tokens = tokenize(code));
        REQUIRE(reconstruct(tokens) == code);
        CHECK(tokenize(code) == tokens);
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            const bool ordered = tokens[i - 1].line < tokens[i].line ||
                                 (tokens[i - 1].line == tokens[i].line && tokens[i - 1].column <= tokens[i].column);
            REQUIRE(ordered);
        }
    }
}

TEST_CASE("round trip on the reference sample") {
    const Dataset ds = load_dataset(std::filesystem::path(TRIAGE_TEST_DATA) / "reference_sample.json");
    for (const auto& s : ds.snippets()) {
        CHECK(reconstruct(tokenize(s.code)) == s.code);
    }
}

TEST_CASE("logical lines carry depth and enclosing block") {
    const auto tokens = tokenize("def f(xs):\n    for x in xs:\n        return x\n    return 0\n");
    const auto lines = logical_lines(tokens);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].depth == 0);
    CHECK(lines[0].opens_block);
    CHECK(lines[2].depth == 2);
    CHECK(lines[2].enclosing == "for");
    CHECK(lines[3].enclosing == "def");
}
