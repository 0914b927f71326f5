#include "triage/mutation.hpp"

#include "triage/error.hpp"
#include "triage/labels.hpp"
#include "triage/lint.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <optional>
#include <unordered_set>

namespace triage {

namespace {

constexpr std::string_view kStep = "    ";

using Names = std::span<const std::string_view>;

constexpr std::array<std::string_view, 14> kVariables = {"result", "value", "data",   "output", "temp",  "buffer", "text",
                                                         "content", "acc", "report", "summary", "line", "payload", "entry"};
constexpr std::array<std::string_view, 8> kMessages = {"Starting", "Done", "Processing item", "Result is",
                                                       "Value:", "Debug", "Finished step", "Total"};

std::string pick(Rng& rng, Names names) { return std::string(rng.pick(names)); }

std::string fresh_name(Rng& rng) {
    std::string name = pick(rng, kVariables);
    if (rng.chance(0.3)) {
        name += std::to_string(rng.below(9) + 1);
    }
    return name;
}

/// A parameter of the snippet when one exists, otherwise a fresh name.
std::string some_value(const SourceView& view, Rng& rng) {
    const auto params = view.parameter_names();
    if (!params.empty() && rng.chance(0.7)) {
        return params[rng.below(params.size())];
    }
    return fresh_name(rng);
}

std::string insert_lines(const SourceView& view, std::size_t line, const std::vector<std::string>& block) {
    const std::size_t start = view.line_start(line);
    const std::string indent = view.indent_of(line);
    std::string out = view.code().substr(0, start);
    for (const auto& stmt : block) {
        out += indent;
        out += stmt;
        out += '\n';
    }
    out += view.code().substr(start);
    return out;
}

std::string insert_at_site(const SourceView& view, Rng& rng, const std::vector<std::string>& block) {
    const auto sites = view.insertion_sites();
    if (sites.empty()) {
        // Only reachable for token-free input; append at top level.
        std::string out = view.code();
        if (!out.empty() && out.back() != '\n') {
            out += '\n';
        }
        for (const auto& stmt : block) {
            out += stmt + '\n';
        }
        return out;
    }
    return insert_lines(view, sites[rng.below(sites.size())], block);
}

bool always(const SourceView&) { return true; }

/// Index of the token closing the bracket opened at `open`, if any.
std::optional<std::size_t> matching_close(const std::vector<Token>& tokens, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < tokens.size(); ++i) {
        const auto& t = tokens[i];
        if (t.kind != TokenKind::punctuation) {
            continue;
        }
        if (t.text == "(" || t.text == "[" || t.text == "{") {
            ++depth;
        } else if (t.text == ")" || t.text == "]" || t.text == "}") {
            if (--depth == 0) {
                return i;
            }
        }
    }
    return std::nullopt;
}

std::string splice(const std::string& code, std::size_t at, std::size_t erase, std::string_view insert) {
    return code.substr(0, at) + std::string(insert) + code.substr(at + erase);
}

std::string quote(Rng& rng, std::string_view body) {
    const char q = rng.chance(0.5) ? '\'' : '"';
    return fmt::format("{}{}{}", q, body, q);
}

// ---- Compatibility Issue ------------------------------------------------

struct CallSite {
    std::size_t name;
    std::size_t open;
    std::size_t close;
};

/// `print(...)` calls that form a whole logical line with a non-empty argument list.
std::vector<CallSite> print_statements(const SourceView& view) {
    std::vector<CallSite> sites;
    const auto& tokens = view.tokens();
    for (const auto& line : view.lines()) {
        if (line.last - line.first < 4) {
            continue;
        }
        const auto& head = tokens[line.first];
        if (head.kind != TokenKind::identifier || head.text != "print" ||
            !tokens[line.first + 1].is(TokenKind::punctuation, "(")) {
            continue;
        }
        const auto close = matching_close(tokens, line.first + 1);
        if (close && *close == line.last - 1) {
            sites.push_back({line.first, line.first + 1, *close});
        }
    }
    return sites;
}

std::string py2_print(const SourceView& view, Rng& rng) {
    const auto calls = print_statements(view);
    if (!calls.empty()) {
        const auto& call = calls[rng.below(calls.size())];
        const auto& tokens = view.tokens();
        const std::string& code = view.code();
        const std::size_t open = tokens[call.open].offset;
        const std::size_t close = tokens[call.close].offset;
        return code.substr(0, open) + " " + code.substr(open + 1, close - open - 1) + code.substr(close + 1);
    }
    const std::string msg = quote(rng, pick(rng, kMessages));
    const std::string value = some_value(view, rng);
    std::string stmt;
    switch (rng.below(4)) {
        case 0: stmt = "print " + msg; break;
        case 1: stmt = "print " + value; break;
        case 2: stmt = fmt::format("print {}, {}", msg, value); break;
        default: stmt = fmt::format("print {} + str({})", msg, value); break;
    }
    return insert_at_site(view, rng, {stmt});
}

std::string py2_exec(const SourceView& view, Rng& rng) {
    const std::string name = fresh_name(rng);
    std::string stmt;
    switch (rng.below(4)) {
        case 0: stmt = fmt::format("exec \"{} = {}\"", name, rng.below(100)); break;
        case 1: stmt = fmt::format("exec 'print(\"{}\")'", pick(rng, kMessages)); break;
        case 2: stmt = fmt::format("exec \"{} = {} * 2\" in globals()", name, some_value(view, rng)); break;
        default: stmt = fmt::format("exec '\\\\print \"{}\"'", pick(rng, kMessages)); break;
    }
    return insert_at_site(view, rng, {stmt});
}

// ---- Performance Issue --------------------------------------------------

std::string quadratic_concat(const SourceView& view, Rng& rng) {
    const std::string res = fresh_name(rng);
    const std::string item = rng.chance(0.5) ? "item" : "ch";
    const std::string seq = some_value(view, rng);
    const std::string step(kStep);
    switch (rng.below(3)) {
        case 0:
            return insert_at_site(view, rng,
                                  {res + " = ''", fmt::format("for {} in {}:", item, seq),
                                   fmt::format("{}{} = {} + str({})", step, res, res, item)});
        case 1:
            return insert_at_site(view, rng,
                                  {res + " = \"\"", fmt::format("for {} in {}:", item, seq),
                                   fmt::format("{}{} += str({}) + \",\"", step, res, item)});
        default:
            return insert_at_site(view, rng,
                                  {res + " = ''", fmt::format("for i in range({}):", 1000 * (rng.below(9) + 1)),
                                   fmt::format("{}{} = {} + {}", step, res, res, quote(rng, "x"))});
    }
}

std::string repeated_join(const SourceView& view, Rng& rng) {
    const std::string res = fresh_name(rng);
    const std::string step(kStep);
    const std::size_t n = 1000 * (rng.below(9) + 1);
    switch (rng.below(3)) {
        case 0:
            return insert_at_site(view, rng, {fmt::format("{} = ''.join({} * list(['a'] * {}))", res, n, n * 10)});
        case 1:
            return insert_at_site(view, rng,
                                  {res + " = ''", fmt::format("for _ in range({}):", n),
                                   fmt::format("{}{} = ''.join([{}, 'x'])", step, res, res)});
        default:
            return insert_at_site(view, rng,
                                  {fmt::format("{} = ''.join([str(x) for x in {}] * {})", res, some_value(view, rng), n)});
    }
}

std::vector<std::size_t> loop_headers(const SourceView& view) {
    std::vector<std::size_t> out;
    const auto& lines = view.lines();
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
        const auto& head = view.head(i);
        if (lines[i].opens_block && lines[i].depth >= 1 &&
            (head.is(TokenKind::keyword, "for") || head.is(TokenKind::keyword, "while"))) {
            out.push_back(i);
        }
    }
    return out;
}

bool has_loop(const SourceView& view) { return !loop_headers(view).empty(); }

std::string return_inside_loop(const SourceView& view, Rng& rng) {
    const auto loops = loop_headers(view);
    const std::size_t loop = loops[rng.below(loops.size())];
    const auto& lines = view.lines();
    const std::string body_indent = view.indent_of(loop + 1);
    const std::size_t end = view.block_end(loop);
    const std::string& code = view.code();

    if (end < lines.size() && lines[end].depth == lines[loop].depth &&
        view.head(end).is(TokenKind::keyword, "return") && rng.chance(0.6)) {
        return code.substr(0, view.line_start(end)) + body_indent + code.substr(view.head(end).offset);
    }

    std::string value;
    const auto& tokens = view.tokens();
    const auto& header = tokens[lines[loop].first];
    if (header.text == "for" && tokens[lines[loop].first + 1].kind == TokenKind::identifier) {
        value = tokens[lines[loop].first + 1].text;
    } else {
        value = some_value(view, rng);
    }
    const std::string stmt = rng.chance(0.2) ? std::string("return") : "return " + value;
    if (end < lines.size()) {
        const std::size_t at = view.line_start(end);
        return code.substr(0, at) + body_indent + stmt + "\n" + code.substr(at);
    }
    if (!code.empty() && code.back() == '\n') {
        return code + body_indent + stmt + "\n";
    }
    return code + "\n" + body_indent + stmt;
}

// ---- Runtime Error ------------------------------------------------------

constexpr std::array<std::string_view, 8> kMissingFiles = {
    "nonexistent.txt",        "missing_config.ini", "data/absent.csv", "/tmp/does_not_exist.log",
    "input_missing.json", "old_results.dat",    "no_such_file.txt", "settings/removed.yaml"};

std::string open_missing(const SourceView& view, Rng& rng) {
    const std::string path = quote(rng, pick(rng, kMissingFiles));
    const std::string var = fresh_name(rng);
    const std::string fh = rng.chance(0.5) ? "fh" : "f";
    switch (rng.below(3)) {
        case 0:
            return insert_at_site(view, rng,
                                  {fmt::format("with open({}, 'r') as {}:", path, fh),
                                   fmt::format("{}{} = {}.read()", kStep, var, fh)});
        case 1:
            return insert_at_site(view, rng,
                                  {fmt::format("{} = open({})", fh, path), fmt::format("{} = {}.readlines()", var, fh),
                                   fh + ".close()"});
        default:
            return insert_at_site(view, rng, {fmt::format("{} = open({}).read()", var, path)});
    }
}

/// `name [ simple ]` subscripts whose index is a lone identifier or number.
std::vector<std::size_t> simple_subscripts(const SourceView& view) {
    std::vector<std::size_t> out;
    const auto& t = view.tokens();
    for (std::size_t i = 0; i + 3 < t.size(); ++i) {
        if (t[i].kind == TokenKind::identifier && t[i + 1].is(TokenKind::punctuation, "[") &&
            (t[i + 2].kind == TokenKind::identifier || t[i + 2].kind == TokenKind::number) &&
            t[i + 3].is(TokenKind::punctuation, "]")) {
            out.push_back(i);
        }
    }
    return out;
}

std::string index_past_end(const SourceView& view, Rng& rng) {
    const auto subs = simple_subscripts(view);
    if (!subs.empty() && rng.chance(0.5)) {
        const std::size_t i = subs[rng.below(subs.size())];
        const auto& t = view.tokens();
        return splice(view.code(), t[i + 2].offset, t[i + 2].text.size(), fmt::format("len({})", t[i].text));
    }
    const std::string var = fresh_name(rng);
    switch (rng.below(3)) {
        case 0: {
            const std::string seq = some_value(view, rng);
            return insert_at_site(view, rng, {fmt::format("{} = {}[len({})]", var, seq, seq)});
        }
        case 1: {
            const std::size_t n = rng.below(4) + 2;
            std::string items;
            for (std::size_t k = 0; k < n; ++k) {
                items += (k ? ", " : "") + std::to_string(rng.below(50));
            }
            return insert_at_site(view, rng, {fmt::format("{} = [{}][{}]", var, items, n)});
        }
        default: {
            const std::string items = fresh_name(rng) + "_list";
            return insert_at_site(view, rng,
                                  {fmt::format("{} = []", items), fmt::format("{} = {}[0]", var, items)});
        }
    }
}

// ---- Syntax Error -------------------------------------------------------

std::vector<std::size_t> colon_headers(const SourceView& view) {
    std::vector<std::size_t> out;
    const auto& lines = view.lines();
    const auto& t = view.tokens();
    for (const auto& line : lines) {
        if (line.opens_block && line.last > line.first && t[line.last - 1].is(TokenKind::punctuation, ":")) {
            out.push_back(line.last - 1);
        }
    }
    return out;
}

bool has_colon_header(const SourceView& view) { return !colon_headers(view).empty(); }

std::string drop_colon(const SourceView& view, Rng& rng) {
    const auto colons = colon_headers(view);
    const auto& colon = view.tokens()[colons[rng.below(colons.size())]];
    return splice(view.code(), colon.offset, 1, "");
}

std::vector<std::size_t> closers(const SourceView& view) {
    std::vector<std::size_t> out;
    const auto& t = view.tokens();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i].kind == TokenKind::punctuation && (t[i].text == ")" || t[i].text == "]" || t[i].text == "}")) {
            out.push_back(i);
        }
    }
    return out;
}

bool has_closer(const SourceView& view) { return !closers(view).empty(); }

std::string unbalance(const SourceView& view, Rng& rng) {
    const auto found = closers(view);
    const auto& t = view.tokens()[found[rng.below(found.size())]];
    if (rng.chance(0.65)) {
        return splice(view.code(), t.offset, 1, "");
    }
    return splice(view.code(), t.offset, 0, t.text);
}

// ---- Logic Error --------------------------------------------------------

struct Edit {
    std::size_t at;
    std::size_t erase;
    std::string insert;
};

std::vector<std::vector<Edit>> off_by_one_edits(const SourceView& view) {
    std::vector<std::vector<Edit>> out;
    const auto& t = view.tokens();
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (!t[i].is(TokenKind::identifier, "range") || !t[i + 1].is(TokenKind::punctuation, "(")) {
            continue;
        }
        const auto close = matching_close(t, i + 1);
        if (!close || *close == i + 2) {
            continue;
        }
        std::optional<std::size_t> comma;
        int depth = 0;
        for (std::size_t j = i + 2; j < *close; ++j) {
            if (t[j].kind != TokenKind::punctuation) {
                continue;
            }
            if (t[j].text == "(" || t[j].text == "[" || t[j].text == "{") {
                ++depth;
            } else if (t[j].text == ")" || t[j].text == "]" || t[j].text == "}") {
                --depth;
            } else if (t[j].text == "," && depth == 0 && !comma) {
                comma = j;
            }
        }
        const std::size_t end = t[*close].offset;
        out.push_back({{end, 0, " + 1"}});
        out.push_back({{end, 0, " - 1"}});
        if (comma) {
            out.push_back({{t[*comma].offset, 0, " + 1"}});
        }
    }
    for (const auto& line : view.lines()) {
        if (!t[line.first].is(TokenKind::keyword, "while") && !t[line.first].is(TokenKind::keyword, "if")) {
            continue;
        }
        for (std::size_t j = line.first + 1; j < line.last; ++j) {
            static constexpr std::array<std::pair<std::string_view, std::string_view>, 4> kFlip = {
                {{"<", "<="}, {"<=", "<"}, {">", ">="}, {">=", ">"}}};
            for (const auto& [from, to] : kFlip) {
                if (t[j].is(TokenKind::op, from)) {
                    out.push_back({{t[j].offset, from.size(), std::string(to)}});
                }
            }
        }
    }
    return out;
}

bool has_off_by_one_site(const SourceView& view) { return !off_by_one_edits(view).empty(); }

std::string off_by_one(const SourceView& view, Rng& rng) {
    const auto edits = off_by_one_edits(view);
    const auto& chosen = edits[rng.below(edits.size())];
    std::string code = view.code();
    for (const auto& e : chosen) {
        code = splice(code, e.at, e.erase, e.insert);
    }
    return code;
}

// ---- Security Issue -----------------------------------------------------

constexpr std::array<std::string_view, 6> kPrompts = {"Enter a value: ", "> ", "Expression: ",
                                                      "Command: ", "Input: ", "Formula: "};

std::string eval_on_input(const SourceView& view, Rng& rng) {
    const std::string var = fresh_name(rng);
    const std::string prompt = quote(rng, pick(rng, kPrompts));
    std::vector<std::string> block;
    switch (rng.below(5)) {
        case 0: block = {fmt::format("{} = eval(input({}))", var, prompt)}; break;
        case 1: block = {fmt::format("{} = eval(raw_input())", var)}; break;
        case 2: block = {fmt::format("exec(input({}))", prompt)}; break;
        case 3: block = {"import sys", fmt::format("{} = eval(sys.stdin.readline())", var)}; break;
        default: block = {"import sys", fmt::format("{} = eval(sys.argv[1])", var)}; break;
    }
    return insert_at_site(view, rng, block);
}

constexpr std::array<std::string_view, 8> kCredentialNames = {"password",   "db_password", "api_key",   "secret_key",
                                                              "auth_token", "PASSWORD",    "access_token", "admin_pass"};

std::string random_secret(Rng& rng) {
    static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    std::string s;
    const std::size_t n = 8 + rng.below(17);
    for (std::size_t i = 0; i < n; ++i) {
        s += kAlphabet[rng.below(kAlphabet.size())];
    }
    return s;
}

std::string hardcoded_credential(const SourceView& view, Rng& rng) {
    const std::string secret = quote(rng, random_secret(rng));
    std::vector<std::string> block;
    switch (rng.below(3)) {
        case 0: block = {fmt::format("{} = {}", pick(rng, kCredentialNames), secret)}; break;
        case 1:
            block = {fmt::format("conn = connect(host='db.local', user='admin', password={})", secret)};
            break;
        default: block = {fmt::format("headers = {{'Authorization': 'Bearer ' + {}}}", secret)}; break;
    }
    return insert_at_site(view, rng, block);
}

std::vector<MutationOperator> build_catalog() {
    const std::string compat(category::compatibility);
    const std::string perf(category::performance);
    const std::string runtime(category::runtime_error);
    const std::string syntax(category::syntax_error);
    const std::string logic(category::logic_error);
    const std::string security(category::security);
    return {
        {"Py2PrintStatement", compat, always, py2_print},
        {"Py2ExecStatement", compat, always, py2_exec},
        {"QuadraticStringConcat", perf, always, quadratic_concat},
        {"RepeatedJoin", perf, always, repeated_join},
        {"ReturnInsideLoopBody", perf, has_loop, return_inside_loop},
        {"OpenNonexistentFile", runtime, always, open_missing},
        {"IndexPastEnd", runtime, always, index_past_end},
        {"DropTrailingColon", syntax, has_colon_header, drop_colon},
        {"UnbalanceDelimiter", syntax, has_closer, unbalance},
        {"OffByOneRange", logic, has_off_by_one_site, off_by_one},
        {"EvalOnInput", security, always, eval_on_input},
        {"HardcodedCredential", security, always, hardcoded_credential},
    };
}

}  // namespace

SourceView::SourceView(std::string code) : code_(std::move(code)), tokens_(tokenize(code_)), lines_(logical_lines(tokens_)) {}

std::size_t SourceView::line_start(std::size_t line) const {
    const auto& t = head(line);
    return t.offset - (t.column - 1);
}

std::string SourceView::indent_of(std::size_t line) const {
    const std::size_t start = line_start(line);
    return code_.substr(start, head(line).offset - start);
}

std::vector<std::size_t> SourceView::insertion_sites() const {
    std::vector<std::size_t> sites;
    for (std::size_t i = 0; i < lines_.size(); ++i) {
        const auto& t = head(i);
        if (t.kind == TokenKind::keyword &&
            (t.text == "elif" || t.text == "else" || t.text == "except" || t.text == "finally")) {
            continue;
        }
        if (i > 0 && head(i - 1).is(TokenKind::op, "@")) {
            continue;
        }
        // A line continuing a statement after a backslash does not start at column 1 of its own text.
        if (code_.find_first_not_of(" \t", line_start(i)) != t.offset) {
            continue;
        }
        sites.push_back(i);
    }
    return sites;
}

std::vector<std::string> SourceView::parameter_names() const {
    std::vector<std::string> names;
    for (std::size_t i = 0; i + 2 < tokens_.size(); ++i) {
        if (!tokens_[i].is(TokenKind::keyword, "def") || !tokens_[i + 2].is(TokenKind::punctuation, "(")) {
            continue;
        }
        const auto close = matching_close(tokens_, i + 2);
        if (!close) {
            continue;
        }
        for (std::size_t j = i + 3; j < *close; ++j) {
            const auto& t = tokens_[j];
            const auto& prev = tokens_[j - 1];
            const bool starts_param = prev.is(TokenKind::punctuation, "(") || prev.is(TokenKind::punctuation, ",");
            if (t.kind == TokenKind::identifier && starts_param && t.text != "self" && t.text != "cls" &&
                std::find(names.begin(), names.end(), t.text) == names.end()) {
                names.push_back(t.text);
            }
        }
    }
    return names;
}

std::size_t SourceView::block_end(std::size_t line) const {
    for (std::size_t j = line + 1; j < lines_.size(); ++j) {
        if (lines_[j].depth <= lines_[line].depth) {
            return j;
        }
    }
    return lines_.size();
}

std::span<const MutationOperator> mutation_catalog() {
    static const std::vector<MutationOperator> catalog = build_catalog();
    return catalog;
}

const MutationOperator& find_operator(std::string_view name) {
    for (const auto& op : mutation_catalog()) {
        if (op.name == name) {
            return op;
        }
    }
    throw Error(ErrorKind::data, fmt::format("unknown mutation operator '{}'", name));
}

std::vector<const MutationOperator*> operators_for(std::string_view label) {
    std::vector<const MutationOperator*> out;
    for (const auto& op : mutation_catalog()) {
        if (op.target_label == label) {
            out.push_back(&op);
        }
    }
    return out;
}

std::string apply_operator(const MutationOperator& op, std::string_view code, std::uint64_t seed) {
    const SourceView view{std::string(code)};
    if (!op.applicable(view)) {
        throw Error(ErrorKind::data, fmt::format("operator {} is not applicable", op.name));
    }
    Rng rng(seed);
    return op.rewrite(view, rng);
}

std::vector<GeneratedSnippet> generate_corpus_detailed(std::span<const CodeSnippet> clean_pool, std::size_t per_class,
                                                       const LabelSet& labels, std::uint64_t seed) {
    constexpr std::size_t kMaxAttempts = 500;
    if (clean_pool.empty()) {
        throw Error(ErrorKind::data, "clean pool is empty");
    }
    for (const auto& name : labels.names()) {
        if (name != category::correct_code && operators_for(name).empty()) {
            throw Error(ErrorKind::data, fmt::format("no mutation operator for label '{}'", name));
        }
    }

    std::vector<std::size_t> pool;
    std::vector<SourceView> views;
    std::unordered_set<std::string> pool_ids;
    for (std::size_t i = 0; i < clean_pool.size(); ++i) {
        if (pool_ids.insert(snippet_id(clean_pool[i].code)).second) {
            pool.push_back(i);
            views.emplace_back(clean_pool[i].code);
        }
    }

    std::vector<GeneratedSnippet> out;
    out.reserve(per_class * labels.size());
    std::unordered_set<std::string> seen;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        const std::string& label = labels.name(c);
        const std::uint64_t class_seed = derive_seed(seed, c);
        if (label == category::correct_code) {
            if (pool.size() < per_class) {
                throw Error(ErrorKind::data, fmt::format("clean pool has {} distinct snippets, need at least {}",
                                                         pool.size(), per_class));
            }
            std::vector<std::size_t> order(pool.size());
            for (std::size_t k = 0; k < order.size(); ++k) {
                order[k] = k;
            }
            Rng rng(class_seed);
            rng.shuffle(std::span<std::size_t>(order));
            std::size_t taken = 0;
            for (std::size_t k = 0; k < order.size() && taken < per_class; ++k) {
                const auto& src = clean_pool[pool[order[k]]];
                auto snippet = CodeSnippet::make(src.code, label);
                if (!seen.insert(snippet.id).second) {
                    continue;
                }
                out.push_back({std::move(snippet), "", pool[order[k]]});
                ++taken;
            }
            if (taken < per_class) {
                throw Error(ErrorKind::data, "clean pool snippets collide with generated samples");
            }
            continue;
        }

        const auto ops = operators_for(label);
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::uint64_t sample_seed = derive_seed(class_seed, i);
            bool accepted = false;
            for (std::size_t attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
                Rng rng(derive_seed(sample_seed, attempt));
                const std::size_t src = rng.below(views.size());
                const MutationOperator& op = *ops[rng.below(ops.size())];
                const SourceView& view = views[src];
                if (!op.applicable(view)) {
                    continue;
                }
                std::string code = op.rewrite(view, rng);
                if (code == view.code()) {
                    continue;
                }
                auto snippet = CodeSnippet::make(std::move(code), label);
                if (seen.contains(snippet.id)) {
                    continue;
                }
                const auto findings = run_rules(tokenize(snippet.code));
                const bool foreign = std::any_of(findings.begin(), findings.end(), [&](const Finding& f) {
                    return f.certainty == Certainty::definite && f.category != label;
                });
                if (foreign) {
                    continue;
                }
                seen.insert(snippet.id);
                out.push_back({std::move(snippet), op.name, pool[src]});
                accepted = true;
            }
            if (!accepted) {
                throw Error(ErrorKind::data,
                            fmt::format("could not generate a distinct '{}' sample after {} attempts", label, kMaxAttempts));
            }
        }
    }
    return out;
}

Dataset generate_corpus(std::span<const CodeSnippet> clean_pool, std::size_t per_class, const LabelSet& labels,
                        std::uint64_t seed) {
    auto detailed = generate_corpus_detailed(clean_pool, per_class, labels, seed);
    std::vector<CodeSnippet> snippets;
    snippets.reserve(detailed.size());
    for (auto& g : detailed) {
        snippets.push_back(std::move(g.snippet));
    }
    return Dataset(std::move(snippets), labels);
}

}  // namespace triage
