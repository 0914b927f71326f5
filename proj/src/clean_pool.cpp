#include "triage/labels.hpp"
#include "triage/mutation.hpp"

#include <fmt/format.h>

#include <array>
#include <unordered_set>

namespace triage {

namespace {

using Names = std::span<const std::string_view>;

constexpr std::array<std::string_view, 16> kVerbs = {"compute", "calculate", "get",    "find",    "build",  "count",
                                                     "sum",     "merge",     "filter", "collect", "scale",  "update",
                                                     "format",  "normalize", "select", "summarize"};
constexpr std::array<std::string_view, 16> kNouns = {"total",  "values", "items",  "scores",  "prices",  "names",
                                                     "records", "average", "maximum", "matrix", "words", "tokens",
                                                     "weights", "counts", "rows", "entries"};
constexpr std::array<std::string_view, 10> kSeqs = {"values", "items", "numbers", "data",  "scores",
                                                    "prices", "rows",  "samples", "elements", "readings"};
constexpr std::array<std::string_view, 8> kAccs = {"total", "acc", "result", "running", "subtotal", "score", "amount",
                                                   "product"};
constexpr std::array<std::string_view, 6> kItems = {"x", "item", "value", "n", "elem", "v"};
constexpr std::array<std::string_view, 14> kScalars = {"r", "radius", "x", "value", "length", "side", "size",
                                                       "n", "width", "d", "count", "limit", "base", "amount"};
constexpr std::array<std::string_view, 6> kTexts = {"text", "s", "line", "raw", "word", "label"};
constexpr std::array<std::string_view, 5> kIndices = {"i", "j", "k", "idx", "pos"};
constexpr std::array<std::string_view, 8> kClasses = {"Account", "Point", "Counter", "Circle",
                                                      "Inventory", "Student", "Timer", "Vector"};
constexpr std::array<std::string_view, 6> kAttrs = {"size", "radius", "balance", "count", "speed", "level"};
constexpr std::array<std::string_view, 8> kModules = {"math", "os", "sys", "random", "itertools",
                                                      "collections", "functools", "string"};
constexpr std::array<std::string_view, 6> kDotted = {"os.path", "xml.etree.ElementTree", "urllib.parse",
                                                     "email.utils", "concurrent.futures", "logging.handlers"};
constexpr std::array<std::string_view, 6> kGreetings = {"Hello", "Welcome", "Hi", "Good morning", "Greetings", "Hey"};
constexpr std::array<std::string_view, 6> kComments = {"helper for the report", "simple utility",
                                                       "used by the scheduler", "keeps things tidy",
                                                       "small arithmetic helper", "sample routine"};

class Writer {
public:
    explicit Writer(Rng& rng) : rng_(rng) {}

    std::string name(Names pool) { return std::string(rng_.pick(pool)); }
    std::string num(std::size_t lo, std::size_t hi) { return std::to_string(lo + rng_.below(hi - lo + 1)); }
    std::string fname() {
        std::string n = fmt::format("{}_{}", rng_.pick(Names(kVerbs)), rng_.pick(Names(kNouns)));
        if (rng_.chance(0.25)) {
            n += "_" + num(2, 9);
        }
        return n;
    }
    bool chance(double p) { return rng_.chance(p); }
    std::size_t below(std::size_t n) { return rng_.below(n); }

private:
    Rng& rng_;
};

std::string docstring(Writer& w, const std::string& indent) {
    if (!w.chance(0.2)) {
        return "";
    }
    return fmt::format("{}\"\"\"{}.\"\"\"\n", indent, w.chance(0.5) ? "Return the computed value" : "Small helper");
}

std::string function(Writer& w, const std::string& in) {
    const std::string i2 = in + "    ";
    const std::string i3 = i2 + "    ";
    const std::string f = w.fname();
    const std::string seq = w.name(kSeqs);
    const std::string acc = w.name(kAccs);
    const std::string item = w.name(kItems);
    const std::string idx = w.name(kIndices);
    const std::string p = w.name(kScalars);
    std::string q = w.name(kScalars);
    while (q == p) {
        q = w.name(kScalars);
    }
    const std::string text = w.name(kTexts);
    std::string head;
    std::string body;
    switch (w.below(16)) {
        case 0:
            head = fmt::format("def {}({}):\n", f, seq);
            body = fmt::format("{0}{1} = 0\n{0}for {2} in {3}:\n{4}{1} += {2}\n{0}return {1}\n", i2, acc, item, seq, i3);
            break;
        case 1:
            head = fmt::format("def {}({}):\n", f, seq);
            body = fmt::format("{0}out = []\n{0}for {1} in range(len({2})):\n{3}out.append({2}[{1}] * {4})\n{0}return out\n",
                               i2, idx, seq, i3, w.num(2, 9));
            break;
        case 2:
            head = fmt::format("def {}({}):\n", f, p == idx ? q : p);
            body = fmt::format("{0}{1} = 0\n{0}{2} = 1\n{0}while {1} < {5}:\n{3}{2} = {2} * {4}\n{3}{1} += 1\n{0}return {2}\n",
                               i2, idx, acc, i3, w.num(2, 5), p == idx ? q : p);
            break;
        case 3: {
            const std::string lim = w.num(10, 99);
            head = fmt::format("def {}({}):\n", f, item);
            body = fmt::format("{0}if {1} > {2}:\n{3}return {1} - {2}\n{0}elif {1} < 0:\n{3}return -{1}\n{0}else:\n{3}return {1}\n",
                               i2, item, lim, i3);
            break;
        }
        case 4:
            head = fmt::format("def {}({}, {}):\n", f, p, q);
            body = fmt::format("{}return {} * {} * {} + {}\n", i2, w.num(2, 9), p, q, w.num(1, 20));
            break;
        case 5:
            head = fmt::format("def {}({}):\n", f, p);
            body = w.chance(0.5) ? fmt::format("{}return 2 * 3.14 * {}\n", i2, p)
                                 : fmt::format("{}return 3.14159 * {} ** 2\n", i2, p);
            break;
        case 6:
            head = fmt::format("def {}({}):\n", f, seq);
            body = fmt::format("{0}counts = {{}}\n{0}for {2} in {3}:\n{1}counts[{2}] = counts.get({2}, 0) + 1\n{0}return counts\n",
                               i2, i3, item, seq);
            break;
        case 7:
            head = fmt::format("def {}({}, limit):\n", f, seq);
            body = fmt::format("{}return [{} for {} in {} if {} % {} == 0 and {} < limit]\n", i2, item, item, seq, item,
                               w.num(2, 7), item);
            break;
        case 8:
            head = fmt::format("def {}({}):\n", f, text);
            body = fmt::format("{0}message = \"{1}, \" + {2}\n{0}print(message)\n{0}return message\n", i2,
                               w.name(kGreetings), text);
            break;
        case 9:
            head = fmt::format("def {}({}):\n", f, text);
            body = fmt::format("{0}try:\n{1}return int({3})\n{0}except ValueError:\n{1}return {2}\n", i2, i3,
                               w.num(0, 9), text);
            break;
        case 10:
            head = fmt::format("def {}({}):\n", f, seq);
            body = fmt::format("{0}best = {1}[0]\n{0}for {2} in range(1, len({1})):\n{3}if {1}[{2}] > best:\n{3}    best = {1}[{2}]\n{0}return best\n",
                               i2, seq, idx, i3);
            break;
        case 11:
            head = fmt::format("def {}(rows, cols):\n", f);
            body = fmt::format("{0}grid = []\n{0}for r in range(rows):\n{1}row = []\n{1}for c in range(cols):\n{1}    row.append(r * c)\n{1}grid.append(row)\n{0}return grid\n",
                               i2, i3);
            break;
        case 12:
            head = fmt::format("def {}({}):\n", f, seq);
            body = fmt::format("{0}for {1}, {2} in enumerate({3}):\n{4}print({1}, {2})\n", i2, idx, item, seq, i3);
            break;
        case 13:
            head = fmt::format("def {}({}):\n", f, p);
            body = fmt::format("{0}if {3} <= 1:\n{1}return 1\n{0}return {3} * {2}({3} - 1)\n", i2, i3, f, p);
            break;
        case 14:
            head = fmt::format("def {}({}):\n", f, text);
            body = fmt::format("{0}parts = {2}.strip().lower().split()\n{0}return [p for p in parts if len(p) > {1}]\n",
                               i2, w.num(1, 6), text);
            break;
        default:
            head = fmt::format("def {}({}):\n", f, seq);
            body = fmt::format("{0}if not {1}:\n{2}return 0.0\n{0}return sum({1}) / len({1})\n", i2, seq, i3);
            break;
    }
    return in + head + docstring(w, i2) + body;
}

std::string klass(Writer& w) {
    const std::string name = w.name(kClasses);
    const std::string attr = w.name(kAttrs);
    std::string out = fmt::format("class {}:\n    def __init__(self, {}):\n        self.{} = {}\n", name, attr, attr, attr);
    const std::size_t methods = 1 + w.below(2);
    for (std::size_t m = 0; m < methods; ++m) {
        out += "\n";
        switch (w.below(4)) {
            case 0:
                out += fmt::format("    def scaled(self, factor):\n        return self.{} * factor\n", attr);
                break;
            case 1:
                out += fmt::format("    def describe(self):\n        print(\"{} with {}\", self.{})\n", name, attr, attr);
                break;
            case 2:
                out += fmt::format("    def increase(self, amount):\n        self.{0} = self.{0} + amount\n        return self.{0}\n",
                                   attr);
                break;
            default:
                out += function(w, "    ");
                break;
        }
    }
    return out;
}

std::string imports(Writer& w) {
    std::string out;
    const std::size_t n = 1 + w.below(3);
    for (std::size_t k = 0; k < n; ++k) {
        switch (w.below(3)) {
            case 0: out += fmt::format("import {}\n", w.name(kModules)); break;
            case 1: out += fmt::format("import {}\n", w.name(kDotted)); break;
            default: out += fmt::format("from {} import {}\n", w.name(kModules), w.chance(0.5) ? "*" : "partial"); break;
        }
    }
    return out;
}

std::string snippet(Writer& w) {
    if (w.chance(0.05)) {
        return imports(w);
    }
    std::string out;
    if (w.chance(0.25)) {
        out += imports(w) + "\n";
    }
    if (w.chance(0.15)) {
        out += fmt::format("# {}\n", w.name(kComments));
    }
    if (w.chance(0.1)) {
        out += fmt::format("LIMIT = {}\n\n", w.num(5, 500));
    }
    if (w.chance(0.2)) {
        out += klass(w);
    } else {
        out += function(w, "");
        if (w.chance(0.3)) {
            out += "\n" + function(w, "");
        }
    }
    if (w.chance(0.1)) {
        out += fmt::format("\nprint({}(1, 2))\n", "max");
    }
    return out;
}

}  // namespace

std::vector<CodeSnippet> synthesize_clean_pool(std::size_t count, std::uint64_t seed) {
    std::vector<CodeSnippet> pool;
    pool.reserve(count);
    std::unordered_set<std::string> seen;
    Rng rng(seed);
    Writer w(rng);
    while (pool.size() < count) {
        auto s = CodeSnippet::make(snippet(w), std::string(category::correct_code));
        if (seen.insert(s.id).second) {
            pool.push_back(std::move(s));
        }
    }
    return pool;
}

}  // namespace triage
