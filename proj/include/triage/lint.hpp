#pragma once

#include "triage/lexer.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace triage {

enum class Certainty {
    definite,  // decides the verdict on its own
    advisory,  // annotates the verdict only
};

std::string_view certainty_name(Certainty certainty);

struct RuleInfo {
    std::string_view id;
    std::string_view name;
    std::string_view category;
    Certainty certainty;
};

/// Registered rule catalog, ordered by id.
std::span<const RuleInfo> rule_catalog();
const RuleInfo& rule_info(std::string_view id);

struct Finding {
    std::string rule_id;
    std::string message;
    std::size_t line = 0;
    std::string category;
    Certainty certainty = Certainty::advisory;

    friend bool operator==(const Finding&, const Finding&) = default;
};

/// Runs every rule in the catalog; findings are sorted by (line, rule_id).
std::vector<Finding> run_rules(std::span<const Token> tokens);

/// `<line>:<rule_id>:<category>:<message>`
std::string render_finding(const Finding& finding);

}  // namespace triage
