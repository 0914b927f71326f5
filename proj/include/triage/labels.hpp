#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace triage {

namespace category {
inline constexpr std::string_view correct_code = "Correct Code";
inline constexpr std::string_view compatibility = "Compatibility Issue";
inline constexpr std::string_view performance = "Performance Issue";
inline constexpr std::string_view runtime_error = "Runtime Error";
inline constexpr std::string_view syntax_error = "Syntax Error";
inline constexpr std::string_view logic_error = "Logic Error";
inline constexpr std::string_view security = "Security Issue";
}  // namespace category

/// Ordered set of defect categories. The position of a name is its class
/// index, so the mapping name <-> index is a bijection over 0..size()-1.
class LabelSet {
public:
    LabelSet() = default;
    explicit LabelSet(std::vector<std::string> names);

    /// The seven categories used throughout the toolchain, in index order.
    static LabelSet default_set();

    std::size_t size() const noexcept { return names_.size(); }
    bool empty() const noexcept { return names_.empty(); }
    const std::string& name(std::size_t index) const;
    const std::vector<std::string>& names() const noexcept { return names_; }

    std::optional<std::size_t> index_of(std::string_view name) const;
    bool contains(std::string_view name) const { return index_of(name).has_value(); }
    /// Like index_of, but throws an Error naming the label when absent.
    std::size_t require(std::string_view name) const;

    friend bool operator==(const LabelSet&, const LabelSet&) = default;

private:
    std::vector<std::string> names_;
};

}  // namespace triage
