#include "triage/labels.hpp"

#include "triage/error.hpp"

#include <algorithm>

namespace triage {

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) {
        throw Error(ErrorKind::data, "label set must contain at least one category");
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i].empty()) {
            throw Error(ErrorKind::data, "label set contains an empty category name");
        }
        if (std::find(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(i), names_[i]) !=
            names_.begin() + static_cast<std::ptrdiff_t>(i)) {
            throw Error(ErrorKind::data, "duplicate category '" + names_[i] + "'");
        }
    }
}

LabelSet LabelSet::default_set() {
    return LabelSet({std::string(category::correct_code), std::string(category::compatibility),
                     std::string(category::performance), std::string(category::runtime_error),
                     std::string(category::syntax_error), std::string(category::logic_error),
                     std::string(category::security)});
}

const std::string& LabelSet::name(std::size_t index) const {
    if (index >= names_.size()) {
        throw Error(ErrorKind::data, "class index " + std::to_string(index) + " out of range");
    }
    return names_[index];
}

std::optional<std::size_t> LabelSet::index_of(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - names_.begin());
}

std::size_t LabelSet::require(std::string_view name) const {
    if (auto index = index_of(name)) {
        return *index;
    }
    throw Error(ErrorKind::data, "unknown label '" + std::string(name) + "'");
}

}  // namespace triage
