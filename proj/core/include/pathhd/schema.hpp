#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace pathhd {

// Separator used in canonical schema keys; relation names may not contain it.
inline constexpr std::string_view kSchemaSeparator = "->";

// Ordered relation sequence z = (r_1, ..., r_l). Ordering is lexicographic
// over relation names.
struct Schema {
    std::vector<std::string> relations;

    std::size_t size() const noexcept { return relations.size(); }
    bool empty() const noexcept { return relations.empty(); }

    // Relations joined with "->".
    std::string key() const;
    static Schema from_key(std::string_view key);

    friend auto operator<=>(const Schema&, const Schema&) = default;
    friend bool operator==(const Schema&, const Schema&) = default;
};

}  // namespace pathhd
