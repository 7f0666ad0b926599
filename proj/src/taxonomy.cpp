#include "saad/taxonomy.hpp"

namespace saad {

namespace {
struct Names {
    std::string_view wire;
    std::string_view display;
};
constexpr std::array<Names, 8> kNames = {{
    {"aging_maintenance", "Aging Maintenance"},
    {"legacy_backwards_compat", "Legacy & Backwards Compatibility"},
    {"updates_upgrades", "Updates & Upgrades"},
    {"current_deprecation", "Current Deprecation"},
    {"future_deprecation", "Future Deprecation"},
    {"non_maintenance", "Non-Maintenance"},
    {"current_obsolescence", "Current Obsolescence"},
    {"future_obsolescence", "Future Obsolescence"},
}};
}  // namespace

std::string_view to_string(TaxonomyType t) noexcept { return kNames[index_of(t)].wire; }
std::string_view display_name(TaxonomyType t) noexcept { return kNames[index_of(t)].display; }

std::string_view to_string(Category c) noexcept {
    return c == Category::Active ? "active" : "dormant";
}

std::optional<TaxonomyType> parse_taxonomy_type(std::string_view s) noexcept {
    for (auto t : kAllTypes)
        if (kNames[index_of(t)].wire == s) return t;
    return std::nullopt;
}

}  // namespace saad
