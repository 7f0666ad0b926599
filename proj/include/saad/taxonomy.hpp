#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace saad {

// Closed set of aging-debt types. Enumerator order is the reporting order.
enum class TaxonomyType {
    AgingMaintenance,
    LegacyBackwardsCompat,
    UpdatesUpgrades,
    CurrentDeprecation,
    FutureDeprecation,
    NonMaintenance,
    CurrentObsolescence,
    FutureObsolescence,
};

enum class Category { Active, Dormant };

inline constexpr std::array<TaxonomyType, 8> kAllTypes = {
    TaxonomyType::AgingMaintenance,    TaxonomyType::LegacyBackwardsCompat,
    TaxonomyType::UpdatesUpgrades,     TaxonomyType::CurrentDeprecation,
    TaxonomyType::FutureDeprecation,   TaxonomyType::NonMaintenance,
    TaxonomyType::CurrentObsolescence, TaxonomyType::FutureObsolescence,
};

constexpr Category category(TaxonomyType t) noexcept {
    switch (t) {
        case TaxonomyType::AgingMaintenance:
        case TaxonomyType::LegacyBackwardsCompat:
        case TaxonomyType::UpdatesUpgrades:
            return Category::Active;
        default:
            return Category::Dormant;
    }
}

constexpr std::size_t index_of(TaxonomyType t) noexcept { return static_cast<std::size_t>(t); }

// Lexicon / wire spelling, e.g. "legacy_backwards_compat".
std::string_view to_string(TaxonomyType t) noexcept;
std::string_view display_name(TaxonomyType t) noexcept;
std::string_view to_string(Category c) noexcept;
std::optional<TaxonomyType> parse_taxonomy_type(std::string_view s) noexcept;

}  // namespace saad
