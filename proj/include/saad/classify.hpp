#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "saad/detect.hpp"
#include "saad/lexicon.hpp"
#include "saad/taxonomy.hpp"

namespace saad {

class UnmappedPattern : public ConsistencyError {
public:
    explicit UnmappedPattern(const std::string& raw)
        : ConsistencyError("pattern '" + raw + "' has no taxonomy type in the lexicon"), raw_(raw) {}
    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

// Deduplicated union of the matched Active patterns' types, plus
// CurrentDeprecation for the `@deprecated` tag. Sorted in enum order.
std::vector<TaxonomyType> classify(const Detection& detection, const Lexicon& lexicon);
void classify_all(std::span<Detection> detections, const Lexicon& lexicon);

// Multi-label instance counts. A detection contributes one instance per type
// it carries, so percentages are over type instances rather than comments.
struct TypeTally {
    std::array<std::uint64_t, 8> counts{};
    // Portion of counts[CurrentDeprecation] contributed by the `@deprecated` tag.
    std::uint64_t existing_aging = 0;

    std::uint64_t total() const noexcept;
    std::uint64_t count(TaxonomyType t) const noexcept { return counts[index_of(t)]; }
    std::uint64_t category_total(Category c) const noexcept;
    double type_pct(TaxonomyType t) const noexcept;
    double existing_aging_pct() const noexcept;
    double category_pct(Category c) const noexcept;

    TypeTally& operator+=(const TypeTally& other) noexcept;
    friend TypeTally operator+(TypeTally a, const TypeTally& b) noexcept { return a += b; }
    friend bool operator==(const TypeTally&, const TypeTally&) = default;
};

TypeTally tally(std::span<const Detection> detections);

struct TallyRow {
    std::string type;  // wire name; the tag-derived share is its own row
    std::uint64_t count = 0;
    double pct = 0.0;
    Category category = Category::Active;
};

// Nine rows: the eight types with CurrentDeprecation split into its
// pattern-derived part and an `existing_aging_feature` row.
std::vector<TallyRow> tally_rows(const TypeTally& t);

// CSV with header `type,count,pct,category`; pct to two decimals.
void write_tally_csv(std::ostream& out, const TypeTally& t);

}  // namespace saad
