#include "saad/classify.hpp"

#include <algorithm>
#include <ostream>

#include "saad/text.hpp"

namespace saad {

std::vector<TaxonomyType> classify(const Detection& detection, const Lexicon& lexicon) {
    std::array<bool, 8> present{};
    for (const auto& raw : detection.matched_patterns) {
        const SaadPattern* p = lexicon.find_pattern(raw);
        if (!p) throw UnmappedPattern(raw);
        if (p->active()) present[index_of(p->taxonomy_type)] = true;
    }
    if (detection.existing_aging_feature) present[index_of(TaxonomyType::CurrentDeprecation)] = true;

    std::vector<TaxonomyType> types;
    for (auto t : kAllTypes)
        if (present[index_of(t)]) types.push_back(t);
    if (types.empty())
        throw ConsistencyError("detection " + detection.comment_id +
                               " has no active pattern and no @deprecated tag");
    return types;
}

void classify_all(std::span<Detection> detections, const Lexicon& lexicon) {
    for (auto& d : detections) d.taxonomy_types = classify(d, lexicon);
}

std::uint64_t TypeTally::total() const noexcept {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    return n;
}

std::uint64_t TypeTally::category_total(Category c) const noexcept {
    std::uint64_t n = 0;
    for (auto t : kAllTypes)
        if (category(t) == c) n += counts[index_of(t)];
    return n;
}

namespace {
double pct_of(std::uint64_t part, std::uint64_t whole) {
    return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}
}  // namespace

double TypeTally::type_pct(TaxonomyType t) const noexcept { return pct_of(count(t), total()); }
double TypeTally::existing_aging_pct() const noexcept { return pct_of(existing_aging, total()); }
double TypeTally::category_pct(Category c) const noexcept {
    return pct_of(category_total(c), total());
}

TypeTally& TypeTally::operator+=(const TypeTally& other) noexcept {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    existing_aging += other.existing_aging;
    return *this;
}

TypeTally tally(std::span<const Detection> detections) {
    TypeTally t;
    for (const auto& d : detections) {
        for (auto type : d.taxonomy_types) ++t.counts[index_of(type)];
        const bool has_current = std::find(d.taxonomy_types.begin(), d.taxonomy_types.end(),
                                           TaxonomyType::CurrentDeprecation) !=
                                 d.taxonomy_types.end();
        if (d.existing_aging_feature && has_current) ++t.existing_aging;
    }
    return t;
}

std::vector<TallyRow> tally_rows(const TypeTally& t) {
    std::vector<TallyRow> rows;
    const auto total = t.total();
    for (auto type : kAllTypes) {
        std::uint64_t n = t.count(type);
        if (type == TaxonomyType::CurrentDeprecation) n -= t.existing_aging;
        rows.push_back({std::string(to_string(type)), n, pct_of(n, total), category(type)});
        if (type == TaxonomyType::CurrentDeprecation)
            rows.push_back({"existing_aging_feature", t.existing_aging,
                            pct_of(t.existing_aging, total), Category::Dormant});
    }
    return rows;
}

void write_tally_csv(std::ostream& out, const TypeTally& t) {
    out << "type,count,pct,category\n";
    for (const auto& r : tally_rows(t))
        out << r.type << ',' << r.count << ',' << text::format_fixed(r.pct, 2) << ','
            << to_string(r.category) << '\n';
}

}  // namespace saad
