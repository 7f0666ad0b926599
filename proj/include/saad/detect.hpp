#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "saad/extract.hpp"
#include "saad/lexicon.hpp"
#include "saad/taxonomy.hpp"

namespace saad {

struct Detection {
    std::string comment_id;
    std::vector<std::string> matched_features;
    std::vector<std::string> matched_patterns;  // every firing Active pattern, lexicon order
    bool existing_aging_feature = false;
    std::vector<TaxonomyType> taxonomy_types;  // filled by classify

    bool is_saad() const noexcept { return !matched_patterns.empty() || existing_aging_feature; }
    friend bool operator==(const Detection&, const Detection&) = default;
};

struct FeatureMatch {
    std::string comment_id;
    std::vector<std::string> features;
    friend bool operator==(const FeatureMatch&, const FeatureMatch&) = default;
};

// One result per natural-language comment with at least one feature hit.
std::vector<FeatureMatch> annotate_features(std::span<const CommentRecord> corpus,
                                            const Lexicon& lexicon);

// True iff the comment text carries the `@deprecated` tag (case-insensitive, whole token).
bool detect_existing_aging(std::string_view comment_text);
bool detect_existing_aging(const CommentRecord& record);

// Pattern stage over NL comments plus the `@deprecated` rule over every comment.
// Results keep corpus order regardless of `jobs`. taxonomy_types is left empty.
std::vector<Detection> detect_saad(std::span<const CommentRecord> corpus, const Lexicon& lexicon,
                                   unsigned jobs = 1);

}  // namespace saad
