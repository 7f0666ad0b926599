#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "saad/error.hpp"
#include "saad/taxonomy.hpp"

namespace saad {

enum class Directness { Direct, Indirect };
enum class PatternStatus { Active, Excluded };
enum class PatternSource { Published, User };

std::string_view to_string(Directness d) noexcept;
std::string_view to_string(PatternStatus s) noexcept;
std::string_view to_string(PatternSource s) noexcept;

class LexiconParseError : public ValidationError {
public:
    LexiconParseError(int line_no, const std::string& reason)
        : ValidationError("lexicon line " + std::to_string(line_no) + ": " + reason),
          line_no_(line_no) {}
    int line_no() const noexcept { return line_no_; }

private:
    int line_no_;
};

class DuplicateTerm : public ValidationError {
public:
    explicit DuplicateTerm(const std::string& term)
        : ValidationError("duplicate lexicon entry '" + term + "'"), term_(term) {}
    const std::string& term() const noexcept { return term_; }

private:
    std::string term_;
};

class UnknownTaxonomyType : public ValidationError {
public:
    explicit UnknownTaxonomyType(const std::string& value)
        : ValidationError("unknown taxonomy type '" + value + "'"), value_(value) {}
    const std::string& value() const noexcept { return value_; }

private:
    std::string value_;
};

class InvalidPattern : public ValidationError {
public:
    InvalidPattern(const std::string& raw, std::size_t position, const std::string& reason)
        : ValidationError("invalid pattern '" + raw + "' at position " +
                          std::to_string(position) + ": " + reason),
          raw_(raw),
          position_(position) {}
    const std::string& raw() const noexcept { return raw_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::string raw_;
    std::size_t position_;
};

// Compiled pattern. Case-insensitive search over normalized comment text;
// `^` and `$` anchor to the whole text. Immutable and safe to share across threads.
class PatternMatcher {
public:
    struct Impl;
    explicit PatternMatcher(std::string raw);
    ~PatternMatcher();
    PatternMatcher(const PatternMatcher&) = delete;
    PatternMatcher& operator=(const PatternMatcher&) = delete;

    const std::string& raw() const noexcept { return raw_; }
    bool matches(std::string_view text) const;
    // Byte offsets [first, second) of the leftmost match.
    std::optional<std::pair<std::size_t, std::size_t>> find(std::string_view text) const;

private:
    std::string raw_;
    std::unique_ptr<Impl> impl_;
};

std::shared_ptr<const PatternMatcher> compile_pattern(const std::string& raw);

struct AgingFeature {
    std::string term;  // lowercase, may contain spaces
    Directness directness = Directness::Direct;
};

struct SaadPattern {
    std::string raw;
    TaxonomyType taxonomy_type = TaxonomyType::AgingMaintenance;
    PatternStatus status = PatternStatus::Active;
    std::optional<int> excluded_in_iteration;
    PatternSource source = PatternSource::Published;
    std::shared_ptr<const PatternMatcher> matcher;

    bool active() const noexcept { return status == PatternStatus::Active; }
};

struct Lexicon {
    std::vector<AgingFeature> features;
    std::vector<SaadPattern> patterns;
    std::string version;

    std::size_t active_pattern_count() const;
    const SaadPattern* find_pattern(std::string_view raw) const;
};

// Tab-separated lexicon format:
//   F<TAB>term<TAB>direct|indirect
//   P<TAB>raw<TAB>taxonomy_type<TAB>active|excluded[<TAB>iteration[<TAB>published|user]]
// Lines starting with '#' and blank lines are ignored.
Lexicon parse_lexicon(std::istream& in);
Lexicon load_lexicon(const std::filesystem::path& path);
void write_lexicon(std::ostream& out, const Lexicon& lexicon);
void save_lexicon(const std::filesystem::path& path, const Lexicon& lexicon);

// Content hash of the canonical serialization.
std::string lexicon_version(const Lexicon& lexicon);

// Returns a new lexicon version with `raws` marked Excluded in `iteration`.
Lexicon with_exclusions(const Lexicon& lexicon, const std::vector<std::string>& raws,
                        int iteration);

enum class MatchTarget { Features, Patterns };

// Indices of every matching entry in lexicon order. Excluded patterns never match.
// Features use word-boundary matching; patterns use the compiled matcher.
std::vector<std::size_t> match_any(const Lexicon& lexicon, std::string_view text,
                                   MatchTarget which);

std::vector<std::string> matched_features(const Lexicon& lexicon, std::string_view text);
std::vector<std::string> matched_patterns(const Lexicon& lexicon, std::string_view text);

// Case-insensitive whole-word occurrence of `term_lower` in `text`.
bool contains_term(std::string_view text, std::string_view term_lower);

}  // namespace saad
