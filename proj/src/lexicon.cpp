#include "saad/lexicon.hpp"

#include <boost/regex.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "saad/text.hpp"

namespace saad {

struct PatternMatcher::Impl {
    boost::regex re;
};

namespace {

// Locates the first structural error boost would otherwise report without a
// useful offset (unclosed groups and classes, dangling escapes).
std::optional<std::pair<std::size_t, std::string>> structural_error(std::string_view raw) {
    std::vector<std::size_t> groups;
    std::optional<std::size_t> class_open;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = raw[i];
        if (c == '\\') {
            if (i + 1 == raw.size()) return std::pair{i, std::string("dangling escape")};
            ++i;
            continue;
        }
        if (class_open) {
            if (c == ']' && i > *class_open + 1) class_open.reset();
            continue;
        }
        if (c == '[') {
            class_open = i;
        } else if (c == '(') {
            groups.push_back(i);
        } else if (c == ')') {
            if (groups.empty()) return std::pair{i, std::string("unmatched ')'")};
            groups.pop_back();
        }
    }
    if (class_open) return std::pair{*class_open, std::string("unterminated character class")};
    if (!groups.empty()) return std::pair{groups.back(), std::string("unterminated group")};
    return std::nullopt;
}

Directness parse_directness(std::string_view s, int line_no) {
    if (s == "direct") return Directness::Direct;
    if (s == "indirect") return Directness::Indirect;
    throw LexiconParseError(line_no, "directness must be 'direct' or 'indirect', got '" +
                                         std::string(s) + "'");
}

PatternStatus parse_status(std::string_view s, int line_no) {
    if (s == "active") return PatternStatus::Active;
    if (s == "excluded") return PatternStatus::Excluded;
    throw LexiconParseError(line_no, "status must be 'active' or 'excluded', got '" +
                                         std::string(s) + "'");
}

bool is_lowercase(std::string_view s) { return text::to_lower(s) == s; }

}  // namespace

PatternMatcher::PatternMatcher(std::string raw) : raw_(std::move(raw)), impl_(new Impl) {
    if (raw_.empty()) throw InvalidPattern(raw_, 0, "empty pattern");
    if (auto err = structural_error(raw_)) throw InvalidPattern(raw_, err->first, err->second);
    try {
        impl_->re = boost::regex(raw_, boost::regex::perl | boost::regex::icase);
    } catch (const boost::regex_error& e) {
        const auto pos = e.position() < 0 ? raw_.size() : static_cast<std::size_t>(e.position());
        throw InvalidPattern(raw_, pos, e.what());
    }
}

PatternMatcher::~PatternMatcher() = default;

bool PatternMatcher::matches(std::string_view text) const {
    return boost::regex_search(text.begin(), text.end(), impl_->re,
                               boost::match_single_line | boost::match_not_dot_newline);
}

std::optional<std::pair<std::size_t, std::size_t>> PatternMatcher::find(
    std::string_view text) const {
    boost::match_results<std::string_view::const_iterator> m;
    if (!boost::regex_search(text.begin(), text.end(), m, impl_->re,
                             boost::match_single_line | boost::match_not_dot_newline))
        return std::nullopt;
    const auto first = static_cast<std::size_t>(m[0].first - text.begin());
    const auto last = static_cast<std::size_t>(m[0].second - text.begin());
    return std::pair{first, last};
}

std::shared_ptr<const PatternMatcher> compile_pattern(const std::string& raw) {
    return std::make_shared<const PatternMatcher>(raw);
}

std::string_view to_string(Directness d) noexcept {
    return d == Directness::Direct ? "direct" : "indirect";
}
std::string_view to_string(PatternStatus s) noexcept {
    return s == PatternStatus::Active ? "active" : "excluded";
}
std::string_view to_string(PatternSource s) noexcept {
    return s == PatternSource::Published ? "published" : "user";
}

std::size_t Lexicon::active_pattern_count() const {
    std::size_t n = 0;
    for (const auto& p : patterns) n += p.active() ? 1 : 0;
    return n;
}

const SaadPattern* Lexicon::find_pattern(std::string_view raw) const {
    for (const auto& p : patterns)
        if (p.raw == raw) return &p;
    return nullptr;
}

Lexicon parse_lexicon(std::istream& in) {
    Lexicon lex;
    std::unordered_set<std::string> terms, raws;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        const auto cols = text::split(line, '\t');
        if (cols[0] == "F") {
            if (cols.size() != 3) throw LexiconParseError(line_no, "feature rows have 3 columns");
            const std::string& term = cols[1];
            if (text::trim(term).empty()) throw LexiconParseError(line_no, "empty feature term");
            if (!is_lowercase(term))
                throw LexiconParseError(line_no, "feature term must be lowercase: '" + term + "'");
            if (!terms.insert(term).second) throw DuplicateTerm(term);
            lex.features.push_back({term, parse_directness(cols[2], line_no)});
        } else if (cols[0] == "P") {
            if (cols.size() < 4 || cols.size() > 6)
                throw LexiconParseError(line_no, "pattern rows have 4 to 6 columns");
            SaadPattern p;
            p.raw = cols[1];
            if (p.raw.empty()) throw LexiconParseError(line_no, "empty pattern");
            if (!raws.insert(p.raw).second) throw DuplicateTerm(p.raw);
            auto type = parse_taxonomy_type(cols[2]);
            if (!type) throw UnknownTaxonomyType(cols[2]);
            p.taxonomy_type = *type;
            p.status = parse_status(cols[3], line_no);
            if (cols.size() >= 5 && !cols[4].empty()) {
                int it = 0;
                auto [ptr, ec] = std::from_chars(cols[4].data(), cols[4].data() + cols[4].size(), it);
                if (ec != std::errc{} || ptr != cols[4].data() + cols[4].size() || it < 1)
                    throw LexiconParseError(line_no, "iteration must be a positive integer");
                p.excluded_in_iteration = it;
            }
            if (cols.size() == 6 && !cols[5].empty()) {
                if (cols[5] == "published") p.source = PatternSource::Published;
                else if (cols[5] == "user") p.source = PatternSource::User;
                else throw LexiconParseError(line_no, "source must be 'published' or 'user'");
            }
            p.matcher = compile_pattern(p.raw);
            lex.patterns.push_back(std::move(p));
        } else {
            throw LexiconParseError(line_no, "unknown record tag '" + cols[0] + "'");
        }
    }
    lex.version = lexicon_version(lex);
    return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon " + path.string());
    return parse_lexicon(in);
}

namespace {
void write_rows(std::ostream& out, const Lexicon& lex) {
    for (const auto& f : lex.features) out << "F\t" << f.term << '\t' << to_string(f.directness) << '\n';
    for (const auto& p : lex.patterns) {
        out << "P\t" << p.raw << '\t' << to_string(p.taxonomy_type) << '\t' << to_string(p.status)
            << '\t';
        if (p.excluded_in_iteration) out << *p.excluded_in_iteration;
        out << '\t' << to_string(p.source) << '\n';
    }
}
}  // namespace

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
    out << "# SAAD lexicon " << lexicon_version(lexicon) << '\n';
    write_rows(out, lexicon);
}

void save_lexicon(const std::filesystem::path& path, const Lexicon& lexicon) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write lexicon " + path.string());
    write_lexicon(out, lexicon);
}

std::string lexicon_version(const Lexicon& lexicon) {
    std::ostringstream ss;
    write_rows(ss, lexicon);
    return text::hex64(text::fnv1a64(ss.str()));
}

Lexicon with_exclusions(const Lexicon& lexicon, const std::vector<std::string>& raws,
                        int iteration) {
    Lexicon next = lexicon;
    for (const auto& raw : raws) {
        bool found = false;
        for (auto& p : next.patterns) {
            if (p.raw != raw) continue;
            found = true;
            if (p.active()) {
                p.status = PatternStatus::Excluded;
                p.excluded_in_iteration = iteration;
            }
        }
        if (!found) throw ValidationError("cannot exclude unknown pattern '" + raw + "'");
    }
    next.version = lexicon_version(next);
    return next;
}

namespace {
bool contains_term_lowered(const std::string& lowered, std::string_view term) {
    std::size_t pos = 0;
    while ((pos = lowered.find(term, pos)) != std::string::npos) {
        const std::size_t end = pos + term.size();
        if ((pos == 0 || !text::is_word_char(lowered[pos - 1])) &&
            (end == lowered.size() || !text::is_word_char(lowered[end])))
            return true;
        ++pos;
    }
    return false;
}
}  // namespace

bool contains_term(std::string_view text, std::string_view term_lower) {
    if (term_lower.empty()) return false;
    return contains_term_lowered(text::to_lower(text), term_lower);
}

std::vector<std::size_t> match_any(const Lexicon& lexicon, std::string_view text,
                                   MatchTarget which) {
    std::vector<std::size_t> hits;
    if (which == MatchTarget::Features) {
        const std::string lowered = text::to_lower(text);
        for (std::size_t i = 0; i < lexicon.features.size(); ++i)
            if (contains_term_lowered(lowered, lexicon.features[i].term)) hits.push_back(i);
    } else {
        for (std::size_t i = 0; i < lexicon.patterns.size(); ++i) {
            const auto& p = lexicon.patterns[i];
            if (p.active() && p.matcher && p.matcher->matches(text)) hits.push_back(i);
        }
    }
    return hits;
}

std::vector<std::string> matched_features(const Lexicon& lexicon, std::string_view text) {
    std::vector<std::string> out;
    for (auto i : match_any(lexicon, text, MatchTarget::Features))
        out.push_back(lexicon.features[i].term);
    return out;
}

std::vector<std::string> matched_patterns(const Lexicon& lexicon, std::string_view text) {
    std::vector<std::string> out;
    for (auto i : match_any(lexicon, text, MatchTarget::Patterns))
        out.push_back(lexicon.patterns[i].raw);
    return out;
}

}  // namespace saad
