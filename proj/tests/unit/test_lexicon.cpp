#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include "saad/lexicon.hpp"
#include "test_paths.hpp"

using namespace saad;

namespace {

Lexicon parse(const std::string& s) {
    std::istringstream in(s);
    return parse_lexicon(in);
}

bool has(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

const Lexicon& seed() {
    static const Lexicon lex = load_lexicon(saad::test::data_dir() / "lexicon" / "saad_seed.tsv");
    return lex;
}

}  // namespace

TEST_CASE("seed lexicon ships 145 features, 46 direct and 99 indirect") {
    const auto& lex = seed();
    CHECK(lex.features.size() == 145);
    const auto direct = std::count_if(lex.features.begin(), lex.features.end(),
                                      [](const AgingFeature& f) { return f.directness == Directness::Direct; });
    CHECK(direct == 46);
    CHECK(lex.version.size() == 16);
}

TEST_CASE("seed lexicon carries the eight seed terms and quoted patterns") {
    const auto& lex = seed();
    for (const char* term : {"old", "outdated", "legacy", "unmaintained", "unused", "unnecessary",
                             "end-of-life", "deadcode"}) {
        const bool found = std::any_of(lex.features.begin(), lex.features.end(),
                                       [&](const AgingFeature& f) { return f.term == term; });
        CHECK_MESSAGE(found, term);
    }
    for (const char* raw : {"for legacy", "is legacy", "^obsolete", "for older versions?",
                            "future versions of the", "this[\\s\\w]*will be removed\\s*(in|after|\\.)?"}) {
        CHECK_MESSAGE(lex.find_pattern(raw) != nullptr, raw);
    }
    CHECK(lex.find_pattern("for legacy")->taxonomy_type == TaxonomyType::LegacyBackwardsCompat);
    CHECK(lex.find_pattern("^obsolete")->taxonomy_type == TaxonomyType::CurrentObsolescence);
}

TEST_CASE("refined lexicon excludes the 56 patterns dropped over four iterations") {
    auto lex = load_lexicon(saad::test::data_dir() / "lexicon" / "saad_refined.tsv");
    std::map<int, int> per_iteration;
    for (const auto& p : lex.patterns)
        if (!p.active()) ++per_iteration[p.excluded_in_iteration.value_or(0)];
    CHECK(per_iteration[1] == 22);
    CHECK(per_iteration[2] == 4);
    CHECK(per_iteration[3] == 22);
    CHECK(per_iteration[4] == 8);
    CHECK(lex.patterns.size() == seed().patterns.size());
}

TEST_CASE("every shipped pattern compiles") {
    for (const auto& p : seed().patterns) {
        CHECK(p.matcher != nullptr);
        CHECK_NOTHROW(compile_pattern(p.raw));
    }
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse("# header\nF\tlegacy\tdirect\nF\tbroken\n");
        FAIL("expected a parse error");
    } catch (const LexiconParseError& e) {
        CHECK(e.line_no() == 3);
    }
    CHECK_THROWS_AS(parse("X\tlegacy\tdirect\n"), LexiconParseError);
    CHECK_THROWS_AS(parse("F\tlegacy\tsideways\n"), LexiconParseError);
    CHECK_THROWS_AS(parse("P\tfoo\taging_maintenance\tmaybe\n"), LexiconParseError);
}

TEST_CASE("duplicate terms and unknown types are rejected") {
    CHECK_THROWS_AS(parse("F\tlegacy\tdirect\nF\tlegacy\tindirect\n"), DuplicateTerm);
    CHECK_THROWS_AS(parse("F\tLegacy\tdirect\n"), LexiconParseError);
    CHECK_THROWS_AS(parse("P\tfoo\tActiveMaintenance\tactive\n"), UnknownTaxonomyType);
    CHECK_THROWS_AS(parse("P\tfoo\taging_maintenance\tactive\nP\tfoo\tnon_maintenance\tactive\n"),
                    DuplicateTerm);
}

TEST_CASE("write and parse round-trip preserves content and version") {
    const auto& lex = seed();
    std::ostringstream out;
    write_lexicon(out, lex);
    auto back = parse(out.str());
    CHECK(back.version == lex.version);
    REQUIRE(back.patterns.size() == lex.patterns.size());
    for (std::size_t i = 0; i < lex.patterns.size(); ++i) {
        CHECK(back.patterns[i].raw == lex.patterns[i].raw);
        CHECK(back.patterns[i].source == lex.patterns[i].source);
    }
}

TEST_CASE("compile_pattern follows the pattern notation") {
    auto older = compile_pattern("for older versions?");
    CHECK(older->matches("kept for older version"));
    CHECK(older->matches("kept for older versions"));
    CHECK(older->matches("Kept For Older Versions of the API"));

    auto obs = compile_pattern("^obsolete");
    CHECK(obs->matches("Obsoleted method which does nothing."));
    CHECK_FALSE(obs->matches("is obsolete"));

    auto removed = compile_pattern("this[\\s\\w]*will be removed\\s*(in|after|\\.)?");
    CHECK(removed->matches("this method will be removed in 2.0"));

    auto tail = compile_pattern("is unnecessary$");
    CHECK(tail->matches("this check is unnecessary"));
    CHECK_FALSE(tail->matches("this check is unnecessary now"));

    auto span = compile_pattern("for legacy")->find("Keep this for legacy code.");
    REQUIRE(span);
    CHECK(span->first == 10);
    CHECK(span->second == 20);
}

TEST_CASE("invalid patterns report a position") {
    try {
        compile_pattern("([");
        FAIL("expected InvalidPattern");
    } catch (const InvalidPattern& e) {
        CHECK(e.raw() == "([");
        CHECK(e.position() <= 2);
    }
    CHECK_THROWS_AS(compile_pattern(""), InvalidPattern);
    CHECK_THROWS_AS(compile_pattern("abc\\"), InvalidPattern);
    CHECK_THROWS_AS(compile_pattern("a{2,1}"), InvalidPattern);
}

TEST_CASE("features match on word boundaries") {
    const auto& lex = seed();
    CHECK(has(matched_features(lex, "Remove jumpsite if unused"), "unused"));
    CHECK_FALSE(has(matched_features(lex, "raise the threshold"), "old"));
    CHECK(has(matched_features(lex, "the OLD way"), "old"));
    CHECK(contains_term("an end-of-life release", "end-of-life"));
    CHECK_FALSE(contains_term("golden", "old"));
    CHECK(contains_term("old", "old"));
}

TEST_CASE("pattern matching returns lexicon order and skips exclusions") {
    const auto& lex = seed();
    CHECK(matched_patterns(lex, "totally unrelated text").empty());
    CHECK(has(matched_patterns(lex, "Keep this for legacy code."), "for legacy"));

    auto idx = match_any(lex, "Object[] and List are outdated and may be deprecated some day",
                         MatchTarget::Patterns);
    CHECK(std::is_sorted(idx.begin(), idx.end()));

    auto excluded = with_exclusions(lex, {"for legacy"}, 1);
    CHECK(excluded.version != lex.version);
    CHECK(excluded.active_pattern_count() + 1 == lex.active_pattern_count());
    CHECK_FALSE(has(matched_patterns(excluded, "Keep this for legacy code."), "for legacy"));
    // Exclusion is absorbing: a second pass keeps the original iteration.
    auto again = with_exclusions(excluded, {"for legacy"}, 2);
    CHECK(again.find_pattern("for legacy")->excluded_in_iteration == 1);
    CHECK_THROWS_AS(with_exclusions(lex, {"no such pattern"}, 1), ValidationError);
}
