#include <doctest.h>

#include <string>

#include "saad/error.hpp"
#include "saad/extract.hpp"
#include "saad/text.hpp"

using namespace saad;

namespace {

std::vector<CommentRecord> extract(const std::string& src, int k = kDefaultContextLines) {
    return extract_comments(src, "src/A.java", "proj", k).records;
}

}  // namespace

TEST_CASE("empty input yields no records") {
    auto r = extract_comments("", "A.java", "p");
    CHECK(r.records.empty());
    CHECK_FALSE(r.unbalanced_block_comment);
}

TEST_CASE("line comment keeps code context around it") {
    const std::string src =
        "void f() {\n"
        "    int a = 0;\n"
        "    // Remove jumpsite if unused\n"
        "    boolean used = false;\n"
        "    return;\n"
        "}\n";
    auto recs = extract(src);
    REQUIRE(recs.size() == 1);
    const auto& r = recs[0];
    CHECK(r.kind == CommentKind::Line);
    CHECK(r.text == "Remove jumpsite if unused");
    CHECK(r.location.start_line == 3);
    CHECK(r.location.end_line == 3);
    CHECK(r.context_before == std::vector<std::string>{"void f() {", "    int a = 0;"});
    REQUIRE(r.context_after.size() == 3);
    CHECK(r.context_after[0] == "    boolean used = false;");
    CHECK(r.is_natural_language);
}

TEST_CASE("context window is capped at k lines") {
    std::string src;
    for (int i = 0; i < 10; ++i) src += "int x" + std::to_string(i) + ";\n";
    src += "// note\n";
    for (int i = 0; i < 10; ++i) src += "int y" + std::to_string(i) + ";\n";
    auto recs = extract(src, 2);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].context_before == std::vector<std::string>{"int x8;", "int x9;"});
    CHECK(recs[0].context_after == std::vector<std::string>{"int y0;", "int y1;"});
    CHECK(extract(src, 0)[0].context_before.empty());
    CHECK_THROWS_AS(extract_comments(src, "A.java", "p", -1), ValidationError);
}

TEST_CASE("adjacent line comments merge into one record") {
    const std::string src =
        "// These are outdated but we'll probably keep them\n"
        "  // forever anyway for backwards compatibility.\n"
        "int a;\n";
    auto recs = extract(src);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].text ==
          "These are outdated but we'll probably keep them forever anyway for backwards compatibility.");
    CHECK(recs[0].location.start_line == 1);
    CHECK(recs[0].location.end_line == 2);
}

TEST_CASE("line comments separated by code or blank lines stay apart") {
    CHECK(extract("// a\nint x;\n// b\n").size() == 2);
    CHECK(extract("// a\n\n// b\n").size() == 2);
    CHECK(extract("int x; // a\n// b\n").size() == 1);
}

TEST_CASE("block and doc comments are normalized") {
    const std::string src =
        "/**\n"
        " * Keep this for legacy code.\n"
        " *   Second line.\n"
        " */\n"
        "/* plain\n   block */\n";
    auto recs = extract(src);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].kind == CommentKind::Doc);
    CHECK(recs[0].text == "Keep this for legacy code. Second line.");
    CHECK(recs[0].location.start_line == 1);
    CHECK(recs[0].location.end_line == 4);
    CHECK(recs[1].kind == CommentKind::Block);
    CHECK(recs[1].text == "plain block");
    CHECK(recs[1].location.start_line == 5);
}

TEST_CASE("empty comments are dropped") {
    CHECK(extract("//\n/* */\n/**/\nint a;\n").empty());
}

TEST_CASE("comment markers inside literals are ignored") {
    const std::string base = "String s = \"hello\";\n// real\n";
    const std::string spiked = "String s = \"hello // fake /* not */\";\nchar c = '/';\n// real\n";
    CHECK(extract(base).size() == 1);
    CHECK(extract(spiked).size() == 1);
    CHECK(extract("String s = \"\\\" // fake\";\n").empty());
    CHECK(extract("String t = \"\"\"\n  // inside text block\n  \"\"\";\n").empty());
    CHECK(extract("auto s = R\"x(// raw )\" still raw)x\";\n").empty());
}

TEST_CASE("unterminated block comment is reported and still emitted") {
    auto r = extract_comments("int a;\n/* dangling\nmore text", "A.java", "p");
    CHECK(r.unbalanced_block_comment);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].text == "dangling more text");
    CHECK(r.records[0].location.end_line == 3);
}

TEST_CASE("records come out in start_line order with deterministic ids") {
    const std::string src = "/* one */ // two\n// three\nint a; /* four */\n";
    auto a = extract(src);
    auto b = extract(src);
    CHECK(a == b);
    for (std::size_t i = 1; i < a.size(); ++i)
        CHECK(a[i - 1].location.start_line <= a[i].location.start_line);
    CHECK(comment_id("p", "f", 1, "x") == comment_id("p", "f", 1, "x"));
    CHECK(comment_id("p", "f", 1, "x") != comment_id("p", "f", 2, "x"));
    CHECK(comment_id("p", "f", 1, "x") != comment_id("q", "f", 1, "x"));
}

TEST_CASE("natural-language heuristic") {
    CHECK(is_natural_language("Keep this for legacy code."));
    CHECK(is_natural_language("x"));
    CHECK_FALSE(is_natural_language("clinit.instructions.remove(jumpSite.getPrevious());"));
    CHECK_FALSE(is_natural_language("int count = 0;"));
    CHECK_FALSE(is_natural_language("return foo;"));
    CHECK_FALSE(is_natural_language("if (a) {"));
    CHECK_FALSE(is_natural_language("}};"));
    CHECK(is_natural_language("Not used;"));
    CHECK(is_natural_language("Temporary workaround (for the old code)."));
    CHECK(is_natural_language("This is pretty old code (see the ticket)"));
    CHECK_FALSE(is_natural_language("foo(bar)"));

    NlHeuristic strict{0.05};
    CHECK_FALSE(is_natural_language("a+b is the sum", strict));
    CHECK(is_natural_language("a+b is the sum"));

    CommentRecord rec;
    rec.text = "x = y;";
    rec.is_natural_language = true;
    CHECK_FALSE(is_natural_language(rec));
    CHECK_FALSE(rec.is_natural_language);
}

TEST_CASE("source location invariants") {
    CHECK_NOTHROW(validate(SourceLocation{"p", "src/A.java", 1, 1}));
    CHECK_THROWS_AS(validate(SourceLocation{"p", "src/A.java", 0, 1}), ValidationError);
    CHECK_THROWS_AS(validate(SourceLocation{"p", "src/A.java", 3, 2}), ValidationError);
    CHECK_THROWS_AS(validate(SourceLocation{"p", "/abs/A.java", 1, 1}), ValidationError);
    CHECK_THROWS_AS(validate(SourceLocation{"p", "src/../A.java", 1, 1}), ValidationError);
}

TEST_CASE("round-trip locality over a generated corpus") {
    // Every record's text words appear within its own source line range.
    const std::string words[] = {"alpha", "beta", "legacy", "old", "fix", "later"};
    unsigned state = 12345;
    auto next = [&] { return state = state * 1103515245u + 12345u, (state >> 16) & 0x7fff; };
    for (int trial = 0; trial < 50; ++trial) {
        std::string src;
        const int n = 3 + static_cast<int>(next() % 10);
        for (int i = 0; i < n; ++i) {
            const auto w = words[next() % 6];
            switch (next() % 4) {
                case 0: src += "int v" + std::to_string(i) + " = 1;\n"; break;
                case 1: src += "// " + w + " " + words[next() % 6] + "\n"; break;
                case 2: src += "/* " + w + "\n * " + words[next() % 6] + " */\n"; break;
                default: src += "call(\"" + w + " // no\"); // " + w + "\n"; break;
            }
        }
        const auto lines = saad::text::split_lines(src);
        for (const auto& r : extract(src)) {
            std::string region;
            for (int l = r.location.start_line; l <= r.location.end_line; ++l) region += lines[l - 1] + "\n";
            std::size_t pos = 0;
            std::string word;
            for (char c : r.text + " ") {
                if (c == ' ') {
                    if (!word.empty()) {
                        auto at = region.find(word, pos);
                        CHECK(at != std::string::npos);
                        if (at != std::string::npos) pos = at + word.size();
                    }
                    word.clear();
                } else {
                    word += c;
                }
            }
            CHECK(r.text.find("// no") == std::string::npos);
        }
    }
}
