#include <doctest.h>

#include <sstream>

#include "saad/config.hpp"
#include "saad/jsonl.hpp"
#include "saad/report.hpp"

using namespace saad;

TEST_CASE("config files parse key=value with comments") {
    std::istringstream in(
        "# defaults\n"
        "fp_threshold = 0.3\n"
        "z=2.576\n"
        "\n"
        "format = csv\n"
        "corpus = data/corpus.jsonl\n");
    auto cfg = Config::parse(in);
    CHECK(cfg.get("fp_threshold") == "0.3");
    auto rc = RunConfig::from(cfg);
    CHECK(rc.refine.fp_threshold == doctest::Approx(0.3));
    CHECK(rc.refine.sample_z == doctest::Approx(2.576));
    CHECK(rc.format == OutputFormat::Csv);
    CHECK(rc.corpus->string() == "data/corpus.jsonl");
    CHECK_FALSE(rc.lexicon);
}

TEST_CASE("overrides win and values are range-checked") {
    Config base;
    base.set("f1_target", "0.9");
    Config flags;
    flags.set("f1_target", "0.97");
    base.merge(flags);
    CHECK(RunConfig::from(base).refine.f1_target == doctest::Approx(0.97));

    auto bad = [](const std::string& k, const std::string& v) {
        Config c;
        c.set(k, v);
        return c;
    };
    CHECK_THROWS_AS(RunConfig::from(bad("fp_threshold", "0")), ValidationError);
    CHECK_THROWS_AS(RunConfig::from(bad("fp_threshold", "1.5")), ValidationError);
    CHECK_THROWS_AS(RunConfig::from(bad("consistency", "two")), ValidationError);
    CHECK_THROWS_AS(RunConfig::from(bad("E", "0")), ValidationError);
    CHECK_THROWS_AS(RunConfig::from(bad("format", "xml")), ValidationError);
    CHECK_THROWS_AS(RunConfig::from(bad("k_context", "-1")), ValidationError);
    CHECK_THROWS_AS(bad("no_such_key", "1"), ValidationError);

    std::istringstream malformed("just words\n");
    CHECK_THROWS_AS(Config::parse(malformed), ValidationError);
}

TEST_CASE("corpus and detection JSON-Lines round-trip") {
    CommentRecord r;
    r.id = "abc";
    r.location = {"proj", "src/A.java", 3, 4};
    r.kind = CommentKind::Doc;
    r.text = "Keep this for legacy code.";
    r.context_before = {"class A {"};
    r.context_after = {"  void f();", "}"};
    r.is_natural_language = true;
    std::ostringstream out;
    write_corpus(out, std::vector<CommentRecord>{r});
    const auto line = out.str();
    for (const char* key : {"\"id\"", "\"project_id\"", "\"file_path\"", "\"start_line\"", "\"end_line\"",
                            "\"kind\"", "\"text\"", "\"context_before\"", "\"context_after\"", "\"is_nl\""})
        CHECK_MESSAGE(line.find(key) != std::string::npos, key);
    std::istringstream in(line);
    auto back = read_corpus(in);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == r);

    Detection d{"abc", {"legacy"}, {"for legacy"}, false, {TaxonomyType::LegacyBackwardsCompat}};
    std::ostringstream dout;
    write_detections(dout, std::vector<Detection>{d});
    CHECK(dout.str() ==
          "{\"comment_id\":\"abc\",\"existing_aging\":false,\"features\":[\"legacy\"],"
          "\"patterns\":[\"for legacy\"],\"types\":[\"legacy_backwards_compat\"]}\n");
    std::istringstream din(dout.str());
    CHECK(read_detections(din)[0] == d);
}

TEST_CASE("malformed JSON-Lines report the line") {
    std::istringstream in("\n{\"comment_id\":\"a\"}\n");
    try {
        read_detections(in, "d.jsonl");
        FAIL("expected a parse error");
    } catch (const JsonlParseError& e) {
        CHECK(e.line_no() == 2);
    }
    std::istringstream garbage("{not json\n");
    CHECK_THROWS_AS(read_corpus(garbage), JsonlParseError);
}

namespace {

CommentRecord rec(const std::string& id, const std::string& project, bool nl = true) {
    CommentRecord r;
    r.id = id;
    r.location = {project, "A.java", 1, 1};
    r.text = "t";
    r.is_natural_language = nl;
    return r;
}

}  // namespace

TEST_CASE("report on empty detections") {
    std::vector<CommentRecord> corpus = {rec("a", "p1"), rec("b", "p2")};
    auto r = build_report(corpus, {});
    CHECK_FALSE(r.wilcoxon);
    const auto md = render_report(r, OutputFormat::Markdown);
    CHECK(md.find("insufficient data") != std::string::npos);
    CHECK(md.find("| Projects | 2 | 0 | 0.00 |") != std::string::npos);
    CHECK(render_report(r, OutputFormat::Jsonl).find("\"result\":\"insufficient data\"") != std::string::npos);
}

TEST_CASE("report on a hand-tallied three-project corpus") {
    // p1: two detections, one LBC+NM, one AM; p2: one dormant; p3: nothing.
    std::vector<CommentRecord> corpus = {rec("a1", "p1"), rec("a2", "p1"), rec("a3", "p1", false),
                                         rec("b1", "p2"), rec("b2", "p2"), rec("c1", "p3")};
    std::vector<Detection> dets = {
        {"a1", {}, {"x"}, false, {TaxonomyType::LegacyBackwardsCompat, TaxonomyType::NonMaintenance}},
        {"a2", {}, {"y"}, false, {TaxonomyType::AgingMaintenance}},
        {"b1", {}, {}, true, {TaxonomyType::CurrentDeprecation}},
    };
    auto r = build_report(corpus, dets);
    CHECK(r.prevalence.afflicted_projects == 2);
    CHECK(r.prevalence.pct_projects == doctest::Approx(66.67));
    CHECK(r.prevalence.total_nl_comments == 5);
    CHECK(r.prevalence.pct_comments == doctest::Approx(60.0));
    CHECK(r.tally.total() == 4);
    CHECK(r.tally.category_total(Category::Active) == 2);
    REQUIRE(r.wilcoxon);
    // Pairs: p1 (66.7, 33.3), p2 (0, 100) -> differences +33.3 and -100.
    CHECK(r.wilcoxon->n_nonzero == 2);
    CHECK(r.wilcoxon->w_plus == 1);
    CHECK(r.wilcoxon->w_minus == 2);

    const auto md = render_report(r, OutputFormat::Markdown);
    CHECK(md.find("| NL comments | 5 | 3 | 60.0 |") != std::string::npos);
    CHECK(md.find("| legacy_backwards_compat | active | 1 | 25.00 |") != std::string::npos);
    CHECK(md.find("| existing_aging_feature | dormant | 1 | 25.00 |") != std::string::npos);
    CHECK(md.find("| **active** | | 2 | 50.00 |") != std::string::npos);
    CHECK(md.find("N=2 W=1 p=1.000 r=") != std::string::npos);
    CHECK(md == render_report(build_report(corpus, dets), OutputFormat::Markdown));

    const auto csv = render_report(r, OutputFormat::Csv);
    CHECK(csv.rfind("type,count,pct,category\n", 0) == 0);
}

TEST_CASE("orphan detections are a consistency error") {
    std::vector<CommentRecord> corpus = {rec("a", "p")};
    std::vector<Detection> dets = {{"ghost", {}, {}, true, {TaxonomyType::CurrentDeprecation}}};
    try {
        build_report(corpus, dets);
        FAIL("expected ConsistencyError");
    } catch (const ConsistencyError& e) {
        CHECK(std::string(e.what()).find("ghost") != std::string::npos);
    }
}

TEST_CASE("Wilcoxon line format") {
    stats::WilcoxonResult w;
    w.n_nonzero = 1957;
    w.w_statistic = 181312;
    w.p_value = 1e-20;
    w.r = -0.692;
    w.magnitude = stats::Magnitude::Large;
    CHECK(format_wilcoxon(w) == "N=1957 W=181312 p=<0.001 r=-0.692 (Large)");
    w.w_statistic = 10.5;
    CHECK(format_wilcoxon(w).find("W=10.5 ") != std::string::npos);
}
