#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "saad/refine.hpp"
#include "saad/stats.hpp"

using namespace saad;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("saad_refine_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

AnnotationRecord rec(const std::string& id, const std::string& who, Verdict v) {
    AnnotationRecord r;
    r.comment_id = id;
    r.annotator = who;
    r.verdict = v;
    r.ts = "2024-05-01T10:00:00Z";
    return r;
}

Detection det(const std::string& id, std::vector<std::string> patterns,
              std::vector<std::string> features = {}) {
    Detection d;
    d.comment_id = id;
    d.matched_patterns = std::move(patterns);
    d.matched_features = std::move(features);
    return d;
}

}  // namespace

TEST_CASE("verdict and annotation JSON round-trip") {
    CHECK(to_string(Verdict::NonSaad) == "NON_SAAD");
    CHECK(parse_verdict("SAAD") == Verdict::Saad);
    CHECK_FALSE(parse_verdict("saad"));

    auto r = rec("c1", "ann", Verdict::Saad);
    r.type = TaxonomyType::NonMaintenance;
    r.note = "unused field";
    r.proposed_pattern = "field is unused";
    auto j = to_json(r);
    CHECK(j["verdict"] == "SAAD");
    CHECK(j["type"] == "non_maintenance");
    CHECK(annotation_from_json(j) == r);

    auto bare = to_json(rec("c2", "ann", Verdict::NonSaad));
    CHECK(bare["type"].is_null());
    CHECK(bare["proposed_pattern"].is_null());
    CHECK_THROWS_AS(annotation_from_json(json{{"comment_id", "x"}, {"annotator", "a"}, {"verdict", "maybe"}}),
                    ValidationError);
    CHECK_THROWS_AS(annotation_from_json(json{{"comment_id", "x"}, {"annotator", "a"},
                                              {"verdict", "SAAD"}, {"type", "ActiveMaintenance"}}),
                    UnknownTaxonomyType);
}

TEST_CASE("timestamps and proposed patterns are validated") {
    CHECK(is_rfc3339("2024-05-01T10:00:00Z"));
    CHECK(is_rfc3339("2024-05-01T10:00:00.123+02:00"));
    CHECK_FALSE(is_rfc3339("2024-05-01 10:00"));
    CHECK(is_rfc3339(now_rfc3339()));

    auto bad_ts = rec("c", "a", Verdict::Saad);
    bad_ts.ts = "yesterday";
    CHECK_THROWS_AS(validate(bad_ts), ValidationError);
    auto bad_pat = rec("c", "a", Verdict::Saad);
    bad_pat.proposed_pattern = "([";
    CHECK_THROWS_AS(validate(bad_pat), InvalidPattern);
}

TEST_CASE("annotation store is last-write-wins and idempotent") {
    TempDir tmp;
    const auto log = tmp.path / "ann.jsonl";
    {
        AnnotationStore store(log);
        auto a1 = store.submit(rec("c1", "alice", Verdict::Saad));
        CHECK(a1.revision == 1);
        CHECK(a1.appended);
        auto again = store.submit(rec("c1", "alice", Verdict::Saad));
        CHECK(again.revision == 1);
        CHECK_FALSE(again.appended);
        auto changed = store.submit(rec("c1", "alice", Verdict::NonSaad));
        CHECK(changed.revision == 2);
        store.submit(rec("c1", "bob", Verdict::Saad));
        auto snap = store.snapshot();
        REQUIRE(snap.size() == 2);
        CHECK(snap[0].annotator == "alice");
        CHECK(snap[0].verdict == Verdict::NonSaad);
    }
    AnnotationStore reloaded(log);
    CHECK(reloaded.revision() == 3);
    CHECK(reloaded.snapshot().size() == 2);
    CHECK(reloaded.find("c1", "alice")->verdict == Verdict::NonSaad);
    CHECK_FALSE(reloaded.find("c9", "alice"));

    auto no_ts = rec("c5", "alice", Verdict::Saad);
    no_ts.ts.clear();
    reloaded.submit(no_ts);
    CHECK(is_rfc3339(reloaded.find("c5", "alice")->ts));
}

TEST_CASE("concurrent submissions are serialized") {
    TempDir tmp;
    const auto log = tmp.path / "ann.jsonl";
    AnnotationStore store(log);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t)
        threads.emplace_back([&, t] {
            for (int i = 0; i < 50; ++i)
                store.submit(rec("c" + std::to_string(i), "ann" + std::to_string(t), Verdict::Saad));
        });
    for (auto& th : threads) th.join();
    CHECK(store.revision() == 400);
    AnnotationStore reloaded(log);
    CHECK(reloaded.snapshot().size() == 400);
}

TEST_CASE("majority resolution, ties count as NON_SAAD") {
    std::vector<AnnotationRecord> rs = {rec("a", "x", Verdict::Saad), rec("a", "y", Verdict::Saad),
                                        rec("a", "z", Verdict::NonSaad), rec("b", "x", Verdict::Saad),
                                        rec("b", "y", Verdict::NonSaad)};
    auto v = resolve_verdicts(rs);
    CHECK(v["a"] == Verdict::Saad);
    CHECK(v["b"] == Verdict::NonSaad);
}

TEST_CASE("largest-remainder apportionment") {
    std::vector<std::size_t> s1 = {90, 10};
    CHECK(apportion(s1, 10) == std::vector<std::size_t>{9, 1});
    std::vector<std::size_t> s2 = {5, 3, 2};
    // Quotas 2.5, 1.5, 1.0 for n = 5: remainders tie, earlier stratum wins.
    CHECK(apportion(s2, 5) == std::vector<std::size_t>{3, 1, 1});
    std::vector<std::size_t> s3 = {1, 1, 1};
    CHECK(apportion(s3, 2) == std::vector<std::size_t>{1, 1, 0});
    CHECK(apportion(s3, 3) == std::vector<std::size_t>{1, 1, 1});
    CHECK_THROWS_AS(apportion(s3, 4), InsufficientPopulation);
}

TEST_CASE("stratified sampling") {
    std::vector<Detection> dets;
    for (int i = 0; i < 90; ++i) dets.push_back(det("a" + std::to_string(100 + i), {"p1"}));
    for (int i = 0; i < 10; ++i) dets.push_back(det("b" + std::to_string(100 + i), {"p2"}));

    auto s = sample_stratified(dets, StrataKey::Pattern, 10, 42);
    CHECK(s.size() == 10);
    CHECK(std::count_if(s.begin(), s.end(), [](const std::string& id) { return id[0] == 'b'; }) == 1);
    CHECK(std::set<std::string>(s.begin(), s.end()).size() == 10);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(s == sample_stratified(dets, StrataKey::Pattern, 10, 42));
    CHECK(s != sample_stratified(dets, StrataKey::Pattern, 10, 43));

    auto full = sample_stratified(dets, StrataKey::Pattern, dets.size(), 1);
    CHECK(full.size() == dets.size());
    CHECK_THROWS_AS(sample_stratified(dets, StrataKey::Pattern, 101, 1), InsufficientPopulation);

    std::vector<Detection> big;
    for (int i = 0; i < 2000; ++i)
        big.push_back(det("d" + std::to_string(10000 + i), {"p" + std::to_string(i % 7)}));
    auto s385 = sample_stratified(big, StrataKey::Pattern, 385, 7);
    CHECK(std::set<std::string>(s385.begin(), s385.end()).size() == 385);

    auto dup = dets;
    dup.push_back(dets[0]);
    CHECK_THROWS_AS(sample_stratified(dup, StrataKey::Pattern, 5, 1), ValidationError);
}

TEST_CASE("strata by pattern and by feature-frequency quartile") {
    std::vector<Detection> dets = {det("1", {"p1", "p2"}, {"old", "legacy"}),
                                   det("2", {"p2"}, {"old"}),
                                   det("3", {}, {"rare"}),
                                   det("4", {"p3"}, {"legacy", "old"}),
                                   det("5", {"p3"}, {"deprecated"}),
                                   det("6", {"p1"}, {})};
    dets[2].existing_aging_feature = true;
    auto byp = strata_of(dets, StrataKey::Pattern);
    CHECK(byp == std::vector<std::string>{"p1", "p2", "@deprecated", "p3", "p3", "p1"});
    // Frequencies: old 3, legacy 2, deprecated 1, rare 1 -> Q1..Q4 in that order.
    auto byq = strata_of(dets, StrataKey::FeatureFrequencyQuartile);
    CHECK(byq == std::vector<std::string>{"Q1", "Q1", "Q4", "Q1", "Q3", "none"});

    std::vector<Detection> orphan = {det("x", {})};
    CHECK_THROWS_AS(strata_of(orphan, StrataKey::Pattern), ValidationError);
}

TEST_CASE("FP rate and exclusion threshold") {
    std::vector<Detection> dets;
    std::map<std::string, Verdict> verdicts;
    for (int i = 0; i < 10; ++i) {
        const auto id = "a" + std::to_string(i);
        dets.push_back(det(id, {"noisy"}));
        verdicts[id] = i < 3 ? Verdict::NonSaad : Verdict::Saad;
    }
    for (int i = 0; i < 7; ++i) {
        const auto id = "b" + std::to_string(i);
        dets.push_back(det(id, {"clean"}));
        verdicts[id] = Verdict::Saad;
    }
    for (int i = 0; i < 4; ++i) {
        const auto id = "c" + std::to_string(i);
        dets.push_back(det(id, {"edge"}));
        verdicts[id] = i == 0 ? Verdict::NonSaad : Verdict::Saad;
    }
    dets.push_back(det("d0", {"unseen"}));

    CHECK(fp_rate("noisy", verdicts, dets) == doctest::Approx(0.30));
    CHECK(fp_rate("clean", verdicts, dets) == 0.0);
    CHECK(fp_rate("edge", verdicts, dets) == 0.25);
    CHECK_THROWS_AS(fp_rate("unseen", verdicts, dets), NoAnnotatedMatches);

    auto table = pattern_fp_table(dets, verdicts, 0.25);
    REQUIRE(table.size() == 4);
    std::map<std::string, PatternFpRow> by;
    for (auto& r : table) by[r.pattern] = r;
    CHECK(by["noisy"].flagged);
    CHECK_FALSE(by["edge"].flagged);
    CHECK_FALSE(by["clean"].flagged);
    CHECK_FALSE(by["unseen"].rate);
    CHECK(by["unseen"].matches == 1);
}

namespace {

// Corpus where each comment carries one token pattern; `bad` marks comments
// whose ground truth is NON_SAAD.
struct Synthetic {
    std::vector<CommentRecord> corpus;
    Lexicon lexicon;
    std::map<std::string, Verdict> truth;
};

Synthetic synthetic(const std::vector<std::pair<std::string, double>>& planted, int per_pattern) {
    Synthetic s;
    std::ostringstream lex;
    for (const auto& [tok, rate] : planted) lex << "P\t" << tok << "\taging_maintenance\tactive\n";
    std::istringstream in(lex.str());
    s.lexicon = parse_lexicon(in);
    for (const auto& [tok, rate] : planted) {
        const int bad = static_cast<int>(rate * per_pattern + 0.5);
        for (int i = 0; i < per_pattern; ++i) {
            CommentRecord r;
            r.id = tok + "-" + std::to_string(1000 + i);
            r.location = {"proj", "A.java", i + 1, i + 1};
            r.text = "note " + tok + " here";
            s.corpus.push_back(r);
            s.truth[r.id] = i % per_pattern < bad ? Verdict::NonSaad : Verdict::Saad;
        }
    }
    return s;
}

std::vector<AnnotationRecord> annotate(const Synthetic& s, const std::vector<std::string>& ids) {
    std::vector<AnnotationRecord> out;
    for (const auto& id : ids) out.push_back(rec(id, "oracle", s.truth.at(id)));
    return out;
}

}  // namespace

TEST_CASE("run_iteration requires an annotated sample") {
    auto s = synthetic({{"zqalpha", 0.0}}, 50);
    RefineConfig cfg;
    std::vector<AnnotationRecord> none;
    try {
        run_iteration(s.corpus, s.lexicon, none, cfg, {});
        FAIL("expected IncompleteAnnotations");
    } catch (const IncompleteAnnotations& e) {
        CHECK(e.missing().size() == 50);
    }
}

TEST_CASE("run_iteration computes precision on the sample and excludes noisy patterns") {
    auto s = synthetic({{"zqalpha", 0.0}, {"zqbeta", 0.5}}, 100);
    RefineConfig cfg;
    auto dets = detect_saad(s.corpus, s.lexicon);
    auto sample = plan_iteration(dets, cfg, 1);
    CHECK(sample.size() == 200);  // 385 capped at the detection count
    auto out = run_iteration(s.corpus, s.lexicon, annotate(s, sample), cfg, {});
    CHECK(out.iteration.iteration_no == 1);
    CHECK(out.iteration.precision == doctest::Approx(0.75));
    CHECK(out.iteration.recall == 1.0);
    CHECK(out.iteration.f1 == doctest::Approx(stats::f1_from(0.75, 1.0)));
    CHECK(out.iteration.excluded_patterns == std::vector<std::string>{"zqbeta"});
    CHECK(out.iteration.active_pattern_count == 2);
    CHECK(out.iteration.total_saad_detected == 200);
    CHECK_FALSE(out.iteration.stopped);
    CHECK(out.lexicon.active_pattern_count() == 1);
    CHECK(out.lexicon.find_pattern("zqbeta")->excluded_in_iteration == 1);

    // Same inputs, same record.
    auto again = run_iteration(s.corpus, s.lexicon, annotate(s, sample), cfg, {});
    CHECK(again.iteration == out.iteration);
}

TEST_CASE("stopping rule needs consecutive qualifying iterations") {
    auto s = synthetic({{"zqalpha", 0.0}}, 40);
    RefineConfig cfg;
    auto dets = detect_saad(s.corpus, s.lexicon);
    std::vector<RefinementIteration> history;
    auto first = run_iteration(s.corpus, s.lexicon, annotate(s, plan_iteration(dets, cfg, 1)), cfg, history);
    CHECK(first.iteration.f1 == 1.0);
    CHECK_FALSE(first.iteration.stopped);
    history.push_back(first.iteration);
    auto second = run_iteration(s.corpus, first.lexicon, annotate(s, plan_iteration(dets, cfg, 2)), cfg, history);
    CHECK(second.iteration.stopped);
    history.push_back(second.iteration);
    CHECK_THROWS_AS(run_iteration(s.corpus, second.lexicon, {}, cfg, history), AlreadyConverged);

    RefineConfig once = cfg;
    once.consistency = 1;
    auto single = run_iteration(s.corpus, s.lexicon, annotate(s, plan_iteration(dets, once, 1)), once, {});
    CHECK(single.iteration.stopped);

    std::vector<RefinementIteration> broken(1);
    broken[0].f1 = 0.90;
    auto after_low = run_iteration(s.corpus, s.lexicon, annotate(s, plan_iteration(dets, cfg, 2)), cfg, broken);
    CHECK_FALSE(after_low.iteration.stopped);
}

TEST_CASE("proposed-pattern fraction is reported") {
    auto s = synthetic({{"zqalpha", 0.0}}, 20);
    RefineConfig cfg;
    auto dets = detect_saad(s.corpus, s.lexicon);
    auto ann = annotate(s, plan_iteration(dets, cfg, 1));
    for (std::size_t i = 0; i < 5; ++i) ann[i].proposed_pattern = "note zqalpha";
    auto out = run_iteration(s.corpus, s.lexicon, ann, cfg, {});
    CHECK(out.iteration.proposed_pattern_fraction == doctest::Approx(0.25));
}

TEST_CASE("iteration history round-trips through JSON-Lines") {
    TempDir tmp;
    RefinementIteration it;
    it.iteration_no = 1;
    it.active_pattern_count = 399;
    it.total_saad_detected = 44181;
    it.sample_ids = {"a", "b"};
    it.precision = 0.795;
    it.f1 = 0.886;
    it.excluded_patterns = {"for legacy"};
    append_history(tmp.path / "h.jsonl", it);
    it.iteration_no = 2;
    append_history(tmp.path / "h.jsonl", it);
    auto back = load_history(tmp.path / "h.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back[0].total_saad_detected == 44181);
    CHECK(back[1].iteration_no == 2);
    CHECK(load_history(tmp.path / "missing.jsonl").empty());
}

TEST_CASE("config validation") {
    RefineConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.fp_threshold = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.consistency = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("refinement lock is exclusive") {
    TempDir tmp;
    const auto lock_path = tmp.path / "lex.lock";
    {
        RefineLock held(lock_path);
        CHECK_THROWS_AS(RefineLock{lock_path}, ConsistencyError);
    }
    CHECK_NOTHROW(RefineLock{lock_path});
}
