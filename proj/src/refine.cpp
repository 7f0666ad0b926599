#include "saad/refine.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "saad/stats.hpp"

namespace saad {

std::string_view to_string(Verdict v) noexcept {
    return v == Verdict::Saad ? "SAAD" : "NON_SAAD";
}

std::optional<Verdict> parse_verdict(std::string_view s) noexcept {
    if (s == "SAAD") return Verdict::Saad;
    if (s == "NON_SAAD") return Verdict::NonSaad;
    return std::nullopt;
}

bool AnnotationRecord::same_payload(const AnnotationRecord& o) const noexcept {
    return comment_id == o.comment_id && annotator == o.annotator && verdict == o.verdict &&
           type == o.type && note == o.note && proposed_pattern == o.proposed_pattern;
}

json to_json(const AnnotationRecord& rec) {
    return json{
        {"comment_id", rec.comment_id},
        {"annotator", rec.annotator},
        {"verdict", std::string(to_string(rec.verdict))},
        {"type", rec.type ? json(std::string(to_string(*rec.type))) : json(nullptr)},
        {"note", rec.note},
        {"proposed_pattern", rec.proposed_pattern ? json(*rec.proposed_pattern) : json(nullptr)},
        {"ts", rec.ts},
    };
}

namespace {

std::string string_field(const json& j, const char* key, bool required) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        if (required) throw ValidationError(std::string("missing field '") + key + "'");
        return {};
    }
    if (!it->is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

}  // namespace

AnnotationRecord annotation_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("annotation is not an object");
    AnnotationRecord rec;
    rec.comment_id = string_field(j, "comment_id", true);
    rec.annotator = string_field(j, "annotator", true);
    const auto verdict = string_field(j, "verdict", true);
    auto v = parse_verdict(verdict);
    if (!v) throw ValidationError("verdict must be SAAD or NON_SAAD, got '" + verdict + "'");
    rec.verdict = *v;
    if (auto type = string_field(j, "type", false); !type.empty()) {
        auto t = parse_taxonomy_type(type);
        if (!t) throw UnknownTaxonomyType(type);
        rec.type = *t;
    }
    rec.note = string_field(j, "note", false);
    if (auto p = string_field(j, "proposed_pattern", false); !p.empty()) rec.proposed_pattern = p;
    rec.ts = string_field(j, "ts", false);
    return rec;
}

bool is_rfc3339(std::string_view ts) {
    static const std::regex re(
        R"(\d{4}-\d{2}-\d{2}[Tt]\d{2}:\d{2}:\d{2}(\.\d+)?([Zz]|[+-]\d{2}:\d{2}))");
    return std::regex_match(ts.begin(), ts.end(), re);
}

std::string now_rfc3339() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void validate(const AnnotationRecord& rec) {
    if (rec.comment_id.empty()) throw ValidationError("annotation without comment_id");
    if (rec.annotator.empty()) throw ValidationError("annotation without annotator");
    if (!rec.ts.empty() && !is_rfc3339(rec.ts))
        throw ValidationError("timestamp '" + rec.ts + "' is not RFC 3339");
    if (rec.proposed_pattern) compile_pattern(*rec.proposed_pattern);
}

AnnotationStore::AnnotationStore(std::filesystem::path log_path) : path_(std::move(log_path)) {
    std::error_code ec;
    if (!std::filesystem::exists(*path_, ec)) return;
    auto in = open_input(*path_);
    for_each_jsonl(in, path_->string(), [&](const json& j, int) {
        auto rec = annotation_from_json(j);
        validate(rec);
        current_[{rec.comment_id, rec.annotator}] = std::move(rec);
        ++revision_;
    });
}

AnnotationStore::Ack AnnotationStore::submit(AnnotationRecord rec) {
    validate(rec);
    if (rec.ts.empty()) rec.ts = now_rfc3339();

    std::unique_lock lock(mu_);
    Key key{rec.comment_id, rec.annotator};
    if (auto it = current_.find(key); it != current_.end() && it->second.same_payload(rec))
        return {revision_, false};
    if (path_) {
        std::ofstream out(*path_, std::ios::binary | std::ios::app);
        if (!out) throw IoError("cannot append to '" + path_->string() + "'");
        write_jsonl_line(out, to_json(rec));
        out.flush();
        if (!out) throw IoError("write failure on '" + path_->string() + "'");
    }
    current_[key] = std::move(rec);
    return {++revision_, true};
}

std::uint64_t AnnotationStore::revision() const {
    std::shared_lock lock(mu_);
    return revision_;
}

std::vector<AnnotationRecord> AnnotationStore::snapshot() const {
    std::shared_lock lock(mu_);
    std::vector<AnnotationRecord> out;
    out.reserve(current_.size());
    for (const auto& [key, rec] : current_) out.push_back(rec);
    return out;
}

std::optional<AnnotationRecord> AnnotationStore::find(const std::string& comment_id,
                                                      const std::string& annotator) const {
    std::shared_lock lock(mu_);
    auto it = current_.find({comment_id, annotator});
    if (it == current_.end()) return std::nullopt;
    return it->second;
}

std::map<std::string, Verdict> resolve_verdicts(std::span<const AnnotationRecord> records) {
    std::map<std::string, std::pair<int, int>> votes;  // saad, non_saad
    for (const auto& r : records)
        ++(r.verdict == Verdict::Saad ? votes[r.comment_id].first : votes[r.comment_id].second);
    std::map<std::string, Verdict> out;
    for (const auto& [id, v] : votes) out.emplace(id, v.first > v.second ? Verdict::Saad : Verdict::NonSaad);
    return out;
}

std::string_view to_string(StrataKey k) noexcept {
    return k == StrataKey::Pattern ? "pattern" : "quartile";
}

std::optional<StrataKey> parse_strata_key(std::string_view s) noexcept {
    if (s == "pattern") return StrataKey::Pattern;
    if (s == "quartile") return StrataKey::FeatureFrequencyQuartile;
    return std::nullopt;
}

std::vector<std::string> strata_of(std::span<const Detection> detections, StrataKey key) {
    std::vector<std::string> out;
    out.reserve(detections.size());
    if (key == StrataKey::Pattern) {
        for (const auto& d : detections) {
            if (!d.matched_patterns.empty())
                out.push_back(d.matched_patterns.front());
            else if (d.existing_aging_feature)
                out.emplace_back("@deprecated");
            else
                throw ValidationError("detection '" + d.comment_id + "' has no stratum");
        }
        return out;
    }

    std::map<std::string, std::size_t> freq;
    for (const auto& d : detections)
        for (const auto& f : std::set<std::string>(d.matched_features.begin(), d.matched_features.end()))
            ++freq[f];
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::unordered_map<std::string, int> quartile;
    const std::size_t m = ranked.size();
    for (std::size_t i = 0; i < m; ++i) quartile[ranked[i].first] = static_cast<int>(4 * i / m) + 1;

    for (const auto& d : detections) {
        int best = 5;
        for (const auto& f : d.matched_features) best = std::min(best, quartile.at(f));
        out.push_back(best == 5 ? std::string("none") : "Q" + std::to_string(best));
    }
    return out;
}

std::vector<std::size_t> apportion(std::span<const std::size_t> sizes, std::size_t n) {
    const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    if (n > total) throw InsufficientPopulation(n, total);
    std::vector<std::size_t> alloc(sizes.size(), 0);
    if (n == 0) return alloc;
    std::vector<std::size_t> rem(sizes.size());
    std::size_t given = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        // Exact integer arithmetic: quota = n*size/total.
        const auto num = static_cast<unsigned __int128>(n) * sizes[i];
        alloc[i] = static_cast<std::size_t>(num / total);
        rem[i] = static_cast<std::size_t>(num % total);
        given += alloc[i];
    }
    std::vector<std::size_t> order(sizes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t i = 0; given < n; ++i) {
        const auto s = order[i % order.size()];
        if (alloc[s] < sizes[s]) {
            ++alloc[s];
            ++given;
        }
    }
    return alloc;
}

namespace {

// Unbiased draw from [0, bound) independent of the standard library's
// distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

}  // namespace

std::vector<std::string> sample_stratified(std::span<const Detection> detections, StrataKey key,
                                           std::size_t n, std::uint64_t rng_seed) {
    if (n > detections.size()) throw InsufficientPopulation(n, detections.size());
    const auto strata = strata_of(detections, key);

    std::map<std::string, std::vector<std::string>> groups;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        if (!seen.insert(detections[i].comment_id).second)
            throw ValidationError("duplicate detection '" + detections[i].comment_id + "'");
        groups[strata[i]].push_back(detections[i].comment_id);
    }
    std::vector<std::size_t> sizes;
    for (auto& [name, ids] : groups) {
        std::sort(ids.begin(), ids.end());
        sizes.push_back(ids.size());
    }
    const auto alloc = apportion(sizes, n);

    std::mt19937_64 rng(rng_seed);
    std::vector<std::string> out;
    out.reserve(n);
    std::size_t g = 0;
    for (auto& [name, ids] : groups) {
        const std::size_t take = alloc[g++];
        for (std::size_t i = 0; i < take; ++i) {
            const auto j = i + bounded(rng, ids.size() - i);
            std::swap(ids[i], ids[j]);
            out.push_back(ids[i]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double fp_rate(const std::string& pattern, const std::map<std::string, Verdict>& verdicts,
               std::span<const Detection> detections) {
    std::size_t annotated = 0, fp = 0;
    for (const auto& d : detections) {
        if (std::find(d.matched_patterns.begin(), d.matched_patterns.end(), pattern) ==
            d.matched_patterns.end())
            continue;
        auto it = verdicts.find(d.comment_id);
        if (it == verdicts.end()) continue;
        ++annotated;
        if (it->second == Verdict::NonSaad) ++fp;
    }
    if (annotated == 0) throw NoAnnotatedMatches(pattern);
    return static_cast<double>(fp) / static_cast<double>(annotated);
}

std::vector<PatternFpRow> pattern_fp_table(std::span<const Detection> detections,
                                           const std::map<std::string, Verdict>& verdicts,
                                           double threshold) {
    std::map<std::string, PatternFpRow> rows;
    for (const auto& d : detections) {
        auto v = verdicts.find(d.comment_id);
        for (const auto& p : d.matched_patterns) {
            auto& row = rows[p];
            row.pattern = p;
            ++row.matches;
            if (v == verdicts.end()) continue;
            ++row.annotated;
            if (v->second == Verdict::NonSaad) ++row.non_saad;
        }
    }
    std::vector<PatternFpRow> out;
    for (auto& [p, row] : rows) {
        if (row.annotated > 0) {
            row.rate = static_cast<double>(row.non_saad) / static_cast<double>(row.annotated);
            row.flagged = *row.rate > threshold;
        }
        out.push_back(std::move(row));
    }
    return out;
}

void RefineConfig::validate() const {
    auto unit = [](double v, const char* name) {
        if (!(v > 0 && v <= 1)) throw ValidationError(std::string(name) + " must lie in (0, 1]");
    };
    unit(fp_threshold, "fp_threshold");
    unit(f1_target, "f1_target");
    unit(sample_e, "E");
    if (consistency < 1) throw ValidationError("consistency must be at least 1");
    if (!(sample_z > 0)) throw ValidationError("z must be positive");
    if (!(sample_p >= 0 && sample_p <= 1)) throw ValidationError("p must lie in [0, 1]");
}

json to_json(const RefinementIteration& it) {
    return json{
        {"iteration", it.iteration_no},
        {"active_patterns", it.active_pattern_count},
        {"detected", it.total_saad_detected},
        {"sample_ids", it.sample_ids},
        {"precision", it.precision},
        {"recall", it.recall},
        {"f1", it.f1},
        {"excluded", it.excluded_patterns},
        {"stopped", it.stopped},
        {"proposed_pattern_fraction", it.proposed_pattern_fraction},
        {"lexicon_version", it.lexicon_version},
    };
}

RefinementIteration iteration_from_json(const json& j) {
    try {
        RefinementIteration it;
        it.iteration_no = j.at("iteration").get<int>();
        it.active_pattern_count = j.at("active_patterns").get<std::size_t>();
        it.total_saad_detected = j.at("detected").get<std::size_t>();
        it.sample_ids = j.at("sample_ids").get<std::vector<std::string>>();
        it.precision = j.at("precision").get<double>();
        it.recall = j.at("recall").get<double>();
        it.f1 = j.at("f1").get<double>();
        it.excluded_patterns = j.at("excluded").get<std::vector<std::string>>();
        it.stopped = j.at("stopped").get<bool>();
        it.proposed_pattern_fraction = j.value("proposed_pattern_fraction", 0.0);
        it.lexicon_version = j.value("lexicon_version", std::string{});
        return it;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad iteration record: ") + e.what());
    }
}

std::vector<RefinementIteration> load_history(const std::filesystem::path& path) {
    std::vector<RefinementIteration> out;
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return out;
    auto in = open_input(path);
    for_each_jsonl(in, path.string(), [&](const json& j, int) { out.push_back(iteration_from_json(j)); });
    return out;
}

void append_history(const std::filesystem::path& path, const RefinementIteration& it) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to '" + path.string() + "'");
    write_jsonl_line(out, to_json(it));
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size() && i < 10; ++i) s += (i ? ", " : "") + ids[i];
    if (ids.size() > 10) s += ", ... (" + std::to_string(ids.size()) + " total)";
    return s;
}

}  // namespace

IncompleteAnnotations::IncompleteAnnotations(std::vector<std::string> missing)
    : ConsistencyError("sample has unannotated detections: " + join_ids(missing)),
      missing_(std::move(missing)) {}

std::vector<std::string> plan_iteration(std::span<const Detection> detections,
                                        const RefineConfig& config, int iteration_no) {
    const auto wanted = static_cast<std::size_t>(
        stats::sample_size(config.sample_z, config.sample_p, config.sample_e));
    const std::size_t n = std::min(wanted, detections.size());
    return sample_stratified(detections, config.strata, n,
                             config.rng_seed + static_cast<std::uint64_t>(iteration_no));
}

IterationOutcome run_iteration(std::span<const CommentRecord> corpus, const Lexicon& lexicon,
                               std::span<const AnnotationRecord> annotations,
                               const RefineConfig& config,
                               std::span<const RefinementIteration> history) {
    config.validate();
    if (!history.empty() && history.back().stopped) throw AlreadyConverged();
    const int iteration_no = static_cast<int>(history.size()) + 1;

    const auto detections = detect_saad(corpus, lexicon, config.jobs);
    if (detections.empty()) throw ValidationError("no detections under the current lexicon");
    auto sample = plan_iteration(detections, config, iteration_no);

    const auto verdicts = resolve_verdicts(annotations);
    std::vector<std::string> missing;
    std::size_t true_pos = 0;
    for (const auto& id : sample) {
        auto it = verdicts.find(id);
        if (it == verdicts.end())
            missing.push_back(id);
        else if (it->second == Verdict::Saad)
            ++true_pos;
    }
    if (!missing.empty()) throw IncompleteAnnotations(std::move(missing));

    RefinementIteration it;
    it.iteration_no = iteration_no;
    it.active_pattern_count = lexicon.active_pattern_count();
    it.total_saad_detected = detections.size();
    it.precision = static_cast<double>(true_pos) / static_cast<double>(sample.size());
    it.recall = 1.0;
    it.f1 = stats::f1_from(it.precision, it.recall);
    it.lexicon_version = lexicon.version;

    std::set<std::string> sample_set(sample.begin(), sample.end());
    std::size_t in_sample = 0, proposing = 0;
    for (const auto& a : annotations) {
        if (!sample_set.count(a.comment_id)) continue;
        ++in_sample;
        if (a.proposed_pattern) ++proposing;
    }
    if (in_sample > 0)
        it.proposed_pattern_fraction = static_cast<double>(proposing) / static_cast<double>(in_sample);
    it.sample_ids = std::move(sample);

    std::set<std::string> flagged;
    for (const auto& row : pattern_fp_table(detections, verdicts, config.fp_threshold))
        if (row.flagged) flagged.insert(row.pattern);
    for (const auto& p : lexicon.patterns)
        if (p.active() && flagged.count(p.raw)) it.excluded_patterns.push_back(p.raw);

    int streak = it.f1 >= config.f1_target ? 1 : 0;
    for (auto h = history.rbegin(); streak > 0 && streak < config.consistency && h != history.rend(); ++h) {
        if (h->f1 < config.f1_target) break;
        ++streak;
    }
    it.stopped = streak >= config.consistency;

    Lexicon next = it.excluded_patterns.empty()
                       ? lexicon
                       : with_exclusions(lexicon, it.excluded_patterns, iteration_no);
    return {std::move(it), std::move(next)};
}

RefineLock::RefineLock(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError("cannot open lock file '" + path.string() + "': " + std::strerror(errno));
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
        const int err = errno;
        ::close(fd_);
        fd_ = -1;
        if (err == EWOULDBLOCK)
            throw ConsistencyError("another refinement run holds '" + path.string() + "'");
        throw IoError("cannot lock '" + path.string() + "': " + std::strerror(err));
    }
}

RefineLock::~RefineLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

}  // namespace saad
