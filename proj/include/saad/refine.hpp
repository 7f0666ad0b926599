#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "saad/detect.hpp"
#include "saad/error.hpp"
#include "saad/jsonl.hpp"
#include "saad/lexicon.hpp"
#include "saad/taxonomy.hpp"

namespace saad {

enum class Verdict { Saad, NonSaad };

std::string_view to_string(Verdict v) noexcept;  // "SAAD" / "NON_SAAD"
std::optional<Verdict> parse_verdict(std::string_view s) noexcept;

struct AnnotationRecord {
    std::string comment_id;
    std::string annotator;
    Verdict verdict = Verdict::Saad;
    std::optional<TaxonomyType> type;
    std::string note;
    std::optional<std::string> proposed_pattern;
    std::string ts;  // RFC 3339

    // Equality of everything except the timestamp.
    bool same_payload(const AnnotationRecord& other) const noexcept;
    friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

json to_json(const AnnotationRecord& rec);
AnnotationRecord annotation_from_json(const json& j);

// Throws ValidationError for empty ids or a malformed timestamp, and
// InvalidPattern when proposed_pattern does not compile.
void validate(const AnnotationRecord& rec);

bool is_rfc3339(std::string_view ts);
std::string now_rfc3339();

// Append-only JSON-Lines log with last-write-wins per (comment_id, annotator).
// Thread-safe: writes are serialized, reads see a consistent snapshot.
class AnnotationStore {
public:
    struct Ack {
        std::uint64_t revision = 0;  // number of records in the log
        bool appended = false;       // false for an identical resubmission
    };

    // In-memory store.
    AnnotationStore() = default;
    // Loads the log if it exists; later submissions append to it.
    explicit AnnotationStore(std::filesystem::path log_path);

    Ack submit(AnnotationRecord rec);

    std::uint64_t revision() const;
    // Current record per (comment, annotator), ordered by comment id then annotator.
    std::vector<AnnotationRecord> snapshot() const;
    std::optional<AnnotationRecord> find(const std::string& comment_id,
                                         const std::string& annotator) const;

private:
    using Key = std::pair<std::string, std::string>;
    mutable std::shared_mutex mu_;
    std::optional<std::filesystem::path> path_;
    std::map<Key, AnnotationRecord> current_;
    std::uint64_t revision_ = 0;
};

// Collapses multiple annotators into one verdict per comment: majority vote,
// ties resolved to NON_SAAD.
std::map<std::string, Verdict> resolve_verdicts(std::span<const AnnotationRecord> records);

enum class StrataKey { Pattern, FeatureFrequencyQuartile };

std::string_view to_string(StrataKey k) noexcept;
std::optional<StrataKey> parse_strata_key(std::string_view s) noexcept;

class InsufficientPopulation : public ValidationError {
public:
    InsufficientPopulation(std::size_t n, std::size_t population)
        : ValidationError("cannot draw " + std::to_string(n) + " from " +
                          std::to_string(population) + " detections") {}
};

// Stratum of each detection. Pattern: its first matched pattern, or
// "@deprecated" when only the tag fired. FeatureFrequencyQuartile: features are
// ranked by how many detections carry them and cut into quartiles Q1 (most
// frequent) to Q4; a detection takes the best quartile among its features, or
// "none" without features.
std::vector<std::string> strata_of(std::span<const Detection> detections, StrataKey key);

// Largest-remainder apportionment of n over stratum sizes. Remainder ties go
// to the earlier stratum.
std::vector<std::size_t> apportion(std::span<const std::size_t> sizes, std::size_t n);

// Proportional stratified sample without replacement; ids returned sorted.
std::vector<std::string> sample_stratified(std::span<const Detection> detections, StrataKey key,
                                           std::size_t n, std::uint64_t rng_seed);

class NoAnnotatedMatches : public ValidationError {
public:
    explicit NoAnnotatedMatches(const std::string& raw)
        : ValidationError("no annotated detection matches pattern '" + raw + "'") {}
};

// NON_SAAD share among annotated detections that matched `pattern`.
double fp_rate(const std::string& pattern, const std::map<std::string, Verdict>& verdicts,
               std::span<const Detection> detections);

struct PatternFpRow {
    std::string pattern;
    std::size_t matches = 0;
    std::size_t annotated = 0;
    std::size_t non_saad = 0;
    std::optional<double> rate;
    bool flagged = false;  // rate > threshold
};

// One row per pattern seen in `detections`, sorted by pattern.
std::vector<PatternFpRow> pattern_fp_table(std::span<const Detection> detections,
                                           const std::map<std::string, Verdict>& verdicts,
                                           double threshold);

struct RefineConfig {
    double fp_threshold = 0.25;
    double f1_target = 0.95;
    int consistency = 2;
    double sample_z = 1.96;
    double sample_e = 0.05;
    double sample_p = 0.5;
    std::uint64_t rng_seed = 1;
    StrataKey strata = StrataKey::Pattern;
    unsigned jobs = 1;

    void validate() const;
};

struct RefinementIteration {
    int iteration_no = 0;
    std::size_t active_pattern_count = 0;
    std::size_t total_saad_detected = 0;
    std::vector<std::string> sample_ids;
    double precision = 0.0;
    double recall = 1.0;
    double f1 = 0.0;
    std::vector<std::string> excluded_patterns;
    bool stopped = false;
    double proposed_pattern_fraction = 0.0;
    std::string lexicon_version;  // version the iteration ran against

    friend bool operator==(const RefinementIteration&, const RefinementIteration&) = default;
};

json to_json(const RefinementIteration& it);
RefinementIteration iteration_from_json(const json& j);
std::vector<RefinementIteration> load_history(const std::filesystem::path& path);
void append_history(const std::filesystem::path& path, const RefinementIteration& it);

class IncompleteAnnotations : public ConsistencyError {
public:
    explicit IncompleteAnnotations(std::vector<std::string> missing);
    const std::vector<std::string>& missing() const noexcept { return missing_; }

private:
    std::vector<std::string> missing_;
};

class AlreadyConverged : public ConsistencyError {
public:
    AlreadyConverged() : ConsistencyError("refinement already met its stopping rule") {}
};

// Sample the next iteration expects annotated, for detections under the
// current lexicon. Seeded with rng_seed + iteration_no.
std::vector<std::string> plan_iteration(std::span<const Detection> detections,
                                        const RefineConfig& config, int iteration_no);

struct IterationOutcome {
    RefinementIteration iteration;
    Lexicon lexicon;  // next lexicon version
};

// Detects with `lexicon`, checks the planned sample is annotated, computes
// precision on it (recall fixed at 1), and excludes every pattern whose FP
// rate over annotated detections exceeds the threshold. `history` holds the
// earlier iterations of the same run.
IterationOutcome run_iteration(std::span<const CommentRecord> corpus, const Lexicon& lexicon,
                               std::span<const AnnotationRecord> annotations,
                               const RefineConfig& config,
                               std::span<const RefinementIteration> history);

// Exclusive advisory lock on `path` (created if absent), released on destruction.
class RefineLock {
public:
    explicit RefineLock(const std::filesystem::path& path);
    ~RefineLock();
    RefineLock(const RefineLock&) = delete;
    RefineLock& operator=(const RefineLock&) = delete;

private:
    int fd_ = -1;
};

}  // namespace saad
