#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "saad/detect.hpp"
#include "saad/error.hpp"
#include "saad/extract.hpp"

namespace saad::stats {

// n = ceil(z^2 p (1-p) / E^2)
struct SamplePlan {
    double z = 1.96;
    double p = 0.5;
    double margin = 0.05;
    std::int64_t n = 0;
};

std::int64_t sample_size(double z, double p, double margin);
SamplePlan plan_sample(double z, double p, double margin);

struct ConfusionCounts {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::optional<double> precision() const noexcept;
    std::optional<double> recall() const noexcept;
    std::optional<double> f1() const noexcept;
};

double f1_from(double precision, double recall);

class LengthMismatch : public ValidationError {
public:
    LengthMismatch(std::size_t a, std::size_t b)
        : ValidationError("label lists differ in length: " + std::to_string(a) + " vs " +
                          std::to_string(b)) {}
};

struct KappaResult {
    double kappa = 0.0;
    double observed = 0.0;  // p_o
    double expected = 0.0;  // p_e
    std::size_t n = 0;
    std::vector<std::string> labels;               // sorted label set
    std::vector<std::vector<std::uint64_t>> table;  // table[a][b]
};

KappaResult cohens_kappa_table(std::span<const std::string> a, std::span<const std::string> b);
double cohens_kappa(std::span<const std::string> a, std::span<const std::string> b);

enum class Magnitude { Negligible, Small, Medium, Large };
std::string_view to_string(Magnitude m) noexcept;
Magnitude effect_magnitude(double r) noexcept;

class AllZeroDifferences : public ValidationError {
public:
    AllZeroDifferences() : ValidationError("every paired difference is zero") {}
};

enum class WilcoxonMethod { Auto, Exact, Normal };

inline constexpr std::size_t kExactWilcoxonLimit = 25;

struct WilcoxonResult {
    std::size_t n_nonzero = 0;
    double w_plus = 0.0;
    double w_minus = 0.0;
    double w_statistic = 0.0;  // min(w_plus, w_minus)
    double z_score = 0.0;      // tie- and continuity-corrected, signed by w_plus
    double p_value = 1.0;      // two-sided
    bool exact = false;
    double r = 0.0;  // z / sqrt(n_nonzero)
    Magnitude magnitude = Magnitude::Negligible;
};

// Paired test on differences x - y. Zero differences are dropped; tied
// magnitudes get average ranks. Auto uses the exact null distribution for
// n <= 25 and the normal approximation above that.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);

// "<0.001" below 1e-3, otherwise three decimals.
std::string format_p_value(double p);

struct ProjectCounts {
    std::uint64_t comments = 0;
    std::uint64_t nl_comments = 0;
};

struct CorpusSummary {
    std::map<std::string, ProjectCounts> projects;
    std::unordered_map<std::string, std::string> project_of;  // comment id -> project
};

CorpusSummary summarize(std::span<const CommentRecord> corpus);

class UnknownProject : public ConsistencyError {
public:
    explicit UnknownProject(const std::string& id)
        : ConsistencyError("no project known for '" + id + "'") {}
};

struct ProjectBreakdown {
    std::string project;
    std::uint64_t saad_comments = 0;
    std::uint64_t active_instances = 0;
    std::uint64_t dormant_instances = 0;
    double active_pct = 0.0;
    double dormant_pct = 0.0;
};

struct PrevalenceReport {
    std::uint64_t total_projects = 0;
    std::uint64_t afflicted_projects = 0;
    double pct_projects = 0.0;  // two decimals
    std::uint64_t total_nl_comments = 0;
    std::uint64_t saad_comments = 0;
    double pct_comments = 0.0;  // one decimal
    std::vector<ProjectBreakdown> per_project;  // afflicted projects, by name
};

// Percentages from raw counts, rounded half away from zero.
PrevalenceReport prevalence_from_counts(std::uint64_t afflicted_projects,
                                        std::uint64_t total_projects,
                                        std::uint64_t saad_comments,
                                        std::uint64_t total_nl_comments);

PrevalenceReport prevalence(std::span<const Detection> detections, const CorpusSummary& corpus);

// (active%, dormant%) per afflicted project, the input to the category test.
std::vector<std::pair<double, double>> category_pairs(const PrevalenceReport& report);

}  // namespace saad::stats
