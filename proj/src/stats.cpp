#include "saad/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "saad/classify.hpp"
#include "saad/text.hpp"

namespace saad::stats {

std::int64_t sample_size(double z, double p, double margin) {
    if (!(z > 0)) throw DomainError("z must be positive");
    if (!(p >= 0 && p <= 1)) throw DomainError("p must lie in [0, 1]");
    if (!(margin > 0 && margin <= 1)) throw DomainError("margin of error must lie in (0, 1]");
    const double n = z * z * p * (1 - p) / (margin * margin);
    // Guard against representation error pushing an exact integer over the edge.
    return static_cast<std::int64_t>(std::ceil(n - 1e-9));
}

SamplePlan plan_sample(double z, double p, double margin) {
    return {z, p, margin, sample_size(z, p, margin)};
}

std::optional<double> ConfusionCounts::precision() const noexcept {
    if (tp + fp == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

std::optional<double> ConfusionCounts::recall() const noexcept {
    if (tp + fn == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

std::optional<double> ConfusionCounts::f1() const noexcept {
    auto p = precision();
    auto r = recall();
    if (!p || !r || (*p == 0 && *r == 0)) return std::nullopt;
    return 2 * *p * *r / (*p + *r);
}

double f1_from(double precision, double recall) {
    if (!(precision >= 0 && precision <= 1) || !(recall >= 0 && recall <= 1))
        throw DomainError("precision and recall must lie in [0, 1]");
    if (precision == 0 && recall == 0) throw DomainError("F1 undefined when P = R = 0");
    return 2 * precision * recall / (precision + recall);
}

KappaResult cohens_kappa_table(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
    if (a.empty()) throw ValidationError("kappa needs at least one rated item");

    std::set<std::string> label_set(a.begin(), a.end());
    label_set.insert(b.begin(), b.end());
    KappaResult res;
    res.labels.assign(label_set.begin(), label_set.end());
    const std::size_t k = res.labels.size();
    auto idx = [&](const std::string& l) {
        return static_cast<std::size_t>(
            std::lower_bound(res.labels.begin(), res.labels.end(), l) - res.labels.begin());
    };
    res.table.assign(k, std::vector<std::uint64_t>(k, 0));
    for (std::size_t i = 0; i < a.size(); ++i) ++res.table[idx(a[i])][idx(b[i])];

    const double n = static_cast<double>(a.size());
    res.n = a.size();
    double agree = 0, chance = 0;
    for (std::size_t i = 0; i < k; ++i) {
        agree += static_cast<double>(res.table[i][i]);
        double row = 0, col = 0;
        for (std::size_t j = 0; j < k; ++j) {
            row += static_cast<double>(res.table[i][j]);
            col += static_cast<double>(res.table[j][i]);
        }
        chance += (row / n) * (col / n);
    }
    res.observed = agree / n;
    res.expected = chance;
    if (res.expected >= 1.0) {
        // Both raters used a single identical label throughout.
        res.kappa = 1.0;
    } else {
        res.kappa = (res.observed - res.expected) / (1.0 - res.expected);
    }
    return res;
}

double cohens_kappa(std::span<const std::string> a, std::span<const std::string> b) {
    return cohens_kappa_table(a, b).kappa;
}

std::string_view to_string(Magnitude m) noexcept {
    switch (m) {
        case Magnitude::Negligible: return "Negligible";
        case Magnitude::Small: return "Small";
        case Magnitude::Medium: return "Medium";
        case Magnitude::Large: return "Large";
    }
    return "Negligible";
}

Magnitude effect_magnitude(double r) noexcept {
    const double a = std::fabs(r);
    if (a < 0.1) return Magnitude::Negligible;
    if (a < 0.3) return Magnitude::Small;
    if (a < 0.5) return Magnitude::Medium;
    return Magnitude::Large;
}

namespace {

struct RankedDiffs {
    std::vector<double> ranks;  // average ranks of |d|
    std::vector<bool> positive;
    double tie_term = 0.0;      // sum over tie groups of t^3 - t
};

RankedDiffs rank_differences(std::span<const std::pair<double, double>> pairs) {
    std::vector<double> d;
    for (const auto& [x, y] : pairs) {
        const double diff = x - y;
        if (diff != 0.0) d.push_back(diff);
    }
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return std::fabs(d[i]) < std::fabs(d[j]); });

    RankedDiffs out;
    out.ranks.resize(d.size());
    out.positive.resize(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out.positive[i] = d[i] > 0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && std::fabs(d[order[j + 1]]) == std::fabs(d[order[i]])) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = avg;
        const double t = static_cast<double>(j - i + 1);
        out.tie_term += t * t * t - t;
        i = j + 1;
    }
    return out;
}

// Two-sided p from the exact permutation distribution of W+. Average ranks are
// multiples of 1/2, so the DP runs over doubled rank sums.
double exact_p_value(const RankedDiffs& rd, double w_plus) {
    std::vector<int> doubled;
    int max_sum = 0;
    for (double r : rd.ranks) {
        doubled.push_back(static_cast<int>(std::lround(2 * r)));
        max_sum += doubled.back();
    }
    std::vector<double> counts(static_cast<std::size_t>(max_sum) + 1, 0.0);
    counts[0] = 1.0;
    int reach = 0;
    for (int w : doubled) {
        for (int s = reach; s >= 0; --s)
            if (counts[static_cast<std::size_t>(s)] != 0.0)
                counts[static_cast<std::size_t>(s + w)] += counts[static_cast<std::size_t>(s)];
        reach += w;
    }
    const int target = static_cast<int>(std::lround(2 * w_plus));
    double le = 0, ge = 0;
    for (int s = 0; s <= max_sum; ++s) {
        if (s <= target) le += counts[static_cast<std::size_t>(s)];
        if (s >= target) ge += counts[static_cast<std::size_t>(s)];
    }
    const double total = std::ldexp(1.0, static_cast<int>(doubled.size()));
    return std::min(1.0, 2.0 * std::min(le, ge) / total);
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                    WilcoxonMethod method) {
    const RankedDiffs rd = rank_differences(pairs);
    const std::size_t n = rd.ranks.size();
    if (n == 0) throw AllZeroDifferences();

    WilcoxonResult res;
    res.n_nonzero = n;
    for (std::size_t i = 0; i < n; ++i) (rd.positive[i] ? res.w_plus : res.w_minus) += rd.ranks[i];
    res.w_statistic = std::min(res.w_plus, res.w_minus);

    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1) / 4.0;
    const double var = nn * (nn + 1) * (2 * nn + 1) / 24.0 - rd.tie_term / 48.0;
    double diff = res.w_plus - mean;
    diff = std::fabs(diff) <= 0.5 ? 0.0 : diff - std::copysign(0.5, diff);
    res.z_score = var > 0 ? diff / std::sqrt(var) : 0.0;

    const bool use_exact = method == WilcoxonMethod::Exact ||
                           (method == WilcoxonMethod::Auto && n <= kExactWilcoxonLimit);
    if (use_exact) {
        if (n > 60) throw DomainError("exact Wilcoxon distribution limited to n <= 60");
        res.p_value = exact_p_value(rd, res.w_plus);
        res.exact = true;
    } else {
        res.p_value = std::min(1.0, std::erfc(std::fabs(res.z_score) / std::sqrt(2.0)));
    }
    res.r = res.z_score / std::sqrt(nn);
    res.magnitude = effect_magnitude(res.r);
    return res;
}

std::string format_p_value(double p) {
    if (p < 1e-3) return "<0.001";
    return text::format_fixed(p, 3);
}

CorpusSummary summarize(std::span<const CommentRecord> corpus) {
    CorpusSummary s;
    for (const auto& rec : corpus) {
        auto& pc = s.projects[rec.location.project_id];
        ++pc.comments;
        if (rec.is_natural_language) ++pc.nl_comments;
        s.project_of.emplace(rec.id, rec.location.project_id);
    }
    return s;
}

PrevalenceReport prevalence_from_counts(std::uint64_t afflicted_projects,
                                        std::uint64_t total_projects,
                                        std::uint64_t saad_comments,
                                        std::uint64_t total_nl_comments) {
    if (afflicted_projects > total_projects)
        throw ConsistencyError("afflicted projects exceed total projects");
    PrevalenceReport r;
    r.total_projects = total_projects;
    r.afflicted_projects = afflicted_projects;
    r.total_nl_comments = total_nl_comments;
    r.saad_comments = saad_comments;
    if (total_projects > 0)
        r.pct_projects = text::round_half_away(
            100.0 * static_cast<double>(afflicted_projects) / static_cast<double>(total_projects), 2);
    if (total_nl_comments > 0)
        r.pct_comments = text::round_half_away(
            100.0 * static_cast<double>(saad_comments) / static_cast<double>(total_nl_comments), 1);
    return r;
}

PrevalenceReport prevalence(std::span<const Detection> detections, const CorpusSummary& corpus) {
    std::map<std::string, ProjectBreakdown> per;
    for (const auto& d : detections) {
        auto it = corpus.project_of.find(d.comment_id);
        if (it == corpus.project_of.end()) throw UnknownProject(d.comment_id);
        if (!corpus.projects.count(it->second)) throw UnknownProject(it->second);
        auto& pb = per[it->second];
        pb.project = it->second;
        ++pb.saad_comments;
        for (auto t : d.taxonomy_types)
            ++(category(t) == Category::Active ? pb.active_instances : pb.dormant_instances);
    }
    std::uint64_t nl_total = 0;
    for (const auto& [name, pc] : corpus.projects) nl_total += pc.nl_comments;

    PrevalenceReport r = prevalence_from_counts(per.size(), corpus.projects.size(),
                                                detections.size(), nl_total);
    for (auto& [name, pb] : per) {
        const auto inst = pb.active_instances + pb.dormant_instances;
        if (inst > 0) {
            pb.active_pct = 100.0 * static_cast<double>(pb.active_instances) / static_cast<double>(inst);
            pb.dormant_pct = 100.0 * static_cast<double>(pb.dormant_instances) / static_cast<double>(inst);
        }
        r.per_project.push_back(pb);
    }
    return r;
}

std::vector<std::pair<double, double>> category_pairs(const PrevalenceReport& report) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& pb : report.per_project) pairs.emplace_back(pb.active_pct, pb.dormant_pct);
    return pairs;
}

}  // namespace saad::stats
