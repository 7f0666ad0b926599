#include "saad/report.hpp"

#include <cmath>
#include <sstream>

#include "saad/jsonl.hpp"
#include "saad/text.hpp"

namespace saad {

void check_consistency(std::span<const Detection> detections, const stats::CorpusSummary& corpus) {
    std::vector<std::string> orphans;
    for (const auto& d : detections)
        if (!corpus.project_of.count(d.comment_id)) orphans.push_back(d.comment_id);
    if (orphans.empty()) return;
    std::string msg = std::to_string(orphans.size()) + " detection(s) reference comments missing from the corpus:";
    for (std::size_t i = 0; i < orphans.size() && i < 20; ++i) msg += " " + orphans[i];
    if (orphans.size() > 20) msg += " ...";
    throw ConsistencyError(msg);
}

Report build_report(std::span<const CommentRecord> corpus, std::span<const Detection> detections) {
    const auto summary = stats::summarize(corpus);
    check_consistency(detections, summary);
    Report r;
    r.prevalence = stats::prevalence(detections, summary);
    r.tally = tally(detections);
    const auto pairs = stats::category_pairs(r.prevalence);
    if (!pairs.empty()) {
        try {
            r.wilcoxon = stats::wilcoxon_signed_rank(pairs);
        } catch (const stats::AllZeroDifferences&) {
        }
    }
    return r;
}

namespace {

std::string format_w(double w) {
    if (w == std::floor(w)) return std::to_string(static_cast<long long>(w));
    return text::format_fixed(w, 1);
}

std::string pct(double v, int decimals) { return text::format_fixed(v, decimals); }

}  // namespace

std::string format_wilcoxon(const stats::WilcoxonResult& w) {
    return "N=" + std::to_string(w.n_nonzero) + " W=" + format_w(w.w_statistic) +
           " p=" + stats::format_p_value(w.p_value) + " r=" + text::format_fixed(w.r, 3) + " (" +
           std::string(stats::to_string(w.magnitude)) + ")";
}

namespace {

std::string render_markdown(const Report& r) {
    const auto& p = r.prevalence;
    std::ostringstream out;
    out << "# SAAD report\n\n";
    out << "## Prevalence\n\n";
    out << "| Scope | Total | With SAAD | Share (%) |\n";
    out << "|---|---:|---:|---:|\n";
    out << "| Projects | " << p.total_projects << " | " << p.afflicted_projects << " | "
        << pct(p.pct_projects, 2) << " |\n";
    out << "| NL comments | " << p.total_nl_comments << " | " << p.saad_comments << " | "
        << pct(p.pct_comments, 1) << " |\n\n";

    out << "## Types and categories\n\n";
    out << "| Type | Category | Count | Share (%) |\n";
    out << "|---|---|---:|---:|\n";
    for (const auto& row : tally_rows(r.tally))
        out << "| " << row.type << " | " << to_string(row.category) << " | " << row.count << " | "
            << pct(row.pct, 2) << " |\n";
    for (auto c : {Category::Active, Category::Dormant})
        out << "| **" << to_string(c) << "** | | " << r.tally.category_total(c) << " | "
            << pct(r.tally.category_pct(c), 2) << " |\n";
    out << "| **total** | | " << r.tally.total() << " | "
        << (r.tally.total() ? "100.00" : "0.00") << " |\n\n";

    out << "## Active vs dormant (Wilcoxon signed-rank, per project)\n\n";
    if (r.wilcoxon)
        out << format_wilcoxon(*r.wilcoxon) << (r.wilcoxon->exact ? " exact" : " normal") << "\n";
    else
        out << "insufficient data\n";
    return out.str();
}

std::string render_csv(const Report& r) {
    std::ostringstream out;
    write_tally_csv(out, r.tally);
    return out.str();
}

std::string render_jsonl(const Report& r) {
    const auto& p = r.prevalence;
    std::ostringstream out;
    write_jsonl_line(out, json{{"section", "prevalence"},
                               {"total_projects", p.total_projects},
                               {"afflicted_projects", p.afflicted_projects},
                               {"pct_projects", pct(p.pct_projects, 2)},
                               {"total_nl_comments", p.total_nl_comments},
                               {"saad_comments", p.saad_comments},
                               {"pct_comments", pct(p.pct_comments, 1)}});
    for (const auto& row : tally_rows(r.tally))
        write_jsonl_line(out, json{{"section", "tally"},
                                   {"type", row.type},
                                   {"category", std::string(to_string(row.category))},
                                   {"count", row.count},
                                   {"pct", pct(row.pct, 2)}});
    if (r.wilcoxon) {
        const auto& w = *r.wilcoxon;
        write_jsonl_line(out, json{{"section", "wilcoxon"},
                                   {"n", w.n_nonzero},
                                   {"w", format_w(w.w_statistic)},
                                   {"p", stats::format_p_value(w.p_value)},
                                   {"r", text::format_fixed(w.r, 3)},
                                   {"magnitude", std::string(stats::to_string(w.magnitude))},
                                   {"exact", w.exact}});
    } else {
        write_jsonl_line(out, json{{"section", "wilcoxon"}, {"result", "insufficient data"}});
    }
    return out.str();
}

}  // namespace

std::string render_report(const Report& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Markdown: return render_markdown(report);
        case OutputFormat::Csv: return render_csv(report);
        case OutputFormat::Jsonl: return render_jsonl(report);
    }
    return render_markdown(report);
}

}  // namespace saad
