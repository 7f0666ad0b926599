#pragma once

#include <optional>
#include <span>
#include <string>

#include "saad/classify.hpp"
#include "saad/config.hpp"
#include "saad/stats.hpp"

namespace saad {

struct Report {
    stats::PrevalenceReport prevalence;
    TypeTally tally;
    // Empty when no project carries SAAD or every paired difference is zero.
    std::optional<stats::WilcoxonResult> wilcoxon;
};

// Throws ConsistencyError naming detections whose comment is not in the corpus.
void check_consistency(std::span<const Detection> detections, const stats::CorpusSummary& corpus);

// Detections must already carry their taxonomy types.
Report build_report(std::span<const CommentRecord> corpus, std::span<const Detection> detections);

// `N=<n> W=<w> p=<p> r=<r> (<magnitude>)`
std::string format_wilcoxon(const stats::WilcoxonResult& w);

std::string render_report(const Report& report, OutputFormat format);

}  // namespace saad
