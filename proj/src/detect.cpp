#include "saad/detect.hpp"

#include <algorithm>
#include <future>

#include "saad/text.hpp"

namespace saad {

std::vector<FeatureMatch> annotate_features(std::span<const CommentRecord> corpus,
                                            const Lexicon& lexicon) {
    std::vector<FeatureMatch> out;
    for (const auto& rec : corpus) {
        if (!rec.is_natural_language) continue;
        auto features = matched_features(lexicon, rec.text);
        if (!features.empty()) out.push_back({rec.id, std::move(features)});
    }
    return out;
}

bool detect_existing_aging(std::string_view comment_text) {
    static constexpr std::string_view kTag = "@deprecated";
    const std::string lowered = text::to_lower(comment_text);
    std::size_t pos = 0;
    while ((pos = lowered.find(kTag, pos)) != std::string::npos) {
        const std::size_t end = pos + kTag.size();
        if (end == lowered.size() || !text::is_word_char(lowered[end])) return true;
        pos = end;
    }
    return false;
}

bool detect_existing_aging(const CommentRecord& record) { return detect_existing_aging(record.text); }

namespace {

void detect_range(std::span<const CommentRecord> corpus, const Lexicon& lexicon,
                  std::vector<Detection>& out) {
    for (const auto& rec : corpus) {
        Detection d;
        d.comment_id = rec.id;
        d.existing_aging_feature = detect_existing_aging(rec);
        if (rec.is_natural_language) {
            d.matched_patterns = matched_patterns(lexicon, rec.text);
            if (!d.is_saad()) continue;
            d.matched_features = matched_features(lexicon, rec.text);
        } else if (d.existing_aging_feature) {
            d.matched_features = matched_features(lexicon, rec.text);
        }
        if (d.is_saad()) out.push_back(std::move(d));
    }
}

}  // namespace

std::vector<Detection> detect_saad(std::span<const CommentRecord> corpus, const Lexicon& lexicon,
                                   unsigned jobs) {
    std::vector<Detection> out;
    jobs = std::max(1u, jobs);
    if (jobs == 1 || corpus.size() < 2 * static_cast<std::size_t>(jobs)) {
        detect_range(corpus, lexicon, out);
        return out;
    }
    const std::size_t chunk = (corpus.size() + jobs - 1) / jobs;
    std::vector<std::future<std::vector<Detection>>> parts;
    for (std::size_t begin = 0; begin < corpus.size(); begin += chunk) {
        auto slice = corpus.subspan(begin, std::min(chunk, corpus.size() - begin));
        parts.push_back(std::async(std::launch::async, [slice, &lexicon] {
            std::vector<Detection> local;
            detect_range(slice, lexicon, local);
            return local;
        }));
    }
    for (auto& f : parts) {
        auto local = f.get();
        std::move(local.begin(), local.end(), std::back_inserter(out));
    }
    return out;
}

}  // namespace saad
