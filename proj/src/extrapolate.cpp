#include "saad/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "saad/text.hpp"

namespace saad {

VectorFileOracle VectorFileOracle::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw OracleUnavailable("cannot open vector file '" + path.string() + "'");
    return parse(in, path.string());
}

VectorFileOracle VectorFileOracle::parse(std::istream& in, const std::string& source) {
    VectorFileOracle o;
    std::string line;
    int line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string word;
        if (!(ss >> word)) continue;
        std::vector<double> v;
        double x;
        while (ss >> x) v.push_back(x);
        if (!ss.eof()) throw ValidationError(source + ":" + std::to_string(line_no) + ": bad number");
        if (line_no == 1 && v.size() == 1 && word.find_first_not_of("0123456789") == std::string::npos)
            continue;  // "<count> <dim>" header
        if (v.empty()) throw ValidationError(source + ":" + std::to_string(line_no) + ": no vector");
        if (dim == 0) dim = v.size();
        if (v.size() != dim)
            throw ValidationError(source + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(dim) + " components");
        // Multi-word phrases are stored with '_' in common embedding dumps.
        std::replace(word.begin(), word.end(), '_', ' ');
        word = text::to_lower(word);
        if (o.index_.count(word))
            throw ValidationError(source + ":" + std::to_string(line_no) + ": duplicate word '" + word + "'");
        double norm = 0;
        for (double c : v) norm += c * c;
        norm = std::sqrt(norm);
        if (norm > 0)
            for (double& c : v) c /= norm;
        o.index_.emplace(word, o.words_.size());
        o.words_.push_back(std::move(word));
        o.unit_.push_back(std::move(v));
    }
    return o;
}

std::vector<Neighbor> VectorFileOracle::neighbors(const std::string& term, std::size_t k) const {
    auto it = index_.find(text::to_lower(term));
    if (it == index_.end() || k == 0) return {};
    const auto& q = unit_[it->second];
    std::vector<Neighbor> all;
    all.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (i == it->second) continue;
        double dot = 0;
        for (std::size_t d = 0; d < q.size(); ++d) dot += q[d] * unit_[i][d];
        all.push_back({words_[i], std::clamp(dot, 0.0, 1.0)});
    }
    auto cmp = [](const Neighbor& a, const Neighbor& b) {
        return a.score != b.score ? a.score > b.score : a.term < b.term;
    };
    const std::size_t take = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(), cmp);
    all.resize(take);
    return all;
}

ExtrapolationSession ExtrapolationSession::start(const std::vector<std::string>& seeds,
                                                 std::size_t k) {
    ExtrapolationSession s;
    s.k = k;
    for (const auto& raw : seeds) {
        auto term = text::to_lower(text::trim(raw));
        if (term.empty() || !s.seen.insert(term).second) continue;
        s.seed.push_back(std::move(term));
    }
    return s;
}

void step(ExtrapolationSession& session, const EmbeddingOracle& oracle, const VerifyFn& verify) {
    if (session.seed.empty()) throw EmptySeed();
    ExtrapolationSession next = session;
    const std::string term = next.seed.front();
    next.seed.pop_front();

    for (const auto& n : oracle.neighbors(term, next.k)) {
        const auto cand = text::to_lower(n.term);
        if (cand.empty() || next.seen.count(cand) || next.processed.count(cand)) continue;
        bool queued = false;
        for (const auto& p : next.pending_verifications) queued = queued || p.first == cand;
        if (!queued) next.pending_verifications.emplace_back(cand, term);
    }
    while (!next.pending_verifications.empty()) {
        auto [cand, source] = next.pending_verifications.front();
        const auto verdict = verify(cand, source);
        next.pending_verifications.pop_front();
        next.seen.insert(cand);
        if (verdict == VerifyVerdict::Reject) continue;
        next.expanded.push_back({cand, verdict == VerifyVerdict::Direct ? Directness::Direct
                                                                        : Directness::Indirect});
        next.seed.push_back(cand);
    }
    next.processed.insert(term);
    session = std::move(next);
}

std::vector<AgingFeature> run_to_completion(const std::vector<std::string>& seeds,
                                            const EmbeddingOracle& oracle, const VerifyFn& verify,
                                            std::size_t k) {
    auto session = ExtrapolationSession::start(seeds, k);
    if (session.seed.empty()) throw EmptySeed();
    while (!session.seed.empty()) step(session, oracle, verify);
    return session.expanded;
}

std::vector<std::string> read_seed_terms(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        out.push_back(text::to_lower(t));
    }
    return out;
}

void write_feature_rows(std::ostream& out, const std::vector<AgingFeature>& features) {
    for (const auto& f : features) out << "F\t" << f.term << '\t' << to_string(f.directness) << '\n';
}

}  // namespace saad
