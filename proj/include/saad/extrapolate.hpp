#pragma once

#include <cstddef>
#include <deque>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "saad/error.hpp"
#include "saad/lexicon.hpp"

namespace saad {

struct Neighbor {
    std::string term;
    double score = 0.0;  // in [0, 1]
};

// Word-embedding neighbourhood lookup. Implementations return at most k
// entries sorted by descending score and are deterministic.
class EmbeddingOracle {
public:
    virtual ~EmbeddingOracle() = default;
    virtual std::vector<Neighbor> neighbors(const std::string& term, std::size_t k) const = 0;
};

class OracleUnavailable : public IoError {
public:
    using IoError::IoError;
};

// Plain-text vectors: one word per line followed by space-separated floats.
// Similarity is cosine clamped to [0, 1]; ties break on the word. Unknown
// terms have no neighbours. A leading "<count> <dim>" header line is skipped.
class VectorFileOracle : public EmbeddingOracle {
public:
    static VectorFileOracle load(const std::filesystem::path& path);
    static VectorFileOracle parse(std::istream& in, const std::string& source = "vectors");

    std::vector<Neighbor> neighbors(const std::string& term, std::size_t k) const override;
    std::size_t size() const noexcept { return words_.size(); }

private:
    std::vector<std::string> words_;
    std::vector<std::vector<double>> unit_;  // L2-normalised rows
    std::unordered_map<std::string, std::size_t> index_;
};

enum class VerifyVerdict { Direct, Indirect, Reject };

using VerifyFn = std::function<VerifyVerdict(const std::string& candidate, const std::string& source)>;

inline constexpr std::size_t kDefaultNeighbors = 30;

struct ExtrapolationSession {
    std::deque<std::string> seed;
    std::vector<AgingFeature> expanded;  // accepted terms, acceptance order
    std::set<std::string> processed;     // terms already extrapolated
    std::set<std::string> seen;          // every seed or candidate verified so far
    std::deque<std::pair<std::string, std::string>> pending_verifications;  // (candidate, source)
    std::size_t k = kDefaultNeighbors;

    static ExtrapolationSession start(const std::vector<std::string>& seeds,
                                      std::size_t k = kDefaultNeighbors);
};

class EmptySeed : public ValidationError {
public:
    EmptySeed() : ValidationError("extrapolation seed set is empty") {}
};

// Pops one seed term, queries the oracle, and routes every unseen neighbour
// through `verify`. Accepted terms join both `expanded` and the seed queue.
// If the oracle or the callback throws, `session` is left unchanged.
void step(ExtrapolationSession& session, const EmbeddingOracle& oracle, const VerifyFn& verify);

// Runs `step` until the seed queue is empty; returns the accepted features.
std::vector<AgingFeature> run_to_completion(const std::vector<std::string>& seeds,
                                            const EmbeddingOracle& oracle, const VerifyFn& verify,
                                            std::size_t k = kDefaultNeighbors);

// Reads one term per line, skipping blanks and '#' lines; lowercased.
std::vector<std::string> read_seed_terms(std::istream& in);

// Appends `F<TAB>term<TAB>direct|indirect` rows.
void write_feature_rows(std::ostream& out, const std::vector<AgingFeature>& features);

}  // namespace saad
