#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "saad/detect.hpp"
#include "saad/extract.hpp"
#include "saad/jsonl.hpp"
#include "saad/refine.hpp"

namespace httplib {
class Server;
}

namespace saad {

class BadFilter : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnknownComment : public ValidationError {
public:
    explicit UnknownComment(const std::string& id)
        : ValidationError("no detection for comment '" + id + "'") {}
};

class NoOverlap : public ValidationError {
public:
    NoOverlap(const std::string& a, const std::string& b)
        : ValidationError("annotators '" + a + "' and '" + b + "' share no annotated item") {}
};

struct CandidateFilter {
    std::optional<std::string> pattern;
    std::optional<TaxonomyType> type;
    std::optional<std::string> project;
    std::size_t page = 1;
    std::size_t page_size = 20;

    static constexpr std::size_t kMaxPageSize = 500;
    // Builds a filter from query parameters; throws BadFilter.
    static CandidateFilter from_query(const std::multimap<std::string, std::string>& params);
};

struct ServiceOptions {
    std::optional<std::filesystem::path> iterations;  // refinement history
    std::optional<std::filesystem::path> ui_dir;      // directory holding index.html
    double fp_threshold = 0.25;
};

struct HttpReply {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

// Triage endpoints over an immutable corpus/detections snapshot. Every
// handler is safe to call concurrently; submit_annotation is the only writer
// and goes through the store's serialized path.
class TriageService {
public:
    TriageService(std::vector<CommentRecord> corpus, std::vector<Detection> detections,
                  std::shared_ptr<AnnotationStore> store, ServiceOptions options = {});

    // Queue of detections lacking a verdict from `annotator`, comment_id order.
    json candidates(const CandidateFilter& filter, const std::string& annotator) const;
    json submit_annotation(const json& body, const std::string& header_annotator);
    json agreement(const std::string& a, const std::string& b) const;
    json patterns_fp() const;
    json iterations() const;
    std::string index_html() const;

    // Transport-level wrappers: parse inputs, map errors to status codes.
    HttpReply handle_candidates(const std::multimap<std::string, std::string>& params,
                                const std::string& annotator) const;
    HttpReply handle_submit(const std::string& body, const std::string& annotator);
    HttpReply handle_agreement(const std::multimap<std::string, std::string>& params) const;
    HttpReply handle_patterns_fp() const;
    HttpReply handle_iterations() const;
    HttpReply handle_index() const;

    std::size_t detection_count() const noexcept { return detections_.size(); }

private:
    json item_json(const Detection& d, const std::string& annotator) const;

    std::vector<CommentRecord> corpus_;
    std::unordered_map<std::string, std::size_t> comment_index_;
    std::vector<Detection> detections_;  // sorted by comment_id
    std::unordered_map<std::string, std::size_t> detection_index_;
    std::map<std::string, std::shared_ptr<const PatternMatcher>> matchers_;
    std::shared_ptr<AnnotationStore> store_;
    ServiceOptions options_;
};

void install_routes(httplib::Server& server, TriageService& service);

// Blocks serving on host:port until the process is stopped.
void serve(TriageService& service, const std::string& host, int port);

}  // namespace saad
