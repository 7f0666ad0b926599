#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace saad {

struct SourceLocation {
    std::string project_id;
    std::string file_path;  // relative, '/'-separated
    int start_line = 1;
    int end_line = 1;

    friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class CommentKind { Line, Block, Doc };

std::string_view to_string(CommentKind kind) noexcept;
CommentKind parse_comment_kind(std::string_view s);

struct CommentRecord {
    std::string id;
    SourceLocation location;
    CommentKind kind = CommentKind::Line;
    std::string text;
    std::vector<std::string> context_before;
    std::vector<std::string> context_after;
    bool is_natural_language = true;

    friend bool operator==(const CommentRecord&, const CommentRecord&) = default;
};

struct ExtractResult {
    std::vector<CommentRecord> records;
    // Set when a `/*` runs to end of input; the partial block is still emitted.
    bool unbalanced_block_comment = false;
};

inline constexpr int kDefaultContextLines = 5;

// Lexes C-family source (Java, C, C++, Go, Rust, ...) into comment records.
// Consecutive `//` lines merge into one record. String and character literals
// are skipped so comment markers inside them are never reported.
// The NL verdict is computed for every record.
ExtractResult extract_comments(std::string_view source_text, std::string_view file_path,
                               std::string_view project_id, int k_context = kDefaultContextLines);

// Thresholds for the commented-out-code heuristic.
struct NlHeuristic {
    double max_symbol_ratio = 0.40;
};

// false for commented-out code. Pure function of the text.
bool is_natural_language(std::string_view text, const NlHeuristic& h = {});
bool is_natural_language(CommentRecord& record, const NlHeuristic& h = {});

// Deterministic id over (project_id, file_path, start_line, text).
std::string comment_id(std::string_view project_id, std::string_view file_path, int start_line,
                       std::string_view text);

// Validates the SourceLocation invariants; throws ValidationError.
void validate(const SourceLocation& loc);

}  // namespace saad
