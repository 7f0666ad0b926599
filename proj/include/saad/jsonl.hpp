#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "saad/detect.hpp"
#include "saad/extract.hpp"

namespace saad {

using json = nlohmann::json;

// Raised for a malformed JSON-Lines record; carries the 1-based line number.
class JsonlParseError : public ValidationError {
public:
    JsonlParseError(const std::string& source, int line_no, const std::string& reason)
        : ValidationError(source + ":" + std::to_string(line_no) + ": " + reason),
          line_no_(line_no) {}
    int line_no() const noexcept { return line_no_; }

private:
    int line_no_;
};

json to_json(const CommentRecord& rec);
CommentRecord comment_from_json(const json& j);

json to_json(const Detection& det);
Detection detection_from_json(const json& j);

// Calls `fn` for every non-blank line parsed as JSON. `source` names the
// stream in error messages.
void for_each_jsonl(std::istream& in, const std::string& source,
                    const std::function<void(const json&, int line_no)>& fn);

// Compact, key-sorted dump followed by '\n'.
void write_jsonl_line(std::ostream& out, const json& j);

std::vector<CommentRecord> read_corpus(std::istream& in, const std::string& source = "corpus");
void write_corpus(std::ostream& out, std::span<const CommentRecord> corpus);
std::vector<CommentRecord> load_corpus(const std::filesystem::path& path);
void save_corpus(const std::filesystem::path& path, std::span<const CommentRecord> corpus);

std::vector<Detection> read_detections(std::istream& in, const std::string& source = "detections");
void write_detections(std::ostream& out, std::span<const Detection> detections);
std::vector<Detection> load_detections(const std::filesystem::path& path);
void save_detections(const std::filesystem::path& path, std::span<const Detection> detections);

// Opens for reading / truncating write; throws IoError on failure.
std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace saad
