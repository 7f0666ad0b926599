#include "saad/jsonl.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "saad/text.hpp"

namespace saad {

namespace {

template <typename T>
T field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

json to_json(const CommentRecord& rec) {
    return json{
        {"id", rec.id},
        {"project_id", rec.location.project_id},
        {"file_path", rec.location.file_path},
        {"start_line", rec.location.start_line},
        {"end_line", rec.location.end_line},
        {"kind", std::string(to_string(rec.kind))},
        {"text", rec.text},
        {"context_before", rec.context_before},
        {"context_after", rec.context_after},
        {"is_nl", rec.is_natural_language},
    };
}

CommentRecord comment_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("corpus record is not an object");
    CommentRecord rec;
    rec.id = field<std::string>(j, "id");
    rec.location.project_id = field<std::string>(j, "project_id");
    rec.location.file_path = field<std::string>(j, "file_path");
    rec.location.start_line = field<int>(j, "start_line");
    rec.location.end_line = field<int>(j, "end_line");
    rec.kind = parse_comment_kind(field<std::string>(j, "kind"));
    rec.text = field<std::string>(j, "text");
    rec.context_before = field<std::vector<std::string>>(j, "context_before");
    rec.context_after = field<std::vector<std::string>>(j, "context_after");
    rec.is_natural_language = field<bool>(j, "is_nl");
    validate(rec.location);
    if (rec.id.empty()) throw ValidationError("empty comment id");
    if (rec.text.empty()) throw ValidationError("empty comment text");
    return rec;
}

json to_json(const Detection& det) {
    json types = json::array();
    for (auto t : det.taxonomy_types) types.push_back(std::string(to_string(t)));
    return json{
        {"comment_id", det.comment_id},
        {"features", det.matched_features},
        {"patterns", det.matched_patterns},
        {"existing_aging", det.existing_aging_feature},
        {"types", types},
    };
}

Detection detection_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("detection record is not an object");
    Detection det;
    det.comment_id = field<std::string>(j, "comment_id");
    det.matched_features = field<std::vector<std::string>>(j, "features");
    det.matched_patterns = field<std::vector<std::string>>(j, "patterns");
    det.existing_aging_feature = field<bool>(j, "existing_aging");
    for (const auto& s : field<std::vector<std::string>>(j, "types")) {
        auto t = parse_taxonomy_type(s);
        if (!t) throw ValidationError("unknown taxonomy type '" + s + "'");
        det.taxonomy_types.push_back(*t);
    }
    return det;
}

void for_each_jsonl(std::istream& in, const std::string& source,
                    const std::function<void(const json&, int)>& fn) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw JsonlParseError(source, line_no, e.what());
        }
        try {
            fn(j, line_no);
        } catch (const JsonlParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw JsonlParseError(source, line_no, e.what());
        }
    }
    if (in.bad()) throw IoError("read failure on " + source);
}

void write_jsonl_line(std::ostream& out, const json& j) {
    out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

std::vector<CommentRecord> read_corpus(std::istream& in, const std::string& source) {
    std::vector<CommentRecord> out;
    for_each_jsonl(in, source, [&](const json& j, int) { out.push_back(comment_from_json(j)); });
    return out;
}

void write_corpus(std::ostream& out, std::span<const CommentRecord> corpus) {
    for (const auto& rec : corpus) write_jsonl_line(out, to_json(rec));
}

std::vector<Detection> read_detections(std::istream& in, const std::string& source) {
    std::vector<Detection> out;
    for_each_jsonl(in, source, [&](const json& j, int) { out.push_back(detection_from_json(j)); });
    return out;
}

void write_detections(std::ostream& out, std::span<const Detection> detections) {
    for (const auto& d : detections) write_jsonl_line(out, to_json(d));
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::vector<CommentRecord> load_corpus(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_corpus(in, path.string());
}

void save_corpus(const std::filesystem::path& path, std::span<const CommentRecord> corpus) {
    auto out = open_output(path);
    write_corpus(out, corpus);
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

std::vector<Detection> load_detections(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_detections(in, path.string());
}

void save_detections(const std::filesystem::path& path, std::span<const Detection> detections) {
    auto out = open_output(path);
    write_detections(out, detections);
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

}  // namespace saad
