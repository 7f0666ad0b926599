#include "saad/extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "saad/error.hpp"
#include "saad/text.hpp"

namespace saad {

namespace {

struct RawComment {
    CommentKind kind;
    int start_line;
    int end_line;
    std::size_t begin;  // offset of the opening marker
    std::size_t end;    // one past the last character of the comment
    std::string body;   // content without the outer markers
};

bool is_ident_char(char c) { return text::is_word_char(c) || c == '$'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<RawComment> run() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == '/' && peek(1) == '/') {
                line_comment();
            } else if (c == '/' && peek(1) == '*') {
                block_comment();
            } else if (c == '"' && peek(1) == '"' && peek(2) == '"') {
                text_block();
            } else if (c == '"') {
                string_literal();
            } else if (c == '\'') {
                char_literal();
            } else if ((c == 'R' || c == 'r') && starts_raw_string()) {
                raw_string();
            } else {
                ++pos_;
            }
        }
        return std::move(out_);
    }

    bool unbalanced() const { return unbalanced_; }

private:
    char peek(std::size_t ahead) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance_to(std::size_t target) {
        for (; pos_ < target && pos_ < src_.size(); ++pos_)
            if (src_[pos_] == '\n') ++line_;
    }

    void line_comment() {
        const std::size_t begin = pos_;
        const int line = line_;
        std::size_t end = src_.find('\n', pos_);
        if (end == std::string_view::npos) end = src_.size();
        std::string_view body = src_.substr(begin + 2, end - begin - 2);
        if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
        out_.push_back({CommentKind::Line, line, line, begin, end, std::string(body)});
        pos_ = end;
    }

    void block_comment() {
        const std::size_t begin = pos_;
        const int start_line = line_;
        const bool doc = peek(2) == '*' && peek(3) != '/';
        std::size_t close = src_.find("*/", begin + 2);
        std::size_t end;
        std::string_view body;
        if (close == std::string_view::npos) {
            unbalanced_ = true;
            end = src_.size();
            body = src_.substr(begin + 2);
        } else {
            end = close + 2;
            body = src_.substr(begin + 2, close - begin - 2);
        }
        advance_to(end);
        int end_line = line_;
        // A comment that ends exactly at a newline still belongs to the previous line.
        if (end > begin && src_[end - 1] == '\n') --end_line;
        out_.push_back({doc ? CommentKind::Doc : CommentKind::Block, start_line, end_line, begin,
                        end, std::string(body)});
    }

    void text_block() {
        std::size_t close = src_.find("\"\"\"", pos_ + 3);
        advance_to(close == std::string_view::npos ? src_.size() : close + 3);
    }

    void string_literal() {
        ++pos_;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '\\') {
                if (peek(1) == '\n') ++line_;
                pos_ += 2;
                continue;
            }
            if (c == '\n') return;  // unterminated literal stops at end of line
            ++pos_;
            if (c == '"') return;
        }
    }

    // Character literals are short; anything else (a Rust lifetime, an
    // apostrophe in a preprocessor message) is consumed as one character.
    void char_literal() {
        if (peek(1) == '\\') {
            for (std::size_t k = 3; k < 12; ++k) {
                const char c = peek(k);
                if (c == '\n' || c == '\0') break;
                if (c == '\'') {
                    pos_ += k + 1;
                    return;
                }
            }
        } else if (peek(1) != '\n' && peek(1) != '\0' && peek(2) == '\'') {
            pos_ += 3;
            return;
        }
        ++pos_;
    }

    bool starts_raw_string() const {
        if (pos_ > 0 && is_ident_char(src_[pos_ - 1])) {
            // allow encoding prefixes such as u8R"(...)" and LR"(...)"
            const char prev = src_[pos_ - 1];
            if (src_[pos_] != 'R' || !(prev == '8' || prev == 'L' || prev == 'u' || prev == 'U'))
                return false;
        }
        if (src_[pos_] == 'R') return peek(1) == '"';
        std::size_t k = 1;
        while (peek(k) == '#') ++k;
        return k > 1 && peek(k) == '"';
    }

    void raw_string() {
        if (src_[pos_] == 'R') {
            const std::size_t open = src_.find('(', pos_ + 2);
            if (open == std::string_view::npos || open - pos_ - 2 > 16) {
                ++pos_;
                return;
            }
            const std::string terminator =
                ")" + std::string(src_.substr(pos_ + 2, open - pos_ - 2)) + "\"";
            const std::size_t close = src_.find(terminator, open + 1);
            advance_to(close == std::string_view::npos ? src_.size() : close + terminator.size());
            return;
        }
        std::size_t k = 1;
        while (peek(k) == '#') ++k;
        const std::string terminator = "\"" + std::string(k - 1, '#');
        const std::size_t close = src_.find(terminator, pos_ + k + 1);
        advance_to(close == std::string_view::npos ? src_.size() : close + terminator.size());
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    bool unbalanced_ = false;
    std::vector<RawComment> out_;
};

bool only_whitespace(std::string_view s) {
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

std::string strip_leading(std::string_view s, std::string_view chars) {
    std::size_t i = 0;
    while (i < s.size() && chars.find(s[i]) != std::string_view::npos) ++i;
    return std::string(s.substr(i));
}

std::string normalize_line_body(std::string_view body) {
    return text::collapse_whitespace(strip_leading(body, "/!"));
}

std::string normalize_block_body(std::string_view body) {
    auto lines = text::split_lines(body);
    std::string joined;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = text::trim(lines[i]);
        line = strip_leading(line, "*");
        while (!line.empty() && line.back() == '*') line.pop_back();
        if (!joined.empty()) joined.push_back(' ');
        joined += line;
    }
    return text::collapse_whitespace(joined);
}

std::vector<std::string> slice_lines(const std::vector<std::string>& lines, int first, int last) {
    // 1-based inclusive bounds, clamped to the file.
    std::vector<std::string> out;
    first = std::max(first, 1);
    last = std::min(last, static_cast<int>(lines.size()));
    for (int i = first; i <= last; ++i) out.push_back(lines[static_cast<std::size_t>(i - 1)]);
    return out;
}

bool ends_with_any(std::string_view s, std::string_view chars) {
    return !s.empty() && chars.find(s.back()) != std::string_view::npos;
}

bool has_call_shape(std::string_view s) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] == '(' && is_ident_char(s[i - 1])) return true;
    return false;
}

bool starts_with_statement_keyword(std::string_view s) {
    static constexpr std::array<std::string_view, 12> kKeywords = {
        "return", "import", "package", "throw", "break", "continue",
        "var",    "let",    "const",   "int",   "final", "goto"};
    for (auto kw : kKeywords) {
        if (s.size() > kw.size() && s.substr(0, kw.size()) == kw && !is_ident_char(s[kw.size()]))
            return true;
    }
    return false;
}

}  // namespace

std::string_view to_string(CommentKind kind) noexcept {
    switch (kind) {
        case CommentKind::Line: return "line";
        case CommentKind::Block: return "block";
        case CommentKind::Doc: return "doc";
    }
    return "line";
}

CommentKind parse_comment_kind(std::string_view s) {
    if (s == "line") return CommentKind::Line;
    if (s == "block") return CommentKind::Block;
    if (s == "doc") return CommentKind::Doc;
    throw ValidationError("unknown comment kind '" + std::string(s) + "'");
}

std::string comment_id(std::string_view project_id, std::string_view file_path, int start_line,
                       std::string_view text) {
    std::string key;
    key.reserve(project_id.size() + file_path.size() + text.size() + 16);
    key.append(project_id).push_back('\x1f');
    key.append(file_path).push_back('\x1f');
    key.append(std::to_string(start_line)).push_back('\x1f');
    key.append(text);
    return text::hex64(text::fnv1a64(key));
}

void validate(const SourceLocation& loc) {
    if (loc.start_line < 1) throw ValidationError("start_line must be >= 1");
    if (loc.end_line < loc.start_line) throw ValidationError("end_line precedes start_line");
    const auto& p = loc.file_path;
    if (p.empty() || p.front() == '/' || p.front() == '\\')
        throw ValidationError("file_path must be relative: '" + p + "'");
    for (const auto& seg : text::split(p, '/'))
        if (seg == "..") throw ValidationError("file_path must not contain '..': '" + p + "'");
}

bool is_natural_language(std::string_view raw, const NlHeuristic& h) {
    const std::string s = text::trim(raw);
    static constexpr std::string_view kCodeSymbols = "{};()=<>[]+-*/&|";
    std::size_t non_ws = 0, symbols = 0;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        ++non_ws;
        if (kCodeSymbols.find(c) != std::string_view::npos) ++symbols;
    }
    if (non_ws == 0) return true;
    if (static_cast<double>(symbols) >= h.max_symbol_ratio * static_cast<double>(non_ws))
        return false;
    if (ends_with_any(s, ";{)") && has_call_shape(s)) return false;
    if (s.back() == ';') {
        if (s.find('=') != std::string::npos) return false;
        if (starts_with_statement_keyword(s)) return false;
    }
    return true;
}

bool is_natural_language(CommentRecord& record, const NlHeuristic& h) {
    record.is_natural_language = is_natural_language(record.text, h);
    return record.is_natural_language;
}

ExtractResult extract_comments(std::string_view source_text, std::string_view file_path,
                               std::string_view project_id, int k_context) {
    if (k_context < 0) throw ValidationError("k_context must be >= 0");
    Lexer lexer(source_text);
    std::vector<RawComment> raw = lexer.run();

    // Merge runs of `//` comments on adjacent lines with only whitespace between them.
    std::vector<RawComment> merged;
    for (auto& c : raw) {
        if (!merged.empty()) {
            auto& prev = merged.back();
            if (prev.kind == CommentKind::Line && c.kind == CommentKind::Line &&
                c.start_line == prev.end_line + 1 &&
                only_whitespace(source_text.substr(prev.end, c.begin - prev.end))) {
                prev.body += '\n';
                prev.body += c.body;
                prev.end_line = c.end_line;
                prev.end = c.end;
                continue;
            }
        }
        merged.push_back(std::move(c));
    }

    const auto lines = text::split_lines(source_text);
    ExtractResult result;
    result.unbalanced_block_comment = lexer.unbalanced();
    for (const auto& c : merged) {
        std::string normalized;
        if (c.kind == CommentKind::Line) {
            std::string joined;
            for (const auto& l : text::split_lines(c.body)) {
                if (!joined.empty()) joined.push_back(' ');
                joined += normalize_line_body(l);
            }
            normalized = text::collapse_whitespace(joined);
        } else {
            normalized = normalize_block_body(c.body);
        }
        if (normalized.empty()) continue;

        CommentRecord rec;
        rec.location = {std::string(project_id), std::string(file_path), c.start_line, c.end_line};
        rec.kind = c.kind;
        rec.text = std::move(normalized);
        rec.id = comment_id(project_id, file_path, c.start_line, rec.text);
        rec.context_before = slice_lines(lines, c.start_line - k_context, c.start_line - 1);
        rec.context_after = slice_lines(lines, c.end_line + 1, c.end_line + k_context);
        is_natural_language(rec);
        result.records.push_back(std::move(rec));
    }
    return result;
}

}  // namespace saad
