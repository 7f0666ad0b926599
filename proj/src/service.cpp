#include "saad/service.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "saad/stats.hpp"

namespace saad {

namespace {

std::optional<std::string> param(const std::multimap<std::string, std::string>& params,
                                 const std::string& key) {
    auto it = params.find(key);
    if (it == params.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

std::size_t positive(const std::string& key, const std::string& v) {
    std::size_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || out == 0)
        throw BadFilter(key + " must be a positive integer, got '" + v + "'");
    return out;
}

HttpReply error_reply(int status, const char* name, const std::string& message,
                      json extra = json::object()) {
    extra["error"] = name;
    extra["message"] = message;
    return {status, "application/json", extra.dump()};
}

HttpReply ok(const json& j) { return {200, "application/json", j.dump()}; }

// Shared mapping from domain errors to HTTP replies.
template <typename Fn>
HttpReply guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const BadFilter& e) {
        return error_reply(400, "BadFilter", e.what());
    } catch (const UnknownComment& e) {
        return error_reply(404, "UnknownComment", e.what());
    } catch (const InvalidPattern& e) {
        return error_reply(400, "InvalidPattern", e.what(),
                           json{{"pattern", e.raw()}, {"position", e.position()}});
    } catch (const NoOverlap& e) {
        return error_reply(422, "NoOverlap", e.what());
    } catch (const ValidationError& e) {
        return error_reply(400, "ValidationError", e.what());
    } catch (const IoError& e) {
        return error_reply(500, "IoError", e.what());
    } catch (const std::exception& e) {
        return error_reply(500, "InternalError", e.what());
    }
}

const char* const kIndexHtml = R"html(<!doctype html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>SAAD triage</title>
<style>
body { font-family: sans-serif; margin: 2em; max-width: 60em; }
pre { background: #f4f4f4; padding: .5em; overflow-x: auto; }
mark { background: #ffe08a; }
.card { border: 1px solid #ccc; padding: .5em 1em; margin-bottom: 1em; }
</style>
</head>
<body>
<h1>SAAD triage</h1>
<p>Annotator: <input id="who" placeholder="your id"> <button id="load">Load queue</button></p>
<div id="queue"></div>
<script>
const who = document.getElementById('who');
who.value = localStorage.getItem('annotator') || '';
function esc(s) { return s.replace(/[&<>]/g, c => ({'&':'&amp;','<':'&lt;','>':'&gt;'}[c])); }
function highlight(text, spans) {
  let out = '', at = 0;
  for (const h of [...spans].sort((a, b) => a.start - b.start)) {
    if (h.start < at) continue;
    out += esc(text.slice(at, h.start)) + '<mark>' + esc(text.slice(h.start, h.end)) + '</mark>';
    at = h.end;
  }
  return out + esc(text.slice(at));
}
async function load() {
  localStorage.setItem('annotator', who.value);
  const r = await fetch('/api/candidates?page_size=20', {headers: {'X-Annotator': who.value}});
  const page = await r.json();
  const q = document.getElementById('queue');
  q.innerHTML = page.items.length ? '' : '<p>Queue complete.</p>';
  for (const it of page.items) {
    const d = document.createElement('div');
    d.className = 'card';
    d.innerHTML = '<pre>' + esc(it.context_before.join('\n')) + '</pre>' +
      '<p><b>' + highlight(it.text, it.highlights) + '</b></p>' +
      '<pre>' + esc(it.context_after.join('\n')) + '</pre>' +
      '<p>' + it.types.join(', ') + '</p>' +
      '<button data-v="SAAD">SAAD</button> <button data-v="NON_SAAD">NON_SAAD</button>';
    d.querySelectorAll('button').forEach(b => b.onclick = async () => {
      const body = {comment_id: it.comment_id, annotator: who.value, verdict: b.dataset.v,
                    type: b.dataset.v === 'SAAD' ? (it.types[0] || null) : null};
      const res = await fetch('/api/annotations', {method: 'POST', body: JSON.stringify(body),
                              headers: {'Content-Type': 'application/json', 'X-Annotator': who.value}});
      if (res.ok) d.remove(); else alert((await res.json()).message);
    });
    q.appendChild(d);
  }
}
document.getElementById('load').onclick = load;
</script>
</body>
</html>
)html";

}  // namespace

CandidateFilter CandidateFilter::from_query(const std::multimap<std::string, std::string>& params) {
    CandidateFilter f;
    f.pattern = param(params, "pattern");
    f.project = param(params, "project");
    if (auto t = param(params, "type")) {
        f.type = parse_taxonomy_type(*t);
        if (!f.type) throw BadFilter("unknown taxonomy type '" + *t + "'");
    }
    if (auto p = param(params, "page")) f.page = positive("page", *p);
    if (auto p = param(params, "page_size")) f.page_size = positive("page_size", *p);
    if (f.page_size > kMaxPageSize)
        throw BadFilter("page_size must not exceed " + std::to_string(kMaxPageSize));
    return f;
}

TriageService::TriageService(std::vector<CommentRecord> corpus, std::vector<Detection> detections,
                             std::shared_ptr<AnnotationStore> store, ServiceOptions options)
    : corpus_(std::move(corpus)),
      detections_(std::move(detections)),
      store_(std::move(store)),
      options_(std::move(options)) {
    if (!store_) store_ = std::make_shared<AnnotationStore>();
    for (std::size_t i = 0; i < corpus_.size(); ++i) comment_index_.emplace(corpus_[i].id, i);
    std::sort(detections_.begin(), detections_.end(),
              [](const Detection& a, const Detection& b) { return a.comment_id < b.comment_id; });
    std::vector<std::string> orphans;
    for (std::size_t i = 0; i < detections_.size(); ++i) {
        const auto& d = detections_[i];
        if (!comment_index_.count(d.comment_id)) orphans.push_back(d.comment_id);
        if (!detection_index_.emplace(d.comment_id, i).second)
            throw ConsistencyError("duplicate detection '" + d.comment_id + "'");
        for (const auto& p : d.matched_patterns)
            if (!matchers_.count(p)) matchers_.emplace(p, compile_pattern(p));
    }
    if (!orphans.empty())
        throw ConsistencyError(std::to_string(orphans.size()) +
                               " detection(s) reference comments missing from the corpus, first '" +
                               orphans.front() + "'");
}

json TriageService::item_json(const Detection& d, const std::string& annotator) const {
    const auto& rec = corpus_[comment_index_.at(d.comment_id)];
    json types = json::array();
    for (auto t : d.taxonomy_types) types.push_back(std::string(to_string(t)));
    json highlights = json::array();
    for (const auto& p : d.matched_patterns) {
        if (auto span = matchers_.at(p)->find(rec.text))
            highlights.push_back({{"pattern", p}, {"start", span->first}, {"end", span->second}});
    }
    json item = {
        {"comment_id", d.comment_id},
        {"text", rec.text},
        {"kind", std::string(to_string(rec.kind))},
        {"project_id", rec.location.project_id},
        {"file_path", rec.location.file_path},
        {"start_line", rec.location.start_line},
        {"end_line", rec.location.end_line},
        {"context_before", rec.context_before},
        {"context_after", rec.context_after},
        {"features", d.matched_features},
        {"patterns", d.matched_patterns},
        {"existing_aging", d.existing_aging_feature},
        {"types", types},
        {"highlights", highlights},
        {"annotator", annotator},
    };
    return item;
}

json TriageService::candidates(const CandidateFilter& f, const std::string& annotator) const {
    std::vector<const Detection*> matching;
    std::size_t done = 0;
    for (const auto& d : detections_) {
        if (f.pattern && std::find(d.matched_patterns.begin(), d.matched_patterns.end(), *f.pattern) ==
                             d.matched_patterns.end())
            continue;
        if (f.type && std::find(d.taxonomy_types.begin(), d.taxonomy_types.end(), *f.type) ==
                          d.taxonomy_types.end())
            continue;
        if (f.project && corpus_[comment_index_.at(d.comment_id)].location.project_id != *f.project)
            continue;
        if (!annotator.empty() && store_->find(d.comment_id, annotator)) {
            ++done;
            continue;
        }
        matching.push_back(&d);
    }
    const std::size_t total = matching.size();
    const std::size_t pages = (total + f.page_size - 1) / f.page_size;
    json items = json::array();
    const std::size_t first = (f.page - 1) * f.page_size;
    for (std::size_t i = first; i < total && i < first + f.page_size; ++i)
        items.push_back(item_json(*matching[i], annotator));
    return json{{"page", f.page},   {"page_size", f.page_size}, {"total", total},
                {"pages", pages},   {"done", done},             {"items", items}};
}

json TriageService::submit_annotation(const json& body, const std::string& header_annotator) {
    json j = body;
    if (!j.is_object()) throw ValidationError("annotation body must be a JSON object");
    if (!header_annotator.empty()) {
        auto it = j.find("annotator");
        if (it == j.end() || it->is_null())
            j["annotator"] = header_annotator;
        else if (!it->is_string() || it->get<std::string>() != header_annotator)
            throw ValidationError("annotator in body does not match X-Annotator header");
    }
    auto rec = annotation_from_json(j);
    if (!detection_index_.count(rec.comment_id)) throw UnknownComment(rec.comment_id);
    const auto ack = store_->submit(std::move(rec));
    return json{{"revision", ack.revision}, {"appended", ack.appended}};
}

json TriageService::agreement(const std::string& a, const std::string& b) const {
    std::map<std::string, std::string> va, vb;
    for (const auto& rec : store_->snapshot()) {
        if (rec.annotator == a) va[rec.comment_id] = std::string(to_string(rec.verdict));
        if (rec.annotator == b) vb[rec.comment_id] = std::string(to_string(rec.verdict));
    }
    std::vector<std::string> la, lb;
    json items = json::array();
    for (const auto& [id, v] : va) {
        auto it = vb.find(id);
        if (it == vb.end()) continue;
        la.push_back(v);
        lb.push_back(it->second);
        items.push_back({{"comment_id", id}, {"a", v}, {"b", it->second}});
    }
    if (la.empty()) throw NoOverlap(a, b);
    const auto k = stats::cohens_kappa_table(la, lb);
    return json{{"a", a},
                {"b", b},
                {"n", k.n},
                {"kappa", k.kappa},
                {"observed", k.observed},
                {"expected", k.expected},
                {"labels", k.labels},
                {"table", k.table},
                {"items", items}};
}

json TriageService::patterns_fp() const {
    const auto records = store_->snapshot();
    const auto verdicts = resolve_verdicts(records);
    json rows = json::array();
    for (const auto& r : pattern_fp_table(detections_, verdicts, options_.fp_threshold)) {
        rows.push_back({{"pattern", r.pattern},
                        {"matches", r.matches},
                        {"annotated", r.annotated},
                        {"non_saad", r.non_saad},
                        {"fp_rate", r.rate ? json(*r.rate) : json(nullptr)},
                        {"flagged", r.flagged}});
    }
    return json{{"threshold", options_.fp_threshold}, {"patterns", rows}};
}

json TriageService::iterations() const {
    json rows = json::array();
    if (options_.iterations)
        for (const auto& it : load_history(*options_.iterations)) rows.push_back(to_json(it));
    return json{{"iterations", rows}};
}

std::string TriageService::index_html() const {
    if (options_.ui_dir) {
        std::ifstream in(*options_.ui_dir / "index.html", std::ios::binary);
        if (in) {
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }
    }
    return kIndexHtml;
}

HttpReply TriageService::handle_candidates(const std::multimap<std::string, std::string>& params,
                                           const std::string& annotator) const {
    return guarded([&] { return ok(candidates(CandidateFilter::from_query(params), annotator)); });
}

HttpReply TriageService::handle_submit(const std::string& body, const std::string& annotator) {
    return guarded([&] {
        json j;
        try {
            j = json::parse(body);
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("malformed JSON body: ") + e.what());
        }
        return ok(submit_annotation(j, annotator));
    });
}

HttpReply TriageService::handle_agreement(const std::multimap<std::string, std::string>& params) const {
    return guarded([&] {
        auto a = param(params, "a");
        auto b = param(params, "b");
        if (!a || !b) throw ValidationError("query parameters 'a' and 'b' are required");
        return ok(agreement(*a, *b));
    });
}

HttpReply TriageService::handle_patterns_fp() const {
    return guarded([&] { return ok(patterns_fp()); });
}

HttpReply TriageService::handle_iterations() const {
    return guarded([&] { return ok(iterations()); });
}

HttpReply TriageService::handle_index() const {
    return {200, "text/html; charset=utf-8", index_html()};
}

}  // namespace saad
