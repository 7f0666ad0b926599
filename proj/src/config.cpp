#include "saad/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "saad/text.hpp"

namespace saad {

std::string_view to_string(OutputFormat f) noexcept {
    switch (f) {
        case OutputFormat::Markdown: return "markdown";
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Jsonl: return "jsonl";
    }
    return "markdown";
}

std::optional<OutputFormat> parse_output_format(std::string_view s) noexcept {
    if (s == "markdown" || s == "md") return OutputFormat::Markdown;
    if (s == "csv") return OutputFormat::Csv;
    if (s == "jsonl") return OutputFormat::Jsonl;
    return std::nullopt;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "corpus", "lexicon",  "detections", "annotations", "iterations", "fp_threshold",
        "f1_target", "consistency", "z", "E", "p", "rng_seed", "strata", "k_context", "k",
        "format", "jobs",
    };
    return keys;
}

Config Config::parse(std::istream& in, const std::string& source) {
    Config cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError(source + ":" + std::to_string(line_no) + ": expected key=value");
        try {
            cfg.set(text::trim(t.substr(0, eq)), text::trim(t.substr(eq + 1)));
        } catch (const ValidationError& e) {
            throw ValidationError(source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    return parse(in, path.string());
}

void Config::set(const std::string& key, const std::string& value) {
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw ValidationError("unknown config key '" + key + "'");
    values_[key] = value;
}

std::optional<std::string> Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void Config::merge(const Config& overrides) {
    for (const auto& [k, v] : overrides.values_) values_[k] = v;
}

namespace {

double to_double(const std::string& key, const std::string& v) {
    double out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ValidationError("config key '" + key + "' expects a number, got '" + v + "'");
    return out;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    std::int64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ValidationError("config key '" + key + "' expects an integer, got '" + v + "'");
    return out;
}

}  // namespace

RunConfig RunConfig::from(const Config& cfg) {
    RunConfig rc;
    auto path = [&](const char* key, std::optional<std::filesystem::path>& dst) {
        if (auto v = cfg.get(key); v && !v->empty()) dst = *v;
    };
    path("corpus", rc.corpus);
    path("lexicon", rc.lexicon);
    path("detections", rc.detections);
    path("annotations", rc.annotations);
    path("iterations", rc.iterations);

    auto& r = rc.refine;
    if (auto v = cfg.get("fp_threshold")) r.fp_threshold = to_double("fp_threshold", *v);
    if (auto v = cfg.get("f1_target")) r.f1_target = to_double("f1_target", *v);
    if (auto v = cfg.get("consistency")) r.consistency = static_cast<int>(to_int("consistency", *v));
    if (auto v = cfg.get("z")) r.sample_z = to_double("z", *v);
    if (auto v = cfg.get("E")) r.sample_e = to_double("E", *v);
    if (auto v = cfg.get("p")) r.sample_p = to_double("p", *v);
    if (auto v = cfg.get("rng_seed")) {
        const auto s = to_int("rng_seed", *v);
        if (s < 0) throw ValidationError("rng_seed must be non-negative");
        r.rng_seed = static_cast<std::uint64_t>(s);
    }
    if (auto v = cfg.get("strata")) {
        auto k = parse_strata_key(*v);
        if (!k) throw ValidationError("strata must be 'pattern' or 'quartile'");
        r.strata = *k;
    }
    if (auto v = cfg.get("jobs")) {
        const auto j = to_int("jobs", *v);
        if (j < 1) throw ValidationError("jobs must be at least 1");
        r.jobs = static_cast<unsigned>(j);
    }
    r.validate();

    if (auto v = cfg.get("k_context")) {
        const auto k = to_int("k_context", *v);
        if (k < 0) throw ValidationError("k_context must be non-negative");
        rc.k_context = static_cast<int>(k);
    }
    if (auto v = cfg.get("k")) {
        const auto k = to_int("k", *v);
        if (k < 1) throw ValidationError("k must be at least 1");
        rc.k_neighbors = static_cast<std::size_t>(k);
    }
    if (auto v = cfg.get("format")) {
        auto f = parse_output_format(*v);
        if (!f) throw ValidationError("format must be markdown, csv or jsonl");
        rc.format = *f;
    }
    return rc;
}

}  // namespace saad
