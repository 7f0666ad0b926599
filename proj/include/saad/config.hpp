#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saad/refine.hpp"

namespace saad {

enum class OutputFormat { Markdown, Csv, Jsonl };

std::string_view to_string(OutputFormat f) noexcept;
std::optional<OutputFormat> parse_output_format(std::string_view s) noexcept;

// Keys accepted in a config file; each is also a CLI flag of the same name.
const std::vector<std::string>& config_keys();

// Flat `key = value` settings. '#' starts a comment line; later entries win.
class Config {
public:
    static Config parse(std::istream& in, const std::string& source = "config");
    static Config load(const std::filesystem::path& path);

    // Rejects keys outside config_keys().
    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;
    void merge(const Config& overrides);
    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

struct RunConfig {
    std::optional<std::filesystem::path> corpus, lexicon, detections, annotations, iterations;
    RefineConfig refine;
    int k_context = 5;
    std::size_t k_neighbors = 30;
    OutputFormat format = OutputFormat::Markdown;

    // Typed view with range checks; throws ValidationError naming the key.
    static RunConfig from(const Config& cfg);
};

}  // namespace saad
