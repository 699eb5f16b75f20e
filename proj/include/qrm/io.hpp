// io.hpp — Deterministic artifact emission: CSV, JSON, SVG heatmaps, and the
// flat key=value run-config format. Numbers print in shortest round-trip form
// so identical configs give byte-identical files.

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrm/husimi.hpp"

namespace qrm::io {

// Flat ordered key=value store; round-trips losslessly through serialize/parse.
struct RunConfig {
    std::map<std::string, std::string> entries;

    void set(const std::string& key, const std::string& value) { entries[key] = value; }
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);
    const std::string& get(const std::string& key) const;  // throws if missing
    bool has(const std::string& key) const { return entries.count(key) != 0; }

    std::string serialize() const;  // "key=value\n" lines, key-sorted
    static RunConfig parse(const std::string& text);

    nlohmann::json to_json() const;
};

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// CSV with "# key=value" provenance comments, then a header row, then data
// rows. Fields are RFC-4180 quoted when needed.
void write_csv(const std::string& path, const RunConfig& config,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// JSON document (UTF-8, 2-space indent, trailing newline); the caller embeds
// the config via RunConfig::to_json.
void write_json(const std::string& path, const nlohmann::json& doc);

// SVG 1.1 heatmap of a Husimi field with an embedded perceptually-uniform
// colormap and axis annotations.
void write_svg_heatmap(const std::string& path, const husimi::QField& field,
                       const std::string& title);

}  // namespace qrm::io
