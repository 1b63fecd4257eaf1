#pragma once

// Figure presets. Each preset is a set of series; a series is a complete
// direct-mode config (parameters plus one payload) so the bundle can be
// re-run file by file through the CLI.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "magcool/io.hpp"

namespace magcool {

enum class SeriesKind { Spectrum, Sweep, Dynamics };

struct Axis {
    std::string x;
    std::string y;
    bool log_x = false;
    bool log_y = false;
};

struct FigureSeries {
    std::string panel;  // "a", "b", ...
    std::string name;   // unique within the figure
    SeriesKind kind = SeriesKind::Sweep;
    nlohmann::json config;
    Axis axis;
};

struct FigurePreset {
    std::string id;
    std::string description;
    std::vector<FigureSeries> series;
    /// Parameter key -> caption | text | derived | chosen.
    nlohmann::json provenance;
};

const std::vector<std::string>& figure_ids();

/// Throws ConfigError for an unknown id.
FigurePreset figure_preset(const std::string& id);

struct FigureBundle {
    std::string id;
    nlohmann::json manifest;
    std::vector<std::pair<std::string, std::string>> files;  // relative path, contents
};

FigureBundle reproduce_figure(const std::string& id, int threads = 0);

/// Writes every bundle file plus manifest.json under `dir`.
void write_bundle(const FigureBundle& bundle, const std::filesystem::path& dir);

/// Current UTC time as 20261016T120000Z.
std::string utc_timestamp();

}  // namespace magcool
