#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "magcool/cooling.hpp"
#include "magcool/model.hpp"
#include "magcool/spectra.hpp"
#include "magcool/steady_state.hpp"

namespace magcool {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// FNV-1a over the 17-significant-digit rendering of every field.
std::uint64_t parameter_hash(const SystemParams& params);
std::string hash_hex(std::uint64_t h);

/// Snapshot for run records: angles in degrees, eps_a as {re, im}.
nlohmann::json to_json(const SystemParams& params);
nlohmann::json to_json(const SteadyState& steady);
nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const CoolingReport& report);
nlohmann::json to_json(const ThresholdResult& result);
nlohmann::json to_json(const SpectrumResult& spectrum, const SystemParams& params);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string render() const;
};

CsvTable spectrum_table(const SpectrumResult& spectrum);
CsvTable trajectory_table(const OccupancyTrajectory& trajectory, const std::string& time_column = "t_over_wc");
CsvTable cooling_table(const CoolingReport& report);

/// Writes text with LF line endings, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace magcool
