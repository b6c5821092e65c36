#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsde/analysis.hpp"
#include "fsde/models.hpp"
#include "fsde/norms.hpp"

namespace fsde::report {

/// %.17g: round-trips every double.
std::string format_double(double v);

nlohmann::json to_json(const ContractionReport& r);
nlohmann::json to_json(const SeparationReport& r);
nlohmann::json to_json(const LyapunovReport& r);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const H1Report& r);
nlohmann::json to_json(const H2Report& r);
nlohmann::json to_json(const LineFit& r);

/// Human-readable rendering: one `key  value` line per scalar, nested
/// objects indented, arrays longer than a few entries summarized.
std::string to_text(const nlohmann::json& report);

/// Column-oriented CSV table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Writes `# ` prefixed comment lines, the header, then rows with 17
/// significant digits. Columns must be equally long.
void write_csv(const Table& table, const std::filesystem::path& file,
               const std::vector<std::string>& comments = {});

/// Pretty-printed JSON with a trailing newline.
void write_json(const nlohmann::json& doc, const std::filesystem::path& file);

}  // namespace fsde::report
