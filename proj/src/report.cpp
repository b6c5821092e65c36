#include "fsde/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fsde::report {
namespace {

// JSON has no NaN or infinity; they are written as null.
nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json numbers(const std::vector<double>& v) {
  auto out = nlohmann::json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

void render(const nlohmann::json& j, const std::string& indent, std::ostringstream& out) {
  std::size_t width = 0;
  for (auto it = j.begin(); it != j.end(); ++it) width = std::max(width, it.key().size());
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    if (v.is_object()) {
      out << indent << it.key() << ":\n";
      render(v, indent + "  ", out);
      continue;
    }
    out << indent << it.key() << std::string(width - it.key().size() + 2, ' ');
    if (v.is_array() && v.size() > 6) {
      out << "[" << v.size() << " values]";
    } else if (v.is_number_float()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
      out << buf;
    } else if (v.is_string()) {
      out << v.get<std::string>();
    } else {
      out << v.dump();
    }
    out << '\n';
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const LineFit& r) {
  return {{"slope", number(r.slope)},
          {"intercept", number(r.intercept)},
          {"slope_stderr", number(r.slope_stderr)},
          {"points", r.points}};
}

nlohmann::json to_json(const ContractionReport& r) {
  return {{"kappa", number(r.kappa)},
          {"distances", numbers(r.distances)},
          {"distance_stderr", numbers(r.distance_stderr)},
          {"ratios", numbers(r.ratios)},
          {"ratio_stderr", numbers(r.ratio_stderr)},
          {"fraction_exceeding", number(r.fraction_exceeding)},
          {"worst_excess_in_stderr", number(r.worst_excess)},
          {"passes", r.passes}};
}

nlohmann::json to_json(const SeparationReport& r) {
  auto windows = nlohmann::json::array();
  for (const auto& w : r.window_slopes) {
    windows.push_back({{"tail_fraction", w.tail_fraction}, {"slope", number(w.value)}});
  }
  return {{"alpha", r.alpha},
          {"epsilon", r.epsilon},
          {"tail_fraction", r.tail_fraction},
          {"tail_start_time", number(r.t.empty() ? 0.0 : r.t[r.tail_begin])},
          {"fit", to_json(r.fit)},
          {"floor", number(r.floor)},
          {"slope_margin", r.slope_margin},
          {"passes", r.passes},
          {"advisory_tail_monotone", r.tail_monotone},
          {"advisory_monotone_violations", r.monotone_violations},
          {"window_sensitivity", windows},
          {"distance_at_zero", number(r.distance.empty() ? 0.0 : r.distance.front())},
          {"distance_at_horizon", number(r.distance.empty() ? 0.0 : r.distance.back())}};
}

nlohmann::json to_json(const LyapunovReport& r) {
  auto windows = nlohmann::json::array();
  for (const auto& w : r.window_estimates) {
    windows.push_back({{"tail_fraction", w.tail_fraction}, {"estimate", number(w.value)}});
  }
  return {{"tail_fraction", r.tail_fraction},
          {"tail_start_time", number(r.t.empty() ? 0.0 : r.t[r.tail_begin])},
          {"estimate", number(r.estimate)},
          {"estimate_time", number(r.estimate_time)},
          {"tolerance", r.tolerance},
          {"passes", r.passes},
          {"window_sensitivity", windows},
          {"ms_at_horizon", number(r.ms.empty() ? 0.0 : r.ms.back())}};
}

nlohmann::json to_json(const ConvergenceReport& r) {
  auto rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n_steps", row.n_steps},
                    {"step", row.step},
                    {"sup_error", number(row.sup_error)},
                    {"ratio", number(row.ratio)}});
  }
  return {{"alpha", r.alpha},
          {"a", r.a},
          {"eta", r.eta},
          {"horizon", r.horizon},
          {"levels", rows},
          {"max_ratio", r.max_ratio},
          {"strictly_decreasing", r.strictly_decreasing},
          {"passes", r.passes}};
}

nlohmann::json to_json(const H1Report& r) {
  return {{"declared", r.declared},
          {"max_ratio", number(r.max_ratio)},
          {"max_sum_ratio", number(r.max_sum_ratio)},
          {"samples", r.samples},
          {"passes", r.passes},
          {"sum_form_passes", r.sum_form_passes}};
}

nlohmann::json to_json(const H2Report& r) {
  return {{"sup_diffusion_at_zero", number(r.sup_diffusion_at_zero)},
          {"drift_l2_integral", number(r.drift_l2_integral)}};
}

std::string to_text(const nlohmann::json& report) {
  std::ostringstream out;
  if (report.is_object()) {
    render(report, "", out);
  } else {
    out << report.dump(2) << '\n';
  }
  return out.str();
}

void write_csv(const Table& table, const std::filesystem::path& file,
               const std::vector<std::string>& comments) {
  if (table.header.size() != table.columns.size()) {
    throw std::invalid_argument("CSV header and column count differ");
  }
  const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
  for (const auto& c : table.columns) {
    if (c.size() != rows) throw std::invalid_argument("CSV columns differ in length");
  }
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  for (const auto& c : comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "," : "") << format_double(table.columns[i][r]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

}  // namespace fsde::report
