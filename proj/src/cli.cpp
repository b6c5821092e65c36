#include "fsde/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "fsde/analysis.hpp"
#include "fsde/errors.hpp"
#include "fsde/models.hpp"
#include "fsde/report.hpp"
#include "fsde/specfun.hpp"
#include "fsde/version.hpp"

namespace fsde::cli {
namespace {

using nlohmann::json;

const json& section(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  const auto& s = doc.at(key);
  if (!s.is_object()) throw ConfigError(std::string("config section '") + key + "' must be an object");
  return s;
}

const json& require_section(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("config is missing the '") + key + "' section");
  return section(doc, key);
}

double number_or(const json& s, const char* key, double fallback) {
  if (!s.contains(key)) return fallback;
  const auto& v = s.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    throw ConfigError(std::string("'") + key + "' must be a finite number");
  }
  return v.get<double>();
}

double require_number(const json& s, const char* key) {
  if (!s.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  return number_or(s, key, 0.0);
}

std::uint64_t count_or(const json& s, const char* key, std::uint64_t fallback) {
  if (!s.contains(key)) return fallback;
  const auto& v = s.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<double> vector_of(const json& s, const char* key) {
  const auto& v = s.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array() || v.empty()) throw ConfigError(std::string("'") + key + "' must be a number or array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string("'") + key + "' entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw ConfigError("order alpha must lie in (1/2, 1), got " + report::format_double(alpha));
  }
}

bool needs_paths(const std::string& sub) {
  return sub == "solve" || sub == "picard" || sub == "separation" || sub == "lyapunov";
}

FsdeProblem problem_of(const ExperimentConfig& c) { return problem_from_json(c.model); }

LinearFsde linear_of(const ExperimentConfig& c) {
  const std::string name = c.model.at("model").get<std::string>();
  const double alpha = c.model.at("alpha").get<double>();
  if (name == "scalar_linear") {
    return constant_linear(alpha, 1, {c.model.at("a").get<double>()}, {c.model.at("s").get<double>()});
  }
  if (name == "zero") {
    const std::size_t d = c.model.value("dim", std::size_t{1});
    return constant_linear(alpha, d, std::vector<double>(d * d, 0.0), std::vector<double>(d * d, 0.0));
  }
  if (name == "matrix_linear") {
    auto flatten = [](const json& rows) {
      std::vector<double> out;
      for (const auto& r : rows)
        for (const auto& x : r) out.push_back(x.get<double>());
      return out;
    };
    const std::size_t d = c.model.at("A").size();
    return constant_linear(alpha, d, flatten(c.model.at("A")), flatten(c.model.at("B")));
  }
  throw ConfigError("lyapunov needs a linear model (zero, scalar_linear or matrix_linear), got '" + name + "'");
}

InitialCondition initial_condition(const ExperimentConfig& c, const std::vector<double>& mean,
                                   std::uint64_t domain) {
  if (c.ic_stddev > 0.0) return InitialCondition::gaussian(mean, c.ic_stddev, c.seed + domain);
  return InitialCondition::deterministic(mean);
}

json envelope(const ExperimentConfig& c, json body) {
  return {{"fsde_version", kVersion},
          {"subcommand", c.subcommand},
          {"seed", c.seed},
          {"config", c.resolved},
          {"report", std::move(body)}};
}

std::vector<std::string> csv_comments(const ExperimentConfig& c) {
  return {std::string("fsde ") + kVersion + " " + c.subcommand + " seed=" + std::to_string(c.seed),
          "config " + c.resolved.dump()};
}

void emit(const ExperimentConfig& c, const std::string& stem, const json& body, std::ostream& log) {
  const json doc = envelope(c, body);
  report::write_json(doc, c.output_dir / (stem + ".json"));
  log << report::to_text(body);
}

int status(bool passes) { return passes ? kSuccess : kStatisticalFailure; }

int run_ml_eval(const ExperimentConfig& c, std::ostream& log) {
  const double beta = 2.0 * c.ml_alpha - 1.0;
  report::Table table{{"t", "z", "weight", "log_weight", "renewal_residual"}, {{}, {}, {}, {}, {}}};
  double worst = 0.0;
  for (double t : c.ml_t_nodes) {
    const double z = c.ml_gamma * std::pow(t, beta);
    const double log_w = log_mittag_leffler({beta, z});
    const double residual = t > 0.0 ? renewal_residual(beta, c.ml_gamma, t) : 0.0;
    worst = std::max(worst, residual);
    table.columns[0].push_back(t);
    table.columns[1].push_back(z);
    table.columns[2].push_back(std::exp(log_w));
    table.columns[3].push_back(log_w);
    table.columns[4].push_back(residual);
  }
  report::write_csv(table, c.output_dir / "ml_eval.csv", csv_comments(c));
  const bool ok = worst <= c.tolerance;
  emit(c, "ml_eval",
       {{"alpha", c.ml_alpha}, {"beta", beta}, {"gamma", c.ml_gamma}, {"nodes", c.ml_t_nodes.size()},
        {"max_renewal_residual", worst}, {"tolerance", c.tolerance}, {"passes", ok}},
       log);
  return status(ok);
}

int run_solve(const ExperimentConfig& c, std::ostream& log) {
  const FsdeProblem problem = problem_of(c);
  const TimeGrid grid = make_grid(c.horizon, c.n_steps);
  const auto noise = sample_ensemble(grid, c.n_paths, c.seed);
  const auto paths = solve_em(problem, initial_condition(c, c.eta, 1), noise, c.scheme);
  const MsSeries ms = ms_series(paths);

  write_paths_csv(paths, c.output_dir / "paths.csv", c.export_paths,
                  csv_comments(c)[0] + "\n" + csv_comments(c)[1]);
  report::write_csv({{"t", "ms_norm", "stderr"}, {grid.nodes(), ms.estimate, ms.stderr}},
                    c.output_dir / "ms_norm.csv", csv_comments(c));

  H1SampleSpec h1;
  h1.horizon = c.horizon;
  h1.seed = c.seed;
  emit(c, "solve",
       {{"problem", problem.name},
        {"scheme", to_string(c.scheme.stochastic_weight)},
        {"n_paths", c.n_paths},
        {"n_steps", c.n_steps},
        {"ms_norm_at_horizon", ms.estimate.back()},
        {"ms_norm_stderr_at_horizon", ms.stderr.back()},
        {"lipschitz_check", report::to_json(check_h1(problem, h1))},
        {"growth_check", report::to_json(check_h2(problem, grid))},
        {"exported_paths", std::min(c.export_paths == 0 ? c.n_paths : c.export_paths, c.n_paths)}},
       log);
  return kSuccess;
}

int run_picard(const ExperimentConfig& c, std::ostream& log) {
  const FsdeProblem problem = problem_of(c);
  const TimeGrid grid = make_grid(c.horizon, c.n_steps);
  const auto noise = sample_ensemble(grid, c.n_paths, c.seed).materialize();
  const auto ic = initial_condition(c, c.eta, 1);
  const auto config = make_weighted_norm_config(grid, c.gamma, problem.alpha);
  const auto history = picard_solve(problem, ic, noise, config, c.picard_tol, c.max_iter, c.scheme);
  const double k = kappa(problem.lipschitz, c.horizon, problem.alpha, c.gamma);

  std::vector<double> iteration;
  for (std::size_t n = 0; n < history.distances.size(); ++n) iteration.push_back(static_cast<double>(n));
  report::write_csv({{"iteration", "distance", "stderr"},
                     {iteration, history.distances, history.distance_stderr}},
                    c.output_dir / "picard_history.csv", csv_comments(c));

  const auto em = solve_em(problem, ic, noise, c.scheme);
  const auto gap = weighted_distance(history.iterates.back(), em, config);
  json body = {{"problem", problem.name},
               {"gamma", c.gamma},
               {"gamma_threshold", gamma_threshold(problem.lipschitz, c.horizon, problem.alpha)},
               {"kappa", k},
               {"iterations", history.distances.size()},
               {"converged", history.converged},
               {"final_distance", history.distances.back()},
               {"weighted_gap_to_em", gap.value},
               {"warnings", history.warnings}};
  bool ok = true;
  if (history.distances.size() >= 2) {
    const auto diag = contraction_diagnostic(history, k);
    body["contraction"] = report::to_json(diag);
    ok = diag.passes;
  } else {
    body["contraction"] = "not applicable: fewer than three iterates";
  }
  body["passes"] = ok;
  emit(c, "picard", body, log);
  return status(ok);
}

int run_separation(const ExperimentConfig& c, std::ostream& log) {
  const FsdeProblem problem = problem_of(c);
  const TimeGrid grid = make_grid(c.horizon, c.n_steps);
  const auto noise = sample_ensemble(grid, c.n_paths, c.seed);
  SeparationOptions opt;
  opt.epsilon = c.epsilon;
  opt.tail_fraction = c.tail_fraction;
  opt.slope_margin = c.slope_margin;
  opt.scheme = c.scheme;
  const auto r = separation_experiment(problem, initial_condition(c, c.eta, 1),
                                       initial_condition(c, c.zeta, 2), noise, opt);
  report::write_csv({{"t", "distance", "stderr"}, {r.t, r.distance, r.stderr}},
                    c.output_dir / "separation.csv", csv_comments(c));
  emit(c, "separation", report::to_json(r), log);
  return status(r.passes);
}

int run_lyapunov(const ExperimentConfig& c, std::ostream& log) {
  const LinearFsde linear = linear_of(c);
  const TimeGrid grid = make_grid(c.horizon, c.n_steps);
  const auto noise = sample_ensemble(grid, c.n_paths, c.seed);
  LyapunovOptions opt;
  opt.tail_fraction = c.tail_fraction;
  opt.tolerance = c.tolerance;
  opt.scheme = c.scheme;
  const auto r = lyapunov_experiment(linear, initial_condition(c, c.eta, 1), noise, opt);
  report::write_csv({{"t", "ms_norm", "stderr", "exponent"}, {r.t, r.ms, r.ms_stderr, r.exponent}},
                    c.output_dir / "lyapunov.csv", csv_comments(c));
  emit(c, "lyapunov", report::to_json(r), log);
  return status(r.passes);
}

int run_convergence(const ExperimentConfig& c, std::ostream& log) {
  const auto r = deterministic_convergence(c.model.at("alpha").get<double>(), c.model.at("a").get<double>(),
                                           c.eta.at(0), c.horizon, c.levels, c.max_ratio);
  report::Table table{{"n_steps", "step", "sup_error", "ratio"}, {{}, {}, {}, {}}};
  for (const auto& row : r.rows) {
    table.columns[0].push_back(static_cast<double>(row.n_steps));
    table.columns[1].push_back(row.step);
    table.columns[2].push_back(row.sup_error);
    table.columns[3].push_back(row.ratio);
  }
  report::write_csv(table, c.output_dir / "convergence.csv", csv_comments(c));
  emit(c, "convergence", report::to_json(r), log);
  return status(r.passes);
}

}  // namespace

ExperimentConfig parse_config(const std::string& subcommand, const json& doc,
                              std::optional<std::uint64_t> seed_override,
                              std::optional<std::filesystem::path> output_override) {
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
    throw ConfigError("unknown subcommand '" + subcommand + "'");
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  c.subcommand = subcommand;
  json resolved = json::object();

  const auto& analysis = section(doc, "analysis");
  const auto& mc = section(doc, "monte_carlo");
  c.seed = seed_override ? *seed_override : count_or(mc, "master_seed", 0);

  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw ConfigError("'output_dir' must be a string");
    c.output_dir = doc.at("output_dir").get<std::string>();
  }
  if (output_override) c.output_dir = *output_override;

  if (subcommand == "ml-eval") {
    const auto& ml = require_section(doc, "ml_eval");
    c.ml_alpha = require_number(ml, "alpha");
    check_alpha(c.ml_alpha);
    c.ml_gamma = require_number(ml, "gamma");
    if (!(c.ml_gamma > 0.0)) throw ConfigError("ml_eval.gamma must be positive");
    c.ml_t_nodes = ml.contains("t_nodes") ? vector_of(ml, "t_nodes")
                                          : std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
    for (double t : c.ml_t_nodes) {
      if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("ml_eval.t_nodes must be non-negative");
    }
    c.tolerance = number_or(ml, "tolerance", 1e-6);
    resolved["ml_eval"] = {{"alpha", c.ml_alpha}, {"gamma", c.ml_gamma}, {"t_nodes", c.ml_t_nodes},
                           {"tolerance", c.tolerance}};
    resolved["monte_carlo"] = {{"master_seed", c.seed}};
    c.resolved = resolved;
    return c;
  }

  // Model: {"model": family, parameters...}; built here so that every
  // parameter error surfaces before any compute.
  const auto& model = require_section(doc, "model");
  if (!model.contains("model") || !model.at("model").is_string()) {
    throw ConfigError("model.model must name a built-in family");
  }
  if (!model.contains("alpha")) throw ConfigError("model.alpha is required");
  check_alpha(number_or(model, "alpha", 0.0));
  c.model = model;
  const FsdeProblem problem = problem_from_json(model);

  const auto& grid = require_section(doc, "grid");
  c.horizon = require_number(grid, "T");
  c.n_steps = count_or(grid, "n_steps", 256);
  make_grid(c.horizon, c.n_steps);
  resolved["model"] = model;
  resolved["grid"] = {{"T", c.horizon}, {"n_steps", c.n_steps}};

  const auto& ic = require_section(doc, "initial_condition");
  if (!ic.contains("eta")) throw ConfigError("initial_condition.eta is required");
  c.eta = vector_of(ic, "eta");
  if (c.eta.size() != problem.dim) {
    throw ConfigError("initial_condition.eta has " + std::to_string(c.eta.size()) +
                      " components, the model has dimension " + std::to_string(problem.dim));
  }
  c.ic_stddev = number_or(ic, "stddev", 0.0);
  if (c.ic_stddev < 0.0) throw ConfigError("initial_condition.stddev must be non-negative");
  json ic_out = {{"eta", c.eta}, {"stddev", c.ic_stddev}};
  if (subcommand == "separation") {
    if (!ic.contains("zeta")) throw ConfigError("separation needs initial_condition.zeta");
    c.zeta = vector_of(ic, "zeta");
    if (c.zeta.size() != problem.dim) throw ConfigError("initial_condition.zeta has the wrong dimension");
    if (c.zeta == c.eta && c.ic_stddev == 0.0) {
      throw ConfigError("separation needs distinct initial conditions (eta = zeta)");
    }
    ic_out["zeta"] = c.zeta;
  }
  resolved["initial_condition"] = ic_out;

  if (doc.contains("scheme")) {
    if (!doc.at("scheme").is_string()) throw ConfigError("'scheme' must be a string");
    try {
      c.scheme.stochastic_weight = stochastic_weight_from_string(doc.at("scheme").get<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  resolved["scheme"] = to_string(c.scheme.stochastic_weight);

  if (needs_paths(subcommand)) {
    c.n_paths = count_or(mc, "n_paths", 1000);
    if (c.n_paths < 1) throw ConfigError("monte_carlo.n_paths must be at least 1");
  }
  resolved["monte_carlo"] = {{"n_paths", c.n_paths}, {"master_seed", c.seed}};

  json analysis_out = json::object();
  if (subcommand == "picard") {
    const double threshold = gamma_threshold(problem.lipschitz, c.horizon, problem.alpha);
    if (analysis.contains("gamma") && analysis.at("gamma").is_string()) {
      if (analysis.at("gamma").get<std::string>() != "auto") {
        throw ConfigError("analysis.gamma must be a positive number or \"auto\"");
      }
      c.gamma = 2.0 * threshold;
      // L = 0 makes the threshold vanish; any positive gamma contracts.
      if (c.gamma == 0.0) c.gamma = 1.0;
    } else {
      c.gamma = number_or(analysis, "gamma", 2.0 * threshold > 0.0 ? 2.0 * threshold : 1.0);
    }
    if (!(c.gamma > 0.0)) throw ConfigError("analysis.gamma must be positive");
    c.picard_tol = number_or(analysis, "picard_tol", 1e-10);
    if (!(c.picard_tol > 0.0)) throw ConfigError("analysis.picard_tol must be positive");
    c.max_iter = count_or(analysis, "max_iter", 50);
    if (c.max_iter < 1) throw ConfigError("analysis.max_iter must be at least 1");
    analysis_out = {{"gamma", c.gamma}, {"picard_tol", c.picard_tol}, {"max_iter", c.max_iter}};
  } else if (subcommand == "separation") {
    c.epsilon = number_or(analysis, "epsilon", 0.05);
    c.tail_fraction = number_or(analysis, "tail_fraction", 0.5);
    c.slope_margin = number_or(analysis, "slope_margin", 0.05);
    if (!(c.epsilon > 0.0)) throw ConfigError("analysis.epsilon must be positive");
    if (!(c.slope_margin >= 0.0)) throw ConfigError("analysis.slope_margin must be non-negative");
    analysis_out = {{"epsilon", c.epsilon}, {"tail_fraction", c.tail_fraction},
                    {"slope_margin", c.slope_margin}};
  } else if (subcommand == "lyapunov") {
    c.tail_fraction = number_or(analysis, "tail_fraction", 0.5);
    c.tolerance = number_or(analysis, "tolerance", 0.05);
    if (!(c.tolerance >= 0.0)) throw ConfigError("analysis.tolerance must be non-negative");
    linear_of(c);
    if (std::all_of(c.eta.begin(), c.eta.end(), [](double x) { return x == 0.0; }) && c.ic_stddev == 0.0) {
      throw ConfigError("lyapunov needs a nonzero initial condition");
    }
    analysis_out = {{"tail_fraction", c.tail_fraction}, {"tolerance", c.tolerance}};
  } else if (subcommand == "solve") {
    c.export_paths = count_or(analysis, "export_paths", 16);
    analysis_out = {{"export_paths", c.export_paths}};
  } else if (subcommand == "convergence") {
    if (model.at("model") != "scalar_linear" || number_or(model, "s", 0.0) != 0.0) {
      throw ConfigError("convergence needs scalar_linear with s = 0 (deterministic oracle)");
    }
    const auto& conv = section(doc, "convergence");
    c.levels = {64, 128, 256, 512};
    if (conv.contains("levels")) {
      c.levels.clear();
      if (!conv.at("levels").is_array()) throw ConfigError("convergence.levels must be an array");
      for (const auto& v : conv.at("levels")) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
          throw ConfigError("convergence.levels must hold positive integers");
        }
        c.levels.push_back(v.get<std::size_t>());
      }
    }
    if (c.levels.size() < 2) throw ConfigError("convergence.levels needs at least two entries");
    c.max_ratio = number_or(conv, "max_ratio", 0.75);
    resolved["convergence"] = {{"levels", c.levels}, {"max_ratio", c.max_ratio}};
  }
  if (c.tail_fraction <= 0.0 || c.tail_fraction >= 1.0) {
    throw ConfigError("analysis.tail_fraction must lie in (0, 1)");
  }
  if (!analysis_out.empty()) resolved["analysis"] = analysis_out;
  c.resolved = resolved;
  return c;
}

int run(const ExperimentConfig& config, std::ostream& log, int verbosity) {
  std::filesystem::create_directories(config.output_dir);
  if (verbosity > 0) {
    std::cerr << "fsde " << config.subcommand << ": writing to " << config.output_dir.string() << '\n';
  }
  const auto& s = config.subcommand;
  if (s == "ml-eval") return run_ml_eval(config, log);
  if (s == "solve") return run_solve(config, log);
  if (s == "picard") return run_picard(config, log);
  if (s == "separation") return run_separation(config, log);
  if (s == "lyapunov") return run_lyapunov(config, log);
  if (s == "convergence") return run_convergence(config, log);
  throw ConfigError("unknown subcommand '" + s + "'");
}

int main(int argc, char** argv) {
  CLI::App app{"Caputo fractional SDE experiments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  int verbosity = 0;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--seed", seed, "override monte_carlo.master_seed");
    sub->add_option("--out", out_dir, "override output_dir");
    sub->add_flag("-v,--verbose", verbosity, "progress messages on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  ExperimentConfig config;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read config file " + config_path);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    std::optional<std::filesystem::path> out;
    if (out_dir) out = *out_dir;
    config = parse_config(subcommand, doc, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "fsde: config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    return run(config, std::cout, verbosity);
  } catch (const BlowUpError& e) {
    std::cerr << "fsde: blow-up: " << e.what() << '\n';
    return kBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "fsde: error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace fsde::cli
