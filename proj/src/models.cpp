#include "fsde/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fsde/errors.hpp"
#include "fsde/philox.hpp"

namespace fsde {
namespace {

double euclidean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double frobenius(const std::vector<double>& m) { return euclidean(m); }

double require_number(const nlohmann::json& params, const char* key) {
  if (!params.contains(key)) throw DomainError(std::string("missing model parameter '") + key + "'");
  const auto& v = params.at(key);
  if (!v.is_number()) throw DomainError(std::string("model parameter '") + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw DomainError(std::string("model parameter '") + key + "' must be finite");
  return x;
}

std::size_t optional_dim(const nlohmann::json& params) {
  if (!params.contains("dim")) return 1;
  const auto& v = params.at("dim");
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw DomainError("model parameter 'dim' must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> read_square(const nlohmann::json& params, const char* key, std::size_t& dim) {
  if (!params.contains(key) || !params.at(key).is_array() || params.at(key).empty()) {
    throw DomainError(std::string("matrix parameter '") + key + "' must be a non-empty array of rows");
  }
  const auto& rows = params.at(key);
  const std::size_t n = rows.size();
  if (dim != 0 && dim != n) throw DomainError("matrices A and B must have the same size");
  dim = n;
  std::vector<double> m;
  m.reserve(n * n);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) {
      throw DomainError(std::string("matrix parameter '") + key + "' must be square");
    }
    for (const auto& v : row) {
      if (!v.is_number()) throw DomainError(std::string("matrix '") + key + "' has a non-numeric entry");
      m.push_back(v.get<double>());
    }
  }
  return m;
}

void mat_vec(std::span<const double> m, std::span<const double> x, std::span<double> out) {
  const std::size_t d = x.size();
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += m[i * d + j] * x[j];
    out[i] = s;
  }
}

}  // namespace

FsdeProblem make_problem(std::string name, double alpha, std::size_t dim, Coefficient drift,
                         Coefficient diffusion, double lipschitz) {
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw DomainError("order alpha must lie in (1/2, 1), got " + std::to_string(alpha));
  }
  if (dim < 1) throw DomainError("state dimension must be at least 1");
  if (!drift || !diffusion) throw DomainError("drift and diffusion callbacks are required");
  if (!std::isfinite(lipschitz) || lipschitz < 0.0) {
    throw DomainError("declared Lipschitz constant must be finite and non-negative");
  }
  FsdeProblem p;
  p.name = std::move(name);
  p.alpha = alpha;
  p.dim = dim;
  p.drift = std::move(drift);
  p.diffusion = std::move(diffusion);
  p.lipschitz = lipschitz;
  return p;
}

LinearFsde constant_linear(double alpha, std::size_t dim, std::vector<double> a, std::vector<double> b) {
  if (a.size() != dim * dim || b.size() != dim * dim) {
    throw DomainError("linear system matrices must be dim x dim");
  }
  LinearFsde lin;
  lin.alpha = alpha;
  lin.dim = dim;
  lin.a_bound = frobenius(a);
  lin.b_bound = frobenius(b);
  lin.a = [a = std::move(a)](double, std::span<double> out) { std::copy(a.begin(), a.end(), out.begin()); };
  lin.b = [b = std::move(b)](double, std::span<double> out) { std::copy(b.begin(), b.end(), out.begin()); };
  return lin;
}

FsdeProblem to_problem(const LinearFsde& linear) {
  const std::size_t d = linear.dim;
  auto apply = [d](const MatrixFunction& m) -> Coefficient {
    return [m, d](double t, std::span<const double> x, std::span<double> out) {
      thread_local std::vector<double> buf;
      buf.resize(d * d);
      m(t, buf);
      mat_vec(buf, x, out);
    };
  };
  FsdeProblem p = make_problem("linear", linear.alpha, d, apply(linear.a), apply(linear.b),
                               linear.a_bound + linear.b_bound);
  p.params = {{"alpha", linear.alpha}, {"dim", d}, {"a_bound", linear.a_bound}, {"b_bound", linear.b_bound}};
  return p;
}

LinearBoundReport check_linear_bounds(const LinearFsde& linear, const TimeGrid& grid) {
  LinearBoundReport r;
  std::vector<double> buf(linear.dim * linear.dim);
  for (std::size_t k = 0; k < grid.n_nodes(); ++k) {
    linear.a(grid.node(k), buf);
    r.max_a = std::max(r.max_a, frobenius(buf));
    linear.b(grid.node(k), buf);
    r.max_b = std::max(r.max_b, frobenius(buf));
  }
  r.within_declared = r.max_a <= linear.a_bound * (1.0 + 1e-12) && r.max_b <= linear.b_bound * (1.0 + 1e-12);
  return r;
}

FsdeProblem builtin(const std::string& name, const nlohmann::json& params) {
  if (!params.is_object()) throw DomainError("model parameters must be a JSON object");
  const double alpha = require_number(params, "alpha");

  FsdeProblem p;
  if (name == "zero") {
    const std::size_t d = optional_dim(params);
    auto zero = [](double, std::span<const double>, std::span<double> out) {
      std::fill(out.begin(), out.end(), 0.0);
    };
    p = make_problem(name, alpha, d, zero, zero, 0.0);
  } else if (name == "constant_diffusion") {
    const double s = require_number(params, "s");
    const std::size_t d = optional_dim(params);
    p = make_problem(
        name, alpha, d,
        [](double, std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); },
        [s](double, std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), s); },
        0.0);
  } else if (name == "scalar_linear") {
    const double a = require_number(params, "a");
    const double s = require_number(params, "s");
    p = make_problem(
        name, alpha, 1,
        [a](double, std::span<const double> x, std::span<double> out) { out[0] = a * x[0]; },
        [s](double, std::span<const double> x, std::span<double> out) { out[0] = s * x[0]; },
        std::max(std::abs(a), std::abs(s)));
  } else if (name == "matrix_linear") {
    std::size_t d = 0;
    auto a = read_square(params, "A", d);
    auto b = read_square(params, "B", d);
    p = to_problem(constant_linear(alpha, d, std::move(a), std::move(b)));
    p.name = name;
  } else if (name == "bounded_nonlinear") {
    const double a = require_number(params, "a");
    const double s = require_number(params, "s");
    const std::size_t d = optional_dim(params);
    p = make_problem(
        name, alpha, d,
        [a](double, std::span<const double> x, std::span<double> out) {
          for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * std::sin(x[i]);
        },
        [s](double, std::span<const double> x, std::span<double> out) {
          for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * std::cos(x[i]);
        },
        std::max(std::abs(a), std::abs(s)));
  } else {
    throw DomainError("unknown model '" + name +
                      "' (expected zero, constant_diffusion, scalar_linear, matrix_linear or bounded_nonlinear)");
  }
  p.params = params;
  return p;
}

FsdeProblem problem_from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("model") || !spec.at("model").is_string()) {
    throw DomainError("model spec must be an object with a string 'model' field");
  }
  nlohmann::json params = spec;
  params.erase("model");
  return builtin(spec.at("model").get<std::string>(), params);
}

InitialCondition InitialCondition::deterministic(std::vector<double> eta) {
  if (eta.empty()) throw DomainError("initial condition must have at least one component");
  for (double x : eta) {
    if (!std::isfinite(x)) throw DomainError("initial condition must be finite");
  }
  InitialCondition ic;
  ic.dim_ = eta.size();
  ic.value_ = std::move(eta);
  ic.label_ = "deterministic";
  return ic;
}

InitialCondition InitialCondition::sampled(std::size_t dim, Sampler draw, std::string label) {
  if (dim < 1 || !draw) throw DomainError("sampled initial condition needs a dimension and a sampler");
  InitialCondition ic;
  ic.dim_ = dim;
  ic.sampler_ = std::move(draw);
  ic.label_ = std::move(label);
  return ic;
}

InitialCondition InitialCondition::gaussian(std::vector<double> mean, double stddev, std::uint64_t seed) {
  if (mean.empty() || !(stddev >= 0.0) || !std::isfinite(stddev)) {
    throw DomainError("gaussian initial condition needs a mean vector and a finite stddev");
  }
  const std::size_t d = mean.size();
  // Domain tag 1 keeps these streams disjoint from the Brownian ones.
  auto draw = [mean = std::move(mean), stddev, seed](std::size_t path, std::span<double> out) {
    const std::uint64_t key = rng::stream_key(seed, path, 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mean[i] + stddev * rng::standard_normal(key, i);
  };
  return sampled(d, std::move(draw), "gaussian");
}

const std::vector<double>& InitialCondition::value() const {
  if (sampler_) throw DomainError("sampled initial condition has no single value");
  return value_;
}

void InitialCondition::draw(std::size_t path, std::span<double> out) const {
  if (out.size() != dim_) throw DomainError("initial condition dimension mismatch");
  if (sampler_) {
    sampler_(path, out);
  } else {
    std::copy(value_.begin(), value_.end(), out.begin());
  }
}

double InitialCondition::ms_norm(std::size_t n_samples) const {
  if (!sampler_) return euclidean(value_);
  std::vector<double> buf(dim_);
  double acc = 0.0;
  for (std::size_t j = 0; j < n_samples; ++j) {
    sampler_(j, buf);
    const double n = euclidean(buf);
    acc += n * n;
  }
  return std::sqrt(acc / static_cast<double>(n_samples));
}

H1Report check_h1(const FsdeProblem& problem, const H1SampleSpec& spec) {
  H1Report r;
  r.declared = problem.lipschitz;
  const std::size_t d = problem.dim;
  std::vector<double> x(d), y(d), diff(d), bx(d), by(d), sx(d), sy(d);
  const std::uint64_t key = rng::stream_key(spec.seed, 0, 2);
  std::uint64_t counter = 0;
  auto box = [&] { return spec.box_half_width * (2.0 * rng::uniform(key, counter++) - 1.0); };
  for (std::size_t n = 0; n < spec.n_samples; ++n) {
    const double t = spec.horizon * rng::uniform(key, counter++);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = box();
      y[i] = box();
      diff[i] = x[i] - y[i];
    }
    const double dx = euclidean(diff);
    if (dx == 0.0) continue;
    problem.drift(t, x, bx);
    problem.drift(t, y, by);
    problem.diffusion(t, x, sx);
    problem.diffusion(t, y, sy);
    for (std::size_t i = 0; i < d; ++i) {
      bx[i] -= by[i];
      sx[i] -= sy[i];
    }
    const double db = euclidean(bx);
    const double ds = euclidean(sx);
    r.max_ratio = std::max(r.max_ratio, std::max(db, ds) / dx);
    r.max_sum_ratio = std::max(r.max_sum_ratio, (db + ds) / dx);
    ++r.samples;
  }
  const double slack = 1e-9 * std::max(1.0, r.declared);
  r.passes = r.max_ratio <= r.declared + slack;
  r.sum_form_passes = r.max_sum_ratio <= r.declared + slack;
  return r;
}

H2Report check_h2(const FsdeProblem& problem, const TimeGrid& grid) {
  H2Report r;
  const std::size_t d = problem.dim;
  std::vector<double> zero(d, 0.0), out(d);
  std::vector<double> drift_sq(grid.n_nodes());
  for (std::size_t k = 0; k < grid.n_nodes(); ++k) {
    const double t = grid.node(k);
    problem.diffusion(t, zero, out);
    r.sup_diffusion_at_zero = std::max(r.sup_diffusion_at_zero, euclidean(out));
    problem.drift(t, zero, out);
    const double n = euclidean(out);
    drift_sq[k] = n * n;
  }
  const double h = grid.step();
  for (std::size_t k = 0; k + 1 < drift_sq.size(); ++k) r.drift_l2_integral += 0.5 * h * (drift_sq[k] + drift_sq[k + 1]);
  return r;
}

}  // namespace fsde
