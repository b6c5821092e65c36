#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "fsde/errors.hpp"
#include "fsde/solver.hpp"
#include "fsde/stochastic.hpp"

namespace fsde {
namespace {

constexpr char kBrownianMagic[8] = {'F', 'S', 'D', 'E', 'B', 'R', 'W', '1'};
constexpr char kPathsMagic[8] = {'F', 'S', 'D', 'E', 'P', 'T', 'H', '1'};

std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& file, bool binary) {
  std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
  out.exceptions(std::ios::badbit | std::ios::failbit);
  return out;
}

std::ifstream open_in(const std::filesystem::path& file, bool binary) {
  std::ifstream in(file, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return in;
}

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const std::filesystem::path& file) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw std::runtime_error("truncated file " + file.string());
  }
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in, const std::filesystem::path& file) {
  const auto n = get<std::uint32_t>(in, file);
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), n)) throw std::runtime_error("truncated file " + file.string());
  return s;
}

void check_magic(std::istream& in, const char (&magic)[8], const std::filesystem::path& file) {
  char buf[8];
  if (!in.read(buf, 8) || std::memcmp(buf, magic, 8) != 0) {
    throw std::runtime_error(file.string() + " is not a " + std::string(magic, 8) + " file");
  }
}

void read_doubles(std::istream& in, std::vector<double>& data, const std::filesystem::path& file) {
  const auto bytes = static_cast<std::streamsize>(data.size() * sizeof(double));
  if (!in.read(reinterpret_cast<char*>(data.data()), bytes)) {
    throw std::runtime_error("truncated file " + file.string());
  }
}

}  // namespace

void write_brownian_csv(const BrownianEnsemble& ensemble, const std::filesystem::path& file) {
  auto out = open_out(file, false);
  const auto& g = ensemble.grid();
  out << "# fsde-brownian v1\n"
      << "# horizon=" << format17(g.horizon()) << ",n_steps=" << g.n_steps()
      << ",n_paths=" << ensemble.n_paths() << ",master_seed=" << ensemble.master_seed() << '\n';
  std::vector<double> row(g.n_steps());
  for (std::size_t j = 0; j < ensemble.n_paths(); ++j) {
    ensemble.path_increments(j, row);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << format17(row[k]);
    }
    out << '\n';
  }
}

BrownianEnsemble read_brownian_csv(const std::filesystem::path& file) {
  auto in = open_in(file, false);
  std::string line;
  if (!std::getline(in, line) || line != "# fsde-brownian v1") {
    throw std::runtime_error(file.string() + " is not an fsde-brownian v1 file");
  }
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw std::runtime_error(file.string() + ": missing metadata line");
  }
  double horizon = 0.0;
  unsigned long long n_steps = 0, n_paths = 0, seed = 0;
  if (std::sscanf(line.c_str(), "# horizon=%lf,n_steps=%llu,n_paths=%llu,master_seed=%llu",
                  &horizon, &n_steps, &n_paths, &seed) != 4) {
    throw std::runtime_error(file.string() + ": malformed metadata line");
  }
  const TimeGrid grid = make_grid(horizon, n_steps);
  std::vector<double> data;
  data.reserve(n_paths * n_steps);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::size_t count = 0;
    while (std::getline(row, cell, ',')) {
      data.push_back(std::stod(cell));
      ++count;
    }
    if (count != n_steps) {
      throw GridMismatchError(file.string() + ": row has " + std::to_string(count) +
                              " increments, expected " + std::to_string(n_steps));
    }
  }
  return BrownianEnsemble::from_increments(grid, n_paths, seed, std::move(data));
}

void write_brownian_binary(const BrownianEnsemble& ensemble, const std::filesystem::path& file) {
  auto out = open_out(file, true);
  const auto& g = ensemble.grid();
  out.write(kBrownianMagic, 8);
  put<double>(out, g.horizon());
  put<std::uint64_t>(out, g.n_steps());
  put<std::uint64_t>(out, ensemble.n_paths());
  put<std::uint64_t>(out, ensemble.master_seed());
  const auto data = ensemble.increments();
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
}

BrownianEnsemble read_brownian_binary(const std::filesystem::path& file) {
  auto in = open_in(file, true);
  check_magic(in, kBrownianMagic, file);
  const auto horizon = get<double>(in, file);
  const auto n_steps = get<std::uint64_t>(in, file);
  const auto n_paths = get<std::uint64_t>(in, file);
  const auto seed = get<std::uint64_t>(in, file);
  const TimeGrid grid = make_grid(horizon, n_steps);
  std::vector<double> data(n_paths * n_steps);
  read_doubles(in, data, file);
  return BrownianEnsemble::from_increments(grid, n_paths, seed, std::move(data));
}

void write_paths_csv(const PathEnsemble& ensemble, const std::filesystem::path& file,
                     std::size_t max_paths, const std::string& comment) {
  auto out = open_out(file, false);
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  out << "path,t,component,value\n";
  const auto& g = ensemble.grid();
  const std::size_t n = max_paths == 0 ? ensemble.n_paths() : std::min(max_paths, ensemble.n_paths());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < g.n_nodes(); ++k) {
      const auto x = ensemble.state(j, k);
      const std::string t = format17(g.node(k));
      for (std::size_t c = 0; c < x.size(); ++c) {
        out << j << ',' << t << ',' << c << ',' << format17(x[c]) << '\n';
      }
    }
  }
}

void write_paths_binary(const PathEnsemble& ensemble, const std::filesystem::path& file) {
  auto out = open_out(file, true);
  out.write(kPathsMagic, 8);
  put_string(out, ensemble.provenance().problem);
  put_string(out, ensemble.provenance().scheme);
  put<std::uint64_t>(out, ensemble.provenance().seed);
  put<double>(out, ensemble.grid().horizon());
  put<std::uint64_t>(out, ensemble.grid().n_steps());
  put<std::uint64_t>(out, ensemble.n_paths());
  put<std::uint64_t>(out, ensemble.dim());
  const auto data = ensemble.data();
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
}

PathEnsemble read_paths_binary(const std::filesystem::path& file) {
  auto in = open_in(file, true);
  check_magic(in, kPathsMagic, file);
  Provenance prov;
  prov.problem = get_string(in, file);
  prov.scheme = get_string(in, file);
  prov.seed = get<std::uint64_t>(in, file);
  const auto horizon = get<double>(in, file);
  const auto n_steps = get<std::uint64_t>(in, file);
  const auto n_paths = get<std::uint64_t>(in, file);
  const auto dim = get<std::uint64_t>(in, file);
  PathEnsemble ensemble(make_grid(horizon, n_steps), n_paths, dim, prov);
  std::vector<double> data(ensemble.data().size());
  read_doubles(in, data, file);
  for (std::size_t j = 0; j < n_paths; ++j) {
    auto p = ensemble.path(j);
    std::copy(data.begin() + static_cast<std::ptrdiff_t>(j * p.size()),
              data.begin() + static_cast<std::ptrdiff_t>((j + 1) * p.size()), p.begin());
  }
  return ensemble;
}

}  // namespace fsde
