#pragma once

// Flat experiment configuration: `section.key = value` lines, `#` comments.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fracres/contour.hpp"
#include "fracres/error.hpp"
#include "fracres/generators.hpp"
#include "fracres/kernels.hpp"

namespace fracres {

enum class ExperimentMode { smoothing, caputo, admissibility };

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::smoothing;

  OperatorKind op_kind = OperatorKind::kimura;
  int n = 1000;
  double nu = 0.25;
  double r_max = 20.0;
  std::vector<double> eigenvalues;  // diagonal operator only
  double theta_A = pi / 8.0;

  KernelParams kernel = {KernelKind::abc, 0.5, 1.0, 1.0};

  std::optional<double> theta;  // default from the angle condition
  int n_nodes = 64;
  double tol = 1e-10;
  double r_min = 0.1;

  double gamma = 0.5;
  double t_min = 1e-3;
  double t_max = 10.0;
  int count = 41;
  std::string u0 = "sin_pi_x";  // profile name or data file path

  double probe_lambda = 0.0;
  double probe_theta = 0.75 * pi;
  double probe_r_min = 1e-8;
  double probe_r_max = 1e-2;
  int probe_count = 61;
  int n_samples = 401;

  std::string csv;
  std::string svg;
  std::filesystem::path base_dir;  // for relative paths in the file

  double contour_theta() const { return theta ? *theta : default_theta(kernel.alpha, theta_A); }

  std::vector<double> times() const {
    std::vector<double> t(static_cast<std::size_t>(count));
    const double a = std::log(t_min), b = std::log(t_max);
    for (int k = 0; k < count; ++k)
      t[static_cast<std::size_t>(k)] = count == 1 ? t_min : std::exp(a + (b - a) * k / (count - 1));
    return t;
  }

  std::filesystem::path resolve_path(const std::string& p) const {
    std::filesystem::path path(p);
    if (path.is_relative() && !base_dir.empty()) return base_dir / path;
    return path;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

inline std::string where(const std::string& key, const Entry& e) {
  return "line " + std::to_string(e.line) + ", key '" + key + "'";
}

inline double parse_double(const std::string& key, const Entry& e) {
  const std::string_view v = e.value;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("config", where(key, e) + ": expected a number, got '" + e.value + "'");
  return out;
}

inline int parse_int(const std::string& key, const Entry& e) {
  const std::string_view v = e.value;
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config", where(key, e) + ": expected an integer, got '" + e.value + "'");
  return out;
}

inline std::vector<double> parse_list(const std::string& key, const Entry& e) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    out.push_back(parse_double(key, Entry{std::string(item), e.line}));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError("config", where(key, e) + ": empty list");
  return out;
}

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "mode",          "operator.kind", "operator.n",     "operator.nu",     "operator.r_max",
      "operator.eigenvalues",           "operator.theta_A",                  "kernel.kind",
      "kernel.alpha",  "kernel.beta",   "kernel.B",       "contour.theta",   "contour.n_nodes",
      "contour.tol",   "contour.r_min", "run.gamma",      "run.t_min",       "run.t_max",
      "run.count",     "run.u0",        "probe.lambda",   "probe.theta",     "probe.r_min",
      "probe.r_max",   "probe.count",   "probe.n_samples", "output.csv",     "output.svg"};
  return keys;
}

}  // namespace detail

/// Parses and validates a configuration. `origin` names the source in messages.
inline ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>") {
  std::map<std::string, detail::Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  const auto& keys = detail::known_keys();
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config", origin + ": line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("config", origin + ": line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (value.empty())
      throw ConfigError("config", origin + ": line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    if (entries.count(key))
      throw ConfigError("config", origin + ": line " + std::to_string(lineno) + ": duplicate key '" + key +
                                      "' (first set on line " + std::to_string(entries[key].line) + ")");
    entries[key] = {value, lineno};
  }

  ExperimentConfig c;
  auto has = [&](const char* k) { return entries.count(k) > 0; };
  auto num = [&](const char* k, double& dst) {
    if (has(k)) dst = detail::parse_double(k, entries.at(k));
  };
  auto integer = [&](const char* k, int& dst) {
    if (has(k)) dst = detail::parse_int(k, entries.at(k));
  };
  auto bad = [&](const char* k, const std::string& why) -> ConfigError {
    const auto it = entries.find(k);
    const std::string loc = it == entries.end() ? std::string("key '") + k + "'" : detail::where(k, it->second);
    return ConfigError("config", origin + ": " + loc + ": " + why);
  };

  if (has("mode")) {
    const std::string& m = entries.at("mode").value;
    if (m == "smoothing") c.mode = ExperimentMode::smoothing;
    else if (m == "caputo") c.mode = ExperimentMode::caputo;
    else if (m == "admissibility") c.mode = ExperimentMode::admissibility;
    else throw bad("mode", "expected smoothing, caputo or admissibility");
  }
  if (has("operator.kind")) {
    const std::string& k = entries.at("operator.kind").value;
    if (k == "kimura") c.op_kind = OperatorKind::kimura;
    else if (k == "bessel") c.op_kind = OperatorKind::bessel;
    else if (k == "diagonal") c.op_kind = OperatorKind::diagonal;
    else throw bad("operator.kind", "expected kimura, bessel or diagonal");
  }
  integer("operator.n", c.n);
  num("operator.nu", c.nu);
  num("operator.r_max", c.r_max);
  if (has("operator.eigenvalues"))
    c.eigenvalues = detail::parse_list("operator.eigenvalues", entries.at("operator.eigenvalues"));
  num("operator.theta_A", c.theta_A);

  if (has("kernel.kind")) {
    const std::string& k = entries.at("kernel.kind").value;
    if (k == "abc") c.kernel.kind = KernelKind::abc;
    else if (k == "w") c.kernel.kind = KernelKind::w;
    else if (k == "caputo") c.kernel.kind = KernelKind::caputo_probe;
    else throw bad("kernel.kind", "expected abc, w or caputo");
  }
  num("kernel.alpha", c.kernel.alpha);
  num("kernel.beta", c.kernel.beta);
  num("kernel.B", c.kernel.B);

  if (has("contour.theta")) c.theta = detail::parse_double("contour.theta", entries.at("contour.theta"));
  integer("contour.n_nodes", c.n_nodes);
  num("contour.tol", c.tol);
  num("contour.r_min", c.r_min);

  num("run.gamma", c.gamma);
  num("run.t_min", c.t_min);
  num("run.t_max", c.t_max);
  integer("run.count", c.count);
  if (has("run.u0")) c.u0 = entries.at("run.u0").value;

  num("probe.lambda", c.probe_lambda);
  num("probe.theta", c.probe_theta);
  num("probe.r_min", c.probe_r_min);
  num("probe.r_max", c.probe_r_max);
  integer("probe.count", c.probe_count);
  integer("probe.n_samples", c.n_samples);

  if (has("output.csv")) c.csv = entries.at("output.csv").value;
  if (has("output.svg")) c.svg = entries.at("output.svg").value;

  // upstream validation, re-raised with the offending key
  auto revalidate = [&](const char* k, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      throw bad(k, e.what());
    }
  };
  revalidate(c.kernel.kind == KernelKind::w && has("kernel.beta") ? "kernel.beta" : "kernel.alpha",
             [&] { c.kernel.validate(); });
  if (c.mode == ExperimentMode::smoothing) {
    if (c.kernel.kind == KernelKind::caputo_probe)
      throw bad("kernel.kind", "the Caputo symbol cannot drive a smoothing run");
    if (c.op_kind == OperatorKind::diagonal && c.eigenvalues.empty())
      throw bad("operator.eigenvalues", "required for the diagonal operator");
    if (c.op_kind != OperatorKind::diagonal && c.n < (c.op_kind == OperatorKind::bessel ? 2 : 1))
      throw bad("operator.n", "too few nodes");
    if (c.op_kind == OperatorKind::bessel) {
      if (!(c.nu > -0.5)) throw bad("operator.nu", "need nu > -1/2 for a locally integrable weight");
      if (!(c.r_max > 0.0)) throw bad("operator.r_max", "must be positive");
    }
    revalidate("operator.theta_A", [&] { SectorSpec{c.theta_A, 1.0, 1.0}.validate(); });
    revalidate("contour.theta", [&] {
      ContourSpec{c.contour_theta(), c.n_nodes, c.r_min, 2.0}.validate();
    });
    if (!(c.tol > 0.0 && c.tol < 1.0)) throw bad("contour.tol", "must lie in (0, 1)");
    const double phi = (1.0 - c.kernel.alpha) * c.contour_theta();
    if (!(phi >= c.theta_A) || !(pi - phi >= c.theta_A))
      throw bad("contour.theta", "angle condition (1 - alpha) theta >= theta_A fails");
    if (!(c.gamma >= 0.0 && c.gamma < 1.0)) throw bad("run.gamma", "must lie in [0, 1)");
    if (!(c.t_min > 0.0)) throw bad("run.t_min", "must be positive");
    if (!(c.t_max > c.t_min)) throw bad("run.t_max", "must exceed run.t_min");
    if (c.count < 3) throw bad("run.count", "need at least 3 time samples");
    if (c.csv.empty()) throw bad("output.csv", "required");
  } else if (c.mode == ExperimentMode::caputo) {
    if (!(c.probe_lambda >= 0.0)) throw bad("probe.lambda", "must be nonnegative");
    if (!(c.probe_theta >= 0.0 && c.probe_theta < pi)) throw bad("probe.theta", "must lie in [0, pi)");
    if (!(c.probe_r_min > 0.0 && c.probe_r_min <= 1e-6))
      throw bad("probe.r_min", "must be positive and at most 1e-6 (6 decades below 1)");
    if (!(c.probe_r_max > c.probe_r_min)) throw bad("probe.r_max", "must exceed probe.r_min");
    if (c.probe_count < 3) throw bad("probe.count", "need at least 3 radii");
  } else {
    if (c.kernel.kind == KernelKind::caputo_probe)
      throw bad("kernel.kind", "admissibility sweeps take abc or w");
    if (c.n_samples < 64) throw bad("probe.n_samples", "must be at least 64");
    revalidate("contour.theta", [&] {
      ContourSpec{c.contour_theta(), 64, 0.1, 2.0}.validate();
    });
  }
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentConfig c = parse_config(buf.str(), path.string());
  c.base_dir = path.parent_path();
  return c;
}

/// Named initial profile sampled at the operator's coordinates, or numbers
/// read from a file (whitespace or comma separated).
inline std::vector<double> initial_data(const ExperimentConfig& c, const DiscreteOperator& op) {
  const auto& x = op.coordinates();
  const double L = op.kind() == OperatorKind::bessel ? op.r_max() : 1.0;
  std::vector<double> u(x.size());
  if (c.u0 == "sin_pi_x") {
    for (std::size_t i = 0; i < x.size(); ++i) u[i] = std::sin(pi * x[i] / L);
  } else if (c.u0 == "gaussian_bump") {
    // radial bump at the origin for Bessel, centred bump on the interval otherwise
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = op.kind() == OperatorKind::bessel ? x[i] : (x[i] - 0.5) / 0.1;
      u[i] = std::exp(-d * d);
    }
  } else if (c.u0 == "indicator") {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const bool in = op.kind() == OperatorKind::bessel ? x[i] <= 1.0 : (x[i] >= 0.25 && x[i] <= 0.75);
      u[i] = in ? 1.0 : 0.0;
    }
  } else {
    const std::filesystem::path p = c.resolve_path(c.u0);
    std::ifstream in(p);
    if (!in) throw IoError("cannot read initial data file '" + p.string() + "'");
    std::vector<double> vals;
    std::string tok;
    while (in >> tok) {
      std::string_view rest = tok;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        if (!item.empty()) {
          double v = 0.0;
          const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
          if (ec != std::errc() || ptr != item.data() + item.size())
            throw ConfigError("config", "initial data file '" + p.string() + "': bad number '" +
                                            std::string(item) + "'");
          vals.push_back(v);
        }
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    }
    if (vals.size() != x.size())
      throw ConfigError("config", "initial data file '" + p.string() + "' has " + std::to_string(vals.size()) +
                                      " values, operator has " + std::to_string(x.size()));
    u = std::move(vals);
  }
  return u;
}

inline DiscreteOperator build_operator(const ExperimentConfig& c) {
  const SectorSpec sector{c.theta_A, 1.0, 1.0};
  switch (c.op_kind) {
    case OperatorKind::kimura: return assemble_kimura(c.n, sector);
    case OperatorKind::bessel: return assemble_bessel(c.nu, c.r_max, c.n, sector);
    case OperatorKind::diagonal: break;
  }
  return make_diagonal(c.eigenvalues, sector);
}

}  // namespace fracres
