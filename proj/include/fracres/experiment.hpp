#pragma once

// Config-driven runs: smoothing sweeps, the Caputo probe and admissibility sweeps.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fracres/caputo.hpp"
#include "fracres/config.hpp"
#include "fracres/decay.hpp"
#include "fracres/error.hpp"
#include "fracres/evolution.hpp"
#include "fracres/generators.hpp"
#include "fracres/kernels.hpp"
#include "fracres/output.hpp"

namespace fracres {

inline EvolutionConfig evolution_config(const ExperimentConfig& c) {
  EvolutionConfig e;
  e.kernel = c.kernel;
  e.contour.theta = c.contour_theta();
  e.contour.n_nodes = c.n_nodes;
  e.contour.r_min = c.r_min;
  e.gamma = c.gamma;
  e.times = c.times();
  e.tol = c.tol;
  return e;
}

/// ||A^gamma V(t) u0||_M on the configured log time grid.
inline DecayTable smoothing_sweep(const ExperimentConfig& c) {
  const DiscreteOperator op = build_operator(c);
  EvolutionConfig e = evolution_config(c);
  e.u0 = initial_data(c, op);
  e.validate_for(op);
  std::vector<double> norms;
  norms.reserve(e.times.size());
  for (double t : e.times) norms.push_back(weighted_norm(op, smoothed_apply(op, e, t, e.u0)));
  return make_decay_table(e.times, norms, c.kernel.alpha, c.gamma);
}

inline std::string caputo_csv(const CaputoProbeResult& r) {
  std::string out = "abs_s,g\n";
  for (const auto& row : r.rows) out += format_double(row.abs_s) + ',' + format_double(row.g) + '\n';
  return out;
}

inline std::string admissibility_csv(const KernelParams& p, const AdmissibilityReport& r) {
  std::string out = "kernel,alpha,beta,B,theta,C0_hat,Cinf_hat,small_s_exponent,large_s_exponent,pass\n";
  out += std::string(to_string(p.kind)) + ',' + format_double(p.alpha) + ',' + format_double(p.beta) + ',' +
         format_double(p.B) + ',' + format_double(r.theta) + ',' + format_double(r.C0_hat) + ',' +
         format_double(r.Cinf_hat) + ',' + format_double(r.small_s_exponent) + ',' +
         format_double(r.large_s_exponent) + ',' + (r.pass ? "true" : "false") + '\n';
  return out;
}

namespace detail {

inline std::string strip_module(const Error& e) {
  const std::string w = e.what();
  const std::string prefix = "[" + e.module() + "] ";
  return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

}  // namespace detail

/// Runs one configuration, writes its outputs and prints a one-line summary.
/// Returns the process exit status.
inline int run_experiment(const ExperimentConfig& c, const std::string& origin, std::ostream& out,
                          std::ostream& err) {
  try {
    try {
      switch (c.mode) {
        case ExperimentMode::smoothing: {
          const DecayTable tab = smoothing_sweep(c);
          const std::string title = std::string(to_string(c.op_kind)) + " / " + to_string(c.kernel.kind) +
                                    ", alpha=" + format_double(c.kernel.alpha, 6) +
                                    ", gamma=" + format_double(c.gamma, 6);
          std::optional<std::filesystem::path> svg;
          if (!c.svg.empty()) svg = c.resolve_path(c.svg);
          emit_outputs(tab, c.resolve_path(c.csv), svg, title);
          out << title << ": " << tab.rows.size() << " samples, "
              << (bound_satisfied(tab) ? "bound satisfied" : "bound violated") << '\n';
          return 0;
        }
        case ExperimentMode::caputo: {
          const auto radii = log_radii(c.probe_r_min, c.probe_r_max, c.probe_count);
          const CaputoProbeResult r = caputo_probe(c.kernel.alpha, c.probe_lambda, c.probe_theta, radii);
          if (!c.csv.empty()) write_text(c.resolve_path(c.csv), caputo_csv(r));
          out << "caputo probe alpha=" << format_double(r.alpha, 6) << " lambda=" << format_double(r.lambda, 6)
              << ": small-|s| slope " << format_double(r.slope, 6) << '\n';
          return 0;
        }
        case ExperimentMode::admissibility: {
          const AdmissibilityReport r = estimate_admissibility(c.kernel, c.contour_theta(), c.n_samples);
          if (!c.csv.empty()) write_text(c.resolve_path(c.csv), admissibility_csv(c.kernel, r));
          out << to_string(c.kernel.kind) << " alpha=" << format_double(c.kernel.alpha, 6)
              << ": C0_hat=" << format_double(r.C0_hat, 6) << " Cinf_hat=" << format_double(r.Cinf_hat, 6)
              << ", " << r.diagnostic << '\n';
          return 0;
        }
      }
      return 0;
    } catch (const Error& e) {
      // attach the configuration source to upstream errors
      if (e.module() == "config") throw;
      throw Error(e.category(), e.module(), origin + ": " + detail::strip_module(e));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return exit_code(ErrorCategory::numerical);
  }
}

inline int run_experiment(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig c = load_config(config_path);
    return run_experiment(c, config_path.string(), out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.category());
  }
}

}  // namespace fracres
