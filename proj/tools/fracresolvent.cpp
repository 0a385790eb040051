#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "demo_configs.hpp"
#include "fracres/fracres.hpp"

namespace {

int guarded(auto&& fn) {
  try {
    return fn();
  } catch (const fracres::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fracres::exit_code(e.category());
  }
}

int probe_caputo(double alpha, double lambda, double theta, double r_lo, double r_hi, int count,
                 const std::string& csv) {
  return guarded([&] {
    const auto radii = fracres::log_radii(r_lo, r_hi, count);
    const auto r = fracres::caputo_probe(alpha, lambda, theta, radii);
    if (!csv.empty()) fracres::write_text(csv, fracres::caputo_csv(r));
    std::cout << "caputo probe alpha=" << fracres::format_double(alpha, 6)
              << " lambda=" << fracres::format_double(lambda, 6) << " theta=" << fracres::format_double(theta, 6)
              << ": small-|s| slope " << fracres::format_double(r.slope, 6) << " over " << r.fit_points
              << " radii\n";
    return 0;
  });
}

int check_admissible(const std::string& kind, double alpha, double beta, double B, double theta, int samples) {
  return guarded([&] {
    const fracres::KernelParams p =
        kind == "abc" ? fracres::KernelParams::abc(alpha, B) : fracres::KernelParams::w(alpha, beta, B);
    const double th = theta > 0.0 ? theta : fracres::default_theta(alpha, fracres::pi / 8.0);
    const auto r = fracres::estimate_admissibility(p, th, samples);
    std::cout << fracres::admissibility_csv(p, r) << r.diagnostic << '\n';
    return 0;
  });
}

int demo(const std::string& name, const std::filesystem::path& out_dir) {
  return guarded([&] {
    const char* text = name == "kimura-abc" ? fracres::demo::kimura_abc : fracres::demo::bessel_w;
    fracres::ExperimentConfig c = fracres::parse_config(text, name + ".cfg");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw fracres::IoError("cannot create output directory '" + out_dir.string() + "'");
    c.base_dir = out_dir;
    return fracres::run_experiment(c, name + ".cfg", std::cout, std::cerr);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contour-quadrature K-resolvent families for fractional evolution equations"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  run->add_option("config", config, "Path to a section.key = value config file")->required();

  double alpha = 0.5, lambda = 0.0, theta = 0.75 * fracres::pi, r_lo = 1e-8, r_hi = 1e-2;
  int count = 61;
  std::string csv;
  auto* probe = app.add_subcommand("probe-caputo", "Sample |s^(a-1)/(s^a + lambda)| along a ray");
  probe->add_option("--alpha", alpha, "Fractional order in (0, 1)")->required();
  probe->add_option("--lambda", lambda, "Eigenvalue lambda >= 0")->required();
  probe->add_option("--theta", theta, "Ray angle in [0, pi)")->required();
  probe->add_option("--r-min", r_lo, "Smallest radius (at most 1e-6)");
  probe->add_option("--r-max", r_hi, "Largest radius");
  probe->add_option("--count", count, "Number of log-spaced radii");
  probe->add_option("--csv", csv, "Write the sampled table here");

  std::string kind;
  double beta = 1.0, B = 1.0, adm_theta = 0.0;
  int samples = 401;
  auto* adm = app.add_subcommand("check-admissible", "Empirical admissibility envelopes of a multiplier");
  adm->add_option("--kernel", kind, "Kernel kind")->required()->check(CLI::IsMember({"abc", "w"}));
  adm->add_option("--alpha", alpha, "Fractional order in (0, 1)")->required();
  adm->add_option("--beta", beta, "W exponent in (0, 1]");
  adm->add_option("--B", B, "Normalization constant");
  adm->add_option("--theta", adm_theta, "Contour angle (default from the angle condition)");
  adm->add_option("--samples", samples, "Radii per ray");

  std::string which;
  std::string out_dir = ".";
  auto* dem = app.add_subcommand("demo", "Run a bundled experiment");
  dem->add_option("name", which, "Demo name")->required()->check(CLI::IsMember({"kimura-abc", "bessel-w"}));
  dem->add_option("--out-dir", out_dir, "Directory for the CSV and SVG outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fracres::exit_code(fracres::ErrorCategory::config);
  }

  if (*run) return fracres::run_experiment(std::filesystem::path(config), std::cout, std::cerr);
  if (*probe) return probe_caputo(alpha, lambda, theta, r_lo, r_hi, count, csv);
  if (*adm) return check_admissible(kind, alpha, beta, B, adm_theta, samples);
  return demo(which, out_dir);
}
