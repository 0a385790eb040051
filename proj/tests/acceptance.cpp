// One pass/fail line per acceptance criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "demo_configs.hpp"
#include "fracres/fracres.hpp"
#include "oracles.hpp"

using namespace fracres;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int digits = 4) { return format_double(v, digits); }

EvolutionConfig config_for(const KernelParams& k, double gamma = 0.0) {
  EvolutionConfig c;
  c.kernel = k;
  c.contour.theta = default_theta(k.alpha, pi / 8.0);
  c.gamma = gamma;
  return c;
}

std::vector<double> sin_samples(const DiscreteOperator& op) {
  std::vector<double> u(op.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sin(pi * op.coordinates()[i]);
  return u;
}

DecayTable demo_table(const char* text, const char* name) {
  return smoothing_sweep(parse_config(text, name));
}

std::vector<double> interior_exponents(const DecayTable& tab) {
  std::vector<double> e;
  for (const auto& r : tab.rows)
    if (r.local_exponent) e.push_back(*r.local_exponent);
  return e;
}

Outcome scalar_oracle() {
  const std::vector<double> lams = {0.5, 1.0, 5.0};
  const std::vector<double> times = {0.01, 0.1, 1.0, 10.0};
  const auto op = make_diagonal({0.5, 1.0, 5.0});
  struct Case {
    KernelParams k;
    std::function<cplx(cplx)> oracle_kernel;
  };
  const std::vector<Case> cases = {
      {KernelParams::abc(0.5), [](cplx s) { return oracle::abc_kernel(s, 0.5); }},
      {KernelParams::w(0.5, 0.8), [](cplx s) { return oracle::w_kernel(s, 0.5, 0.8); }},
      {KernelParams::w(0.5, 1.0), [](cplx s) { return oracle::w_kernel(s, 0.5, 1.0); }}};
  double worst = 0.0, elapsed = 0.0;
  for (const auto& c : cases) {
    const auto cfg = config_for(c.k);
    for (double t : times) {
      const auto t0 = Clock::now();
      const auto v = resolvent_apply(op, cfg, t, std::vector<double>{1.0, 1.0, 1.0});
      elapsed += seconds_since(t0);
      for (std::size_t k = 0; k < lams.size(); ++k) {
        const double ref = oracle::family(c.oracle_kernel, 0.5, lams[k], t);
        worst = std::max(worst, std::abs(v[k] - ref) / std::abs(ref));
      }
    }
  }
  return {worst <= 1e-6 && elapsed < 10.0,
          "max rel err " + num(worst) + " (<= 1e-6), " + num(elapsed, 3) + " s (< 10 s)"};
}

Outcome known_transform() {
  ContourSpec spec;
  const double tol = 1e-10;
  double worst = 0.0;
  for (double a : {0.25, 0.5, 0.75}) {
    for (double t : {0.1, 1.0, 10.0}) {
      const auto q = build_quadrature(spec, t, tol);
      const double got = invert_scalar(q, [a](cplx s) { return principal_pow(s, -a - 1.0); }, t);
      const double exact = std::pow(t, a) / std::tgamma(1.0 + a);
      worst = std::max(worst, std::abs(got / exact - 1.0));
    }
  }
  return {worst <= 1e-6, "max rel err " + num(worst) + " (<= 1e-6)"};
}

Outcome laplace_identity() {
  const auto t0 = Clock::now();
  const auto cfg = config_for(KernelParams::abc(0.5));
  double worst = 0.0;
  const auto diag = make_diagonal({1.0});
  const auto kim = assemble_kimura(100);
  const auto u = sin_samples(kim);
  for (double lam : {1.0, 2.0}) {
    worst = std::max(worst, laplace_check(diag, cfg, lam, std::vector<double>{1.0}).rel_err);
    worst = std::max(worst, laplace_check(kim, cfg, lam, u).rel_err);
  }
  const double el = seconds_since(t0);
  return {worst <= 1e-3 && el < 30.0, "max rel err " + num(worst) + " (<= 1e-3), " + num(el, 3) + " s (< 30 s)"};
}

Outcome smoothing_bound(const DecayTable& tab, double elapsed) {
  const double var = scaled_variation(tab);
  const bool below = bound_satisfied(tab);
  return {var < 3.0 && below && elapsed < 60.0,
          "t^0.25 norm varies by " + num(var) + " (< 3), below anchored bound: " + (below ? "yes" : "no") + ", " +
              num(elapsed, 3) + " s (< 60 s)"};
}

Outcome exponent_transition(const DecayTable& kim, const DecayTable& bes) {
  const auto ek = interior_exponents(kim);
  const auto eb = interior_exponents(bes);
  if (ek.empty() || eb.size() < 5) return {false, "not enough exponents"};
  const bool k_early = ek.front() >= 0.15 && ek.front() <= 0.35;
  const bool k_late = ek.back() >= 0.35 && ek.back() <= 0.65;
  const bool b_early = eb.front() >= 0.15 && eb.front() <= 0.35;
  std::vector<double> avg;
  for (std::size_t i = 0; i + 5 <= eb.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = i; j < i + 5; ++j) s += eb[j];
    avg.push_back(s / 5.0);
  }
  double worst_drop = 0.0;
  for (std::size_t i = 1; i < avg.size(); ++i) worst_drop = std::max(worst_drop, avg[i - 1] - avg[i]);
  const bool b_trend = worst_drop <= 0.05;
  return {k_early && k_late && b_early && b_trend,
          "kimura early " + num(ek.front()) + " in [0.15, 0.35], late " + num(ek.back()) +
              " in [0.35, 0.65]; bessel early " + num(eb.front()) + " in [0.15, 0.35], largest moving-average drop " +
              num(worst_drop) + " (<= 0.05)"};
}

Outcome redirection() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lr(-8.0, 8.0), th(0.5 * pi + 1e-9, pi - 1e-9), al(1e-3, 1.0 - 1e-3),
      tha(0.01, 0.5 * pi);
  double worst = 0.0;
  int predicate_mismatch = 0;
  for (int i = 0; i < 10000; ++i) {
    const double r = std::pow(10.0, lr(rng)), t = th(rng), a = al(rng), thA = tha(rng);
    const double sg = i % 2 ? 1.0 : -1.0;
    const cplx z = redirect(std::polar(r, sg * t), a);
    const double mag = std::pow(r, a - 1.0), ang = (a - 1.0) * sg * t;
    worst = std::max(worst, std::abs(std::abs(z) - mag) / mag);
    worst = std::max(worst, std::abs(std::arg(z) - ang) / std::abs(ang));
    // the redirected ray stays out of the open sector exactly when the predicate holds
    const bool outside = std::abs(ang) >= thA;
    if (angle_condition(a, t, thA) != outside || in_sector(z, thA) == outside) ++predicate_mismatch;
  }
  const double el = seconds_since(t0);
  return {worst <= 1e-12 && predicate_mismatch == 0 && el < 1.0,
          "max rel err " + num(worst) + " (<= 1e-12), predicate mismatches " + std::to_string(predicate_mismatch) +
              ", " + num(el, 3) + " s (< 1 s)"};
}

Outcome admissibility() {
  std::ostringstream d;
  bool ok = true;
  const double theta = 0.75 * pi;
  for (double a : {0.1, 0.5, 0.9}) {
    const KernelParams p = KernelParams::abc(a);
    const auto r = estimate_admissibility(p, theta, 401);
    const bool good = r.pass && r.Cinf_hat <= p.B / (1.0 - a) + 1e-9;
    ok = ok && good;
    if (!good) d << "abc a=" << a << " pass=" << r.pass << " small-s exp " << num(r.small_s_exponent) << "; ";
  }
  for (double a : {0.1, 0.5, 0.9}) {
    for (double b : {0.2, 0.5, 1.0}) {
      const KernelParams p = KernelParams::w(a, b);
      const auto r = estimate_admissibility(p, theta, 401);
      const bool good = r.pass && r.Cinf_hat <= p.B / std::pow(a, b) + 1e-9;
      ok = ok && good;
      if (!good) d << "w a=" << a << " b=" << b << " pass=" << r.pass << "; ";
    }
  }
  const auto cap = estimate_admissibility(KernelParams::caputo_probe(0.5), theta, 401);
  const bool cap_ok = !cap.pass && std::abs(cap.small_s_exponent + 0.5) <= 0.02;
  ok = ok && cap_ok;
  d << "caputo inadmissible=" << (!cap.pass) << " exponent " << num(cap.small_s_exponent) << " (-0.5 +- 0.02)";
  return {ok, d.str()};
}

Outcome caputo_failure() {
  const auto radii = log_radii(1e-8, 1e-2, 61);
  const double s0 = caputo_probe(0.5, 0.0, 0.75 * pi, radii).slope;
  const double s1 = caputo_probe(0.5, 1.0, 0.75 * pi, radii).slope;
  const bool a = std::abs(s0 + 1.0) <= 0.02, b = s1 >= -0.1;
  return {a && b, "lambda=0 slope " + num(s0) + " (-1 +- 0.02), lambda=1 slope " + num(s1) + " (>= -0.1)"};
}

Outcome sectoriality() {
  std::vector<double> radii;
  for (int k = 0; k <= 60; ++k) radii.push_back(std::pow(10.0, 0.1 * k));
  const double m1 = sectoriality_check(assemble_kimura(1000), 0.75 * pi, radii).M_theta_hat;
  const double m2 = sectoriality_check(assemble_bessel(0.25, 20.0, 1000), 0.75 * pi, radii).M_theta_hat;
  const double cap = std::sqrt(2.0) + 1e-9;
  return {m1 <= cap && m2 <= cap, "kimura " + num(m1, 10) + ", bessel " + num(m2, 10) + " (<= sqrt 2)"};
}

Outcome strong_continuity() {
  const auto cfg = config_for(KernelParams::abc(0.5));
  const auto op = assemble_kimura(100);
  const auto u = sin_samples(op);
  const double nu = weighted_norm(op, u);
  double worst = 0.0;
  for (double t0 : {0.01, 0.1, 1.0}) {
    const auto a = resolvent_apply(op, cfg, t0, u);
    const auto b = resolvent_apply(op, cfg, t0 * (1.0 + 1e-4), u);
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = b[i] - a[i];
    worst = std::max(worst, weighted_norm(op, d) / nu);
  }
  return {worst <= 1e-2, "max relative jump " + num(worst) + " (<= 1e-2)"};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "fracres_acceptance";
  fs::remove_all(root);
  bool ok = true;
  std::string d;
  const std::pair<const char*, const char*> demos[] = {{demo::kimura_abc, "kimura_abc"}, {demo::bessel_w, "bessel_w"}};
  for (const auto& [text, name] : demos) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path dir = root / (std::string(name) + "_" + std::to_string(run));
      fs::create_directories(dir);
      ExperimentConfig c = parse_config(text, name);
      c.base_dir = dir;
      std::ostringstream out, err;
      if (run_experiment(c, name, out, err) != 0) return {false, std::string(name) + ": " + err.str()};
      outputs[run] = read_text(c.resolve_path(c.csv));
    }
    const bool same = outputs[0] == outputs[1];
    const bool header = outputs[0].substr(0, outputs[0].find('\n')) == kDecayCsvHeader;
    ok = ok && same && header;
    d += std::string(name) + (same ? " identical" : " differs") + (header ? ", header ok; " : ", bad header; ");
  }
  fs::remove_all(root);
  return {ok, d};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int n, const char* what, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", n, what, o.detail.c_str());
    std::fflush(stdout);
  };

  DecayTable kim, bes;
  double kim_seconds = 0.0;
  auto sweep = [&] {
    if (!kim.rows.empty()) return;
    const auto t0 = Clock::now();
    kim = demo_table(demo::kimura_abc, "kimura_abc");
    kim_seconds = seconds_since(t0);
    bes = demo_table(demo::bessel_w, "bessel_w");
  };

  report(1, "scalar-oracle equivalence", scalar_oracle);
  report(2, "known-transform sanity", known_transform);
  report(3, "Laplace identity", laplace_identity);
  report(4, "smoothing bound", [&] { sweep(); return smoothing_bound(kim, kim_seconds); });
  report(5, "exponent transition", [&] { sweep(); return exponent_transition(kim, bes); });
  report(6, "geometric redirection", redirection);
  report(7, "admissibility envelopes", admissibility);
  report(8, "Caputo failure", caputo_failure);
  report(9, "almost sectoriality", sectoriality);
  report(10, "strong continuity", strong_continuity);
  report(11, "determinism and format", determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
