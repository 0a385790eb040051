#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "fracres/kernels.hpp"
#include "oracles.hpp"

using namespace fracres;

TEST(EvalKernel, AbcAtOneIsB) {
  for (double a : {0.1, 0.5, 0.9}) EXPECT_NEAR(std::abs(eval_kernel(KernelParams::abc(a), 1.0) - 1.0), 0.0, 1e-15);
}

TEST(EvalKernel, AbcAtFour) {
  const cplx k = eval_kernel(KernelParams::abc(0.5), 4.0);
  EXPECT_NEAR(k.real(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(k.imag(), 0.0, 1e-15);
}

TEST(EvalKernel, WAtOne) {
  const cplx k = eval_kernel(KernelParams::w(0.5, 0.8), 1.0);
  EXPECT_NEAR(k.real(), 0.722981, 1e-6);
  EXPECT_NEAR(k.real(), std::pow(1.5, -0.8), 1e-15);
}

TEST(EvalKernel, CaputoSymbol) {
  const cplx s = std::polar(0.01, 0.75 * pi);
  const cplx k = eval_kernel(KernelParams::caputo_probe(0.5), s);
  EXPECT_NEAR(std::abs(k), 10.0, 1e-12);
}

TEST(EvalKernel, MatchesIndependentFormulas) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lr(-6.0, 6.0), th(-0.99 * pi, 0.99 * pi);
  for (int i = 0; i < 200; ++i) {
    const cplx s = std::polar(std::pow(10.0, lr(rng)), th(rng));
    EXPECT_LT(std::abs(eval_kernel(KernelParams::abc(0.3, 1.7), s) - oracle::abc_kernel(s, 0.3, 1.7)),
              1e-13 * std::abs(oracle::abc_kernel(s, 0.3, 1.7)));
    EXPECT_LT(std::abs(eval_kernel(KernelParams::w(0.6, 0.4), s) - oracle::w_kernel(s, 0.6, 0.4)),
              1e-13 * std::abs(oracle::w_kernel(s, 0.6, 0.4)));
  }
}

TEST(EvalKernel, BranchCutIsRejected) {
  EXPECT_THROW(eval_kernel(KernelParams::abc(0.5), cplx(-2.0, 0.0)), DomainError);
  EXPECT_THROW(eval_kernel(KernelParams::w(0.5, 0.8), cplx(0.0, 0.0)), DomainError);
}

TEST(KernelParams, BetaAboveOneRejectedWithRange) {
  try {
    KernelParams::w(0.5, 1.5);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("beta"), std::string::npos);
    EXPECT_NE(msg.find("0 < beta <= 1"), std::string::npos);
  }
}

TEST(KernelParams, RangeChecks) {
  EXPECT_THROW(KernelParams::abc(0.0), ConfigError);
  EXPECT_THROW(KernelParams::abc(1.0), ConfigError);
  EXPECT_THROW(KernelParams::abc(0.5, 0.0), ConfigError);
  EXPECT_THROW(KernelParams::w(0.5, 0.0), ConfigError);
  EXPECT_NO_THROW(KernelParams::w(0.5, 1.0));
}

TEST(KernelProperties, ConjugateSymmetry) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lr(-8.0, 8.0), th(0.01, 0.99 * pi);
  for (const KernelParams& p : {KernelParams::abc(0.4), KernelParams::w(0.7, 0.3), KernelParams::caputo_probe(0.5)}) {
    for (int i = 0; i < 500; ++i) {
      const cplx s = std::polar(std::pow(10.0, lr(rng)), th(rng));
      const cplx a = eval_kernel(p, std::conj(s)), b = std::conj(eval_kernel(p, s));
      EXPECT_LE(std::abs(a - b), 1e-14 * std::abs(b));
    }
  }
}

// |s^a + c| >= |s|^a min(1, sin(a theta)) for c > 0, so the envelope widens
// once the image ray s^a crosses the imaginary axis.
TEST(KernelProperties, AbcLargeSEnvelope) {
  for (double a : {0.1, 0.5, 0.9}) {
    const KernelParams p = KernelParams::abc(a);
    const double phi = a * 0.75 * pi;
    const double widen = phi > 0.5 * pi ? 1.0 / std::sin(phi) : 1.0;
    for (int i = 0; i < 10000; ++i) {
      const double r = std::pow(10.0, 8.0 * i / 9999.0);
      for (double sg : {1.0, -1.0}) {
        const cplx s = std::polar(r, sg * 0.75 * pi);
        EXPECT_LE(std::abs(eval_kernel(p, s)), widen * (1.0 / (1.0 - a)) / r * (1.0 + 1e-12));
      }
    }
  }
}

TEST(KernelProperties, WLargeSEnvelope) {
  for (double a : {0.1, 0.5, 0.9}) {
    for (double b : {0.2, 0.5, 0.8, 1.0}) {
      const KernelParams p = KernelParams::w(a, b);
      for (int i = 0; i < 10000; ++i) {
        const double r = std::pow(10.0, 8.0 * i / 9999.0);
        const cplx s = std::polar(r, 0.75 * pi);
        EXPECT_LE(std::abs(eval_kernel(p, s)), std::pow(a, -b) * std::pow(r, a - 1.0) * (1.0 + 1e-12));
      }
    }
  }
}

TEST(KernelProperties, HomogeneousInB) {
  const cplx s = std::polar(0.37, 0.6 * pi);
  EXPECT_LE(std::abs(eval_kernel(KernelParams::abc(0.5, 2.0), s) - 2.0 * eval_kernel(KernelParams::abc(0.5), s)),
            1e-15);
  EXPECT_LE(std::abs(eval_kernel(KernelParams::w(0.5, 0.8, 2.0), s) - 2.0 * eval_kernel(KernelParams::w(0.5, 0.8), s)),
            1e-15);
}

// Small-|s| behaviour: K^ABC ~ (B/alpha) s^(alpha-1) and K^W ~ (1-alpha)^(-beta) s^((alpha-1)(1-beta)),
// so only W with beta = 1 stays bounded near the origin.
namespace {

// log-log slope of |K| across the outermost decade [1e-8, 1e-7] of the grid
double edge_slope(const std::function<cplx(cplx)>& K) {
  const double lo = std::abs(K(std::polar(1e-8, 0.75 * pi))), hi = std::abs(K(std::polar(1e-7, 0.75 * pi)));
  return std::log10(hi / lo);
}

}  // namespace

TEST(Admissibility, AbcGrowsAtTheOrigin) {
  for (double a : {0.1, 0.5, 0.9}) {
    const auto r = estimate_admissibility(KernelParams::abc(a), 0.75 * pi, 401);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.small_s_exponent, edge_slope([a](cplx s) { return oracle::abc_kernel(s, a); }), 0.01);
    // s^a is not yet negligible against alpha / (1 - alpha) at |s| = 1e-8 when alpha = 0.1
    if (a >= 0.5) {
      EXPECT_NEAR(r.small_s_exponent, -(1.0 - a), 0.02);
    }
    EXPECT_LE(r.Cinf_hat, 1.0 / (1.0 - a) + 1e-9);
    EXPECT_NE(r.diagnostic.find("|s| -> 0"), std::string::npos);
  }
}

TEST(Admissibility, WSmallSExponent) {
  for (double b : {0.2, 0.5}) {
    const auto r = estimate_admissibility(KernelParams::w(0.5, b), 0.75 * pi, 401);
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.small_s_exponent, -(0.5) * (1.0 - b), 0.02);
    EXPECT_LE(r.Cinf_hat, std::pow(0.5, -b) + 1e-9);
  }
}

TEST(Admissibility, WWithBetaOnePasses) {
  for (double a : {0.1, 0.5}) {
    const auto r = estimate_admissibility(KernelParams::w(a, 1.0), 0.75 * pi, 401);
    EXPECT_TRUE(r.pass) << r.diagnostic;
    EXPECT_LE(r.Cinf_hat, 1.0 / a + 1e-9);
    EXPECT_TRUE(std::isfinite(r.C0_hat));
  }
}

// |K| = B / |s^(1-a) + 1 - a| approaches its bound B / (1 - a) like |s|^(1-a);
// at alpha = 0.9 the ratio still climbs across the grid's last decade, so the
// finite-grid trend test cannot certify it.
TEST(Admissibility, WBetaOneSlowConvergenceNotCertified) {
  const auto r = estimate_admissibility(KernelParams::w(0.9, 1.0), 0.75 * pi, 401);
  EXPECT_LE(r.C0_hat, 1.0 / (1.0 - 0.9));
  EXPECT_LE(r.Cinf_hat, 1.0 / 0.9 + 1e-9);
  EXPECT_NEAR(r.small_s_exponent, edge_slope([](cplx s) { return oracle::w_kernel(s, 0.9, 1.0); }), 0.01);
  EXPECT_FALSE(r.pass);
}

TEST(Admissibility, CaputoProbeIsInadmissible) {
  const auto r = estimate_admissibility(KernelParams::caputo_probe(0.5), 0.75 * pi, 401);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.small_s_exponent, -0.5, 0.02);
  EXPECT_NE(r.diagnostic.find("not admissible"), std::string::npos);
}

TEST(Admissibility, WBetaOneC0StableUnderRefinement) {
  const auto a = estimate_admissibility(KernelParams::w(0.5, 1.0), 0.75 * pi, 201);
  const auto b = estimate_admissibility(KernelParams::w(0.5, 1.0), 0.75 * pi, 801);
  EXPECT_NEAR(a.C0_hat, b.C0_hat, 1e-3 * b.C0_hat);
}

TEST(Admissibility, RejectsBadArguments) {
  EXPECT_THROW(estimate_admissibility(KernelParams::abc(0.5), 0.4 * pi, 401), ConfigError);
  EXPECT_THROW(estimate_admissibility(KernelParams::abc(0.5), 0.75 * pi, 10), ConfigError);
}

TEST(AbcWRatio, BetaOneIsNotTheAbcMultiplier) {
  const std::vector<double> radii = {1e-3, 1e-1, 1.0, 10.0, 1e3};
  const auto rows = abc_w_ratio(0.5, 1.0, 0.75 * pi, radii);
  ASSERT_EQ(rows.size(), radii.size());
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.ratio - 1.0));
  EXPECT_GT(worst, 0.1);
  // K^W(1) = 1 / (2 - alpha) while K^ABC(1) = 1
  const auto one = abc_w_ratio(0.5, 1.0, 0.0 + 1e-300, std::vector<double>{1.0});
  EXPECT_NEAR(std::abs(one[0].ratio), 1.0 / 1.5, 1e-12);
}
