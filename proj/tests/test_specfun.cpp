#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eqcircle/specfun.hpp"

using namespace eqcircle;

namespace {

// Direct power series Σ_k (z/2)^{2k+n} / (k!(k+n)!), summed to 60 terms.
double series_oracle(int n, double z) {
  double term = std::pow(0.5 * z, n) / std::tgamma(n + 1.0);
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= 0.25 * z * z / (double(k) * double(k + n));
    sum += term;
  }
  return sum;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

} // namespace

TEST(BesselI, ZeroArgument) {
  EXPECT_EQ(bessel_i(0, 0.0), 1.0);
  EXPECT_EQ(bessel_i(1, 0.0), 0.0);
  EXPECT_EQ(bessel_i(4, 0.0), 0.0);
}

TEST(BesselI, OrderZeroAtOneMatchesSeriesAndFrozenValue) {
  const double oracle = series_oracle(0, 1.0);
  EXPECT_LT(rel(oracle, 1.2660658777520083), 2e-16);
  EXPECT_LT(rel(bessel_i(0, 1.0), oracle), 1e-15);
}

TEST(BesselI, FrozenValuesAcrossBothRegimes) {
  struct Case { int n; double z; double scaled; };
  // e^{-z} I_n(z), 40-digit reference values
  const Case cases[] = {
      {0, 1.0, 0.46575960759364043650}, {1, 1.0, 0.20791041534970844887}, {3, 2.5, 0.038938694351763360313},
      {0, 14.9, 0.10425387282429125373}, {0, 15.0, 0.10389953144882272143}, {5, 15.0, 0.044224913705889897873},
      {2, 40.0, 0.060154168421513227225}, {10, 100.0, 0.024176682718258828365}, {7, 300.0, 0.021232719022780372325},
      {0, 700.0, 0.015081295651531357587},
  };
  for (const auto& c : cases) {
    EXPECT_LT(rel(bessel_i_scaled(c.n, c.z), c.scaled), 1e-12) << "n=" << c.n << " z=" << c.z;
    EXPECT_LT(rel(bessel_i(c.n, c.z), c.scaled * std::exp(c.z)), 1e-12) << "n=" << c.n << " z=" << c.z;
  }
}

TEST(BesselI, SeriesOracleAgreementBelowSwitch) {
  for (int n = 0; n <= 6; ++n)
    for (double z : {0.1, 0.5, 2.0, 7.5, 12.0})
      EXPECT_LT(rel(bessel_i(n, z), series_oracle(n, z)), 1e-13) << n << " " << z;
}

TEST(BesselI, ContinuousAcrossRegimeSwitch) {
  for (int n = 0; n <= 4; ++n) {
    const double below = bessel_i_scaled(n, std::nextafter(15.0, 0.0));
    const double at = bessel_i_scaled(n, 15.0);
    EXPECT_LT(rel(below, at), 1e-13);
  }
}

TEST(BesselI, ScaledSequenceMatchesPointwise) {
  const auto seq = bessel_i_scaled_sequence(12, 33.0);
  ASSERT_EQ(seq.size(), 13u);
  for (int n = 0; n <= 12; ++n) EXPECT_LT(rel(seq[n], bessel_i_scaled(n, 33.0)), 1e-14);
}

TEST(BesselI, Errors) {
  EXPECT_THROW(bessel_i(0, -1.0), DomainError);
  EXPECT_THROW(bessel_i(-1, 1.0), DomainError);
  EXPECT_THROW(bessel_i(0, 800.0), DomainError);
  EXPECT_NO_THROW(bessel_i_scaled(0, 800.0));
  EXPECT_THROW(bessel_i_ratio(1, 0.0), DomainError);
  EXPECT_THROW(bessel_i_ratio(1, -2.0), DomainError);
}

TEST(BesselRatio, OrderZeroIsOne) {
  for (double z : {1e-3, 0.5, 3.0, 40.0, 1e5}) EXPECT_EQ(bessel_i_ratio(0, z), 1.0);
}

TEST(BesselRatio, QuadratureOracle) {
  const QuadratureGrid grid(64);
  const double num = integrate_periodic([](double t) { return std::cos(t) * std::exp(2.0 * std::cos(t)); }, grid);
  const double den = integrate_periodic([](double t) { return std::exp(2.0 * std::cos(t)); }, grid);
  EXPECT_NEAR(bessel_i_ratio(1, 2.0), num / den, 1e-14);
  EXPECT_NEAR(bessel_i_ratio(1, 2.0), 0.69777465796400798201, 1e-15);
}

TEST(BesselRatio, LargeArgumentAsymptotic) {
  EXPECT_NEAR(bessel_i_ratio(1, 1e4), 1.0 - 1.0 / 2e4, 1e-6);
  EXPECT_NEAR(bessel_i_ratio(1, 1e4), 0.99994999874987498046, 1e-14);
  EXPECT_NEAR(bessel_i_ratio(3, 50.0), 0.91311680407410894540, 1e-14);
}

TEST(BesselRatio, MonotoneInOrderAndArgument) {
  const double zs[] = {0.2, 1.0, 5.0, 14.0, 16.0, 60.0, 400.0, 3000.0};
  for (double z : zs) {
    double prev = 1.0;
    for (int n = 1; n <= 12; ++n) {
      const double r = bessel_i_ratio(n, z);
      EXPECT_GE(r, 0.0);
      EXPECT_LT(r, prev) << "n=" << n << " z=" << z;
      prev = r;
    }
  }
  for (int n = 1; n <= 6; ++n) {
    double prev = 0.0;
    for (double z : zs) {
      const double r = bessel_i_ratio(n, z);
      EXPECT_GT(r, prev) << "n=" << n << " z=" << z;
      prev = r;
    }
  }
}

TEST(BesselAddition, PartialSumsApproachI0Of2z) {
  for (double z : {0.3, 1.0, 4.0, 15.0, 27.0, 50.0}) {
    const auto seq = bessel_i_scaled_sequence(200, z);
    const double target = bessel_i_scaled(0, 2.0 * z);  // e^{-2z} I_0(2z)
    double sum = seq[0] * seq[0];
    double prev_gap = target - sum;
    EXPECT_GE(prev_gap, -1e-15);
    for (int n = 1; n <= 200; ++n) {
      sum += 2.0 * seq[n] * seq[n];
      const double gap = target - sum;
      EXPECT_GE(gap, -1e-14 * target) << "z=" << z << " n=" << n;
      EXPECT_LE(gap, prev_gap + 1e-17);
      prev_gap = gap;
    }
    EXPECT_LT(std::abs(prev_gap) / target, 1e-13) << "z=" << z;
  }
}

TEST(SinPi, ExactAtIntegersAndSinc) {
  for (int k = -5; k <= 5; ++k) EXPECT_EQ(sin_pi(double(k)), 0.0);
  EXPECT_NEAR(sin_pi(0.5), 1.0, 1e-16);
  EXPECT_NEAR(sin_pi(-2.5), -1.0, 1e-16);
  EXPECT_EQ(sinc(0.0), 1.0);
  EXPECT_EQ(sinc(3.0), 0.0);
  EXPECT_NEAR(sinc(0.5), 2.0 / pi, 1e-16);
}

TEST(QuadratureGrid, Layout) {
  const QuadratureGrid g(16);
  EXPECT_EQ(g.size(), 16u);
  EXPECT_DOUBLE_EQ(g.node(0), -pi);
  EXPECT_NEAR(g.node(8), 0.0, 1e-15);
  EXPECT_NEAR(g.weight() * g.size(), two_pi, 1e-15);
  EXPECT_EQ(g.refined().size(), 32u);
  EXPECT_EQ(QuadratureGrid().size(), 512u);
  EXPECT_THROW(QuadratureGrid(15), DomainError);
  EXPECT_THROW(QuadratureGrid(8), DomainError);
}

TEST(IntegratePeriodic, TrivialCases) {
  const QuadratureGrid g(16);
  EXPECT_NEAR(integrate_periodic([](double) { return 1.0; }, g), two_pi, 1e-14);
  EXPECT_NEAR(std::abs(integrate_periodic([](double t) { return std::cos(t); }, g)), 0.0, 1e-15);
}

TEST(IntegratePeriodic, ExponentialOfCosine) {
  const QuadratureGrid g(64);
  const complex v = integrate_periodic([](double t) { return std::exp(2.0 * std::cos(t)); }, g);
  EXPECT_NEAR(v.real(), two_pi * series_oracle(0, 2.0), 1e-12);
}

TEST(IntegratePeriodic, ExactForTrigPolynomialsBelowHalfNodes) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t M : {16u, 32u, 64u}) {
    const QuadratureGrid g(M);
    const int degree = int(M) / 2 - 1;
    std::vector<complex> c(2 * degree + 1);
    for (auto& x : c) x = {u(rng), u(rng)};
    const auto f = [&](double t) {
      complex s{};
      for (int k = -degree; k <= degree; ++k) s += c[k + degree] * std::polar(1.0, k * t);
      return s;
    };
    EXPECT_LT(std::abs(integrate_periodic(f, g) - two_pi * c[degree]), 1e-13) << "M=" << M;
  }
}

TEST(IntegratePeriodic, ConvergesUnderDoubling) {
  const auto f = [](double t) { return std::exp(5.0 * std::cos(t)) * std::cos(3.0 * t); };
  const double exact = two_pi * series_oracle(3, 5.0);
  const double coarse = std::abs(integrate_periodic(f, QuadratureGrid(16)) - exact);
  const double fine = std::abs(integrate_periodic(f, QuadratureGrid(32)) - exact);
  EXPECT_GT(coarse, 1e-8);
  EXPECT_LT(fine, 1e-11 * exact);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto rule = gauss_legendre(16);
  ASSERT_EQ(rule.nodes.size(), 16u);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  EXPECT_NEAR(wsum, 2.0, 1e-14);
  for (int k = 0; k <= 31; ++k) {
    const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(rule.integrate([k](double x) { return std::pow(x, k); }), exact, 1e-14) << k;
  }
  const auto one = gauss_legendre(1);
  EXPECT_EQ(one.nodes[0], 0.0);
  EXPECT_EQ(one.weights[0], 2.0);
}

TEST(GaussLegendre, CompositeRule) {
  const auto rule = composite_gauss_legendre(-3.0, 5.0, 7);
  EXPECT_EQ(rule.nodes.size(), 7u * 16u);
  EXPECT_NEAR(rule.integrate([](double x) { return std::exp(x); }), std::exp(5.0) - std::exp(-3.0), 1e-11);
}
