#include "curvfun/quadrature.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

using namespace curvfun;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(GaussLegendre, ExactForDegreeTwoNMinusOne) {
  std::vector<double> x, w;
  gauss_legendre(12, x, w);
  for (int d = 0; d <= 23; ++d) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * std::pow(x[j], d);
    const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
    EXPECT_NEAR(s, exact, 1e-14) << "degree " << d;
  }
  EXPECT_TRUE(std::is_sorted(x.begin(), x.end()));
}

TEST(SphereRule, WeightsSumToArea) {
  const auto c = circle_rule(64);
  const auto s = sphere_rule(16, 32);
  double wc = 0.0, ws = 0.0;
  for (double w : c.weights) wc += w;
  for (double w : s.weights) ws += w;
  EXPECT_NEAR(wc, 2 * kPi, 1e-13);
  EXPECT_NEAR(ws, 4 * kPi, 1e-13);
  EXPECT_EQ(sphere_area(2), 2 * kPi);
  EXPECT_EQ(sphere_area(3), 4 * kPi);
}

TEST(SphereRule, NodesAreUnitAndPlanarInTwoD) {
  for (const Vec& u : circle_rule(32).nodes) {
    EXPECT_NEAR(u.norm(), 1.0, 1e-15);
    EXPECT_EQ(u.z(), 0.0);
  }
  for (const Vec& u : sphere_rule(8, 16).nodes) EXPECT_NEAR(u.norm(), 1.0, 1e-15);
}

TEST(SphereRule, IntegratesLowDegreePolynomials) {
  const auto s = default_rule(3);
  EXPECT_NEAR(integrate(s, [](const Vec& u) { return u.x() * u.x(); }), 4 * kPi / 3, 1e-13);
  EXPECT_NEAR(integrate(s, [](const Vec& u) { return std::pow(u.z(), 4) * u.y() * u.y(); }), 4 * kPi / 35, 1e-13);
  const auto c = default_rule(2);
  EXPECT_NEAR(integrate(c, [](const Vec& u) { return std::pow(u.x(), 6); }), 2 * kPi * 5.0 / 16.0, 1e-13);
}

TEST(SphereRule, DescribeAndParseRoundTrip) {
  EXPECT_EQ(default_rule(2).describe(), "512");
  EXPECT_EQ(default_rule(3).describe(), "64x128");
  EXPECT_EQ(parse_rule("256", 2).size(), 256u);
  EXPECT_EQ(parse_rule("32x64", 3).size(), 32u * 64u);
  EXPECT_EQ(parse_rule(default_rule(3).describe(), 3).size(), default_rule(3).size());
}

TEST(SphereRule, RejectsBadSpecs) {
  EXPECT_THROW(parse_rule("4", 2), DomainError);
  EXPECT_THROW(parse_rule("32x64", 2), DomainError);
  EXPECT_THROW(parse_rule("512", 3), DomainError);
  EXPECT_THROW(parse_rule("4x64", 3), DomainError);
  EXPECT_THROW(parse_rule("abc", 2), DomainError);
  EXPECT_THROW(circle_rule(2), DomainError);
}

TEST(CompensatedSum, RecoversCancelledTerms) {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  EXPECT_EQ(s.value(), 2.0);
}

TEST(WeightedSum, NamesNonFiniteNode) {
  const auto rule = circle_rule(8);
  std::vector<double> v(8, 1.0);
  v[5] = std::numeric_limits<double>::quiet_NaN();
  try {
    weighted_sum(rule, v);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("5"), std::string::npos);
  }
}

TEST(MapNodes, ParallelMatchesSerialBitwise) {
  omp_set_num_threads(4);
  const auto rule = default_rule(3);
  auto f = [](const Vec& u) { return std::exp(u.x()) * std::cos(3 * u.y()) + u.z() * u.z(); };
  EXPECT_EQ(integrate(rule, f, Execution::serial), integrate(rule, f, Execution::parallel));
}

TEST(MapNodes, RethrowsLowestIndexFailure) {
  omp_set_num_threads(4);
  auto f = [](std::size_t l) -> int {
    if (l == 17 || l == 900) throw std::runtime_error("node " + std::to_string(l));
    return 0;
  };
  for (auto exec : {Execution::serial, Execution::parallel}) {
    try {
      map_nodes<int>(1000, f, exec);
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "node 17");
    }
  }
}
