#include "curvfun/randpoly.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace curvfun;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kFourPiCubed = 124.025106721199280701905260268;
}  // namespace

TEST(Hull, Square) {
  std::vector<Vec> pts = {Vec(1, 1, 0), Vec(-1, 1, 0), Vec(-1, -1, 0), Vec(1, -1, 0), Vec(0.2, 0.3, 0), Vec(1, 0, 0)};
  const auto h = hull_volume(pts, 2);
  EXPECT_NEAR(h.volume, 4.0, 1e-15);
  EXPECT_EQ(h.vertices, 4u);
  EXPECT_FALSE(h.degenerate);
}

TEST(Hull, SimplexAndCube) {
  std::vector<Vec> s = {Vec(0, 0, 0), Vec(1, 0, 0), Vec(0, 1, 0), Vec(0, 0, 1)};
  EXPECT_NEAR(hull_volume(s, 3).volume, 1.0 / 6.0, 1e-15);
  std::vector<Vec> cube;
  for (int i = 0; i < 8; ++i) cube.emplace_back(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) cube.emplace_back(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1);
  std::shuffle(cube.begin(), cube.end(), rng);
  const auto h = hull_volume(cube, 3);
  EXPECT_NEAR(h.volume, 8.0, 1e-12);
  EXPECT_EQ(h.vertices, 8u);
}

TEST(Hull, Degenerate) {
  const auto line = hull_volume({Vec(0, 0, 0), Vec(1, 1, 0), Vec(2, 2, 0), Vec(3, 3, 0)}, 2);
  EXPECT_TRUE(line.degenerate);
  EXPECT_EQ(line.volume, 0.0);
  const auto plane = hull_volume({Vec(0, 0, 0), Vec(1, 0, 0), Vec(0, 1, 0), Vec(1, 1, 0), Vec(0.5, 0.2, 0)}, 3);
  EXPECT_TRUE(plane.degenerate);
  EXPECT_TRUE(hull_volume({Vec(0, 0, 0), Vec(1, 0, 0)}, 2).degenerate);
  EXPECT_THROW(hull_volume({}, 4), DomainError);
}

TEST(Hull, PointsOnCircleAndSphere) {
  std::mt19937_64 rng(11);
  std::vector<Vec> c;
  for (int i = 0; i < 1000; ++i) {
    const double t = 2 * kPi * uniform01(rng);
    c.emplace_back(std::cos(t), std::sin(t), 0);
  }
  const double a = hull_volume(c, 2).volume;
  EXPECT_LT(a, kPi);
  EXPECT_GT(a, 3.0);
  std::vector<Vec> s;
  for (int i = 0; i < 2000; ++i) {
    const double z = 2 * uniform01(rng) - 1, t = 2 * kPi * uniform01(rng), r = std::sqrt(1 - z * z);
    s.emplace_back(r * std::cos(t), r * std::sin(t), z);
  }
  const auto h = hull_volume(s, 3);
  EXPECT_LT(h.volume, 4 * kPi / 3);
  EXPECT_GT(h.volume, 0.98 * 4 * kPi / 3);
  EXPECT_EQ(h.vertices, 2000u);
}

TEST(RandPoly, Constants) {
  EXPECT_NEAR(random_polytope_constant(2), 0.5, 1e-15);
  EXPECT_NEAR(random_polytope_constant(3), 1.0 / kPi, 1e-15);
  EXPECT_THROW(random_polytope_constant(4), DomainError);
  EXPECT_NEAR(fit_intercept({1, 2, 3}, {5, 7, 9}), 3.0, 1e-14);
}

TEST(RandPoly, BookkeepingIdentity) {
  const auto b = make_perturbed_ball(3, 2, 0.08);
  for (const auto& [idx, p] : std::vector<std::pair<WeightIndex, double>>{
           {WeightIndex::zero(3), 1.0}, {WeightIndex(3, 2, 1.0, {0, 1}), -1.0}, {WeightIndex(3, 1, 0.0, {1, 0}), kPInfinity}}) {
    const BoundaryDensity d(b, idx, p, default_rule(3));
    EXPECT_NEAR(d.bookkeeping_integral(), weighted_asa(b, idx, p, default_rule(3)).value, 1e-12);
  }
}

TEST(RandPoly, UniformDensityOnDiskTarget) {
  const BoundaryDensity d(make_ball(2, 1.0), WeightIndex::zero(2), 1.0, default_rule(2));
  EXPECT_NEAR(d.normalizer(), 2 * kPi, 1e-13);
  const double target = random_polytope_constant(2) * d.normalizer() * d.normalizer() * asa(make_ball(2, 1.0), 1.0, default_rule(2)).value;
  EXPECT_NEAR(target, kFourPiCubed, 1e-11);
  // Any index gives a constant density on the ball.
  const BoundaryDensity e(make_ball(2, 1.0), WeightIndex(2, 2, 1.0, {2}), -1.0, default_rule(2));
  const auto& v = e.node_values();
  EXPECT_NEAR(*std::max_element(v.begin(), v.end()), *std::min_element(v.begin(), v.end()), 1e-13);
}

TEST(RandPoly, SampleMeanTendsToZeroOnBall) {
  const BoundaryDensity d(make_ball(3, 1.0), WeightIndex::zero(3), 1.0, default_rule(3));
  const std::size_t count = 20000;
  const auto s = sample_boundary(d, count, std::uint64_t{5});
  Vec mean = Vec::Zero();
  for (const Vec& x : s.points) mean += x;
  mean /= static_cast<double>(count);
  EXPECT_LT(mean.norm(), 4.0 / std::sqrt(static_cast<double>(count)));
}

TEST(RandPoly, PolarAngleKolmogorovSmirnov) {
  // Uniform on S^2: z = cos(theta) is uniform on [-1, 1].
  const BoundaryDensity d(make_ball(3, 1.0), WeightIndex::zero(3), 1.0, default_rule(3));
  const std::size_t count = 100000;
  auto s = sample_boundary(d, count, std::uint64_t{17});
  std::vector<double> z;
  for (const Vec& x : s.points) z.push_back(x.z());
  std::sort(z.begin(), z.end());
  double D = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double F = (z[j] + 1) / 2;
    D = std::max({D, F - static_cast<double>(j) / count, static_cast<double>(j + 1) / count - F});
  }
  EXPECT_LT(D * std::sqrt(static_cast<double>(count)), 1.628);  // 1% critical value
}

TEST(RandPoly, AcceptanceRateMatchesTargetAverage) {
  const BoundaryDensity d(make_ellipsoid_axes(2, {2.0, 1.0}), WeightIndex::zero(2), 1.0, default_rule(2));
  const std::size_t count = 50000;
  const auto s = sample_boundary(d, count, std::uint64_t{23});
  const double rate = static_cast<double>(count) / static_cast<double>(s.proposals);
  const double expected = d.normalizer() / (2 * kPi) / d.envelope();
  const double se = std::sqrt(expected * (1 - expected) / static_cast<double>(s.proposals));
  EXPECT_LT(std::abs(rate - expected), 2 * se);
}

TEST(RandPoly, EnvelopeViolationAborts) {
  // Peaks sit at odd multiples of 45 degrees, between the 60-degree nodes,
  // so a unit safety factor is too small.
  const BoundaryDensity d(make_perturbed_ball(2, 4, 0.05), WeightIndex::zero(2), 1.0, circle_rule(6), 1.0);
  try {
    sample_boundary(d, 5000, std::uint64_t{1});
    FAIL() << "expected envelope violation";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("u = "), std::string::npos);
  }
}

TEST(RandPoly, DeficitBasics) {
  const BoundaryDensity d(make_ball(2, 1.0), WeightIndex::zero(2), 1.0, default_rule(2));
  const auto tiny = expected_deficit(d, 3, 2000, 9);
  EXPECT_GT(tiny.mean, 0.0);
  EXPECT_LT(tiny.mean, kPi);
  const auto a = expected_deficit(d, 50, 400, 9);
  const auto b = expected_deficit(d, 100, 400, 9);
  EXPECT_LT(b.mean + 3 * b.stderr_, a.mean);
  EXPECT_THROW(expected_deficit(d, 2, 10, 1), DomainError);
  EXPECT_THROW(expected_deficit(d, 10, 1, 1), DomainError);
}

TEST(RandPoly, StandardErrorScaling) {
  const BoundaryDensity d(make_ball(2, 1.0), WeightIndex::zero(2), 1.0, default_rule(2));
  const auto a = expected_deficit(d, 40, 1000, 4);
  const auto b = expected_deficit(d, 40, 4000, 4);
  const double ratio = a.stderr_ / b.stderr_;
  EXPECT_NEAR(ratio, 2.0, 0.3);
}

TEST(RandPoly, ParallelMatchesSerialBitwise) {
  omp_set_num_threads(4);
  const BoundaryDensity d(make_perturbed_ball(2, 3, 0.05), WeightIndex(2, 1, 0.0, {1}), 2.0, default_rule(2));
  const auto s = expected_deficit(d, 200, 64, 99, Execution::serial);
  const auto p = expected_deficit(d, 200, 64, 99, Execution::parallel);
  EXPECT_EQ(s.mean, p.mean);
  EXPECT_EQ(s.stderr_, p.stderr_);
  const auto q = expected_deficit(d, 200, 64, 100, Execution::parallel);
  EXPECT_NE(q.mean, p.mean);
}

TEST(RandPoly, ThreeDimensionalRunIsInformational) {
  const BoundaryDensity d(make_ball(3, 1.0), WeightIndex::zero(3), 1.0, sphere_rule(16, 32));
  const auto r = interpretation_check(d, {50, 100, 200}, 20, 1);
  EXPECT_TRUE(r.informational);
  EXPECT_GT(r.extrapolated, 0.0);
  EXPECT_THROW(interpretation_check(d, {50, 100}, 20, 1), DomainError);
}
