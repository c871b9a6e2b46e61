#include "curvfun/randpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace curvfun {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vec propose(int dim, std::mt19937_64& rng) {
  const double a = 2.0 * std::numbers::pi * uniform01(rng);
  if (dim == 2) return Vec(std::cos(a), std::sin(a), 0.0);
  const double z = 2.0 * uniform01(rng) - 1.0;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Vec(r * std::cos(a), r * std::sin(a), z);
}

}  // namespace

BoundaryDensity::BoundaryDensity(const SupportBody& body, const WeightIndex& index, double p, const SphereRule& rule,
                                 double envelope_factor)
    : body_(body), index_(index), p_(p), rule_(rule), field_(body, rule) {
  if (index.dim() != body.dim()) throw DomainError("index dimension does not match body dimension");
  if (rule.dim != body.dim()) throw DomainError("rule dimension does not match body dimension");
  check_p(body.dim(), p);
  if (!(envelope_factor >= 1.0)) throw DomainError("envelope factor must be at least 1");
  const int n = body.dim();
  const auto& pts = field_.points();
  node_f_.resize(pts.size());
  double peak = 0.0;
  for (std::size_t l = 0; l < pts.size(); ++l) {
    node_f_[l] = value(pts[l]);
    peak = std::max(peak, node_f_[l] * pts[l].s[static_cast<std::size_t>(n - 1)]);
  }
  Z_ = field_.integrate([&](const CurvaturePoint& cp) { return value(cp) * cp.s[static_cast<std::size_t>(n - 1)]; });
  envelope_ = peak * envelope_factor;
  if (!(Z_ > 0.0)) throw DomainError("density normalizer is not positive");
}

double BoundaryDensity::value(const CurvaturePoint& cp) const {
  const int n = dim();
  const double half = 0.5 * (n - 1);
  double a_gauss;
  double a_h;
  if (std::isinf(p_)) {
    a_gauss = (2.0 - n) / 2.0;
    a_h = (n + index_.k() - index_.m()) * half;
  } else {
    a_gauss = (2.0 * p_ + n * (1.0 - p_)) / (2.0 * (n + p_));
    a_h = (n * (p_ - 1.0) / (n + p_) + index_.k() - index_.m()) * half;
  }
  double log_weight = std::log(index_.c_n());
  for (int j = 1; j <= n - 1; ++j) {
    const int ij = index_.i()[static_cast<std::size_t>(j - 1)];
    if (ij != 0) log_weight += ij * std::log(cp.H[static_cast<std::size_t>(j)]);
  }
  return std::exp(a_gauss * std::log(cp.H[static_cast<std::size_t>(n - 1)]) - half * log_weight +
                  a_h * std::log(cp.h));
}

double BoundaryDensity::target(const Vec& u) const {
  const CurvaturePoint cp = curvature_at(body_, u);
  return value(cp) * cp.s[static_cast<std::size_t>(dim() - 1)];
}

double BoundaryDensity::bookkeeping_integral() const {
  const int n = dim();
  const double e = 1.0 / (n - 1);
  return field_.integrate([&](const CurvaturePoint& cp) {
    const double gauss = cp.H[static_cast<std::size_t>(n - 1)];
    return std::exp(e * std::log(gauss) - 2.0 * e * std::log(value(cp))) * cp.s[static_cast<std::size_t>(n - 1)];
  });
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(trial + 0x632be59bd9b4e019ULL)));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

BoundarySample sample_boundary(const BoundaryDensity& density, std::size_t count, std::mt19937_64& rng) {
  const int n = density.dim();
  BoundarySample out;
  out.points.reserve(count);
  out.normals.reserve(count);
  const double env = density.envelope();
  while (out.points.size() < count) {
    const Vec u = propose(n, rng);
    const double coin = uniform01(rng);
    ++out.proposals;
    const CurvaturePoint cp = curvature_at(density.body(), u);
    const double t = density.value(cp) * cp.s[static_cast<std::size_t>(n - 1)];
    if (t > env) {
      throw Error("rejection envelope exceeded at u = " + format_vec(u, n) + " (target " + std::to_string(t) +
                  " > envelope " + std::to_string(env) + ")");
    }
    if (coin * env < t) {
      out.points.push_back(cp.x);
      out.normals.push_back(u);
    }
  }
  return out;
}

BoundarySample sample_boundary(const BoundaryDensity& density, std::size_t count, std::uint64_t seed) {
  auto rng = trial_engine(seed, 0);
  return sample_boundary(density, count, rng);
}

DeficitEstimate expected_deficit(const BoundaryDensity& density, std::size_t N, std::size_t trials,
                                 std::uint64_t seed, Execution exec) {
  const int n = density.dim();
  if (N < static_cast<std::size_t>(n + 1)) throw DomainError("N must be at least n + 1");
  if (trials < 2) throw DomainError("at least two trials are needed");
  const double vol = body_volume(density.body(), density.rule());
  struct Trial {
    double deficit = 0.0;
    bool degenerate = false;
  };
  const auto results = map_nodes<Trial>(
      trials,
      [&](std::size_t t) {
        auto rng = trial_engine(seed, t);
        const BoundarySample s = sample_boundary(density, N, rng);
        const HullVolume hv = hull_volume(s.points, n);
        return Trial{vol - hv.volume, hv.degenerate};
      },
      exec);
  CompensatedSum sum;
  DeficitEstimate est;
  est.N = N;
  est.trials = trials;
  for (const Trial& r : results) {
    sum.add(r.deficit);
    if (r.degenerate) ++est.degenerate_hulls;
  }
  est.mean = sum.value() / static_cast<double>(trials);
  CompensatedSum sq;
  for (const Trial& r : results) sq.add((r.deficit - est.mean) * (r.deficit - est.mean));
  const double var = sq.value() / static_cast<double>(trials - 1);
  est.stderr_ = std::sqrt(var / static_cast<double>(trials));
  est.scaled = std::pow(static_cast<double>(N), 2.0 / (n - 1)) * est.mean;
  return est;
}

double random_polytope_constant(int dim) {
  if (dim != 2 && dim != 3) throw DomainError("random polytope constant needs dim 2 or 3");
  const double n = dim;
  const double sphere = dim == 2 ? 2.0 : 2.0 * std::numbers::pi;  // vol_{n-2}(S^{n-2})
  const double factorial = std::tgamma(n + 2.0);
  return std::pow(n - 1.0, (n + 1.0) / (n - 1.0)) * std::tgamma(n + 1.0 + 2.0 / (n - 1.0)) /
         (2.0 * factorial * std::pow(sphere, 2.0 / (n - 1.0)));
}

double fit_intercept(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit needs at least two matching samples");
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) sx += x[j], sy += y[j];
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    sxx += (x[j] - mx) * (x[j] - mx);
    sxy += (x[j] - mx) * (y[j] - my);
  }
  if (sxx == 0.0) throw DomainError("fit abscissae must not all coincide");
  return my - (sxy / sxx) * mx;
}

InterpretationReport interpretation_check(const BoundaryDensity& density, const std::vector<std::size_t>& N_schedule,
                                          std::size_t trials, std::uint64_t seed, Execution exec) {
  if (N_schedule.size() < 3) throw DomainError("N schedule needs at least 3 entries to extrapolate");
  for (std::size_t j = 1; j < N_schedule.size(); ++j)
    if (!(N_schedule[j] > N_schedule[j - 1])) throw DomainError("N schedule must be increasing");
  const int n = density.dim();
  InterpretationReport rep;
  rep.informational = n == 3;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t N : N_schedule) {
    // Same seed for every N: common random numbers reduce the variance of the fit.
    rep.estimates.push_back(expected_deficit(density, N, trials, seed, exec));
    xs.push_back(1.0 / static_cast<double>(N));
    ys.push_back(rep.estimates.back().scaled);
  }
  rep.extrapolated = fit_intercept(xs, ys);
  rep.constant = random_polytope_constant(n);
  rep.normalizer = density.normalizer();
  rep.omega = weighted_asa(density.body(), density.index(), density.p(), density.rule()).value;
  rep.target = rep.constant * std::pow(rep.normalizer, 2.0 / (n - 1)) * rep.omega;
  rep.ratio = rep.extrapolated / rep.target;
  rep.relative_error = std::abs(rep.ratio - 1.0);
  return rep;
}

}  // namespace curvfun
