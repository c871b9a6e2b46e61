#pragma once

#include "curvfun/functionals.hpp"
#include "curvfun/hull.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace curvfun {

/// Sampling density on the boundary attached to (index, p):
///   f = H_{n-1}^{(2p+n(1-p))/(2(n+p))} [c_n prod_j H_j^{i_j}]^{-(n-1)/2}
///       h^{(n(p-1)/(n+p)+k-m)(n-1)/2}
/// (p = infinity takes the limiting exponents). Z = int f dH^{n-1}.
class BoundaryDensity {
 public:
  /// Tabulates f on the rule, computes Z and the rejection envelope
  /// (max of f s_{n-1} over the nodes times envelope_factor).
  BoundaryDensity(const SupportBody& body, const WeightIndex& index, double p, const SphereRule& rule,
                  double envelope_factor = 1.1);

  const SupportBody& body() const { return body_; }
  const WeightIndex& index() const { return index_; }
  double p() const { return p_; }
  int dim() const { return body_.dim(); }
  double normalizer() const { return Z_; }
  double envelope() const { return envelope_; }
  const std::vector<double>& node_values() const { return node_f_; }
  const SphereRule& rule() const { return rule_; }

  /// Unnormalized f at the boundary point with the given curvature data.
  double value(const CurvaturePoint& cp) const;
  /// Sphere-side target f(xi(u)) s_{n-1}(u).
  double target(const Vec& u) const;
  /// int H_{n-1}^{1/(n-1)} f^{-2/(n-1)} dH^{n-1}; equals omega^p.
  double bookkeeping_integral() const;

 private:
  SupportBody body_;
  WeightIndex index_;
  double p_;
  SphereRule rule_;
  CurvatureField field_;
  std::vector<double> node_f_;
  double Z_ = 0.0;
  double envelope_ = 0.0;
};

struct BoundarySample {
  std::vector<Vec> points;   // boundary points xi(u)
  std::vector<Vec> normals;  // accepted directions u
  std::size_t proposals = 0;
};

/// Generator for trial t of a run seeded with seed; streams of distinct
/// (seed, trial) pairs are decorrelated through a SplitMix64 mix.
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial);
/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng);

/// count i.i.d. draws from f/Z on the boundary by rejection against
/// uniform directions. Throws Error naming u if the target exceeds the
/// envelope.
BoundarySample sample_boundary(const BoundaryDensity& density, std::size_t count, std::mt19937_64& rng);
BoundarySample sample_boundary(const BoundaryDensity& density, std::size_t count, std::uint64_t seed);

struct DeficitEstimate {
  std::size_t N = 0;
  std::size_t trials = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double scaled = 0.0;  // N^{2/(n-1)} mean
  std::size_t degenerate_hulls = 0;
};

/// Monte Carlo estimate of vol(K) - E vol(hull of N samples). Trial t uses
/// trial_engine(seed, t); the parallel path distributes trials and
/// accumulates in trial order.
DeficitEstimate expected_deficit(const BoundaryDensity& density, std::size_t N, std::size_t trials,
                                 std::uint64_t seed, Execution exec = Execution::parallel);

/// (n-1)^{(n+1)/(n-1)} Gamma(n+1+2/(n-1)) / (2 (n+1)! vol_{n-2}(S^{n-2})^{2/(n-1)}).
double random_polytope_constant(int dim);

/// Least-squares fit of y = A + B x; returns A.
double fit_intercept(const std::vector<double>& x, const std::vector<double>& y);

struct InterpretationReport {
  std::vector<DeficitEstimate> estimates;
  double extrapolated = 0.0;
  double target = 0.0;      // c_n Z^{2/(n-1)} omega^p
  double constant = 0.0;    // c_n
  double normalizer = 0.0;  // Z
  double omega = 0.0;       // omega^p
  double ratio = 0.0;       // extrapolated / target
  double relative_error = 0.0;
  bool informational = false;  // dim 3
};

/// Scaled deficits along N_schedule (increasing, at least 3 entries),
/// extrapolated to N -> inf by a fit in 1/N, against the limit target.
InterpretationReport interpretation_check(const BoundaryDensity& density, const std::vector<std::size_t>& N_schedule,
                                          std::size_t trials, std::uint64_t seed,
                                          Execution exec = Execution::parallel);

}  // namespace curvfun
