#pragma once

#include "curvfun/common.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace curvfun {

/// Quadrature nodes and weights on S^1 (dim 2) or S^2 (dim 3). Weights carry
/// surface-measure units, so they sum to the area of the sphere.
struct SphereRule {
  int dim = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  // Resolution metadata: (N, 0) for circles, (N_polar, N_azimuth) for spheres.
  int n_primary = 0;
  int n_secondary = 0;

  std::size_t size() const { return nodes.size(); }
  /// "512" or "64x128", the same form accepted by parse_rule.
  std::string describe() const;
};

/// N equally spaced angles with weights 2*pi/N (trapezoidal rule).
SphereRule circle_rule(int n);

/// Gauss-Legendre in cos(polar angle) times a uniform azimuth grid.
SphereRule sphere_rule(int n_polar, int n_azimuth);

/// Default resolution per dimension: 512 nodes on S^1, 64x128 on S^2.
SphereRule default_rule(int dim);

/// Parses "512" (dim 2) or "64x128" (dim 3). Throws DomainError when the
/// spec does not fit the dimension or is below the minimum resolution.
SphereRule parse_rule(const std::string& spec, int dim);

/// Gauss-Legendre nodes/weights on [-1, 1], ascending nodes.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Neumaier-compensated running sum; the result depends only on the order
/// of add() calls.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Sum of w_l * v_l in node order with compensated accumulation. Throws
/// Error naming the node when a value is not finite.
double weighted_sum(const SphereRule& rule, std::span<const double> values);

/// Evaluates f at every node (OpenMP over nodes when exec is parallel) and
/// accumulates with weighted_sum.
double integrate(const SphereRule& rule, const std::function<double(const Vec&)>& f,
                 Execution exec = Execution::parallel);

/// Evaluates f(0..count-1) into a vector. The parallel path runs the loop
/// under OpenMP; an exception thrown by f is rethrown after the loop (the
/// one from the lowest index, so the reported failure matches the serial
/// path).
template <class T, class F>
std::vector<T> map_nodes(std::size_t count, F&& f, Execution exec) {
  std::vector<T> out(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Execution::serial) {
    for (std::ptrdiff_t l = 0; l < n; ++l) out[static_cast<std::size_t>(l)] = f(static_cast<std::size_t>(l));
    return out;
  }
  std::exception_ptr failure;
  std::ptrdiff_t failed_at = n;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t l = 0; l < n; ++l) {
    try {
      out[static_cast<std::size_t>(l)] = f(static_cast<std::size_t>(l));
    } catch (...) {
#pragma omp critical(curvfun_map_nodes)
      {
        if (l < failed_at) {
          failed_at = l;
          failure = std::current_exception();
        }
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Surface area of S^{n-1}: 2*pi for n = 2, 4*pi for n = 3.
double sphere_area(int dim);

}  // namespace curvfun
