#pragma once

#include "curvfun/geometry.hpp"

#include <limits>
#include <string>
#include <vector>

namespace curvfun {

/// p = +infinity selects the limiting integrand (the weighted polar volume)
/// instead of a large finite exponent.
inline constexpr double kPInfinity = std::numeric_limits<double>::infinity();

/// The weight triple (m, k, i) of a weighted affine surface area.
/// i holds i_1..i_{n-1}; the constraint i_1 + 2 i_2 + ... = m is enforced
/// at construction. k may be any real number.
class WeightIndex {
 public:
  WeightIndex() = default;
  /// Throws DomainError when the multiplicity constraint fails, an entry is
  /// negative, or i has the wrong length for dim.
  WeightIndex(int dim, int m, double k, std::vector<int> i);

  static WeightIndex zero(int dim) { return WeightIndex(dim, 0, 0.0, std::vector<int>(static_cast<std::size_t>(dim - 1), 0)); }

  int dim() const { return dim_; }
  int m() const { return m_; }
  double k() const { return k_; }
  const std::vector<int>& i() const { return i_; }
  /// c(n) = prod_j C(n-1, j)^{i_j}
  double c_n() const { return c_n_; }
  int total_i() const;
  WeightIndex with_k(double k) const;
  std::string describe() const;

 private:
  int dim_ = 2;
  int m_ = 0;
  double k_ = 0.0;
  std::vector<int> i_{0};
  double c_n_ = 1.0;
};

struct FunctionalValue {
  double value = 0.0;
  double p = 0.0;
  WeightIndex index;
  std::string rule;
  std::string body_id;
};

/// Rejects p = -n (DomainError).
void check_p(int dim, double p);

/// omega^p_{m,k,i}(K) via the sphere-side integrand
///   c_n s_{n-1}^{n/(n+p) - sum i} prod_j s_{n-1-j}^{i_j} h^{m-k-n(p-1)/(n+p)}.
FunctionalValue weighted_asa(const CurvatureField& field, const WeightIndex& index, double p,
                             Execution exec = Execution::parallel);
FunctionalValue weighted_asa(const SupportBody& body, const WeightIndex& index, double p, const SphereRule& rule);

/// Unweighted L_p affine surface area (zero index).
FunctionalValue asa(const CurvatureField& field, double p);
FunctionalValue asa(const SupportBody& body, double p, const SphereRule& rule);

/// omega^0 / n.
double weighted_volume(const CurvatureField& field, const WeightIndex& index);
/// omega^infinity / n.
double weighted_polar_volume(const CurvatureField& field, const WeightIndex& index);

/// Scaling exponent q = n(n-p)/(n+p) - k, so omega(aK) = a^q omega(K).
double homogeneity_degree(int dim, double p, double k);

/// f_p(K, u) = (f_K(u) / h_K(u)^{p-1})^{n/(n+p)} with f_K = s_{n-1}.
double lutwak_density(const SupportBody& body, double p, const Vec& u);

/// Sphere-side integrand of weighted_asa at one point; exposed for kernels
/// that need the per-node values.
double weighted_asa_integrand(const CurvaturePoint& cp, const WeightIndex& index, double p);

}  // namespace curvfun
