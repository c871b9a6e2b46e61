#pragma once

#include "curvfun/common.hpp"
#include "curvfun/quadrature.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace curvfun {

/// Value, ambient gradient and ambient hessian of the 1-homogeneous
/// extension of a support function, evaluated at a unit direction.
struct SupportJet {
  double value = 0.0;
  Vec gradient = Vec::Zero();
  Mat hessian = Mat::Zero();
};

/// Analytic derivative oracle for a support function. Implementations are
/// immutable and thread-safe.
class SupportOracle {
 public:
  virtual ~SupportOracle() = default;
  virtual int dim() const = 0;
  virtual SupportJet jet(const Vec& u) const = 0;
  /// Oracle of the polar body when a closed form exists (ellipsoids and
  /// their rotations/dilations).
  virtual std::shared_ptr<const SupportOracle> polar() const { return nullptr; }
  virtual std::string describe() const = 0;
};

/// A C^2_+ convex body with the origin in its interior, given by its support
/// function. Cheap to copy; shares the immutable oracle.
class SupportBody {
 public:
  SupportBody(std::shared_ptr<const SupportOracle> oracle, std::string id = {});

  int dim() const { return dim_; }
  const std::string& id() const { return id_; }
  SupportBody with_id(std::string id) const;

  double support(const Vec& u) const { return oracle_->jet(u).value; }
  SupportJet jet(const Vec& u) const { return oracle_->jet(u); }
  const SupportOracle& oracle() const { return *oracle_; }
  std::shared_ptr<const SupportOracle> oracle_ptr() const { return oracle_; }

  /// Polar body K° when the oracle provides one.
  std::optional<SupportBody> polar() const;

 private:
  std::shared_ptr<const SupportOracle> oracle_;
  int dim_;
  std::string id_;
};

/// Pointwise curvature data at a normal direction u.
///   radii   principal radii of curvature r_1 <= ... <= r_{n-1}
///   s[j]    normalized elementary symmetric functions of the radii, s[0] = 1
///   H[j]    the same for the principal curvatures at x, H[0] = 1
/// Only the first dim entries of s and H are meaningful.
struct CurvaturePoint {
  Vec u = Vec::Zero();
  Vec x = Vec::Zero();
  double h = 0.0;
  std::array<double, 2> radii{};
  std::array<double, 3> s{};
  std::array<double, 3> H{};

  double gauss_radius(int dim) const { return s[static_cast<std::size_t>(dim - 1)]; }
  double gauss_curvature(int dim) const { return H[static_cast<std::size_t>(dim - 1)]; }
  /// H_{n-1} / h^{n+1}; constant exactly on ellipsoids.
  double petty_ratio(int dim) const;
};

/// Smallest admissible principal radius; the C^2_+ gate.
inline constexpr double kMinRadius = 1e-10;

/// Throws CurvatureError when a radius does not exceed kMinRadius or the
/// support value is not positive.
CurvaturePoint curvature_at(const SupportBody& body, const Vec& u);

/// Orthonormal basis of the tangent space u^perp (one vector for dim 2).
std::array<Vec, 2> tangent_basis(const Vec& u, int dim);

// ---- constructors -------------------------------------------------------

SupportBody make_ball(int dim, double radius);
/// h(u) = sqrt(u^T M u); throws DomainError for non-SPD M. For dim 2 only
/// the leading 2x2 block of M is used.
SupportBody make_ellipsoid(int dim, const Mat& M);
/// Ellipsoid with the given semi-axes, optionally rotated (columns of the
/// rotation are the axis directions).
SupportBody make_ellipsoid_axes(int dim, const std::vector<double>& semi_axes,
                                const std::optional<Mat>& rotation = std::nullopt);

/// Largest |epsilon| keeping the perturbed ball strictly convex.
/// dim 2: h = 1 + eps cos(L theta) gives 1/(L^2 - 1). dim 3: h = 1 + eps P
/// for the harmonic cubic with the given id, bound found by sampling.
double perturbed_ball_epsilon_bound(int dim, int mode);

/// dim 2: h(theta) = 1 + eps cos(L theta), L >= 3.
/// dim 3: h(u) = 1 + eps P(u), P an odd harmonic cubic (mode 1: xyz,
/// mode 2: z(2z^2 - 3x^2 - 3y^2)/2).
/// Throws CurvatureError (carrying the admissible bound) when the
/// tangential hessian is not positive definite on the default rule.
SupportBody make_perturbed_ball(int dim, int mode, double epsilon);

/// Support function given only by values; derivatives by central
/// differences (step 1e-5, one Richardson level). Experimental.
SupportBody make_finite_difference_body(int dim, std::function<double(const Vec&)> support,
                                        std::string description = "finite-difference");

// ---- transforms ---------------------------------------------------------

/// Q K for an orthogonal Q: h'(u) = h(Q^T u).
SupportBody transform(const SupportBody& body, const Mat& Q);
/// a K for a > 0.
SupportBody transform(const SupportBody& body, double a);
/// K + t: h'(u) = h(u) + <t, u>.
SupportBody translate(const SupportBody& body, const Vec& t);
/// K - c: h'(u) = h(u) - <c, u>. Throws DomainError when c is not strictly
/// interior (checked on the default rule).
SupportBody recenter(const SupportBody& body, const Vec& c);

// ---- sphere-side integrals ----------------------------------------------

/// Curvature data at every node of a rule, computed once and shared by all
/// functionals of the body.
class CurvatureField {
 public:
  CurvatureField(const SupportBody& body, SphereRule rule, Execution exec = Execution::parallel);

  int dim() const { return rule_.dim; }
  const SphereRule& rule() const { return rule_; }
  const std::vector<CurvaturePoint>& points() const { return points_; }
  const std::string& body_id() const { return body_id_; }

  /// sum_l w_l f(point_l) with the fixed-order compensated contract.
  template <class F>
  double integrate(F&& f, Execution exec = Execution::parallel) const {
    const auto values = map_nodes<double>(points_.size(), [&](std::size_t l) { return f(points_[l]); }, exec);
    return weighted_sum(rule_, values);
  }

 private:
  SphereRule rule_;
  std::vector<CurvaturePoint> points_;
  std::string body_id_;
};

/// (1/n) int h s_{n-1} dsigma.
double body_volume(const CurvatureField& field);
double body_volume(const SupportBody& body, const SphereRule& rule);
/// (1/n) int h^{-n} dsigma.
double polar_volume(const SupportBody& body, const SphereRule& rule);
/// (1/((n+1) vol)) int x h s_{n-1} dsigma.
Vec centroid(const CurvatureField& field);
Vec centroid(const SupportBody& body, const SphereRule& rule);

/// Invariant residuals sampled over a rule.
struct ValidityReport {
  double min_support = 0.0;
  double min_radius = 0.0;
  double max_euler_residual = 0.0;   // |<grad, u> - h| / h
  double max_radial_residual = 0.0;  // |hess u| / max(1, |hess|)
  bool ok = false;
};
ValidityReport validate_body(const SupportBody& body, const SphereRule& rule);

}  // namespace curvfun
