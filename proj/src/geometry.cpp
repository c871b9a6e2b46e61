#include "curvfun/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace curvfun {

SupportBody::SupportBody(std::shared_ptr<const SupportOracle> oracle, std::string id)
    : oracle_(std::move(oracle)), dim_(0), id_(std::move(id)) {
  if (!oracle_) throw Error("SupportBody requires an oracle");
  dim_ = oracle_->dim();
  if (dim_ != 2 && dim_ != 3) throw DomainError("dimension must be 2 or 3, got " + std::to_string(dim_));
  if (id_.empty()) id_ = oracle_->describe();
}

SupportBody SupportBody::with_id(std::string id) const { return SupportBody(oracle_, std::move(id)); }

std::optional<SupportBody> SupportBody::polar() const {
  auto p = oracle_->polar();
  if (!p) return std::nullopt;
  return SupportBody(std::move(p), "polar(" + id_ + ")");
}

double CurvaturePoint::petty_ratio(int dim) const {
  return gauss_curvature(dim) / std::pow(h, dim + 1);
}

std::array<Vec, 2> tangent_basis(const Vec& u, int dim) {
  if (dim == 2) return {Vec(-u[1], u[0], 0.0), Vec::Zero()};
  const Vec a = std::abs(u[2]) < 0.9 ? Vec(0.0, 0.0, 1.0) : Vec(1.0, 0.0, 0.0);
  Vec e1 = a - a.dot(u) * u;
  e1.normalize();
  Vec e2 = u.cross(e1);
  return {e1, e2};
}

CurvaturePoint curvature_at(const SupportBody& body, const Vec& u) {
  const int n = body.dim();
  const SupportJet jet = body.jet(u);
  CurvaturePoint cp;
  cp.u = u;
  cp.x = jet.gradient;
  cp.h = jet.value;
  if (!(cp.h > 0.0)) {
    std::ostringstream os;
    os << "support value " << cp.h << " is not positive at u = " << format_vec(u, n)
       << " (origin not interior)";
    throw CurvatureError(os.str());
  }
  const auto basis = tangent_basis(u, n);
  if (n == 2) {
    const Vec& t = basis[0];
    cp.radii[0] = t.dot(jet.hessian * t);
  } else {
    const double a = basis[0].dot(jet.hessian * basis[0]);
    const double d = basis[1].dot(jet.hessian * basis[1]);
    const double b = 0.5 * (basis[0].dot(jet.hessian * basis[1]) + basis[1].dot(jet.hessian * basis[0]));
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), b);
    double hi = mean + rad;
    double lo = mean - rad;
    // Recover the small eigenvalue from the determinant when it would cancel.
    if (hi > 0.0 && lo < 1e-3 * hi) lo = (a * d - b * b) / hi;
    cp.radii = {lo, hi};
  }
  for (int i = 0; i < n - 1; ++i) {
    const double r = cp.radii[static_cast<std::size_t>(i)];
    if (!(r > kMinRadius)) {
      std::ostringstream os;
      os << "C2+ violation at u = " << format_vec(u, n) << ": principal radius " << r
         << " does not exceed " << kMinRadius;
      throw CurvatureError(os.str());
    }
  }
  cp.s[0] = 1.0;
  cp.H[0] = 1.0;
  if (n == 2) {
    cp.s[1] = cp.radii[0];
    cp.H[1] = 1.0 / cp.s[1];
  } else {
    cp.s[1] = 0.5 * (cp.radii[0] + cp.radii[1]);
    cp.s[2] = cp.radii[0] * cp.radii[1];
    // H_j = s_{n-1-j} / s_{n-1}
    cp.H[1] = cp.s[1] / cp.s[2];
    cp.H[2] = 1.0 / cp.s[2];
  }
  return cp;
}

CurvatureField::CurvatureField(const SupportBody& body, SphereRule rule, Execution exec)
    : rule_(std::move(rule)), body_id_(body.id()) {
  if (rule_.dim != body.dim()) {
    throw DomainError("rule dimension " + std::to_string(rule_.dim) + " does not match body dimension " +
                      std::to_string(body.dim()));
  }
  points_ = map_nodes<CurvaturePoint>(
      rule_.size(), [&](std::size_t l) { return curvature_at(body, rule_.nodes[l]); }, exec);
}

double body_volume(const CurvatureField& field) {
  const int n = field.dim();
  return field.integrate([n](const CurvaturePoint& cp) { return cp.h * cp.gauss_radius(n); }) / n;
}

double body_volume(const SupportBody& body, const SphereRule& rule) {
  return body_volume(CurvatureField(body, rule));
}

double polar_volume(const SupportBody& body, const SphereRule& rule) {
  const int n = body.dim();
  return integrate(rule, [&](const Vec& u) { return std::pow(body.support(u), -n); }) / n;
}

Vec centroid(const CurvatureField& field) {
  const int n = field.dim();
  const double vol = body_volume(field);
  Vec c = Vec::Zero();
  for (int i = 0; i < n; ++i) {
    c[i] = field.integrate([n, i](const CurvaturePoint& cp) { return cp.x[i] * cp.h * cp.gauss_radius(n); });
  }
  return c / ((n + 1) * vol);
}

Vec centroid(const SupportBody& body, const SphereRule& rule) { return centroid(CurvatureField(body, rule)); }

ValidityReport validate_body(const SupportBody& body, const SphereRule& rule) {
  const int n = body.dim();
  ValidityReport rep;
  rep.min_support = std::numeric_limits<double>::infinity();
  rep.min_radius = std::numeric_limits<double>::infinity();
  for (const Vec& u : rule.nodes) {
    const SupportJet jet = body.jet(u);
    rep.min_support = std::min(rep.min_support, jet.value);
    const double scale = std::max(1.0, std::abs(jet.value));
    rep.max_euler_residual = std::max(rep.max_euler_residual, std::abs(jet.gradient.dot(u) - jet.value) / scale);
    const double hnorm = std::max(1.0, jet.hessian.norm());
    rep.max_radial_residual = std::max(rep.max_radial_residual, (jet.hessian * u).norm() / hnorm);
    const auto basis = tangent_basis(u, n);
    if (n == 2) {
      rep.min_radius = std::min(rep.min_radius, basis[0].dot(jet.hessian * basis[0]));
    } else {
      Eigen::Matrix2d A;
      A << basis[0].dot(jet.hessian * basis[0]), basis[0].dot(jet.hessian * basis[1]),
          basis[1].dot(jet.hessian * basis[0]), basis[1].dot(jet.hessian * basis[1]);
      const Eigen::Matrix2d S = 0.5 * (A + A.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S, Eigen::EigenvaluesOnly);
      rep.min_radius = std::min(rep.min_radius, es.eigenvalues()[0]);
    }
  }
  rep.ok = rep.min_support > 0.0 && rep.min_radius > kMinRadius && rep.max_euler_residual < 1e-9 &&
           rep.max_radial_residual < 1e-9;
  return rep;
}

}  // namespace curvfun
