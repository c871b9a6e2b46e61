#include "curvfun/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace curvfun {
namespace {

Mat planar_block(const Mat& M) {
  Mat out = Mat::Zero();
  out.topLeftCorner<2, 2>() = M.topLeftCorner<2, 2>();
  return out;
}

class EllipsoidOracle final : public SupportOracle {
 public:
  EllipsoidOracle(int dim, const Mat& M) : dim_(dim), M_(dim == 2 ? planar_block(M) : M) {}

  int dim() const override { return dim_; }

  SupportJet jet(const Vec& u) const override {
    const Vec Mu = M_ * u;
    SupportJet j;
    j.value = std::sqrt(u.dot(Mu));
    j.gradient = Mu / j.value;
    j.hessian = (M_ - Mu * Mu.transpose() / (j.value * j.value)) / j.value;
    return j;
  }

  std::shared_ptr<const SupportOracle> polar() const override {
    Mat inv = Mat::Zero();
    if (dim_ == 2) {
      inv.topLeftCorner<2, 2>() = M_.topLeftCorner<2, 2>().inverse();
    } else {
      inv = M_.inverse();
    }
    return std::make_shared<EllipsoidOracle>(dim_, inv);
  }

  std::string describe() const override { return "ellipsoid"; }

 private:
  int dim_;
  Mat M_;
};

// h(theta) = 1 + eps cos(L theta) on S^1.
class PerturbedCircleOracle final : public SupportOracle {
 public:
  PerturbedCircleOracle(int mode, double eps) : L_(mode), eps_(eps) {}

  int dim() const override { return 2; }

  SupportJet jet(const Vec& u) const override {
    const double theta = std::atan2(u[1], u[0]);
    const double c = std::cos(L_ * theta);
    const double s = std::sin(L_ * theta);
    const double h = 1.0 + eps_ * c;
    const double dh = -eps_ * L_ * s;
    const double d2h = -eps_ * L_ * L_ * c;
    const Vec t(-u[1], u[0], 0.0);
    SupportJet j;
    j.value = h;
    j.gradient = h * u + dh * t;
    j.hessian = (h + d2h) * t * t.transpose();
    return j;
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "perturbed_ball(L=" << L_ << ",eps=" << eps_ << ")";
    return os.str();
  }

 private:
  int L_;
  double eps_;
};

// Harmonic cubic P with its gradient and hessian at x.
struct CubicJet {
  double value;
  Vec grad;
  Mat hess;
};

CubicJet harmonic_cubic(int mode, const Vec& x) {
  CubicJet c;
  const double X = x[0];
  const double Y = x[1];
  const double Z = x[2];
  if (mode == 1) {
    c.value = X * Y * Z;
    c.grad = Vec(Y * Z, X * Z, X * Y);
    c.hess << 0.0, Z, Y, Z, 0.0, X, Y, X, 0.0;
  } else {
    c.value = 0.5 * (2.0 * Z * Z * Z - 3.0 * X * X * Z - 3.0 * Y * Y * Z);
    c.grad = Vec(-3.0 * X * Z, -3.0 * Y * Z, 3.0 * Z * Z - 1.5 * X * X - 1.5 * Y * Y);
    c.hess << -3.0 * Z, 0.0, -3.0 * X, 0.0, -3.0 * Z, -3.0 * Y, -3.0 * X, -3.0 * Y, 6.0 * Z;
  }
  return c;
}

// h(x) = |x| + eps P(x) / |x|^2, the 1-homogeneous extension of 1 + eps P on S^2.
class PerturbedSphereOracle final : public SupportOracle {
 public:
  PerturbedSphereOracle(int mode, double eps) : mode_(mode), eps_(eps) {}

  int dim() const override { return 3; }

  SupportJet jet(const Vec& u) const override {
    const double rho = u.squaredNorm();
    const double r = std::sqrt(rho);
    const CubicJet P = harmonic_cubic(mode_, u);
    SupportJet j;
    j.value = r + eps_ * P.value / rho;
    j.gradient = u / r + eps_ * (P.grad / rho - 2.0 * P.value * u / (rho * rho));
    const Mat I = Mat::Identity();
    const Mat sphere = (I - u * u.transpose() / rho) / r;
    const Mat pert = P.hess / rho - 2.0 * (P.grad * u.transpose() + u * P.grad.transpose()) / (rho * rho) -
                     2.0 * P.value * I / (rho * rho) + 8.0 * P.value * u * u.transpose() / (rho * rho * rho);
    j.hessian = sphere + eps_ * pert;
    return j;
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "perturbed_ball(harmonic=" << mode_ << ",eps=" << eps_ << ")";
    return os.str();
  }

 private:
  int mode_;
  double eps_;
};

class RotatedOracle final : public SupportOracle {
 public:
  RotatedOracle(std::shared_ptr<const SupportOracle> inner, const Mat& Q) : inner_(std::move(inner)), Q_(Q) {}

  int dim() const override { return inner_->dim(); }

  SupportJet jet(const Vec& u) const override {
    SupportJet j = inner_->jet(Q_.transpose() * u);
    j.gradient = Q_ * j.gradient;
    j.hessian = Q_ * j.hessian * Q_.transpose();
    return j;
  }

  std::shared_ptr<const SupportOracle> polar() const override {
    auto p = inner_->polar();
    if (!p) return nullptr;
    return std::make_shared<RotatedOracle>(std::move(p), Q_);
  }

  std::string describe() const override { return "rotated(" + inner_->describe() + ")"; }

 private:
  std::shared_ptr<const SupportOracle> inner_;
  Mat Q_;
};

class ScaledOracle final : public SupportOracle {
 public:
  ScaledOracle(std::shared_ptr<const SupportOracle> inner, double a) : inner_(std::move(inner)), a_(a) {}

  int dim() const override { return inner_->dim(); }

  SupportJet jet(const Vec& u) const override {
    SupportJet j = inner_->jet(u);
    j.value *= a_;
    j.gradient *= a_;
    j.hessian *= a_;
    return j;
  }

  std::shared_ptr<const SupportOracle> polar() const override {
    auto p = inner_->polar();
    if (!p) return nullptr;
    return std::make_shared<ScaledOracle>(std::move(p), 1.0 / a_);
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "scaled(" << a_ << "," << inner_->describe() << ")";
    return os.str();
  }

 private:
  std::shared_ptr<const SupportOracle> inner_;
  double a_;
};

class TranslatedOracle final : public SupportOracle {
 public:
  TranslatedOracle(std::shared_ptr<const SupportOracle> inner, const Vec& t) : inner_(std::move(inner)), t_(t) {}

  int dim() const override { return inner_->dim(); }

  SupportJet jet(const Vec& u) const override {
    SupportJet j = inner_->jet(u);
    j.value += t_.dot(u);
    j.gradient += t_;
    return j;
  }

  std::string describe() const override { return "translated(" + inner_->describe() + ")"; }

 private:
  std::shared_ptr<const SupportOracle> inner_;
  Vec t_;
};

class FiniteDifferenceOracle final : public SupportOracle {
 public:
  FiniteDifferenceOracle(int dim, std::function<double(const Vec&)> f, std::string description)
      : dim_(dim), f_(std::move(f)), description_(std::move(description)) {}

  int dim() const override { return dim_; }

  SupportJet jet(const Vec& u) const override {
    SupportJet j;
    j.value = f_(u);
    const double step = 1e-5;
    const Vec g1 = gradient(u, step);
    const Vec g2 = gradient(u, 0.5 * step);
    j.gradient = (4.0 * g2 - g1) / 3.0;
    const Mat h1 = hessian(u, step);
    const Mat h2 = hessian(u, 0.5 * step);
    j.hessian = (4.0 * h2 - h1) / 3.0;
    return j;
  }

  std::string describe() const override { return description_; }

 private:
  double extended(const Vec& x) const {
    Vec y = x;
    if (dim_ == 2) y[2] = 0.0;
    const double r = y.norm();
    return r * f_(y / r);
  }

  Vec gradient(const Vec& u, double step) const {
    Vec g = Vec::Zero();
    for (int i = 0; i < dim_; ++i) {
      const Vec e = Vec::Unit(i) * step;
      g[i] = (extended(u + e) - extended(u - e)) / (2.0 * step);
    }
    return g;
  }

  Mat hessian(const Vec& u, double step) const {
    Mat H = Mat::Zero();
    for (int i = 0; i < dim_; ++i) {
      for (int k = i; k < dim_; ++k) {
        const Vec ei = Vec::Unit(i) * step;
        const Vec ek = Vec::Unit(k) * step;
        const double v = (extended(u + ei + ek) - extended(u + ei - ek) - extended(u - ei + ek) +
                          extended(u - ei - ek)) /
                         (4.0 * step * step);
        H(i, k) = v;
        H(k, i) = v;
      }
    }
    return H;
  }

  int dim_;
  std::function<double(const Vec&)> f_;
  std::string description_;
};

void require_dim(int dim) {
  if (dim != 2 && dim != 3) throw DomainError("dimension must be 2 or 3, got " + std::to_string(dim));
}

}  // namespace

SupportBody make_ball(int dim, double radius) {
  require_dim(dim);
  if (!(radius > 0.0)) throw DomainError("ball radius must be positive");
  std::ostringstream id;
  id << "ball" << dim << "(R=" << radius << ")";
  return SupportBody(std::make_shared<EllipsoidOracle>(dim, radius * radius * Mat::Identity()), id.str());
}

SupportBody make_ellipsoid(int dim, const Mat& M) {
  require_dim(dim);
  const Mat S = dim == 2 ? planar_block(M) : M;
  if ((S - S.transpose()).norm() > 1e-12 * std::max(1.0, S.norm())) {
    throw DomainError("ellipsoid matrix is not symmetric");
  }
  double lo = 0.0;
  if (dim == 2) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S.topLeftCorner<2, 2>(), Eigen::EigenvaluesOnly);
    lo = es.eigenvalues()[0];
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    lo = es.eigenvalues()[0];
  }
  if (!(lo > 0.0)) throw DomainError("ellipsoid matrix is not positive definite");
  return SupportBody(std::make_shared<EllipsoidOracle>(dim, S), "ellipsoid" + std::to_string(dim));
}

SupportBody make_ellipsoid_axes(int dim, const std::vector<double>& semi_axes, const std::optional<Mat>& rotation) {
  require_dim(dim);
  if (static_cast<int>(semi_axes.size()) != dim) {
    throw DomainError("expected " + std::to_string(dim) + " semi-axes, got " + std::to_string(semi_axes.size()));
  }
  Mat D = Mat::Zero();
  std::ostringstream id;
  id << "ellipsoid(";
  for (int i = 0; i < dim; ++i) {
    const double a = semi_axes[static_cast<std::size_t>(i)];
    if (!(a > 0.0)) throw DomainError("semi-axes must be positive");
    D(i, i) = a * a;
    id << (i ? "," : "") << a;
  }
  id << ")";
  Mat M = D;
  if (rotation) M = (*rotation) * D * rotation->transpose();
  return make_ellipsoid(dim, M).with_id(id.str());
}

double perturbed_ball_epsilon_bound(int dim, int mode) {
  if (dim == 2) {
    if (mode < 3) throw DomainError("perturbed circle needs mode L >= 3, got " + std::to_string(mode));
    return 1.0 / (mode * mode - 1.0);
  }
  if (dim == 3) {
    if (mode != 1 && mode != 2) throw DomainError("harmonic id must be 1 or 2, got " + std::to_string(mode));
    // Radii are 1 + eps * lambda with lambda the tangential eigenvalues of the
    // perturbation's hessian; odd symmetry makes the spectrum symmetric.
    const PerturbedSphereOracle unit(mode, 1.0);
    const SphereRule rule = sphere_rule(96, 192);
    double worst = 0.0;
    for (const Vec& u : rule.nodes) {
      const Mat Hp = unit.jet(u).hessian - (Mat::Identity() - u * u.transpose());
      const auto b = tangent_basis(u, 3);
      Eigen::Matrix2d A;
      A << b[0].dot(Hp * b[0]), b[0].dot(Hp * b[1]), b[1].dot(Hp * b[0]), b[1].dot(Hp * b[1]);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
      worst = std::max({worst, -es.eigenvalues()[0], es.eigenvalues()[1]});
    }
    return 1.0 / worst;
  }
  throw DomainError("dimension must be 2 or 3, got " + std::to_string(dim));
}

SupportBody make_perturbed_ball(int dim, int mode, double epsilon) {
  require_dim(dim);
  const double bound = perturbed_ball_epsilon_bound(dim, mode);
  std::shared_ptr<const SupportOracle> oracle;
  if (dim == 2) {
    oracle = std::make_shared<PerturbedCircleOracle>(mode, epsilon);
  } else {
    oracle = std::make_shared<PerturbedSphereOracle>(mode, epsilon);
  }
  SupportBody body(oracle);
  const ValidityReport rep = validate_body(body, default_rule(dim));
  if (!(std::abs(epsilon) < bound) || !rep.ok) {
    std::ostringstream os;
    os << "perturbed ball (dim " << dim << ", mode " << mode << ", epsilon " << epsilon
       << ") is not strictly convex: minimum principal radius " << rep.min_radius
       << "; admissible |epsilon| < " << bound;
    throw CurvatureError(os.str());
  }
  return body;
}

SupportBody make_finite_difference_body(int dim, std::function<double(const Vec&)> support, std::string description) {
  require_dim(dim);
  return SupportBody(std::make_shared<FiniteDifferenceOracle>(dim, std::move(support), description), description);
}

SupportBody transform(const SupportBody& body, const Mat& Q) {
  Mat R = Q;
  if (body.dim() == 2) {
    R = Mat::Identity();
    R.topLeftCorner<2, 2>() = Q.topLeftCorner<2, 2>();
  }
  if ((R.transpose() * R - Mat::Identity()).norm() > 1e-10) throw DomainError("transform matrix is not orthogonal");
  return SupportBody(std::make_shared<RotatedOracle>(body.oracle_ptr(), R), "rotated(" + body.id() + ")");
}

SupportBody transform(const SupportBody& body, double a) {
  if (!(a > 0.0)) throw DomainError("scale factor must be positive");
  std::ostringstream id;
  id << "scaled(" << a << "," << body.id() << ")";
  return SupportBody(std::make_shared<ScaledOracle>(body.oracle_ptr(), a), id.str());
}

SupportBody translate(const SupportBody& body, const Vec& t) {
  Vec shift = t;
  if (body.dim() == 2) shift[2] = 0.0;
  return SupportBody(std::make_shared<TranslatedOracle>(body.oracle_ptr(), shift),
                     "translated(" + body.id() + ")");
}

SupportBody recenter(const SupportBody& body, const Vec& c) {
  SupportBody moved = translate(body, -c);
  for (const Vec& u : default_rule(body.dim()).nodes) {
    if (!(moved.support(u) > 0.0)) {
      throw DomainError("recenter point " + format_vec(c, body.dim()) + " is not strictly interior");
    }
  }
  return moved;
}

}  // namespace curvfun
