#include "curvfun/functionals.hpp"

#include <cmath>
#include <sstream>

namespace curvfun {
namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

}  // namespace

WeightIndex::WeightIndex(int dim, int m, double k, std::vector<int> i) : dim_(dim), m_(m), k_(k), i_(std::move(i)) {
  if (dim != 2 && dim != 3) throw DomainError("dimension must be 2 or 3, got " + std::to_string(dim));
  if (static_cast<int>(i_.size()) != dim - 1) {
    throw DomainError("index vector needs " + std::to_string(dim - 1) + " entries (i_1..i_{n-1}), got " +
                      std::to_string(i_.size()));
  }
  if (m < 0) throw DomainError("m must be nonnegative");
  if (!std::isfinite(k)) throw DomainError("k must be finite");
  int weighted = 0;
  c_n_ = 1.0;
  for (int j = 1; j <= dim - 1; ++j) {
    const int ij = i_[static_cast<std::size_t>(j - 1)];
    if (ij < 0) throw DomainError("index entries must be nonnegative");
    weighted += j * ij;
    c_n_ *= std::pow(binomial(dim - 1, j), ij);
  }
  if (weighted != m) {
    throw DomainError("index constraint violated: sum_j j*i_j = " + std::to_string(weighted) + " but m = " +
                      std::to_string(m));
  }
}

int WeightIndex::total_i() const {
  int t = 0;
  for (int v : i_) t += v;
  return t;
}

WeightIndex WeightIndex::with_k(double k) const { return WeightIndex(dim_, m_, k, i_); }

std::string WeightIndex::describe() const {
  std::ostringstream os;
  os << "m=" << m_ << ",k=" << k_ << ",i=";
  for (std::size_t j = 0; j < i_.size(); ++j) os << (j ? ":" : "") << i_[j];
  return os.str();
}

void check_p(int dim, double p) {
  if (std::isnan(p)) throw DomainError("p is NaN");
  if (p == -static_cast<double>(dim)) throw DomainError("p = -n excluded (p = " + std::to_string(p) + ")");
}

double weighted_asa_integrand(const CurvaturePoint& cp, const WeightIndex& index, double p) {
  const int n = index.dim();
  double s_exp;
  double h_exp;
  if (std::isinf(p)) {
    s_exp = -index.total_i();
    h_exp = index.m() - index.k() - n;
  } else {
    s_exp = n / (n + p) - index.total_i();
    h_exp = index.m() - index.k() - n * (p - 1.0) / (n + p);
  }
  double log_val = std::log(index.c_n()) + s_exp * std::log(cp.s[static_cast<std::size_t>(n - 1)]) +
                   h_exp * std::log(cp.h);
  for (int j = 1; j <= n - 1; ++j) {
    const int ij = index.i()[static_cast<std::size_t>(j - 1)];
    if (ij != 0) log_val += ij * std::log(cp.s[static_cast<std::size_t>(n - 1 - j)]);
  }
  return std::exp(log_val);
}

FunctionalValue weighted_asa(const CurvatureField& field, const WeightIndex& index, double p, Execution exec) {
  if (index.dim() != field.dim()) throw DomainError("index dimension does not match body dimension");
  check_p(field.dim(), p);
  if (p == -kPInfinity) throw DomainError("p = -infinity is not supported");
  FunctionalValue out;
  out.value = field.integrate([&](const CurvaturePoint& cp) { return weighted_asa_integrand(cp, index, p); }, exec);
  out.p = p;
  out.index = index;
  out.rule = field.rule().describe();
  out.body_id = field.body_id();
  return out;
}

FunctionalValue weighted_asa(const SupportBody& body, const WeightIndex& index, double p, const SphereRule& rule) {
  return weighted_asa(CurvatureField(body, rule), index, p);
}

FunctionalValue asa(const CurvatureField& field, double p) {
  return weighted_asa(field, WeightIndex::zero(field.dim()), p);
}

FunctionalValue asa(const SupportBody& body, double p, const SphereRule& rule) {
  return asa(CurvatureField(body, rule), p);
}

double weighted_volume(const CurvatureField& field, const WeightIndex& index) {
  return weighted_asa(field, index, 0.0).value / field.dim();
}

double weighted_polar_volume(const CurvatureField& field, const WeightIndex& index) {
  return weighted_asa(field, index, kPInfinity).value / field.dim();
}

double homogeneity_degree(int dim, double p, double k) {
  check_p(dim, p);
  if (std::isinf(p)) return -dim - k;
  return dim * (dim - p) / (dim + p) - k;
}

double lutwak_density(const SupportBody& body, double p, const Vec& u) {
  const int n = body.dim();
  check_p(n, p);
  const CurvaturePoint cp = curvature_at(body, u);
  const double fK = cp.gauss_radius(n);
  return std::exp(n / (n + p) * (std::log(fK) - (p - 1.0) * std::log(cp.h)));
}

}  // namespace curvfun
