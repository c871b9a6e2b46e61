#include "curvfun/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace curvfun {

std::string format_vec(const Vec& v, int dim) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < dim; ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ')';
  return os.str();
}

std::string SphereRule::describe() const {
  if (dim == 2) return std::to_string(n_primary);
  return std::to_string(n_primary) + "x" + std::to_string(n_secondary);
}

double sphere_area(int dim) {
  if (dim == 2) return 2.0 * std::numbers::pi;
  if (dim == 3) return 4.0 * std::numbers::pi;
  throw DomainError("dimension must be 2 or 3, got " + std::to_string(dim));
}

SphereRule circle_rule(int n) {
  if (n < 4) throw DomainError("circle rule needs at least 4 nodes, got " + std::to_string(n));
  SphereRule rule;
  rule.dim = 2;
  rule.n_primary = n;
  rule.nodes.reserve(static_cast<std::size_t>(n));
  rule.weights.assign(static_cast<std::size_t>(n), 2.0 * std::numbers::pi / n);
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n;
    rule.nodes.emplace_back(std::cos(theta), std::sin(theta), 0.0);
  }
  return rule;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on the three-term recurrence.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

SphereRule sphere_rule(int n_polar, int n_azimuth) {
  if (n_polar < 2 || n_azimuth < 4) {
    throw DomainError("sphere rule resolution too small: " + std::to_string(n_polar) + "x" +
                      std::to_string(n_azimuth));
  }
  std::vector<double> t;
  std::vector<double> wt;
  gauss_legendre(n_polar, t, wt);
  SphereRule rule;
  rule.dim = 3;
  rule.n_primary = n_polar;
  rule.n_secondary = n_azimuth;
  rule.nodes.reserve(static_cast<std::size_t>(n_polar * n_azimuth));
  rule.weights.reserve(rule.nodes.capacity());
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  for (int i = 0; i < n_polar; ++i) {
    const double z = t[static_cast<std::size_t>(i)];
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < n_azimuth; ++j) {
      const double phi = dphi * (j + 0.5);
      Vec u(rho * std::cos(phi), rho * std::sin(phi), z);
      rule.nodes.push_back(u / u.norm());
      rule.weights.push_back(wt[static_cast<std::size_t>(i)] * dphi);
    }
  }
  return rule;
}

SphereRule default_rule(int dim) {
  if (dim == 2) return circle_rule(512);
  if (dim == 3) return sphere_rule(64, 128);
  throw DomainError("dimension must be 2 or 3, got " + std::to_string(dim));
}

SphereRule parse_rule(const std::string& spec, int dim) {
  const auto x = spec.find('x');
  try {
    if (dim == 2) {
      if (x != std::string::npos) throw DomainError("rule '" + spec + "' is a sphere rule; dim 2 expects e.g. 512");
      std::size_t used = 0;
      const int n = std::stoi(spec, &used);
      if (used != spec.size()) throw DomainError("malformed rule '" + spec + "'");
      if (n < 8) throw DomainError("circle rule needs N >= 8, got " + spec);
      return circle_rule(n);
    }
    if (dim == 3) {
      if (x == std::string::npos) throw DomainError("dim 3 expects a rule like 64x128, got '" + spec + "'");
      std::size_t used_a = 0;
      std::size_t used_b = 0;
      const std::string a = spec.substr(0, x);
      const std::string b = spec.substr(x + 1);
      const int np = std::stoi(a, &used_a);
      const int na = std::stoi(b, &used_b);
      if (used_a != a.size() || used_b != b.size()) throw DomainError("malformed rule '" + spec + "'");
      if (np < 8 || na < 16) throw DomainError("sphere rule needs N_polar >= 8 and N_azimuth >= 16, got " + spec);
      return sphere_rule(np, na);
    }
  } catch (const std::invalid_argument&) {
    throw DomainError("malformed rule '" + spec + "'");
  } catch (const std::out_of_range&) {
    throw DomainError("malformed rule '" + spec + "'");
  }
  throw DomainError("dimension must be 2 or 3, got " + std::to_string(dim));
}

double weighted_sum(const SphereRule& rule, std::span<const double> values) {
  CompensatedSum acc;
  for (std::size_t l = 0; l < values.size(); ++l) {
    const double v = values[l];
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "non-finite integrand value " << v << " at node " << l << ' ' << format_vec(rule.nodes[l], rule.dim);
      throw Error(os.str());
    }
    acc.add(rule.weights[l] * v);
  }
  return acc.value();
}

double integrate(const SphereRule& rule, const std::function<double(const Vec&)>& f, Execution exec) {
  const auto values = map_nodes<double>(rule.size(), [&](std::size_t l) { return f(rule.nodes[l]); }, exec);
  return weighted_sum(rule, values);
}

}  // namespace curvfun
