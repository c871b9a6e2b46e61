#include "curvfun/divergence.hpp"

#include <cmath>
#include <sstream>

namespace curvfun {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(Shape s) {
  switch (s) {
    case Shape::convex:
      return "convex";
    case Shape::concave:
      return "concave";
    case Shape::linear:
      return "linear";
  }
  return "unknown";
}

DivergenceGenerator kl_generator() {
  return {[](double t) { return t * std::log(t); }, Shape::convex, 0.0, kInf, "t*ln(t)"};
}

DivergenceGenerator neg_log_generator() {
  return {[](double t) { return -std::log(t); }, Shape::convex, kInf, 0.0, "-ln(t)"};
}

DivergenceGenerator power_generator(double alpha) {
  DivergenceGenerator g;
  g.eval = [alpha](double t) { return std::pow(t, alpha); };
  if (alpha == 0.0 || alpha == 1.0) {
    g.shape = Shape::linear;
  } else {
    g.shape = (alpha > 0.0 && alpha < 1.0) ? Shape::concave : Shape::convex;
  }
  auto limit = [](double a) { return a > 0.0 ? 0.0 : (a == 0.0 ? 1.0 : kInf); };
  g.f_at_0 = limit(alpha);
  g.fstar_at_0 = limit(1.0 - alpha);
  g.name = "t^" + num(alpha);
  return g;
}

DivergenceGenerator sqrt_generator() {
  return {[](double t) { return std::sqrt(t); }, Shape::concave, 0.0, 0.0, "sqrt(t)"};
}

DivergenceGenerator linear_generator(double a, double b) {
  return {[a, b](double t) { return a * t + b; }, Shape::linear, b, a, num(a) + "*t+" + num(b)};
}

DivergenceGenerator adjoint(const DivergenceGenerator& gen) {
  DivergenceGenerator g;
  g.eval = [f = gen.eval](double t) { return t * f(1.0 / t); };
  g.shape = gen.shape;
  g.f_at_0 = gen.fstar_at_0;
  g.fstar_at_0 = gen.f_at_0;
  g.name = "adjoint(" + gen.name + ")";
  return g;
}

bool shape_consistent(const DivergenceGenerator& gen) {
  const int steps = 40;
  const double lo = std::log(1e-2);
  const double hi = std::log(1e2);
  for (int i = 1; i < steps; ++i) {
    const double t0 = std::exp(lo + (hi - lo) * (i - 1) / steps);
    const double t1 = std::exp(lo + (hi - lo) * i / steps);
    const double t2 = std::exp(lo + (hi - lo) * (i + 1) / steps);
    // Divided second difference on a non-uniform grid.
    const double d1 = (gen(t1) - gen(t0)) / (t1 - t0);
    const double d2 = (gen(t2) - gen(t1)) / (t2 - t1);
    const double second = (d2 - d1) / (t2 - t0);
    const double scale = 1e-9 * (1.0 + std::abs(d1) + std::abs(d2)) / (t2 - t0);
    switch (gen.shape) {
      case Shape::convex:
        if (second < -scale) return false;
        break;
      case Shape::concave:
        if (second > scale) return false;
        break;
      case Shape::linear:
        if (std::abs(second) > scale) return false;
        break;
    }
  }
  return true;
}

ConeDensityPair cone_densities(const CurvatureField& field, const WeightIndex& index) {
  if (index.dim() != field.dim()) throw DomainError("index dimension does not match body dimension");
  const int n = field.dim();
  const auto& pts = field.points();
  ConeDensityPair pair;
  pair.rule = &field.rule();
  pair.p.resize(pts.size());
  pair.q.resize(pts.size());
  pair.mu.resize(pts.size());
  for (std::size_t l = 0; l < pts.size(); ++l) {
    const CurvaturePoint& cp = pts[l];
    const double gauss = cp.H[static_cast<std::size_t>(n - 1)];
    pair.p[l] = gauss / std::pow(cp.h, n);
    pair.q[l] = cp.h;
    double w = index.c_n() * std::pow(cp.h, index.m() - index.k());
    for (int j = 1; j <= n - 1; ++j) {
      const int ij = index.i()[static_cast<std::size_t>(j - 1)];
      if (ij != 0) w *= std::pow(cp.H[static_cast<std::size_t>(j)], ij);
    }
    // dH^{n-1}(x) = s_{n-1}(u) dsigma(u) = dsigma / H_{n-1}
    pair.mu[l] = w / gauss;
  }
  return pair;
}

double f_divergence(const ConeDensityPair& pair, const DivergenceGenerator& gen, Direction dir) {
  if (dir == Direction::p_to_q) return pair.integrate([&](double p, double q) { return gen(p / q) * q; });
  return pair.integrate([&](double p, double q) { return gen(q / p) * p; });
}

double f_divergence(const CurvatureField& field, const WeightIndex& index, const DivergenceGenerator& gen,
                    Direction dir) {
  return f_divergence(cone_densities(field, index), gen, dir);
}

double kl_divergence(const CurvatureField& field, const WeightIndex& index, Direction dir) {
  const ConeDensityPair pair = cone_densities(field, index);
  if (dir == Direction::p_to_q) return pair.integrate([](double p, double q) { return p * std::log(p / q); });
  return f_divergence(pair, neg_log_generator(), Direction::p_to_q);
}

double normalized_kl_divergence(const CurvatureField& field, const WeightIndex& index, Direction dir) {
  const ConeDensityPair pair = cone_densities(field, index);
  const double mass_p = pair.integrate([](double p, double) { return p; });
  const double mass_q = pair.integrate([](double, double q) { return q; });
  if (dir == Direction::p_to_q) {
    return pair.integrate([&](double p, double q) {
      const double pn = p / mass_p;
      return pn * std::log(pn / (q / mass_q));
    });
  }
  return pair.integrate([&](double p, double q) {
    const double qn = q / mass_q;
    return qn * std::log(qn / (p / mass_p));
  });
}

double hellinger(const CurvatureField& field, const WeightIndex& index, double alpha) {
  const ConeDensityPair pair = cone_densities(field, index);
  return pair.integrate(
      [alpha](double p, double q) { return std::exp(alpha * std::log(p) + (1.0 - alpha) * std::log(q)); });
}

double renyi(const CurvatureField& field, const WeightIndex& index, double alpha) {
  if (alpha == 1.0) throw DomainError("Renyi divergence of order 1 is the KL divergence; use kl_divergence");
  return std::log(hellinger(field, index, alpha)) / (alpha - 1.0);
}

JensenReport jensen_bound(const CurvatureField& field, const WeightIndex& index, const DivergenceGenerator& gen,
                          double tol) {
  const ConeDensityPair pair = cone_densities(field, index);
  const double omega_inf = pair.integrate([](double p, double) { return p; });
  const double omega_0 = pair.integrate([](double, double q) { return q; });
  JensenReport r;
  r.lhs = f_divergence(pair, gen, Direction::p_to_q);
  r.rhs = gen(omega_inf / omega_0) * omega_0;
  r.rhs_stated = r.rhs / field.dim();
  r.gap = r.rhs - r.lhs;
  const double scale = std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
  r.equality = std::abs(r.gap) <= tol * scale;
  switch (gen.shape) {
    case Shape::concave:
      r.holds = r.gap >= -tol * scale;
      break;
    case Shape::convex:
      r.holds = r.gap <= tol * scale;
      break;
    case Shape::linear:
      r.holds = r.equality;
      break;
  }
  return r;
}

DivergenceGenerator parse_generator(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (head == "kl" && arg.empty()) return kl_generator();
    if (head == "neglog" && arg.empty()) return neg_log_generator();
    if (head == "sqrt" && arg.empty()) return sqrt_generator();
    if (head == "power" && !arg.empty()) return power_generator(std::stod(arg));
    if (head == "linear" && !arg.empty()) {
      const auto comma = arg.find(',');
      if (comma == std::string::npos) throw DomainError("linear generator needs 'linear:A,B'");
      return linear_generator(std::stod(arg.substr(0, comma)), std::stod(arg.substr(comma + 1)));
    }
  } catch (const std::logic_error&) {
    throw DomainError("malformed generator '" + spec + "'");
  }
  throw DomainError("unknown generator '" + spec + "'");
}

}  // namespace curvfun
