#pragma once

#include "curvfun/functionals.hpp"

#include <functional>
#include <string>
#include <vector>

namespace curvfun {

enum class Shape { convex, concave, linear };

std::string to_string(Shape s);

/// A convex or concave generator f on (0, inf) with its boundary limits
/// f(0) = lim_{t->0} f(t) and f*(0) = lim_{t->0} t f(1/t) (either may be
/// +inf). The limits only enter where a density vanishes, which cannot
/// happen for C^2_+ bodies; they are carried for completeness.
struct DivergenceGenerator {
  std::function<double(double)> eval;
  Shape shape = Shape::convex;
  double f_at_0 = 0.0;
  double fstar_at_0 = 0.0;
  std::string name;

  double operator()(double t) const { return eval(t); }
};

DivergenceGenerator kl_generator();                  // t ln t
DivergenceGenerator neg_log_generator();             // -ln t
DivergenceGenerator power_generator(double alpha);   // t^alpha
DivergenceGenerator sqrt_generator();                // sqrt(t)
DivergenceGenerator linear_generator(double a, double b);  // a t + b

/// f*(t) = t f(1/t); shape preserved, boundary limits swapped.
DivergenceGenerator adjoint(const DivergenceGenerator& gen);

/// Sanity check of the declared shape against second differences of eval
/// on a log grid over [1e-2, 1e2].
bool shape_consistent(const DivergenceGenerator& gen);

/// D_f(P, Q) or D_f(Q, P).
enum class Direction { p_to_q, q_to_p };

/// Per-node densities of the weighted cone measures.
///   p = H_{n-1} / h^n, q = h (densities with respect to mu_i)
///   mu = c_n h^{m-k} prod_j H_j^{i_j} s_{n-1} (mu_i pulled back to the
///        sphere; multiply by the rule weight to integrate)
struct ConeDensityPair {
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> mu;
  const SphereRule* rule = nullptr;

  /// sum_l w_l mu_l g(p_l, q_l)
  template <class G>
  double integrate(G&& g) const {
    std::vector<double> values(p.size());
    for (std::size_t l = 0; l < p.size(); ++l) values[l] = mu[l] * g(p[l], q[l]);
    return weighted_sum(*rule, values);
  }
};

/// Builds the density pair from the boundary-side curvatures H_j. The field
/// must outlive the returned pair.
ConeDensityPair cone_densities(const CurvatureField& field, const WeightIndex& index);

/// D_f(P_K, Q_K) = int f(p/q) q dmu (p_to_q), or int f(q/p) p dmu (q_to_p).
double f_divergence(const ConeDensityPair& pair, const DivergenceGenerator& gen, Direction dir = Direction::p_to_q);
double f_divergence(const CurvatureField& field, const WeightIndex& index, const DivergenceGenerator& gen,
                    Direction dir = Direction::p_to_q);

/// D_KL(P||Q) = int p ln(p/q) dmu directly; D_KL(Q||P) through the adjoint
/// duality D_{t ln t}(Q, P) = D_{-ln t}(P, Q). Unnormalized measures, so the
/// value may be negative.
double kl_divergence(const CurvatureField& field, const WeightIndex& index, Direction dir = Direction::p_to_q);

/// KL divergence of the normalized probability measures P/P(dK), Q/Q(dK).
/// Nonnegative, zero exactly when the Petty ratio is constant.
double normalized_kl_divergence(const CurvatureField& field, const WeightIndex& index,
                                Direction dir = Direction::p_to_q);

/// H_alpha = int p^alpha q^{1-alpha} dmu.
double hellinger(const CurvatureField& field, const WeightIndex& index, double alpha);

/// D_alpha = ln(H_alpha) / (alpha - 1); alpha = 1 rejected with DomainError.
double renyi(const CurvatureField& field, const WeightIndex& index, double alpha);

struct JensenReport {
  double lhs = 0.0;          // D_f(P_K, Q_K)
  double rhs = 0.0;          // f(omega^inf / omega^0) * omega^0
  double rhs_stated = 0.0;   // f(mu-vol(K°)/mu-vol(K)) * mu-vol(K) = rhs / n
  double gap = 0.0;          // rhs - lhs
  bool holds = false;        // direction per shape
  bool equality = false;     // |gap| within tolerance
};

/// Jensen bound with relative tolerance tol for the equality/holds decision.
JensenReport jensen_bound(const CurvatureField& field, const WeightIndex& index, const DivergenceGenerator& gen,
                          double tol = 1e-10);

/// Parses "kl" (t ln t), "neglog" (-ln t), "sqrt", "power:A" and
/// "linear:A,B". Throws DomainError on anything else.
DivergenceGenerator parse_generator(const std::string& spec);

}  // namespace curvfun
