#pragma once

#include "curvfun/divergence.hpp"
#include "curvfun/functionals.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace curvfun {

/// Every numeric gate of the verification harness in one place.
struct Tolerances {
  double equality = 1e-8;         // relative |rhs - lhs| for an equality verdict
  double strict = 1e-6;           // relative slack counted as strict inequality
  double monotone_slack = 1e-10;  // per-step slack (times max(1, |value|))
  double constant = 1e-9;         // relative spread for "constant" sequences
  double ellipsoid_spread = 1e-8; // Petty-ratio spread for the ellipsoid verdict
  double limit = 1e-4;            // relative error of extrapolated limits
  double plateau = 1e-10;         // quadrature doubling check
  double monte_carlo = 0.15;      // relative error of random-polytope limits
};

enum class Verdict { holds, equality, violated, inadmissible };
std::string to_string(Verdict v);

struct VerificationReport {
  std::string claim;
  std::string body_id;
  std::string index;
  std::map<std::string, double> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // (rhs - lhs) / |rhs|
  Verdict verdict = Verdict::inadmissible;
  /// "ellipsoid", "ball" or "none" from the pointwise detectors.
  std::string equality_case = "none";
  /// Alternative readings of the claim (stated vs proof constants etc.).
  std::map<std::string, double> extra;
  std::map<std::string, std::vector<double>> series;
  std::string note;
};

nlohmann::json to_json(const VerificationReport& r);

/// Classifies lhs <= rhs with relative tolerance tol.
Verdict classify(double lhs, double rhs, double tol);

struct PettyStats {
  double min = 0.0;
  double max = 0.0;
  double spread = 0.0;  // (max - min) / max
  bool ellipsoid = false;
};
PettyStats petty_ratio_stats(const CurvatureField& field, const Tolerances& tol = {});

/// Relative spread of the support values; a centered ball has zero spread.
double support_spread(const CurvatureField& field);

/// omega^r <= (omega^t)^a (omega^s)^(1-a), a = (r-s)(n+t)/((t-s)(n+r)),
/// admissible when (n+r)(t-s)/((n+t)(r-s)) > 1.
VerificationReport verify_holder_three(const CurvatureField& field, const WeightIndex& index, double r, double s,
                                       double t, const Tolerances& tol = {});

/// omega^r / V <= n^{n(t-r)/(t(n+r))} (omega^t / V)^{r(n+t)/(t(n+r))} with
/// V = mu-vol(K) = omega^0 / n, admissible when (n+r)t/((n+t)r) > 1.
VerificationReport verify_holder_volume(const CurvatureField& field, const WeightIndex& index, double r, double t,
                                        const Tolerances& tol = {});

/// Log-convexity in the k slot for r < s < k:
/// omega_{m,s} <= omega_{m,k}^{(s-r)/(k-r)} omega_{m,r}^{(k-s)/(k-r)}.
/// Throws DomainError unless r < s < k.
VerificationReport verify_k_interpolation(const CurvatureField& field, int m, const std::vector<int>& i, double p,
                                          double r, double s, double k, const Tolerances& tol = {});

/// p -> (omega^p/omega^0)^{(n+p)/p} non-decreasing and
/// p -> (omega^p/omega^inf)^{n+p} non-increasing along the grid.
/// The grid must be increasing and lie within (-n, inf) or (-inf, -n),
/// and must not contain 0 (DomainError otherwise).
VerificationReport monotonicity_scan(const CurvatureField& field, const WeightIndex& index,
                                     const std::vector<double>& p_grid, const Tolerances& tol = {});

/// Polynomial (Neville) extrapolation of values[j] sampled at xs[j] to x = 0.
double extrapolate_to_zero(const std::vector<double>& xs, const std::vector<double>& values);

/// lim_{p->inf} (omega^p / omega^inf)^{n+p}, extrapolated in 1/(n+p) and
/// compared with exp(-(n/omega^inf) D_KL(P||Q)) and with the reading
/// exp(-n D_KL(P||Q) / mu-vol(K°)).
VerificationReport limit_p_infinity(const CurvatureField& field, const WeightIndex& index,
                                    const std::vector<double>& p_schedule = {10, 30, 100, 300, 1000},
                                    const Tolerances& tol = {});

/// lim_{p->0} (omega^p(K°) / omega^0(K°))^{n(n+p)/p} evaluated on the polar
/// body's own oracle, compared with exp(-(n/omega^0(K°)) D_KL(Q_{K°}||P_{K°}))
/// and with exp(-n D_KL(P_{K°}||Q_{K°}) / mu-vol(K°)).
/// Throws DomainError when the polar oracle is unavailable.
VerificationReport limit_p_zero(const SupportBody& body, const WeightIndex& index, const SphereRule& rule,
                                const std::vector<double>& p_schedule = {0.3, 0.1, 0.03, 0.01},
                                const Tolerances& tol = {});

/// Jensen bound as a report (lhs = D_f, rhs = f(omega^inf/omega^0) omega^0).
VerificationReport verify_jensen(const CurvatureField& field, const WeightIndex& index,
                                 const DivergenceGenerator& gen, const Tolerances& tol = {});

/// The three weight indices per dimension used by the suite.
std::vector<WeightIndex> corpus_indices(int dim);

/// p values for the Hoelder grids (both claims) per dimension.
std::vector<double> holder_grid(int dim);
/// Values for the (r, s, k) triples of the k-slot claim.
std::vector<double> k_grid();
std::vector<double> monotone_grid();

struct SuiteOptions {
  Tolerances tol;
  bool limits = true;
  bool divergences = true;
};

/// Runs every claim over the corpus and returns the reports grouped by
/// claim, bodies in input order. Bodies are processed in parallel; the
/// output order does not depend on scheduling.
std::vector<VerificationReport> run_suite(const std::vector<SupportBody>& corpus, const SuiteOptions& options = {});

}  // namespace curvfun
