#pragma once
// Closed-form exponential tail bounds for supermartingales.
//
// Families implemented here, with S_k a supermartingale started at 0,
// [S]_k its squared variation, <S>_k its quadratic characteristic, and
// lambda the exponential rate of the underlying Chernoff certificate:
//
//   freedman_b2      exp{-x^2 / (2(v^2 + x*eps))}            bounded / Bernstein steps
//   bennett_b1       exp{-x^2 / (v^2 + v*sqrt(v^2+2x*eps) + x*eps)}
//   bennett_refined  B_{1,n}: the n-step sharpening of bennett_b1
//   third_moment     rate from the first three conditional moments
//   lower_bounded    (1 + x/v^2)^{v^2} e^{-x} for steps >= -1
//   fuk_nagaev       tight/loose pair for conditionally symmetric steps
//   subgaussian      exp{-x^2 / (2 v^2)}
//   generic          user-supplied (f, g) MGF envelope, refined + loose
//   weighted_alpha   exp{-C(alpha) (x/v)^{alpha/(alpha-1)}} from an
//                    alpha-power MGF envelope
//
// Conventions (uniform across families):
//   * Every exponent is computed in log-space; values are clipped to 1 with
//     `clipped` set when the raw formula exceeds 1.
//   * x = 0 short-circuits to value 1 with lambda = 0, bypassing the rate
//     formulas entirely.
//   * v = 0 with x > 0 is a domain error except where the analytic limit
//     exists (freedman_b2; subgaussian degenerates to 0; bennett_b1 exposes
//     its exp{-x/eps} limit only behind an explicit opt-in).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "tailbound/errors.hpp"

namespace tailbound {

enum class BoundFamily {
  freedman_b2,
  bennett_b1,
  bennett_b1n,
  third_moment,
  lower_bounded,
  fuk_nagaev_tight,
  fuk_nagaev_loose,
  subgaussian,
  generic_refined,
  generic_loose,
  weighted_alpha,
  // envelope tags used by the estimator module
  regression_bernstein,
  regression_bounded,
  regression_alpha,
  ar1_bounded,
  ar1_alpha,
  branching_two_sided,
  branching_lower,
};

std::string_view family_name(BoundFamily family);
std::optional<BoundFamily> family_from_name(std::string_view name);

struct BoundResult {
  double value = 1.0;      // exp(log_value); in (0, 1] unless degenerate
  double log_value = 0.0;  // exponent after clipping, always <= 0
  double lambda = 0.0;     // rate the certificate was evaluated at, >= 0
  BoundFamily family = BoundFamily::subgaussian;
  bool clipped = false;     // raw exponent was positive and got clipped to 0
  bool limit_form = false;  // evaluated as an explicit analytic limit
  bool degenerate = false;  // exact-zero tail (subgaussian with v = 0, x > 0)
};

// Parameter bundle for evaluate(); each family reads exactly its declared
// subset and rejects stray fields so that typos fail loudly.
struct BoundQuery {
  std::optional<double> x;
  std::optional<double> v;        // scale: v^2 is the variance budget
  std::optional<double> epsilon;  // step bound / Bernstein scale
  std::optional<double> w;        // third-moment budget
  std::optional<double> y;        // truncation level (fuk_nagaev)
  std::optional<double> alpha;    // MGF growth exponent, in (1, 2]
  std::optional<double> c;        // MGF growth constant
  std::optional<std::int64_t> n;  // step count for refined forms
};

namespace bounds {

// ----- helpers -----------------------------------------------------------

// psi(t) = t - log(1 + t); nonnegative, convex, psi(0) = 0.
double psi(double t);

// cosh(t) - 1 without cancellation for small |t|.
double coshm1(double t);

// log(1 + d * (cosh(t) - 1)) that survives t beyond ~700 where cosh
// overflows; requires d > 0.
double log1p_cosh_term(double d, double t);

// c^2(u, sigma^2): the smallest s^2 with E exp{lambda xi} <= exp{lambda^2
// s^2 / 2} for every centered xi <= u with E xi^2 <= sigma^2. Equals
// sigma^2 when sigma^2 >= u^2, else ((u + sigma^2/u)/2)^2.
double c_squared(double u, double sigma_sq);

// ----- exponent functions (log of bound as a function of the rate) -------
// These are the objective functions whose minimizers the closed forms
// realize; the optimizer cross-checks evaluate them directly.

double bernstein_exponent(double lambda, double x, double epsilon, double v);
double third_moment_exponent(double lambda, double x, double v, double w);
double lower_bounded_exponent(double lambda, double x, double v);
double symmetric_loose_exponent(double lambda, double x, double y, double v);
double symmetric_tight_exponent(double lambda, double x, double y, double v,
                                std::int64_t n);

// ----- closed-form families ----------------------------------------------

BoundResult freedman_b2(double x, double epsilon, double v);

// Optimal Bernstein rate: argmin of bernstein_exponent over (0, 1/eps).
// `at_boundary` is set when x = 0 pins the rate at 0.
struct BernsteinRate {
  double lambda = 0.0;
  bool at_boundary = false;
};
BernsteinRate lambda_bar_bernstein(double x, double epsilon, double v);

// v = 0 is a domain error unless allow_v_zero_limit, which evaluates the
// analytic limit exp{-x/eps} and flags the result with limit_form.
BoundResult bennett_b1(double x, double epsilon, double v,
                       bool allow_v_zero_limit = false);

// B_{1,n}: n * log1p sharpening of bennett_b1 at the same rate.
BoundResult bennett_refined(double x, double epsilon, double v, std::int64_t n);

// B_{1,n} / B_1 = exp{-n psi(t_n)} with t_n the refined log1p argument;
// always in (0, 1], increasing to 1 as n grows.
double improvement_factor(double x, double epsilon, double v, std::int64_t n);

// Tail bound from the first three conditional moments: v^2 bounds the
// squared variation, w the running negative-part third moments. `raw` is
// the direct three-term exponent and is the certified bound; b1 and b2 are
// companion values at the Bernstein scale eps = w / (3 v^2). They dominate
// `raw` only once lambda_bar(x, eps, v) * w >= 1.5 v^2 (the pointwise
// cubic-vs-geometric comparison needs lambda w >= 1.5 v^2); at scale
// eps = 2w / (3 v^2) the domination would hold everywhere.
struct ThirdMomentBounds {
  BoundResult raw;
  BoundResult b1;
  BoundResult b2;
};
ThirdMomentBounds third_moment(double x, double v, double w);

// Steps bounded below by -1: tight (1 + x/v^2)^{v^2} e^{-x} plus its
// bennett/freedman relaxations at eps = 1.
struct LowerBoundedBounds {
  BoundResult tight;
  BoundResult b1;
  BoundResult b2;
};
LowerBoundedBounds lower_bounded(double x, double v);

// Conditionally symmetric steps truncated at y: the tight n-step form and
// its n-free loose relaxation. Requires v^2 <= n y^2 and x < n y.
struct FukNagaevBounds {
  BoundResult tight;
  BoundResult loose;
};
FukNagaevBounds fuk_nagaev(double x, double y, double v, std::int64_t n);

BoundResult subgaussian(double x, double v);

// User-supplied envelope E exp{lambda xi} <= 1 + g(lambda) sigma^2 +
// f(lambda) V: refined uses n * log1p(f w / n), loose uses f w directly.
struct GenericBounds {
  BoundResult refined;
  BoundResult loose;
};
GenericBounds generic(double x, double v, double w, std::int64_t n,
                      const std::function<double(double)>& f,
                      const std::function<double(double)>& g, double lambda);

// From E exp{lambda xi_i} <= exp{c lambda^alpha v_i^alpha}:
// exp{-C(alpha) (x/v)^{alpha/(alpha-1)}}, C(alpha) =
// (c alpha)^{1/(1-alpha)} (1 - 1/alpha).
BoundResult weighted_alpha(double x, double v, double alpha, double c);

// Slack of a fixed-variance-budget certificate (at v_hat^2, the sum of the
// per-step sups of C^2) relative to one spent at the realized sum of C^2.
struct PinelisComparison {
  double v_hat_sq = 0.0;  // sum of per-step essential sups of C^2
  double c_sq_sum = 0.0;  // realized sum of C^2
  double delta = 0.0;     // 1/c_sq_sum - 1/v_hat_sq

  // (1 + x / v_hat) * exp{-x^2 delta / 2}; not a probability, may exceed 1.
  double decay_factor(double x) const;
};
PinelisComparison compare_to_pinelis(std::span<const double> per_step_sup,
                                     double realized_sum);

// Dispatch by family name; reads exactly the family's declared fields and
// rejects missing or extraneous ones with a configuration_error.
BoundResult evaluate(BoundFamily family, const BoundQuery& query);

}  // namespace bounds
}  // namespace tailbound
