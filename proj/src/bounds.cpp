#include "tailbound/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace tailbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FamilyName {
  BoundFamily family;
  std::string_view name;
};

constexpr FamilyName kFamilyNames[] = {
    {BoundFamily::freedman_b2, "freedman-b2"},
    {BoundFamily::bennett_b1, "bennett-b1"},
    {BoundFamily::bennett_b1n, "bennett-b1n"},
    {BoundFamily::third_moment, "third-moment"},
    {BoundFamily::lower_bounded, "lower-bounded"},
    {BoundFamily::fuk_nagaev_tight, "fuk-nagaev-tight"},
    {BoundFamily::fuk_nagaev_loose, "fuk-nagaev-loose"},
    {BoundFamily::subgaussian, "subgaussian"},
    {BoundFamily::generic_refined, "generic-refined"},
    {BoundFamily::generic_loose, "generic-loose"},
    {BoundFamily::weighted_alpha, "weighted-alpha"},
    {BoundFamily::regression_bernstein, "regression-bernstein"},
    {BoundFamily::regression_bounded, "regression-bounded"},
    {BoundFamily::regression_alpha, "regression-alpha"},
    {BoundFamily::ar1_bounded, "ar1-bounded"},
    {BoundFamily::ar1_alpha, "ar1-alpha"},
    {BoundFamily::branching_two_sided, "branching-two-sided"},
    {BoundFamily::branching_lower, "branching-lower"},
};

void require_finite(double value, const char* field) {
  if (!std::isfinite(value))
    throw domain_error(std::string(field) + " must be finite");
}

void require_nonneg(double value, const char* field) {
  require_finite(value, field);
  if (value < 0.0) throw domain_error(std::string(field) + " must be >= 0");
}

void require_pos(double value, const char* field) {
  require_finite(value, field);
  if (!(value > 0.0)) throw domain_error(std::string(field) + " must be > 0");
}

void require_steps(std::int64_t n) {
  if (n < 1) throw domain_error("n must be >= 1");
}

// Wrap a raw log-space exponent, clipping values above 1 back to 1.
BoundResult make_result(BoundFamily family, double raw_log, double lambda) {
  BoundResult r;
  r.family = family;
  r.lambda = lambda;
  r.clipped = raw_log > 0.0;
  r.log_value = r.clipped ? 0.0 : raw_log;
  r.value = std::exp(r.log_value);
  return r;
}

// x = 0: every family certifies the trivial bound 1 at rate 0.
BoundResult unit_result(BoundFamily family) {
  BoundResult r;
  r.family = family;
  return r;
}

// Shared pieces of the Bernstein geometry, arranged to avoid cancellation:
//   denom     = 2 x eps + v^2 + v sqrt(v^2 + 2 x eps)
//   lambda    = 2 x / denom                      (the optimal rate)
//   one_minus = (v^2 + v sqrt(...)) / denom      (= 1 - lambda * eps)
struct BernsteinParts {
  double lambda;
  double one_minus;  // 1 - lambda * eps, computed without subtraction
  double denom;
};

BernsteinParts bernstein_parts(double x, double epsilon, double v) {
  const double r = std::sqrt(v * v + 2.0 * x * epsilon);
  const double vterm = v * v + v * r;
  const double denom = 2.0 * x * epsilon + vterm;
  return {2.0 * x / denom, vterm / denom, denom};
}

}  // namespace

std::string_view family_name(BoundFamily family) {
  for (const auto& e : kFamilyNames)
    if (e.family == family) return e.name;
  return "unknown";
}

std::optional<BoundFamily> family_from_name(std::string_view name) {
  for (const auto& e : kFamilyNames)
    if (e.name == name) return e.family;
  return std::nullopt;
}

namespace bounds {

double psi(double t) {
  if (!std::isfinite(t) || t <= -1.0)
    throw domain_error("psi: t must be > -1");
  return t - std::log1p(t);
}

double coshm1(double t) {
  t = std::fabs(t);
  if (t < 1e-4) {
    const double t2 = t * t;
    return t2 / 2.0 * (1.0 + t2 / 12.0 * (1.0 + t2 / 30.0));
  }
  // (e^t - 1 + e^-t - 1) / 2, exact rearrangement that stays accurate
  // through t ~ 1 and overflows only past t ~ 709.
  return 0.5 * (std::expm1(t) + std::expm1(-t));
}

double log1p_cosh_term(double d, double t) {
  if (!(d > 0.0)) throw domain_error("log1p_cosh_term: d must be > 0");
  t = std::fabs(t);
  if (t < 700.0) return std::log1p(d * coshm1(t));
  // cosh t ~ e^t / 2 dominates everything else at this scale:
  // log(1 + d (cosh t - 1)) = t + log(d/2) + log1p(small corrections).
  return t + std::log(0.5 * d) + std::log1p((2.0 / d - 2.0) * std::exp(-t));
}

double c_squared(double u, double sigma_sq) {
  require_pos(u, "u");
  require_nonneg(sigma_sq, "sigma_sq");
  if (sigma_sq >= u * u) return sigma_sq;
  const double half = 0.5 * (u + sigma_sq / u);
  return half * half;
}

double bernstein_exponent(double lambda, double x, double epsilon, double v) {
  return -lambda * x +
         lambda * lambda * v * v / (2.0 * (1.0 - lambda * epsilon));
}

double third_moment_exponent(double lambda, double x, double v, double w) {
  return -lambda * x + 0.5 * lambda * lambda * v * v +
         lambda * lambda * lambda * w / 3.0;
}

double lower_bounded_exponent(double lambda, double x, double v) {
  return -lambda * x - (lambda + std::log1p(-lambda)) * v * v;
}

double symmetric_loose_exponent(double lambda, double x, double y, double v) {
  return -lambda * x + v * v / (y * y) * coshm1(lambda * y);
}

double symmetric_tight_exponent(double lambda, double x, double y, double v,
                                std::int64_t n) {
  const double d = v * v / (static_cast<double>(n) * y * y);
  return -lambda * x + static_cast<double>(n) * log1p_cosh_term(d, lambda * y);
}

BoundResult freedman_b2(double x, double epsilon, double v) {
  require_nonneg(x, "x");
  require_nonneg(epsilon, "epsilon");
  require_nonneg(v, "v");
  if (x == 0.0) return unit_result(BoundFamily::freedman_b2);
  const double denom = v * v + x * epsilon;
  if (denom <= 0.0)
    throw domain_error("freedman_b2: v and epsilon*x cannot both vanish");
  return make_result(BoundFamily::freedman_b2, -x * x / (2.0 * denom),
                     x / denom);
}

BernsteinRate lambda_bar_bernstein(double x, double epsilon, double v) {
  require_nonneg(x, "x");
  require_nonneg(epsilon, "epsilon");
  require_pos(v, "v");
  if (x == 0.0) return {0.0, true};
  return {bernstein_parts(x, epsilon, v).lambda, false};
}

BoundResult bennett_b1(double x, double epsilon, double v,
                       bool allow_v_zero_limit) {
  require_nonneg(x, "x");
  require_nonneg(epsilon, "epsilon");
  require_nonneg(v, "v");
  if (x == 0.0) return unit_result(BoundFamily::bennett_b1);
  if (v == 0.0) {
    if (!allow_v_zero_limit)
      throw domain_error("bennett_b1: v must be > 0 (limit form not enabled)");
    if (!(epsilon > 0.0))
      throw domain_error("bennett_b1: v = 0 limit needs epsilon > 0");
    // exponent -lambda x with lambda -> 1/epsilon: the exp{-x/eps} limit.
    BoundResult r = make_result(BoundFamily::bennett_b1, -x / epsilon,
                                1.0 / epsilon);
    r.limit_form = true;
    return r;
  }
  const auto p = bernstein_parts(x, epsilon, v);
  // Optimal exponent -x^2 / (v^2 + v sqrt(v^2 + 2 x eps) + x eps); the rate's
  // denominator carries one extra x eps term, so peel it off.
  return make_result(BoundFamily::bennett_b1, -x * x / (p.denom - x * epsilon),
                     p.lambda);
}

BoundResult bennett_refined(double x, double epsilon, double v,
                            std::int64_t n) {
  require_nonneg(x, "x");
  require_nonneg(epsilon, "epsilon");
  require_pos(v, "v");
  require_steps(n);
  if (x == 0.0) return unit_result(BoundFamily::bennett_b1n);
  const auto p = bernstein_parts(x, epsilon, v);
  const double t =
      p.lambda * p.lambda * v * v / (2.0 * static_cast<double>(n) * p.one_minus);
  const double expo =
      -p.lambda * x + static_cast<double>(n) * std::log1p(t);
  return make_result(BoundFamily::bennett_b1n, expo, p.lambda);
}

double improvement_factor(double x, double epsilon, double v, std::int64_t n) {
  require_nonneg(x, "x");
  require_nonneg(epsilon, "epsilon");
  require_pos(v, "v");
  require_steps(n);
  if (x == 0.0) return 1.0;
  const auto p = bernstein_parts(x, epsilon, v);
  const double t =
      p.lambda * p.lambda * v * v / (2.0 * static_cast<double>(n) * p.one_minus);
  return std::exp(-static_cast<double>(n) * psi(t));
}

ThirdMomentBounds third_moment(double x, double v, double w) {
  require_nonneg(x, "x");
  require_pos(v, "v");
  require_nonneg(w, "w");
  ThirdMomentBounds out;
  const double eps_equiv = w / (3.0 * v * v);
  if (x == 0.0) {
    out.raw = unit_result(BoundFamily::third_moment);
    out.b1 = unit_result(BoundFamily::bennett_b1);
    out.b2 = unit_result(BoundFamily::freedman_b2);
    return out;
  }
  const double lambda =
      2.0 * x / (v * v + std::sqrt(v * v * v * v + 4.0 * w * x));
  out.raw = make_result(BoundFamily::third_moment,
                        third_moment_exponent(lambda, x, v, w), lambda);
  out.b1 = bennett_b1(x, eps_equiv, v);
  out.b2 = freedman_b2(x, eps_equiv, v);
  return out;
}

LowerBoundedBounds lower_bounded(double x, double v) {
  require_nonneg(x, "x");
  require_pos(v, "v");
  LowerBoundedBounds out;
  if (x == 0.0) {
    out.tight = unit_result(BoundFamily::lower_bounded);
    out.b1 = unit_result(BoundFamily::bennett_b1);
    out.b2 = unit_result(BoundFamily::freedman_b2);
    return out;
  }
  const double vsq = v * v;
  const double expo = vsq * std::log1p(x / vsq) - x;
  out.tight =
      make_result(BoundFamily::lower_bounded, expo, x / (vsq + x));
  out.b1 = bennett_b1(x, 1.0, v);
  out.b2 = freedman_b2(x, 1.0, v);
  return out;
}

FukNagaevBounds fuk_nagaev(double x, double y, double v, std::int64_t n) {
  require_nonneg(x, "x");
  require_pos(y, "y");
  require_pos(v, "v");
  require_steps(n);
  const double nd = static_cast<double>(n);
  if (v * v > nd * y * y)
    throw domain_error("fuk_nagaev: requires v^2 <= n y^2");
  if (x >= nd * y)
    throw domain_error("fuk_nagaev: requires x < n y (tail saturates)");
  FukNagaevBounds out;
  if (x == 0.0) {
    out.tight = unit_result(BoundFamily::fuk_nagaev_tight);
    out.loose = unit_result(BoundFamily::fuk_nagaev_loose);
    return out;
  }

  // Loose: rate from sinh inversion; cosh(asinh(tau)) = sqrt(1 + tau^2).
  const double tau = x * y / (v * v);
  const double lambda_loose = std::asinh(tau) / y;
  const double root = std::hypot(1.0, tau);  // sqrt(1 + tau^2), no overflow
  const double coshm1_loose =
      tau >= 1.0 ? root - 1.0 : tau * tau / (1.0 + root);
  const double loose_expo =
      -lambda_loose * x + v * v / (y * y) * coshm1_loose;
  out.loose =
      make_result(BoundFamily::fuk_nagaev_loose, loose_expo, lambda_loose);

  // Tight: rate in closed form; in-domain the radicand is nonnegative, so
  // only rounding can push it below zero.
  const double u = x / (nd * y);
  const double d = v * v / (nd * y * y);
  const double radicand =
      std::max(0.0, 1.0 + tau * tau - 2.0 * x * x / (nd * v * v));
  const double big_a = (tau - u + std::sqrt(radicand)) / (1.0 - u);
  const double lambda_tight = std::log(big_a) / y;
  const double tight_expo =
      -lambda_tight * x + nd * log1p_cosh_term(d, lambda_tight * y);
  out.tight =
      make_result(BoundFamily::fuk_nagaev_tight, tight_expo, lambda_tight);
  return out;
}

BoundResult subgaussian(double x, double v) {
  require_nonneg(x, "x");
  require_nonneg(v, "v");
  if (x == 0.0) return unit_result(BoundFamily::subgaussian);
  if (v == 0.0) {
    // A zero-variance budget with x > 0 is an exactly-impossible tail.
    BoundResult r;
    r.family = BoundFamily::subgaussian;
    r.value = 0.0;
    r.log_value = -kInf;
    r.lambda = kInf;
    r.degenerate = true;
    return r;
  }
  const double vsq = v * v;
  return make_result(BoundFamily::subgaussian, -x * x / (2.0 * vsq), x / vsq);
}

GenericBounds generic(double x, double v, double w, std::int64_t n,
                      const std::function<double(double)>& f,
                      const std::function<double(double)>& g, double lambda) {
  require_nonneg(x, "x");
  require_nonneg(v, "v");
  require_nonneg(w, "w");
  require_steps(n);
  require_nonneg(lambda, "lambda");
  GenericBounds out;
  if (x == 0.0) {
    out.refined = unit_result(BoundFamily::generic_refined);
    out.loose = unit_result(BoundFamily::generic_loose);
    return out;
  }
  const double fv = f(lambda);
  if (!std::isfinite(fv) || fv < 0.0)
    throw evaluation_error("generic: f(lambda) must be finite and >= 0");
  const double gv = g(lambda);
  if (!std::isfinite(gv) || gv < 0.0)
    throw evaluation_error("generic: g(lambda) must be finite and >= 0");
  const double nd = static_cast<double>(n);
  const double base = -lambda * x + gv * v * v;
  out.refined = make_result(BoundFamily::generic_refined,
                            base + nd * std::log1p(fv * w / nd), lambda);
  out.loose = make_result(BoundFamily::generic_loose, base + fv * w, lambda);
  return out;
}

BoundResult weighted_alpha(double x, double v, double alpha, double c) {
  require_nonneg(x, "x");
  require_pos(v, "v");
  require_pos(c, "c");
  require_finite(alpha, "alpha");
  if (!(alpha > 1.0 && alpha <= 2.0))
    throw domain_error("weighted_alpha: alpha must lie in (1, 2]");
  if (x == 0.0) return unit_result(BoundFamily::weighted_alpha);
  const double big_c =
      std::pow(c * alpha, 1.0 / (1.0 - alpha)) * (1.0 - 1.0 / alpha);
  const double expo = -big_c * std::pow(x / v, alpha / (alpha - 1.0));
  const double lambda =
      std::pow(x / (c * alpha * std::pow(v, alpha)), 1.0 / (alpha - 1.0));
  BoundResult r = make_result(BoundFamily::weighted_alpha, expo, lambda);
  if (expo == -kInf) r.degenerate = true;
  return r;
}

double PinelisComparison::decay_factor(double x) const {
  return (1.0 + x / std::sqrt(v_hat_sq)) * std::exp(-0.5 * x * x * delta);
}

PinelisComparison compare_to_pinelis(std::span<const double> per_step_sup,
                                     double realized_sum) {
  if (per_step_sup.empty())
    throw domain_error("compare_to_pinelis: per_step_sup must be non-empty");
  double total = 0.0;
  for (double s : per_step_sup) {
    require_pos(s, "per_step_sup entry");
    total += s;
  }
  require_pos(realized_sum, "realized_sum");
  if (realized_sum > total)
    throw consistency_error(
        "compare_to_pinelis: realized_sum exceeds the sum of per-step sups");
  PinelisComparison cmp;
  cmp.v_hat_sq = total;
  cmp.c_sq_sum = realized_sum;
  cmp.delta = 1.0 / realized_sum - 1.0 / total;
  return cmp;
}

namespace {

// Field bookkeeping for evaluate(): each family declares what it reads, and
// anything else present in the query is flagged as a stray.
struct FieldUse {
  bool x = false, v = false, epsilon = false, w = false, y = false,
       alpha = false, c = false, n = false;
};

template <typename T>
T need(const std::optional<T>& field, const char* name) {
  if (!field)
    throw configuration_error(std::string("evaluate: missing field ") + name);
  return *field;
}

void reject_strays(const BoundQuery& q, const FieldUse& used,
                   BoundFamily family) {
  auto stray = [&](bool present, bool use, const char* name) {
    if (present && !use)
      throw configuration_error(std::string("evaluate: field ") + name +
                                " is not read by family " +
                                std::string(family_name(family)));
  };
  stray(q.x.has_value(), used.x, "x");
  stray(q.v.has_value(), used.v, "v");
  stray(q.epsilon.has_value(), used.epsilon, "epsilon");
  stray(q.w.has_value(), used.w, "w");
  stray(q.y.has_value(), used.y, "y");
  stray(q.alpha.has_value(), used.alpha, "alpha");
  stray(q.c.has_value(), used.c, "c");
  stray(q.n.has_value(), used.n, "n");
}

}  // namespace

BoundResult evaluate(BoundFamily family, const BoundQuery& q) {
  FieldUse use;
  switch (family) {
    case BoundFamily::freedman_b2: {
      use.x = use.v = use.epsilon = true;
      reject_strays(q, use, family);
      return freedman_b2(need(q.x, "x"), need(q.epsilon, "epsilon"),
                         need(q.v, "v"));
    }
    case BoundFamily::bennett_b1: {
      use.x = use.v = use.epsilon = true;
      reject_strays(q, use, family);
      return bennett_b1(need(q.x, "x"), need(q.epsilon, "epsilon"),
                        need(q.v, "v"));
    }
    case BoundFamily::bennett_b1n: {
      use.x = use.v = use.epsilon = use.n = true;
      reject_strays(q, use, family);
      return bennett_refined(need(q.x, "x"), need(q.epsilon, "epsilon"),
                             need(q.v, "v"), need(q.n, "n"));
    }
    case BoundFamily::third_moment: {
      use.x = use.v = use.w = true;
      reject_strays(q, use, family);
      return third_moment(need(q.x, "x"), need(q.v, "v"), need(q.w, "w")).raw;
    }
    case BoundFamily::lower_bounded: {
      use.x = use.v = true;
      reject_strays(q, use, family);
      return lower_bounded(need(q.x, "x"), need(q.v, "v")).tight;
    }
    case BoundFamily::fuk_nagaev_tight:
    case BoundFamily::fuk_nagaev_loose: {
      use.x = use.v = use.y = use.n = true;
      reject_strays(q, use, family);
      auto pair = fuk_nagaev(need(q.x, "x"), need(q.y, "y"), need(q.v, "v"),
                             need(q.n, "n"));
      return family == BoundFamily::fuk_nagaev_tight ? pair.tight : pair.loose;
    }
    case BoundFamily::subgaussian: {
      use.x = use.v = true;
      reject_strays(q, use, family);
      return subgaussian(need(q.x, "x"), need(q.v, "v"));
    }
    case BoundFamily::weighted_alpha: {
      use.x = use.v = use.alpha = use.c = true;
      reject_strays(q, use, family);
      return weighted_alpha(need(q.x, "x"), need(q.v, "v"),
                            need(q.alpha, "alpha"), need(q.c, "c"));
    }
    default:
      throw configuration_error(
          std::string("evaluate: family ") +
          std::string(family_name(family)) +
          " is not evaluable from a parameter query");
  }
}

}  // namespace bounds
}  // namespace tailbound
