#include "tailbound/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace tailbound::optimize {

namespace {
constexpr double kDomainMargin = 1e-12;  // relative shrink of the open bracket
constexpr double kRelTol = 1e-10;        // relative tolerance on lambda
constexpr int kMaxIter = 400;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
}  // namespace

Optimum optimize_lambda(const std::function<double(double)>& exponent,
                        double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw domain_error("optimize_lambda: need finite lo < hi");

  // Never evaluate the open endpoints themselves.
  const double width = hi - lo;
  double a = lo + kDomainMargin * width;
  double b = hi - kDomainMargin * width;

  int evals = 0;
  auto eval = [&](double lambda) {
    const double val = exponent(lambda);
    ++evals;
    if (!std::isfinite(val))
      throw optimization_error(
          "optimize_lambda: exponent non-finite inside bracket", lambda);
    return val;
  };

  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int i = 0; i < kMaxIter; ++i) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    if (b - a <= kRelTol * scale) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = eval(d);
    }
  }
  double lambda = 0.5 * (a + b);
  double value = eval(lambda);

  // Near the minimum the exponent is flat, so pure value comparisons stop
  // resolving the minimizer once differences sink below double-precision
  // noise; the bracket can park anywhere on a plateau of width
  // ~sqrt(eps / f''). Two three-point parabolic fits over wider, resolvable
  // spans pull lambda back to ~1e-9 without derivatives. Each candidate is
  // accepted only if it does not increase the value, so non-smooth exponents
  // keep the plain golden-section answer.
  const double edge_lo = lo + kDomainMargin * width;
  const double edge_hi = hi - kDomainMargin * width;
  double h = 1e-3 * (1.0 + std::fabs(lambda));
  h = std::min({h, lambda - edge_lo, edge_hi - lambda});
  if (h > 0.0 && std::isfinite(h)) {
    double fm = eval(lambda - h);
    double fp = eval(lambda + h);
    double curve = fm - 2.0 * value + fp;
    if (curve > 0.0) {
      // Rescale the span so the measured curvature signal sits a few decades
      // above rounding noise: wide enough to resolve the vertex, narrow
      // enough that the cubic term's bias is negligible. Then refit.
      const double target = 1e-12 * (1.0 + std::fabs(value));
      const double hs = std::clamp(h * std::sqrt(target / curve),
                                   1e-9 * (1.0 + std::fabs(lambda)), h);
      if (hs < h) {
        const double fm2 = eval(lambda - hs);
        const double fp2 = eval(lambda + hs);
        const double curve2 = fm2 - 2.0 * value + fp2;
        if (curve2 > 0.0) {
          fm = fm2;
          fp = fp2;
          curve = curve2;
          h = hs;
        }
      }
      const double step = 0.5 * h * (fm - fp) / curve;
      if (std::isfinite(step) && std::fabs(step) <= h) {
        const double cand = lambda + step;
        const double fcand = eval(cand);
        // Ties at the noise floor go to the fitted vertex; a few ulps of
        // slack lets a genuinely better minimizer through while still
        // rejecting the large excursions a kinked exponent could produce.
        if (fcand <= value + 1e-14 * (1.0 + std::fabs(value))) {
          lambda = cand;
          value = std::min(value, fcand);
        }
      }
    }
  }
  return {lambda, value, evals};
}

}  // namespace tailbound::optimize
