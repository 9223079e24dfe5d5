#pragma once
// Derivative-free one-dimensional minimization for exponent functions.

#include <functional>

#include "tailbound/errors.hpp"

namespace tailbound::optimize {

struct Optimum {
  double lambda = 0.0;  // minimizer
  double value = 0.0;   // objective value at the minimizer
  int evaluations = 0;
};

// Minimizes a unimodal `exponent` over the open interval (lo, hi):
// golden-section search followed by a guarded three-point parabolic
// refinement that recovers the ~1e-9 accuracy on lambda that pure value
// comparisons lose to rounding noise near a flat minimum. The bracket is
// shrunk inward by a relative margin of 1e-12 so the open endpoints are
// never evaluated; golden-section iteration stops once the bracket width
// falls below 1e-10 relative to the scale of lambda, and refinement steps
// are kept only when they do not increase the value. A non-finite objective
// value inside the bracket raises optimization_error carrying the offending
// lambda.
Optimum optimize_lambda(const std::function<double(double)>& exponent,
                        double lo, double hi);

}  // namespace tailbound::optimize
