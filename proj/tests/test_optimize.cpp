#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracle_helpers.hpp"
#include "tailbound/bounds.hpp"
#include "tailbound/errors.hpp"
#include "tailbound/optimize.hpp"

using tailbound::domain_error;
using tailbound::optimization_error;
using tailbound::optimize::Optimum;
using tailbound::optimize::optimize_lambda;
using testutil::abs_close;

namespace {

// Frozen references (high-precision external evaluation).
constexpr double kBernsteinLambda_2_05_1 = 0.84529946162074847098;  // 4/(3+sqrt 3)
constexpr double kBernsteinValue_2_05_1 = -1.0717967697244908259;   // 4*sqrt(3)-8
constexpr double kLowerValue_1_1 = -0.30685281944005469058;         // log(2/e)

}  // namespace

TEST_SUITE("optimize") {

TEST_CASE("recovers the closed-form variance-denominator minimizer") {
  const Optimum opt = optimize_lambda(
      [](double l) { return tailbound::bounds::bernstein_exponent(l, 2.0, 0.5, 1.0); },
      0.0, 2.0);
  CHECK_MESSAGE(abs_close(opt.lambda, kBernsteinLambda_2_05_1, 1e-8),
                "lambda = ", opt.lambda);
  CHECK_MESSAGE(abs_close(opt.value, kBernsteinValue_2_05_1, 1e-10),
                "value = ", opt.value);
  CHECK(opt.evaluations > 0);
}

TEST_CASE("minimizes a plain quadratic exponent") {
  // -lambda + lambda^2 / 2 has vertex (1, -1/2).
  const Optimum opt =
      optimize_lambda([](double l) { return -l + 0.5 * l * l; }, 0.0, 4.0);
  CHECK_MESSAGE(abs_close(opt.lambda, 1.0, 1e-8), "lambda = ", opt.lambda);
  CHECK_MESSAGE(abs_close(opt.value, -0.5, 1e-12), "value = ", opt.value);
}

TEST_CASE("recovers the lower-bounded-steps minimizer on its unit interval") {
  const Optimum opt = optimize_lambda(
      [](double l) { return tailbound::bounds::lower_bounded_exponent(l, 1.0, 1.0); },
      0.0, 1.0);
  CHECK_MESSAGE(abs_close(opt.lambda, 0.5, 1e-8), "lambda = ", opt.lambda);
  CHECK_MESSAGE(abs_close(opt.value, kLowerValue_1_1, 1e-10),
                "value = ", opt.value);
}

TEST_CASE("polish does not degrade smooth high-accuracy minimizers") {
  const Optimum opt = optimize_lambda(
      [](double l) { return (l - 0.7) * (l - 0.7) + 1.0; }, 0.0, 1.0);
  CHECK_MESSAGE(abs_close(opt.lambda, 0.7, 5e-9), "lambda = ", opt.lambda);
  CHECK(abs_close(opt.value, 1.0, 1e-14));
}

TEST_CASE("kinked objectives keep the bracketed answer") {
  // |lambda - 0.3| is unimodal but not differentiable at its minimizer; the
  // parabolic refinement must not be fooled into a worse point.
  const Optimum opt =
      optimize_lambda([](double l) { return std::fabs(l - 0.3); }, 0.0, 1.0);
  CHECK_MESSAGE(abs_close(opt.lambda, 0.3, 1e-8), "lambda = ", opt.lambda);
  CHECK(opt.value <= 1e-8);
}

TEST_CASE("monotone objectives converge to the near edge") {
  const Optimum inc = optimize_lambda([](double l) { return l; }, 0.0, 1.0);
  CHECK(inc.lambda <= 1e-6);
  CHECK(inc.value <= 1e-6);
  const Optimum dec = optimize_lambda([](double l) { return -l; }, 0.0, 1.0);
  CHECK(dec.lambda >= 1.0 - 1e-6);
  CHECK(dec.value <= -(1.0 - 1e-6));
}

TEST_CASE("non-finite objective values raise optimization errors") {
  CHECK_THROWS_AS(optimize_lambda(
                      [](double l) {
                        return l < 0.5 ? 0.0
                                       : std::numeric_limits<double>::infinity();
                      },
                      0.0, 1.0),
                  optimization_error);
  CHECK_THROWS_AS(optimize_lambda(
                      [](double) { return std::nan(""); }, 0.0, 1.0),
                  optimization_error);
}

TEST_CASE("invalid brackets raise domain errors") {
  const auto f = [](double l) { return l * l; };
  CHECK_THROWS_AS(optimize_lambda(f, 1.0, 1.0), domain_error);
  CHECK_THROWS_AS(optimize_lambda(f, 2.0, 1.0), domain_error);
  CHECK_THROWS_AS(optimize_lambda(f, 0.0, std::numeric_limits<double>::infinity()),
                  domain_error);
}

}  // TEST_SUITE
