#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "oracle_helpers.hpp"
#include "tailbound/bounds.hpp"
#include "tailbound/errors.hpp"
#include "tailbound/montecarlo.hpp"
#include "tailbound/processes.hpp"

using namespace tailbound;
using namespace tailbound::montecarlo;
using testutil::rel_close;

namespace {

// Frozen references (high-precision external evaluation).
// Exact binomial intervals:
constexpr double kCp0_100_95_high = 0.0295130496070399345;
constexpr double kCp5_10_95_low = 0.18708602844739853164;
constexpr double kCp5_10_95_high = 0.81291397155260146836;
constexpr double kCp3_50_99_low = 0.0068724853329516426315;
constexpr double kCp3_50_99_high = 0.20270626946864325688;

// Exact hit probabilities of P(exists k <= n: S_k >= x), computed by an
// independent dynamic program over the step lattice with rational arithmetic.
// Balanced three-point walk, y = 1, v_sq = 10, n = 20:
constexpr double kTp10_x3 = 0.34888887944907765;
constexpr double kTp10_x4 = 0.21102359760880063;
constexpr double kTp10_x5 = 0.11727520595741225;
constexpr double kTp10_x10 = 0.0014504910141113214;
// Endpoint probability P(S_20 >= 4) for the same walk:
constexpr double kTp10_end4 = 0.13409362552738457;
// Unit-weight sign walk, n = 50:
constexpr double kRad50_t8 = 0.26243753571104378;
constexpr double kRad50_t16 = 0.024092907698449295;
// Skewed two-point walk (b = 1, a = -1/4, p = 1/5), n = 50:
constexpr double kB2p_x5 = 0.161437235532259;
constexpr double kB2p_x8 = 0.028817722502934715;

void check_rel(double got, double want, double tol, const std::string& what) {
  CHECK_MESSAGE(rel_close(got, want, tol),
                what, ": got ", got, " want ", want);
}

TailEvent plain_exists(double x) {
  return TailEvent{EventKind::exists_k, x, VarClause::none, 0.0,
                   BudgetClause::none, 0.0};
}

// 5-sigma acceptance band around an exactly known probability.
void check_within_5se(const TailEstimate& est, double truth,
                      const std::string& what) {
  const double se =
      std::sqrt(truth * (1.0 - truth) / static_cast<double>(est.trials));
  CHECK_MESSAGE(std::fabs(est.p_hat - truth) <= 5.0 * se,
                what, ": p_hat = ", est.p_hat, " truth = ", truth,
                " 5se = ", 5.0 * se);
  CHECK(est.ci_low <= truth);
  CHECK(truth <= est.ci_high);
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("exact binomial intervals match frozen values") {
  BinomialInterval ci = clopper_pearson(0, 100, 0.95);
  CHECK(ci.low == 0.0);
  check_rel(ci.high, kCp0_100_95_high, 1e-12, "zero-hit upper limit");

  ci = clopper_pearson(5, 10, 0.95);
  check_rel(ci.low, kCp5_10_95_low, 1e-12, "5/10 low");
  check_rel(ci.high, kCp5_10_95_high, 1e-12, "5/10 high");

  ci = clopper_pearson(3, 50, 0.99);
  check_rel(ci.low, kCp3_50_99_low, 1e-12, "3/50 low");
  check_rel(ci.high, kCp3_50_99_high, 1e-12, "3/50 high");

  // Boundary counts spend the whole budget on their informative side.
  ci = clopper_pearson(20, 20, 0.9);
  CHECK(ci.high == 1.0);
  check_rel(ci.low, std::exp(std::log(0.1) / 20.0), 1e-15, "full-hit lower");

  // Wider confidence, wider interval.
  const BinomialInterval narrow = clopper_pearson(5, 10, 0.95);
  const BinomialInterval wide = clopper_pearson(5, 10, 0.99);
  CHECK(wide.low < narrow.low);
  CHECK(wide.high > narrow.high);

  CHECK_THROWS_AS(clopper_pearson(1, 0, 0.95), domain_error);
  CHECK_THROWS_AS(clopper_pearson(11, 10, 0.95), domain_error);
  CHECK_THROWS_AS(clopper_pearson(5, 10, 1.0), domain_error);
}

TEST_CASE("tail estimates are bit-identical across worker counts") {
  const ProcessSpec spec{ThreePoint{1.0, 5.0, 12}};
  const TailEvent event = plain_exists(2.0);
  EstimateOptions opts;
  opts.trials = 20000;
  opts.seed = 7;
  opts.diff_threshold = 0.5;

  opts.workers = 1;
  const TailEstimate base = estimate_tail(spec, event, opts);
  for (int workers : {2, 7, 64}) {
    opts.workers = workers;
    const TailEstimate est = estimate_tail(spec, event, opts);
    CHECK(est.hits == base.hits);
    CHECK(est.extra_hits == base.extra_hits);
    CHECK(est.p_hat == base.p_hat);
    CHECK(est.ci_low == base.ci_low);
  }
  CHECK(base.trials == 20000);
  CHECK(base.seed == 7);
  CHECK(base.hits > 0);
}

TEST_CASE("worker count resolves from the environment when unset") {
  const ProcessSpec spec{ThreePoint{1.0, 5.0, 12}};
  const TailEvent event = plain_exists(2.0);
  EstimateOptions opts;
  opts.trials = 5000;
  opts.seed = 7;

  opts.workers = 1;
  const TailEstimate base = estimate_tail(spec, event, opts);

  opts.workers = 0;
  setenv("TAILBOUND_WORKERS", "abc", 1);
  CHECK_THROWS_AS(estimate_tail(spec, event, opts), configuration_error);
  setenv("TAILBOUND_WORKERS", "0", 1);
  CHECK_THROWS_AS(estimate_tail(spec, event, opts), configuration_error);
  setenv("TAILBOUND_WORKERS", "3", 1);
  const TailEstimate env_est = estimate_tail(spec, event, opts);
  unsetenv("TAILBOUND_WORKERS");
  CHECK(env_est.hits == base.hits);

  opts.workers = -1;
  CHECK_THROWS_AS(estimate_tail(spec, event, opts), domain_error);
}

TEST_CASE("estimates agree with exact lattice dynamic programs") {
  EstimateOptions opts;
  opts.trials = 200000;
  opts.seed = 31;
  opts.workers = 4;

  const ProcessSpec tp{ThreePoint{1.0, 10.0, 20}};
  check_within_5se(estimate_tail(tp, plain_exists(3.0), opts), kTp10_x3,
                   "three-point x=3");
  check_within_5se(estimate_tail(tp, plain_exists(4.0), opts), kTp10_x4,
                   "three-point x=4");
  check_within_5se(estimate_tail(tp, plain_exists(5.0), opts), kTp10_x5,
                   "three-point x=5");
  check_within_5se(estimate_tail(tp, plain_exists(10.0), opts), kTp10_x10,
                   "three-point x=10");

  RademacherWeighted rad;
  rad.weights.assign(50, 1.0);
  const ProcessSpec rw{rad};
  check_within_5se(estimate_tail(rw, plain_exists(8.0), opts), kRad50_t8,
                   "sign walk x=8");
  check_within_5se(estimate_tail(rw, plain_exists(16.0), opts), kRad50_t16,
                   "sign walk x=16");

  const ProcessSpec b2p{BernsteinTwoPoint{0.2, -0.25, 1.0, 50}};
  check_within_5se(estimate_tail(b2p, plain_exists(5.0), opts), kB2p_x5,
                   "skewed walk x=5");
  check_within_5se(estimate_tail(b2p, plain_exists(8.0), opts), kB2p_x8,
                   "skewed walk x=8");
}

TEST_CASE("endpoint tails stay below the exact Chernoff envelope") {
  // P(S_20 >= 4) for the three-point walk, against its optimized-MGF bound.
  const std::int64_t n = 20;
  const double x = 4.0;
  const int trials = 200000;
  int hits = 0;
  PathStats path;
  const ProcessSpec spec{ThreePoint{1.0, 10.0, n}};
  for (int i = 0; i < trials; ++i) {
    RngStream rng = RngStream::substream(99, static_cast<std::uint64_t>(i));
    sample_path(spec, rng, path);
    hits += path.s.back() >= x;
  }
  const double p_hat = static_cast<double>(hits) / trials;
  const double se = std::sqrt(kTp10_end4 * (1.0 - kTp10_end4) / trials);
  CHECK_MESSAGE(std::fabs(p_hat - kTp10_end4) <= 5.0 * se,
                "endpoint p_hat = ", p_hat);
  const double chernoff = exact_chernoff_three_point(x, 1.0, 10.0, n);
  CHECK(kTp10_end4 <= chernoff);
  const BinomialInterval ci = clopper_pearson(
      static_cast<std::uint64_t>(hits), static_cast<std::uint64_t>(trials),
      0.99);
  CHECK(ci.low <= chernoff);
}

TEST_CASE("the exceedance allowance counts large steps") {
  const ProcessSpec spec{ThreePoint{1.0, 10.0, 20}};
  EstimateOptions opts;
  opts.trials = 100000;
  opts.seed = 5;
  opts.workers = 2;
  opts.diff_threshold = 0.5;
  const TailEstimate est = estimate_tail(spec, plain_exists(3.0), opts);
  // P(some step = +1) = 1 - (1 - q/2)^20 with q = 1/2.
  const double truth = 1.0 - std::pow(0.75, 20.0);
  const double se = std::sqrt(truth * (1.0 - truth) / 100000.0);
  CHECK_MESSAGE(std::fabs(est.extra_term - truth) <= 5.0 * se,
                "extra_term = ", est.extra_term);

  opts.diff_threshold = 1.5;  // steps never exceed y = 1
  CHECK(estimate_tail(spec, plain_exists(3.0), opts).extra_hits == 0);
}

TEST_CASE("estimate options are validated") {
  const ProcessSpec spec{ThreePoint{1.0, 5.0, 12}};
  const TailEvent event = plain_exists(2.0);
  EstimateOptions opts;
  opts.workers = 1;
  opts.trials = 0;
  CHECK_THROWS_AS(estimate_tail(spec, event, opts), domain_error);
  opts.trials = 100;
  opts.confidence = 0.4;
  CHECK_THROWS_AS(estimate_tail(spec, event, opts), domain_error);
  opts.confidence = 0.99;
  opts.diff_threshold = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(estimate_tail(spec, event, opts), domain_error);
}

TEST_CASE("pairing derives bound parameters from the process law") {
  EstimateOptions opts;
  opts.workers = 1;

  // Skewed two-point walk: Bernstein scale max(-a, b) = 1, n = 50.
  const ProcessSpec b2p{BernsteinTwoPoint{0.2, -0.25, 1.0, 50}};
  TailEvent ev{EventKind::exists_k, 5.0, VarClause::quadratic_char, 12.5,
               BudgetClause::none, 0.0};
  BoundQuery q = check_pairing(BoundFamily::bennett_b1n, b2p, ev, opts);
  CHECK(q.x == 5.0);
  CHECK(q.epsilon.value() == 1.0);
  check_rel(q.v.value(), std::sqrt(12.5), 1e-15, "derived v");
  CHECK(q.n.value() == 50);
  CHECK(!q.w.has_value());

  q = check_pairing(BoundFamily::freedman_b2, b2p, ev, opts);
  CHECK(q.epsilon.value() == 1.0);
  CHECK(!q.n.has_value());

  // Bounded lattice steps: the truncation level defaults to the a.s. bound.
  const ProcessSpec tp{ThreePoint{1.0, 10.0, 20}};
  TailEvent fn_ev{EventKind::exists_k, 4.0, VarClause::quadratic_char, 10.0,
                  BudgetClause::none, 0.0};
  q = check_pairing(BoundFamily::fuk_nagaev_tight, tp, fn_ev, opts);
  CHECK(q.y.value() == 1.0);
  CHECK(q.n.value() == 20);
  opts.diff_threshold = 2.5;  // an explicit level wins
  q = check_pairing(BoundFamily::fuk_nagaev_tight, tp, fn_ev, opts);
  CHECK(q.y.value() == 2.5);
  opts.diff_threshold.reset();

  // Third-moment pairing pulls both budgets from the event.
  TailEvent tm_ev{EventKind::exists_k, 3.0, VarClause::squared_variation, 10.0,
                  BudgetClause::neg_third, 2.5};
  q = check_pairing(BoundFamily::third_moment, tp, tm_ev, opts);
  check_rel(q.v.value(), std::sqrt(10.0), 1e-15, "third-moment v");
  CHECK(q.w.value() == 2.5);

  // Variance-proxy route: v is the square root of the proxy budget.
  RademacherWeighted rad;
  rad.weights.assign(50, 0.125);
  TailEvent vs_ev{EventKind::exists_k, 1.0, VarClause::none, 0.0,
                  BudgetClause::v_sum, 0.78125};
  q = check_pairing(BoundFamily::subgaussian, ProcessSpec{rad}, vs_ev, opts);
  check_rel(q.v.value(), std::sqrt(0.78125), 1e-15, "proxy v");

  // Self-normalized pairing needs no clauses and fixes v = 1.
  TailEvent sn_ev{EventKind::self_normalized, 2.0, VarClause::none, 0.0,
                  BudgetClause::none, 0.0};
  q = check_pairing(BoundFamily::subgaussian, ProcessSpec{rad}, sn_ev, opts);
  CHECK(q.v.value() == 1.0);
}

TEST_CASE("pairings that lack a hypothesis are refused by name") {
  EstimateOptions opts;
  opts.workers = 1;
  TailEvent qc{EventKind::exists_k, 3.0, VarClause::quadratic_char, 10.0,
               BudgetClause::none, 0.0};

  // Random path length.
  GaltonWatson gw;
  gw.offspring.mean = 2.0;
  gw.generations = 5;
  CHECK_THROWS_WITH_AS(
      check_pairing(BoundFamily::bennett_b1n, ProcessSpec{gw}, qc, opts),
      doctest::Contains("fixed path length"), configuration_error);

  // No constant Bernstein scale for state-scaled steps.
  Ar1 ar1;
  ar1.noise = NoiseSpec{};  // gaussian
  ar1.n = 10;
  CHECK_THROWS_WITH_AS(
      check_pairing(BoundFamily::bennett_b1, ProcessSpec{ar1}, qc, opts),
      doctest::Contains("Bernstein moment scale"), configuration_error);
  CHECK_THROWS_WITH_AS(
      check_pairing(BoundFamily::freedman_b2, ProcessSpec{ar1}, qc, opts),
      doctest::Contains("step scale"), configuration_error);

  // Steps dipping below -1.
  const ProcessSpec deep{BernsteinTwoPoint{0.2, -1.5, 6.0, 10}};
  CHECK_THROWS_WITH_AS(
      check_pairing(BoundFamily::lower_bounded, deep, qc, opts),
      doctest::Contains("bounded below by -1"), configuration_error);

  // Negated tails need conditional symmetry.
  TailEvent neg = qc;
  neg.kind = EventKind::negated;
  const ProcessSpec skewed{BernsteinTwoPoint{0.2, -0.25, 1.0, 50}};
  CHECK_THROWS_WITH_AS(check_pairing(BoundFamily::freedman_b2, skewed, neg, opts),
                       doctest::Contains("conditionally symmetric"),
                       configuration_error);

  // Asymmetric martingale cannot take the bounded-jump pair.
  CHECK_THROWS_WITH_AS(
      check_pairing(BoundFamily::fuk_nagaev_tight, skewed, qc, opts),
      doctest::Contains("conditionally symmetric martingale"),
      configuration_error);

  // Unbounded steps need an explicit truncation level.
  Regression gauss_reg;
  gauss_reg.design = {DesignSpec::Kind::constant, 1.0, 1.0};
  gauss_reg.noise = NoiseSpec{};
  gauss_reg.n = 10;
  CHECK_THROWS_WITH_AS(
      check_pairing(BoundFamily::fuk_nagaev_tight, ProcessSpec{gauss_reg}, qc,
                    opts),
      doctest::Contains("truncation level"), configuration_error);

  // The variance-proxy route needs v_sum to be a real c^2 proxy.
  const ProcessSpec bbe{BoundedBelowExponential{1.0, 1.0, 20}};
  TailEvent vs{EventKind::exists_k, 3.0, VarClause::none, 0.0,
               BudgetClause::v_sum, 20.0};
  CHECK_THROWS_WITH_AS(check_pairing(BoundFamily::subgaussian, bbe, vs, opts),
                       doctest::Contains("c^2 proxy"), configuration_error);

  // Self-normalized events pair only with the subgaussian family, and only
  // for independent symmetric steps.
  TailEvent sn{EventKind::self_normalized, 2.0, VarClause::none, 0.0,
               BudgetClause::none, 0.0};
  const ProcessSpec tp{ThreePoint{1.0, 10.0, 20}};
  CHECK_THROWS_WITH_AS(check_pairing(BoundFamily::freedman_b2, tp, sn, opts),
                       doctest::Contains("self-normalized"),
                       configuration_error);
  const ProcessSpec sc{SinCosRademacher{10}};
  CHECK_THROWS_WITH_AS(check_pairing(BoundFamily::subgaussian, sc, sn, opts),
                       doctest::Contains("independent"), configuration_error);

  // Subgaussian needs one of its three routes.
  CHECK_THROWS_WITH_AS(
      check_pairing(BoundFamily::subgaussian, tp, plain_exists(3.0), opts),
      doctest::Contains("pairs via"), configuration_error);

  // Wrong clause kind for the variance budget.
  TailEvent sq = qc;
  sq.var_clause = VarClause::squared_variation;
  CHECK_THROWS_WITH_AS(check_pairing(BoundFamily::freedman_b2, tp, sq, opts),
                       doctest::Contains("quadratic-char"),
                       configuration_error);
  TailEvent no_w{EventKind::exists_k, 3.0, VarClause::squared_variation, 10.0,
                 BudgetClause::none, 0.0};
  CHECK_THROWS_WITH_AS(check_pairing(BoundFamily::third_moment, tp, no_w, opts),
                       doctest::Contains("neg-third"), configuration_error);

  // Estimator-side families carry no path semantics at all.
  CHECK_THROWS_WITH_AS(
      check_pairing(BoundFamily::regression_bernstein, tp, qc, opts),
      doctest::Contains("not verifiable"), configuration_error);
}

TEST_CASE("verification verdicts compare the bound to the binomial limit") {
  const ProcessSpec tp{ThreePoint{1.0, 10.0, 20}};
  TailEvent ev{EventKind::exists_k, 4.0, VarClause::quadratic_char, 10.0,
               BudgetClause::none, 0.0};
  EstimateOptions opts;
  opts.trials = 20000;
  opts.seed = 11;
  opts.workers = 2;

  const VerificationVerdict v =
      verify_bound(BoundFamily::freedman_b2, tp, ev, opts);
  CHECK(v.family == BoundFamily::freedman_b2);
  CHECK(v.process == "three-point");
  CHECK(v.query.x == 4.0);
  CHECK(v.extra_term == 0.0);
  CHECK(v.bound.value ==
        bounds::freedman_b2(4.0, 1.0, std::sqrt(10.0)).value);
  CHECK(v.margin == v.bound.value - v.estimate.ci_low);
  CHECK(v.passed == (v.estimate.ci_low <= v.bound.value + v.extra_term));
  CHECK(v.passed);  // the certified bound really does dominate here

  // Bounded-jump family on a bounded process: the allowance is measured but
  // empty, because no step can exceed the truncation level y = 1.
  const VerificationVerdict fn =
      verify_bound(BoundFamily::fuk_nagaev_tight, tp, ev, opts);
  CHECK(fn.query.y.value() == 1.0);
  CHECK(fn.estimate.extra_hits == 0);
  CHECK(fn.extra_term == 0.0);
  CHECK(fn.passed);
}

TEST_CASE("moment-generating-function lemmas hold with equality at saturation") {
  // The two-point mixture lemma is tight on its own extremal law.
  const double s_sq = 0.37;
  DiscreteLaw extremal;
  extremal.values = {-s_sq, 1.0};
  extremal.probs = {1.0 / (1.0 + s_sq), s_sq / (1.0 + s_sq)};
  const std::array<double, 6> rates = {0.0, 0.3, 0.7, 1.1, 2.0, 4.0};
  const double gap = mgf_lemma_check(extremal, MgfLemma::two_point_mix, rates);
  CHECK_MESSAGE(std::fabs(gap) <= 1e-13, "extremal gap = ", gap);

  // Fair signs: E e^{l xi} = cosh l <= e^{l^2/2} = e^{l^2 c^2(1,1)/2}.
  DiscreteLaw signs;
  signs.values = {-1.0, 1.0};
  signs.probs = {0.5, 0.5};
  CHECK(mgf_lemma_check(signs, MgfLemma::c_squared, rates) <= 0.0);
  CHECK(mgf_lemma_check(signs, MgfLemma::two_point_mix, rates) <= 1e-15);
  const std::array<double, 5> small_rates = {0.0, 0.2, 0.5, 0.8, 0.99};
  CHECK(mgf_lemma_check(signs, MgfLemma::lower_bounded, small_rates) <= 1e-15);

  // A degenerate zero law saturates every lemma at rate 0.
  DiscreteLaw zero;
  zero.values = {0.0};
  zero.probs = {1.0};
  CHECK(std::fabs(mgf_lemma_check(zero, MgfLemma::lower_bounded, small_rates)) <=
        1e-15);
  CHECK(mgf_lemma_check(zero, MgfLemma::c_squared, rates, 1.0) <= 0.0);
}

TEST_CASE("moment-generating-function lemmas hold across random centered laws") {
  testutil::ParamRng prng(4242);
  const std::array<double, 8> rates = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0};
  const std::array<double, 6> unit_rates = {0.0, 0.15, 0.35, 0.6, 0.85, 0.99};
  testutil::ViolationLog log;
  for (int iter = 0; iter < 150; ++iter) {
    const int support = static_cast<int>(prng.integer(2, 6));
    DiscreteLaw law;
    double weight = 0.0;
    for (int i = 0; i < support; ++i) {
      law.values.push_back(prng.uniform(-1.0, 1.0));
      law.probs.push_back(prng.uniform(0.05, 1.0));
      weight += law.probs.back();
    }
    for (double& p : law.probs) p /= weight;
    // Center, then shrink back into [-1, 1]: mean stays 0.
    const double mean = law.mean();
    double span = 0.0;
    for (double& v : law.values) {
      v -= mean;
      span = std::max(span, std::fabs(v));
    }
    if (span > 1.0)
      for (double& v : law.values) v /= span;
    law.validate();

    const double lb = mgf_lemma_check(law, MgfLemma::lower_bounded, unit_rates);
    log.check(lb <= 1e-12, "lower-bounded lemma gap ", lb, " at iter ", iter);
    const double tp = mgf_lemma_check(law, MgfLemma::two_point_mix, rates);
    log.check(tp <= 1e-12, "two-point-mix lemma gap ", tp, " at iter ", iter);
    const double cs = mgf_lemma_check(law, MgfLemma::c_squared, rates, 1.0);
    log.check(cs <= 1e-12, "c-squared lemma gap ", cs, " at iter ", iter);
  }
  CHECK_MESSAGE(log.count == 0, log.report());
}

TEST_CASE("moment-generating-function lemma preconditions are enforced") {
  const std::array<double, 2> rates = {0.0, 0.5};
  DiscreteLaw law;
  law.values = {-1.5, 1.5 / 3.0};
  law.probs = {0.25, 0.75};  // mean 0
  CHECK_THROWS_AS(mgf_lemma_check(law, MgfLemma::lower_bounded, rates),
                  domain_error);

  DiscreteLaw big;
  big.values = {-0.5, 2.0};
  big.probs = {0.8, 0.2};  // mean 0
  CHECK_THROWS_AS(mgf_lemma_check(big, MgfLemma::two_point_mix, rates),
                  domain_error);
  // c^2 cap below the support maximum.
  CHECK_THROWS_AS(mgf_lemma_check(big, MgfLemma::c_squared, rates, 1.0),
                  domain_error);

  DiscreteLaw drift;
  drift.values = {0.0, 1.0};
  drift.probs = {0.5, 0.5};  // mean 0.5 > 0
  CHECK_THROWS_AS(mgf_lemma_check(drift, MgfLemma::two_point_mix, rates),
                  domain_error);

  DiscreteLaw signs;
  signs.values = {-1.0, 1.0};
  signs.probs = {0.5, 0.5};
  const std::array<double, 1> too_big = {1.0};
  CHECK_THROWS_AS(mgf_lemma_check(signs, MgfLemma::lower_bounded, too_big),
                  domain_error);
  const std::array<double, 1> negative = {-0.5};
  CHECK_THROWS_AS(mgf_lemma_check(signs, MgfLemma::two_point_mix, negative),
                  domain_error);
  CHECK_THROWS_AS(
      mgf_lemma_check(signs, MgfLemma::two_point_mix, std::span<const double>{}),
      domain_error);

  DiscreteLaw bad;
  bad.values = {0.0};
  bad.probs = {0.5};
  CHECK_THROWS_AS(mgf_lemma_check(bad, MgfLemma::two_point_mix, rates),
                  consistency_error);
}

}  // TEST_SUITE
