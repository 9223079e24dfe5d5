#include "tailbound/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

namespace tailbound::montecarlo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw domain_error(msg);
}

[[noreturn]] void pairing_error(BoundFamily family, const std::string& why) {
  throw configuration_error(std::string(family_name(family)) + ": " + why);
}

}  // namespace

// ----- Clopper-Pearson ---------------------------------------------------------

BinomialInterval clopper_pearson(std::uint64_t hits, std::uint64_t trials,
                                 double confidence) {
  require(trials >= 1, "clopper_pearson: trials must be >= 1");
  require(hits <= trials, "clopper_pearson: hits must be <= trials");
  require(confidence > 0.0 && confidence < 1.0,
          "clopper_pearson: confidence must lie in (0, 1)");
  const double alpha = 1.0 - confidence;
  const double n = static_cast<double>(trials);
  const double h = static_cast<double>(hits);
  BinomialInterval out;
  if (hits == 0) {
    out.low = 0.0;
    out.high = -std::expm1(std::log(alpha) / n);  // 1 - alpha^{1/n}
  } else if (hits == trials) {
    out.low = std::exp(std::log(alpha) / n);  // alpha^{1/n}
    out.high = 1.0;
  } else {
    out.low = boost::math::ibeta_inv(h, n - h + 1.0, 0.5 * alpha);
    out.high = boost::math::ibeta_inv(h + 1.0, n - h, 1.0 - 0.5 * alpha);
  }
  return out;
}

// ----- estimation engine -------------------------------------------------------

namespace {

int resolve_workers(int requested, std::uint64_t trials) {
  int w = requested;
  if (w < 0) throw domain_error("workers must be >= 0");
  if (w == 0) {
    if (const char* env = std::getenv("TAILBOUND_WORKERS"); env && *env) {
      char* end = nullptr;
      const long parsed = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || parsed < 1 || parsed > 4096)
        throw configuration_error(
            "TAILBOUND_WORKERS must be a positive integer");
      w = static_cast<int>(parsed);
    }
  }
  if (w == 0) w = static_cast<int>(std::thread::hardware_concurrency());
  if (w <= 0) w = 1;
  w = std::min<std::uint64_t>(static_cast<std::uint64_t>(w), trials);
  return std::min(w, 256);
}

struct WorkerSlot {
  std::uint64_t hits = 0;
  std::uint64_t extra = 0;
  std::uint64_t completed = 0;
  std::exception_ptr error;
};

}  // namespace

TailEstimate estimate_tail(const ProcessSpec& spec, const TailEvent& event,
                           const EstimateOptions& options) {
  validate(spec);
  require(options.trials >= 1, "estimate_tail: trials must be >= 1");
  require(options.confidence > 0.5 && options.confidence < 1.0,
          "estimate_tail: confidence must lie in (0.5, 1)");
  require(std::isfinite(event.x), "estimate_tail: event threshold must be finite");
  if (options.diff_threshold)
    require(std::isfinite(*options.diff_threshold),
            "estimate_tail: diff_threshold must be finite");

  const int workers = resolve_workers(options.workers, options.trials);
  std::vector<WorkerSlot> slots(static_cast<std::size_t>(workers));

  // Trial i always runs on substream(seed, i); the [lo, hi) split only
  // decides which thread evaluates it, never what it draws.
  auto run_range = [&](std::uint64_t lo, std::uint64_t hi, WorkerSlot& slot) {
    try {
      PathStats path;
      for (std::uint64_t i = lo; i < hi; ++i) {
        RngStream rng = RngStream::substream(options.seed, i);
        sample_path(spec, rng, path);
        if (event_hit(path, event)) ++slot.hits;
        if (options.diff_threshold && path.max_diff > *options.diff_threshold)
          ++slot.extra;
        ++slot.completed;
      }
    } catch (...) {
      slot.error = std::current_exception();
    }
  };

  const std::uint64_t per = options.trials / static_cast<std::uint64_t>(workers);
  const std::uint64_t rem = options.trials % static_cast<std::uint64_t>(workers);
  if (workers == 1) {
    run_range(0, options.trials, slots[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::uint64_t lo = 0;
    for (int j = 0; j < workers; ++j) {
      const std::uint64_t len = per + (static_cast<std::uint64_t>(j) < rem ? 1 : 0);
      pool.emplace_back(run_range, lo, lo + len, std::ref(slots[static_cast<std::size_t>(j)]));
      lo += len;
    }
    for (auto& t : pool) t.join();
  }

  std::uint64_t completed = 0;
  for (const auto& slot : slots) completed += slot.completed;
  for (const auto& slot : slots) {
    if (!slot.error) continue;
    try {
      std::rethrow_exception(slot.error);
    } catch (const std::bad_alloc&) {
      throw partial_result_error("trial execution ran out of memory", completed);
    }
  }

  TailEstimate est;
  est.trials = options.trials;
  est.confidence = options.confidence;
  est.seed = options.seed;
  for (const auto& slot : slots) {
    est.hits += slot.hits;
    est.extra_hits += slot.extra;
  }
  est.p_hat = static_cast<double>(est.hits) / static_cast<double>(est.trials);
  est.extra_term =
      static_cast<double>(est.extra_hits) / static_cast<double>(est.trials);
  const BinomialInterval ci =
      clopper_pearson(est.hits, est.trials, est.confidence);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

// ----- pairing table -----------------------------------------------------------

namespace {

// The negated tail -S is certified by reusing the bound for S only when the
// step law is conditionally symmetric (so -S is the same process).
void check_kind(BoundFamily family, const TailEvent& event,
                const ProcessTraits& t) {
  switch (event.kind) {
    case EventKind::exists_k:
    case EventKind::max_endpoint:
      return;
    case EventKind::negated:
      if (!t.conditionally_symmetric)
        pairing_error(family,
                      "negated events need conditionally symmetric steps");
      return;
    case EventKind::self_normalized:
      pairing_error(family,
                    "self-normalized events pair only with the subgaussian "
                    "family");
  }
}

void need_quadratic_char(BoundFamily family, const TailEvent& event) {
  if (event.var_clause != VarClause::quadratic_char)
    pairing_error(family,
                  "requires the event's variance clause on the quadratic "
                  "characteristic (var-clause quadratic-char)");
  if (!(event.v_sq > 0.0))
    pairing_error(family, "requires a positive variance budget v_sq");
}

void need_no_budget(BoundFamily family, const TailEvent& event) {
  if (event.budget_clause != BudgetClause::none)
    pairing_error(family, "takes no moment-budget clause");
}

double need_bernstein_eps(BoundFamily family, const ProcessTraits& t) {
  if (!t.bernstein_eps)
    pairing_error(family,
                  "requires a Bernstein moment scale; this process law does "
                  "not provide one");
  return *t.bernstein_eps;
}

std::int64_t need_fixed_length(BoundFamily family, const ProcessSpec& spec) {
  if (std::holds_alternative<GaltonWatson>(spec))
    pairing_error(family,
                  "requires a fixed path length; galton-watson paths have "
                  "random length");
  return nominal_steps(spec);
}

}  // namespace

BoundQuery check_pairing(BoundFamily family, const ProcessSpec& spec,
                         const TailEvent& event,
                         const EstimateOptions& options) {
  validate(spec);
  const ProcessTraits t = traits(spec);
  BoundQuery q;
  q.x = event.x;

  switch (family) {
    case BoundFamily::freedman_b2: {
      check_kind(family, event, t);
      need_quadratic_char(family, event);
      need_no_budget(family, event);
      if (t.bernstein_eps)
        q.epsilon = *t.bernstein_eps;
      else if (t.upper_bound && *t.upper_bound > 0.0)
        q.epsilon = *t.upper_bound;
      else
        pairing_error(family,
                      "requires a step scale: an almost-sure upper step bound "
                      "or a Bernstein moment scale");
      q.v = std::sqrt(event.v_sq);
      return q;
    }
    case BoundFamily::bennett_b1: {
      check_kind(family, event, t);
      need_quadratic_char(family, event);
      need_no_budget(family, event);
      q.epsilon = need_bernstein_eps(family, t);
      q.v = std::sqrt(event.v_sq);
      return q;
    }
    case BoundFamily::bennett_b1n: {
      check_kind(family, event, t);
      need_quadratic_char(family, event);
      need_no_budget(family, event);
      q.epsilon = need_bernstein_eps(family, t);
      q.v = std::sqrt(event.v_sq);
      q.n = need_fixed_length(family, spec);
      return q;
    }
    case BoundFamily::third_moment: {
      check_kind(family, event, t);
      if (!t.finite_third_moment)
        pairing_error(family, "requires finite conditional third moments");
      if (event.var_clause != VarClause::squared_variation)
        pairing_error(family,
                      "requires the event's variance clause on the squared "
                      "variation (var-clause squared-variation)");
      if (!(event.v_sq > 0.0))
        pairing_error(family, "requires a positive variance budget v_sq");
      if (event.budget_clause != BudgetClause::neg_third)
        pairing_error(family,
                      "requires the event's moment budget on the negative-part "
                      "third moments (budget-clause neg-third)");
      if (!(event.w > 0.0))
        pairing_error(family, "requires a positive third-moment budget w");
      q.v = std::sqrt(event.v_sq);
      q.w = event.w;
      return q;
    }
    case BoundFamily::lower_bounded: {
      check_kind(family, event, t);
      need_quadratic_char(family, event);
      need_no_budget(family, event);
      if (!t.lower_bound || *t.lower_bound < -1.0)
        pairing_error(family, "requires steps bounded below by -1");
      q.v = std::sqrt(event.v_sq);
      return q;
    }
    case BoundFamily::fuk_nagaev_tight:
    case BoundFamily::fuk_nagaev_loose: {
      check_kind(family, event, t);
      need_quadratic_char(family, event);
      need_no_budget(family, event);
      if (!t.martingale || !t.conditionally_symmetric)
        pairing_error(family,
                      "requires a conditionally symmetric martingale");
      if (options.diff_threshold)
        q.y = *options.diff_threshold;
      else if (t.upper_bound && *t.upper_bound > 0.0)
        q.y = *t.upper_bound;
      else
        pairing_error(family,
                      "requires a truncation level: the steps are unbounded, "
                      "so supply diff-threshold");
      q.v = std::sqrt(event.v_sq);
      // Both variants validate their domain (x < n y, v^2 <= n y^2) against
      // the path length, though only the tight exponent depends on n.
      q.n = need_fixed_length(family, spec);
      return q;
    }
    case BoundFamily::subgaussian: {
      if (event.kind == EventKind::self_normalized) {
        if (!t.independent_increments || !t.conditionally_symmetric)
          pairing_error(family,
                        "self-normalized events need independent, "
                        "conditionally symmetric steps");
        if (event.var_clause != VarClause::none ||
            event.budget_clause != BudgetClause::none)
          pairing_error(family, "self-normalized pairing takes no clauses");
        q.v = 1.0;
        return q;
      }
      check_kind(family, event, t);
      if (event.var_clause == VarClause::squared_variation &&
          event.budget_clause == BudgetClause::none) {
        if (!t.conditionally_symmetric)
          pairing_error(family,
                        "the squared-variation route needs conditionally "
                        "symmetric steps");
        if (!(event.v_sq > 0.0))
          pairing_error(family, "requires a positive variance budget v_sq");
        q.v = std::sqrt(event.v_sq);
        return q;
      }
      if (event.var_clause == VarClause::none &&
          event.budget_clause == BudgetClause::v_sum) {
        if (!t.martingale)
          pairing_error(family, "the variance-proxy route needs a martingale");
        if (!t.v_sum_is_c_squared)
          pairing_error(family,
                        "the variance-proxy route needs a process whose v_sum "
                        "tracks the c^2 proxy of a predictable upper step "
                        "bound");
        if (!(event.w > 0.0))
          pairing_error(family, "requires a positive proxy budget w");
        q.v = std::sqrt(event.w);
        return q;
      }
      pairing_error(family,
                    "pairs via a squared-variation clause, a v-sum budget "
                    "clause, or a self-normalized event");
    }
    default:
      pairing_error(family,
                    "is not verifiable against simulated paths; it needs "
                    "inputs a path sample does not carry");
  }
}

VerificationVerdict verify_bound(BoundFamily family, const ProcessSpec& spec,
                                 const TailEvent& event,
                                 const EstimateOptions& options) {
  VerificationVerdict v;
  v.family = family;
  v.process = process_name(spec);
  v.event = event;
  v.query = check_pairing(family, spec, event, options);

  // The fuk-nagaev pairing may have chosen a truncation level the caller
  // did not pass; make sure the estimator counts exceedances of that level.
  EstimateOptions opts = options;
  const bool is_fuk = family == BoundFamily::fuk_nagaev_tight ||
                      family == BoundFamily::fuk_nagaev_loose;
  if (is_fuk && !opts.diff_threshold) opts.diff_threshold = v.query.y;

  v.bound = bounds::evaluate(family, v.query);
  v.estimate = estimate_tail(spec, event, opts);
  v.extra_term = is_fuk ? v.estimate.extra_term : 0.0;
  v.margin = v.bound.value - v.estimate.ci_low;
  v.passed = v.estimate.ci_low <= v.bound.value + v.extra_term;
  return v;
}

// ----- MGF lemmas ---------------------------------------------------------------

void DiscreteLaw::validate() const {
  if (values.empty() || values.size() != probs.size())
    throw domain_error(
        "discrete law: values and probs must be non-empty and equal-length");
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw domain_error("discrete law: values must be finite");
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i]))
      throw domain_error("discrete law: probabilities must be >= 0");
    total += probs[i];
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw consistency_error("discrete law: probabilities must sum to 1");
}

double DiscreteLaw::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) m += probs[i] * values[i];
  return m;
}

double DiscreteLaw::second_moment() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    m += probs[i] * values[i] * values[i];
  return m;
}

double DiscreteLaw::min() const {
  double m = kInf;
  for (double v : values) m = std::min(m, v);
  return m;
}

double DiscreteLaw::max() const {
  double m = -kInf;
  for (double v : values) m = std::max(m, v);
  return m;
}

double mgf_lemma_check(const DiscreteLaw& law, MgfLemma lemma,
                       std::span<const double> lambdas,
                       std::optional<double> b) {
  law.validate();
  require(!lambdas.empty(), "mgf_lemma_check: at least one rate is required");
  if (law.mean() > 1e-12)
    throw domain_error("mgf_lemma_check: law must have nonpositive mean");
  const double sigma_sq = law.second_moment();

  double cap = 0.0;
  switch (lemma) {
    case MgfLemma::lower_bounded:
      if (law.min() < -1.0)
        throw domain_error("mgf_lemma_check: lemma needs values >= -1");
      break;
    case MgfLemma::two_point_mix:
      if (law.max() > 1.0)
        throw domain_error("mgf_lemma_check: lemma needs values <= 1");
      break;
    case MgfLemma::c_squared:
      cap = b.value_or(law.max());
      if (!(cap > 0.0) || law.max() > cap)
        throw domain_error(
            "mgf_lemma_check: lemma needs a positive upper bound covering the "
            "support");
      break;
  }

  double worst = -kInf;
  for (double lambda : lambdas) {
    if (!(lambda >= 0.0))
      throw domain_error("mgf_lemma_check: rates must be >= 0");
    double lhs = 0.0, rhs = 0.0;
    switch (lemma) {
      case MgfLemma::lower_bounded: {
        if (lambda >= 1.0)
          throw domain_error("mgf_lemma_check: this lemma needs rates < 1");
        const double shrink = lambda + std::log1p(-lambda);  // <= 0
        for (std::size_t i = 0; i < law.values.size(); ++i) {
          const double v = law.values[i];
          lhs += law.probs[i] * std::exp(lambda * v + shrink * v * v);
        }
        rhs = 1.0;
        break;
      }
      case MgfLemma::two_point_mix: {
        for (std::size_t i = 0; i < law.values.size(); ++i)
          lhs += law.probs[i] * std::exp(lambda * law.values[i]);
        rhs = (std::exp(-lambda * sigma_sq) + sigma_sq * std::exp(lambda)) /
              (1.0 + sigma_sq);
        break;
      }
      case MgfLemma::c_squared: {
        for (std::size_t i = 0; i < law.values.size(); ++i)
          lhs += law.probs[i] * std::exp(lambda * law.values[i]);
        rhs = std::exp(0.5 * lambda * lambda * bounds::c_squared(cap, sigma_sq));
        break;
      }
    }
    worst = std::max(worst, lhs - rhs);
  }
  return worst;
}

}  // namespace tailbound::montecarlo
