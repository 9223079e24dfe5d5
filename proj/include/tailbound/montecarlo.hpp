#pragma once
// Monte Carlo verification of the closed-form bounds.
//
// estimate_tail() measures P(event) over independent simulated paths with a
// counter-based stream per trial, so estimates are bit-identical across
// worker counts. verify_bound() pairs a bound family with a process, derives
// the bound's parameters from the process law and the event, and checks the
// exact binomial lower confidence limit against the certified value.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/processes.hpp"

namespace tailbound::montecarlo {

// Exact binomial (Clopper-Pearson) interval. Interior counts get the
// equal-tailed two-sided interval; the boundary counts 0 and n spend the
// whole error budget on their single informative side, so hits = 0 yields
// [0, 1 - alpha^{1/n}] and hits = n yields [alpha^{1/n}, 1].
struct BinomialInterval {
  double low = 0.0;
  double high = 1.0;
};
BinomialInterval clopper_pearson(std::uint64_t hits, std::uint64_t trials,
                                 double confidence);

struct EstimateOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  double confidence = 0.99;
  // 0 means: take TAILBOUND_WORKERS from the environment if set, otherwise
  // the hardware concurrency. The estimate itself never depends on this.
  int workers = 0;
  // Also measure P(max_i xi_i > diff_threshold), the truncation allowance
  // added to fuk-nagaev bounds for unbounded steps.
  std::optional<double> diff_threshold;
};

struct TailEstimate {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double confidence = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t extra_hits = 0;  // trials with max difference > diff_threshold
  double extra_term = 0.0;       // extra_hits / trials
};

TailEstimate estimate_tail(const ProcessSpec& spec, const TailEvent& event,
                           const EstimateOptions& options);

// Parameters a pairing derived from the process law: the query evaluate()
// receives, exposed so reports can show where each number came from.
struct VerificationVerdict {
  BoundFamily family = BoundFamily::subgaussian;
  std::string process;
  TailEvent event;
  BoundQuery query;         // derived bound parameters
  BoundResult bound;        // certified tail bound for the event
  double extra_term = 0.0;  // additive truncation allowance (fuk-nagaev)
  TailEstimate estimate;
  double margin = 0.0;  // bound.value - estimate.ci_low
  bool passed = false;  // estimate.ci_low <= bound.value + extra_term
};

// Validates that `family` certifies `event` for `spec` and derives the
// bound parameters from the process law (Bernstein scale, step bounds,
// nominal length) and the event budgets. Throws configuration_error naming
// the missing hypothesis when the pairing is not certified.
BoundQuery check_pairing(BoundFamily family, const ProcessSpec& spec,
                         const TailEvent& event,
                         const EstimateOptions& options);

VerificationVerdict verify_bound(BoundFamily family, const ProcessSpec& spec,
                                 const TailEvent& event,
                                 const EstimateOptions& options);

// ----- MGF domination lemmas -------------------------------------------------

// Finite law used to probe the moment-generating-function lemmas the bound
// families rest on.
struct DiscreteLaw {
  std::vector<double> values;
  std::vector<double> probs;

  void validate() const;
  double mean() const;
  double second_moment() const;
  double min() const;
  double max() const;
};

enum class MgfLemma {
  // values >= -1, mean <= 0:
  //   E exp{l xi + (l + log(1-l)) xi^2} <= 1 for l in [0, 1)
  lower_bounded,
  // values <= 1, mean <= 0, E xi^2 <= s^2: the MGF is dominated by the
  // centered two-point law on {-s^2, 1} carrying the same variance:
  //   E e^{l xi} <= (e^{-l s^2} + s^2 e^{l}) / (1 + s^2) for l >= 0
  two_point_mix,
  // values <= b, mean <= 0, E xi^2 <= s^2:
  //   E e^{l xi} <= exp{l^2 c^2(b, s^2) / 2} for l >= 0
  c_squared,
};

// Largest violation max over the rate grid of (E lhs - rhs); a nonpositive
// return means the lemma holds for this law up to roundoff.
double mgf_lemma_check(const DiscreteLaw& law, MgfLemma lemma,
                       std::span<const double> lambdas,
                       std::optional<double> b = std::nullopt);

}  // namespace tailbound::montecarlo
