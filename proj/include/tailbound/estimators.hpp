#pragma once
// Statistical estimators with non-asymptotic confidence envelopes: linear
// regression, AR(1) least squares, and the Lotka-Nagaev offspring-mean
// estimator for branching processes. Each envelope is a closed-form tail
// bound on the estimator's (suitably scaled) deviation.
//
// Deviation normalizations, with T = sum of squared regressors/history:
//   regression bernstein/bounded:  (theta_hat - theta) sqrt(T) >= x sigma
//   regression alpha / ar1 alpha:  (theta_hat - theta) T >= x  with the
//                                  alpha-norm of the weights <= v
//   ar1 bounded:                   (theta_hat - theta) T >= x  on {L_n <= v^2}
//   branching:                     (m_hat - m) X_prev, conditional on X_prev

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/processes.hpp"

namespace tailbound::estimators {

// ----- linear regression -------------------------------------------------------

struct RegressionData {
  std::vector<double> phis;  // regression variables
  std::vector<double> xs;    // observations X_k = theta phi_k + eps_k
  double sigma = 1.0;        // known noise standard deviation

  void validate() const;  // equal non-zero lengths, sigma > 0, sum phi^2 > 0
};

struct LinearFit {
  double theta_hat = 0.0;
  double norm_sq = 0.0;  // sum phi^2
  std::int64_t n = 0;
};

LinearFit fit_linear(const RegressionData& data);

struct EnvelopeSpec {
  enum class Kind { bernstein, bounded_above, alpha_mgf };
  Kind kind = Kind::bernstein;
  // bernstein: |phi_k|/sqrt(sum phi^2) <= eps1 (eps1 = 1 is always valid)
  // and the noise Bernstein scale eps2; the envelope is B_{1,n}(x, eps1
  // eps2 / sigma, 1).
  double eps1 = 1.0;
  double eps2 = 1.0;
  // bounded_above: noise bounded above by eps; the envelope is
  // exp{-x^2/(2 C_n)} with C_n = ((eps/sigma + sigma/eps)/2)^2.
  double eps = 1.0;
  // alpha_mgf: E e^{l eps_k} <= e^{c |l|^alpha}; the envelope is the
  // weighted-alpha bound with v^alpha = sum |phi_k|^alpha.
  double alpha = 2.0;
  double c = 0.5;
};

// Tail envelope at threshold x in the kind's own normalization (see the
// header comment). Throws domain_error naming the theorem hypothesis when a
// precondition fails (e.g. a design value with |phi_k|/sqrt(sum phi^2) >
// eps1).
BoundResult regression_envelope(const EnvelopeSpec& spec,
                                const RegressionData& data, double x);

// ----- AR(1) --------------------------------------------------------------------

struct Ar1Fit {
  double theta_hat = 0.0;
  double sum_sq = 0.0;  // sum over k of X_{k-1}^2
  std::int64_t n = 0;
};

// series = X_0..X_n; requires at least one transition and sum X_{k-1}^2 > 0.
Ar1Fit fit_ar1(std::span<const double> series);

struct Ar1Envelope {
  BoundResult bound;  // exp{-x^2/(2 v_sq)}, valid on the event {L_n <= v_sq}
  double l_n = 0.0;   // ((eps + sigma^2/eps)/2)^2 * sum_sq
};

// Noise bounded by |eps_k| <= eps with known variance sigma^2.
Ar1Envelope ar1_envelope(double eps, double sigma, double sum_sq, double x,
                         double v_sq);

// Alpha-MGF variant: v^alpha = sum over the history X_0..X_{n-1} of
// |X_{k-1}|^alpha.
BoundResult ar1_envelope_alpha(double alpha, double c,
                               std::span<const double> history, double x);

// ----- branching (Lotka-Nagaev) -------------------------------------------------

struct BranchingObservation {
  std::int64_t x_prev = 1;  // population carrying the observed generation
  std::int64_t x_curr = 0;  // total offspring of that generation
  double m = 1.0;           // offspring mean
  double sigma = 1.0;       // offspring standard deviation
  double eps = 1.0;         // Bernstein scale of the centered offspring law
};

// m_hat = x_curr / x_prev; x_prev must be >= 1.
double lotka_nagaev(const BranchingObservation& obs);

enum class BranchingEnvelope {
  // two-sided: P(|m_hat - m| X_prev >= x, X_prev sigma^2 <= v^2 | X_prev)
  //   <= 2 B_{1,n}(x, eps, v) with n = X_prev
  bernstein_two_sided,
  // one-sided: P((m_hat - m) X_prev <= -x, M X_prev <= v^2 | X_prev)
  //   <= exp{-x^2/(2 v^2)} with M = c^2(m, sigma^2)
  lower_one_sided,
};

struct BranchingEnvelopeResult {
  BoundResult envelope;
  // bernstein_two_sided only: the looser 2 exp{-x^2/(2(v^2 + x eps))}.
  std::optional<BoundResult> relaxation;
  // lower_one_sided only: the variance proxy M.
  std::optional<double> m_constant;
};

BranchingEnvelopeResult branching_envelope(BranchingEnvelope kind,
                                           const BranchingObservation& obs,
                                           double x, double v_sq);

// Monte Carlo estimate of the unconditional envelope E[env(X_{g-1})] where
// env is the conditional envelope at deviation scale x per individual:
//   bernstein_two_sided: min(1, 2 exp{-X x^2 / (2(sigma^2 + x eps))})
//   lower_one_sided:     exp{-X x^2 / (2 M)}
// Extinction (X_{g-1} = 0) contributes exp{0} = 1. The interval is a
// normal-approximation CI on the mean, clamped to [0, 1].
struct UnconditionalEstimate {
  double mean = 1.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

UnconditionalEstimate branching_unconditional(BranchingEnvelope kind,
                                              const OffspringSpec& offspring,
                                              std::int64_t generations,
                                              double x, double eps,
                                              std::uint64_t trials,
                                              std::uint64_t seed,
                                              double confidence);

// ----- CSV ingestion -------------------------------------------------------------
// Malformed rows are hard errors (configuration_error with file:line); these
// feed confidence claims, so nothing is skipped silently.

// Header "phi,x"; one observation per row.
RegressionData read_regression_csv(const std::string& path, double sigma);

// Header "x"; the first data row is X_0, the rest are X_1..X_n in order.
std::vector<double> read_ar1_csv(const std::string& path);

// Header "generation,count"; rows must have consecutive generations starting
// at 0 with count_0 = 1. Returns the counts X_0..X_g.
std::vector<std::int64_t> read_branching_csv(const std::string& path);

}  // namespace tailbound::estimators
