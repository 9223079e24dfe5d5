#pragma once
// Simulable difference-sequence processes with analytically known
// conditional statistics, plus the tail events the bounds certify.
//
// A process produces a path of differences xi_1..xi_n adapted to its own
// filtration. sample_path() fills a PathStats with the partial sums and the
// running conditional quantities; every conditional moment is computed from
// the variant's law in closed form, never estimated from the draw.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tailbound/errors.hpp"
#include "tailbound/rng.hpp"

namespace tailbound {

// ----- component laws -----------------------------------------------------

// Noise law for the regression / autoregression variants. All moments exact.
struct NoiseSpec {
  enum class Kind { gaussian, uniform, two_point, rademacher };
  Kind kind = Kind::gaussian;
  double sigma = 1.0;       // gaussian std dev / rademacher magnitude
  double half_width = 1.0;  // uniform support [-half_width, half_width]
  // two_point: P(hi) = p, P(lo) = 1 - p; must be centered (p hi + (1-p) lo = 0)
  double p = 0.5, lo = -1.0, hi = 1.0;

  void validate() const;
  double sd() const;
  double second_moment() const;
  double abs_third_moment() const;       // E |eps|^3
  double neg_third_moment() const;       // E (eps^-)^3
  double pos_third_moment() const;       // E (eps^+)^3
  std::optional<double> sup() const;     // a.s. |eps| bound, if any
  std::optional<double> bernstein_eps() const;
  bool symmetric() const;
  double sample(RngStream& rng) const;
};

// Regressor law: phi = a exactly, or |phi| uniform on [a, b] with a fair sign.
struct DesignSpec {
  enum class Kind { constant, uniform_magnitude };
  Kind kind = Kind::constant;
  double a = 1.0, b = 1.0;

  void validate() const;
  double sample(RngStream& rng) const;
};

struct OffspringSpec {
  enum class Kind { poisson, deterministic };
  Kind kind = Kind::poisson;
  double mean = 2.0;  // deterministic: every individual has round(mean) children

  void validate() const;
  double variance() const;
  std::int64_t sample(RngStream& rng) const;
};

// ----- process variants ----------------------------------------------------

// xi_i = a_i * eps_i with eps_i independent Rademacher signs.
struct RademacherWeighted {
  std::vector<double> weights;
};

// Conditionally symmetric lattice steps: P(+-y) = v_sq/(2 n y^2) each,
// P(0) = 1 - v_sq/(n y^2); total conditional variance over n steps is v_sq.
struct ThreePoint {
  double y = 1.0;
  double v_sq = 1.0;
  std::int64_t n = 1;
};

// One angle N ~ U[0, 2pi) drawn up front; steps alternate
// (+-sin N)/sqrt(n), (+-cos N)/sqrt(n) with fair signs. The per-pair
// variance proxy telescopes to exactly 1/2 over the (even) n steps while
// the per-step sups add to 1.
struct SinCosRademacher {
  std::int64_t n = 2;  // must be even
};

// xi_i = X_i - shift with X_i ~ Exp(rate): bounded below by -shift,
// supermartingale iff shift >= 1/rate (equality = martingale).
struct BoundedBelowExponential {
  double shift = 1.0;
  double rate = 1.0;
  std::int64_t n = 1;
};

// Centered two-point law P(b) = p, P(a) = 1 - p with p b + (1-p) a = 0;
// satisfies the Bernstein moment condition with eps = max(|a|, b).
struct BernsteinTwoPoint {
  double p = 0.5;
  double a = -1.0;
  double b = 1.0;
  std::int64_t n = 1;
};

// Normalized regression score: xi_i = phi_i eps_i / (sigma sqrt(sum phi^2)),
// so S_n = (theta_hat - theta) sqrt(sum phi^2) / sigma.
struct Regression {
  DesignSpec design;
  NoiseSpec noise;
  std::int64_t n = 1;
};

// Autoregression X_k = theta X_{k-1} + eps_k; differences xi_k =
// X_{k-1} eps_k, so S_n = (theta_hat - theta) * sum X_{k-1}^2.
struct Ar1 {
  double theta = 0.5;
  double x0 = 1.0;
  NoiseSpec noise;
  std::int64_t n = 1;
};

// Branching process at its last generation: after growing to X_{g-1}
// individuals, the path is xi_k = Y_k - mean over that generation's
// offspring counts, so S_n = (m_hat - mean) X_{g-1}. Extinction yields an
// empty path.
struct GaltonWatson {
  OffspringSpec offspring;
  std::int64_t generations = 1;  // index of the generation being split
  double bernstein_eps = 1.0;    // Bernstein scale asserted for the offspring law
};

using ProcessSpec =
    std::variant<RademacherWeighted, ThreePoint, SinCosRademacher,
                 BoundedBelowExponential, BernsteinTwoPoint, Regression, Ar1,
                 GaltonWatson>;

void validate(const ProcessSpec& spec);
std::string process_name(const ProcessSpec& spec);

// Nominal path length (the n the refined bounds use). The true length is
// random for galton_watson, where this returns the generation count instead;
// see traits().
std::int64_t nominal_steps(const ProcessSpec& spec);

// ----- path statistics ------------------------------------------------------

// Cumulative per-step functionals; entry k-1 covers steps 1..k.
struct PathStats {
  std::vector<double> s;          // partial sums S_k
  std::vector<double> sq_var;     // [S]_k, realized squared variation
  std::vector<double> cond_var;   // <S>_k, conditional variance sum (analytic)
  std::vector<double> neg_third;  // sum of E((xi^-)^3 | F), analytic
  std::vector<double> abs_third;  // sum of E(|xi|^3 | F), analytic
  std::vector<double> v_sum;      // variant's variance-proxy running sum
  double max_s = 0.0;             // max over k of S_k (0 for empty paths)
  double max_diff = 0.0;          // max over i of xi_i

  std::size_t steps() const { return s.size(); }
  void clear();
};

// Draws one path into `out` (buffers are reused across calls).
void sample_path(const ProcessSpec& spec, RngStream& rng, PathStats& out);
PathStats sample_path(const ProcessSpec& spec, RngStream& rng);

// ----- tail events ----------------------------------------------------------

enum class EventKind {
  exists_k,         // some k: S_k >= x and the clauses hold at that k
  max_endpoint,     // max_k S_k >= x and the clauses hold at k = n
  self_normalized,  // some k: S_k / sqrt([S]_n) >= x   (0/0 treated as 0)
  negated,          // exists_k applied to -S
};

enum class VarClause { none, squared_variation, quadratic_char };
enum class BudgetClause { none, v_sum, neg_third };

struct TailEvent {
  EventKind kind = EventKind::exists_k;
  double x = 0.0;
  VarClause var_clause = VarClause::none;
  double v_sq = 0.0;  // budget for the variance clause
  BudgetClause budget_clause = BudgetClause::none;
  double w = 0.0;  // budget for the moment-proxy clause
};

const char* event_kind_name(EventKind kind);
std::optional<EventKind> event_kind_from_name(std::string_view name);

// Empty paths never hit (there is no k).
bool event_hit(const PathStats& path, const TailEvent& event);

// ----- analytic traits used by the bound/process pairing table --------------

struct ProcessTraits {
  bool martingale = false;          // E(xi | F) = 0 exactly
  bool conditionally_symmetric = false;
  bool independent_increments = false;
  std::optional<double> lower_bound;    // a.s. xi >= lower_bound
  std::optional<double> upper_bound;    // a.s. xi <= upper_bound
  std::optional<double> bernstein_eps;  // Bernstein moment-growth scale
  bool finite_third_moment = false;
  // True when PathStats::v_sum accumulates a valid per-step c^2(U, sigma^2)
  // proxy for the upward tail (the predictable upper bound U exists);
  // galton-watson instead stores the proxy M for its downward tail.
  bool v_sum_is_c_squared = false;
  std::optional<double> fixed_sq_var_total;    // [S]_n deterministic value
  std::optional<double> fixed_cond_var_total;  // <S>_n deterministic value
};

ProcessTraits traits(const ProcessSpec& spec);

// inf over lambda >= 0 of e^{-lambda x} (E e^{lambda xi})^n for the
// three-point law: the exact Chernoff envelope of the endpoint tail.
// Minimized numerically over an independently grown bracket.
double exact_chernoff_three_point(double x, double y, double v_sq,
                                  std::int64_t n);

}  // namespace tailbound
