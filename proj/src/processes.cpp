#include "tailbound/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailbound/bounds.hpp"
#include "tailbound/optimize.hpp"

namespace tailbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;

// E|Z|^3 for standard normal = 2 sqrt(2/pi); the one-sided halves are equal.
constexpr double kNormalAbsThird = 1.5957691216057307117597842397375;

void check(bool ok, const char* msg) {
  if (!ok) throw domain_error(msg);
}

}  // namespace

// ----- NoiseSpec ------------------------------------------------------------

void NoiseSpec::validate() const {
  switch (kind) {
    case Kind::gaussian:
      check(std::isfinite(sigma) && sigma > 0.0, "noise: sigma must be > 0");
      return;
    case Kind::uniform:
      check(std::isfinite(half_width) && half_width > 0.0,
            "noise: half_width must be > 0");
      return;
    case Kind::rademacher:
      check(std::isfinite(sigma) && sigma > 0.0, "noise: sigma must be > 0");
      return;
    case Kind::two_point: {
      check(std::isfinite(lo) && std::isfinite(hi) && lo < 0.0 && 0.0 < hi,
            "noise: two-point law needs lo < 0 < hi");
      check(p > 0.0 && p < 1.0, "noise: two-point p must lie in (0, 1)");
      const double drift = p * hi + (1.0 - p) * lo;
      if (std::fabs(drift) > 1e-12 * std::max(hi, -lo))
        throw consistency_error("noise: two-point law is not centered");
      return;
    }
  }
  throw domain_error("noise: unknown kind");
}

double NoiseSpec::second_moment() const {
  switch (kind) {
    case Kind::gaussian: return sigma * sigma;
    case Kind::uniform: return half_width * half_width / 3.0;
    case Kind::rademacher: return sigma * sigma;
    case Kind::two_point: return p * hi * hi + (1.0 - p) * lo * lo;
  }
  return 0.0;
}

double NoiseSpec::sd() const { return std::sqrt(second_moment()); }

double NoiseSpec::abs_third_moment() const {
  switch (kind) {
    case Kind::gaussian: return kNormalAbsThird * sigma * sigma * sigma;
    case Kind::uniform: return half_width * half_width * half_width / 4.0;
    case Kind::rademacher: return sigma * sigma * sigma;
    case Kind::two_point: return p * hi * hi * hi + (1.0 - p) * (-lo) * (-lo) * (-lo);
  }
  return 0.0;
}

double NoiseSpec::neg_third_moment() const {
  switch (kind) {
    case Kind::gaussian: return 0.5 * kNormalAbsThird * sigma * sigma * sigma;
    case Kind::uniform: return half_width * half_width * half_width / 8.0;
    case Kind::rademacher: return 0.5 * sigma * sigma * sigma;
    case Kind::two_point: return (1.0 - p) * (-lo) * (-lo) * (-lo);
  }
  return 0.0;
}

double NoiseSpec::pos_third_moment() const {
  switch (kind) {
    case Kind::gaussian: return 0.5 * kNormalAbsThird * sigma * sigma * sigma;
    case Kind::uniform: return half_width * half_width * half_width / 8.0;
    case Kind::rademacher: return 0.5 * sigma * sigma * sigma;
    case Kind::two_point: return p * hi * hi * hi;
  }
  return 0.0;
}

std::optional<double> NoiseSpec::sup() const {
  switch (kind) {
    case Kind::gaussian: return std::nullopt;
    case Kind::uniform: return half_width;
    case Kind::rademacher: return sigma;
    case Kind::two_point: return std::max(-lo, hi);
  }
  return std::nullopt;
}

std::optional<double> NoiseSpec::bernstein_eps() const {
  // For each law, E eps^k <= (k!/2) eps^{k-2} E eps^2 holds with the scale
  // below (second moments match by construction, higher ones by comparison).
  switch (kind) {
    case Kind::gaussian: return sigma;
    case Kind::uniform: return half_width;
    case Kind::rademacher: return sigma;
    case Kind::two_point: return std::max(-lo, hi);
  }
  return std::nullopt;
}

bool NoiseSpec::symmetric() const {
  switch (kind) {
    case Kind::gaussian:
    case Kind::uniform:
    case Kind::rademacher: return true;
    case Kind::two_point: return p == 0.5 && hi == -lo;
  }
  return false;
}

double NoiseSpec::sample(RngStream& rng) const {
  switch (kind) {
    case Kind::gaussian: return sigma * rng.normal();
    case Kind::uniform: return rng.uniform(-half_width, half_width);
    case Kind::rademacher: return sigma * rng.rademacher();
    case Kind::two_point: return rng.uniform01() < p ? hi : lo;
  }
  return 0.0;
}

// ----- DesignSpec -------------------------------------------------------------

void DesignSpec::validate() const {
  switch (kind) {
    case Kind::constant:
      check(std::isfinite(a) && a != 0.0, "design: constant weight must be nonzero");
      return;
    case Kind::uniform_magnitude:
      check(std::isfinite(a) && std::isfinite(b) && 0.0 < a && a <= b,
            "design: uniform magnitude needs 0 < a <= b");
      return;
  }
  throw domain_error("design: unknown kind");
}

double DesignSpec::sample(RngStream& rng) const {
  switch (kind) {
    case Kind::constant: return a;
    case Kind::uniform_magnitude: return rng.uniform(a, b) * rng.rademacher();
  }
  return 0.0;
}

// ----- OffspringSpec ----------------------------------------------------------

void OffspringSpec::validate() const {
  switch (kind) {
    case Kind::poisson:
      check(std::isfinite(mean) && mean > 0.0 && mean <= 60.0,
            "offspring: poisson mean must lie in (0, 60]");
      return;
    case Kind::deterministic:
      check(std::isfinite(mean) && mean >= 0.0 &&
                mean == std::floor(mean),
            "offspring: deterministic mean must be a nonnegative integer");
      return;
  }
  throw domain_error("offspring: unknown kind");
}

double OffspringSpec::variance() const {
  return kind == Kind::poisson ? mean : 0.0;
}

std::int64_t OffspringSpec::sample(RngStream& rng) const {
  return kind == Kind::poisson ? rng.poisson(mean)
                               : static_cast<std::int64_t>(std::llround(mean));
}

// ----- validation / naming ----------------------------------------------------

namespace {

void validate_one(const RademacherWeighted& s) {
  check(!s.weights.empty(), "rademacher: weights must be non-empty");
  for (double w : s.weights)
    check(std::isfinite(w) && w != 0.0, "rademacher: weights must be finite and nonzero");
}

void validate_one(const ThreePoint& s) {
  check(std::isfinite(s.y) && s.y > 0.0, "three-point: y must be > 0");
  check(s.n >= 1, "three-point: n must be >= 1");
  check(std::isfinite(s.v_sq) && s.v_sq > 0.0, "three-point: v_sq must be > 0");
  check(s.v_sq <= static_cast<double>(s.n) * s.y * s.y,
        "three-point: requires v_sq <= n y^2");
}

void validate_one(const SinCosRademacher& s) {
  check(s.n >= 2 && s.n % 2 == 0, "sin-cos: n must be even and >= 2");
}

void validate_one(const BoundedBelowExponential& s) {
  check(std::isfinite(s.rate) && s.rate > 0.0, "bounded-below-exp: rate must be > 0");
  check(std::isfinite(s.shift) && s.shift > 0.0, "bounded-below-exp: shift must be > 0");
  check(s.shift * s.rate >= 1.0,
        "bounded-below-exp: needs shift >= 1/rate (else the sum drifts upward)");
  check(s.n >= 1, "bounded-below-exp: n must be >= 1");
}

void validate_one(const BernsteinTwoPoint& s) {
  check(std::isfinite(s.a) && std::isfinite(s.b) && s.a < 0.0 && 0.0 < s.b,
        "bernstein-two-point: needs a < 0 < b");
  check(s.p > 0.0 && s.p < 1.0, "bernstein-two-point: p must lie in (0, 1)");
  check(s.n >= 1, "bernstein-two-point: n must be >= 1");
  const double drift = s.p * s.b + (1.0 - s.p) * s.a;
  if (std::fabs(drift) > 1e-12 * std::max(s.b, -s.a))
    throw consistency_error("bernstein-two-point: law is not centered");
}

void validate_one(const Regression& s) {
  s.design.validate();
  s.noise.validate();
  check(s.n >= 1, "regression: n must be >= 1");
}

void validate_one(const Ar1& s) {
  check(std::isfinite(s.theta), "ar1: theta must be finite");
  check(std::isfinite(s.x0), "ar1: x0 must be finite");
  s.noise.validate();
  check(s.n >= 1, "ar1: n must be >= 1");
}

void validate_one(const GaltonWatson& s) {
  s.offspring.validate();
  check(s.generations >= 1 && s.generations <= 30,
        "galton-watson: generations must lie in [1, 30]");
  check(std::isfinite(s.bernstein_eps) && s.bernstein_eps > 0.0,
        "galton-watson: bernstein_eps must be > 0");
}

}  // namespace

void validate(const ProcessSpec& spec) {
  std::visit([](const auto& s) { validate_one(s); }, spec);
}

std::string process_name(const ProcessSpec& spec) {
  struct Namer {
    std::string operator()(const RademacherWeighted&) const { return "rademacher"; }
    std::string operator()(const ThreePoint&) const { return "three-point"; }
    std::string operator()(const SinCosRademacher&) const { return "sin-cos"; }
    std::string operator()(const BoundedBelowExponential&) const { return "bounded-below-exp"; }
    std::string operator()(const BernsteinTwoPoint&) const { return "bernstein-two-point"; }
    std::string operator()(const Regression&) const { return "regression"; }
    std::string operator()(const Ar1&) const { return "ar1"; }
    std::string operator()(const GaltonWatson&) const { return "galton-watson"; }
  };
  return std::visit(Namer{}, spec);
}

std::int64_t nominal_steps(const ProcessSpec& spec) {
  struct Steps {
    std::int64_t operator()(const RademacherWeighted& s) const {
      return static_cast<std::int64_t>(s.weights.size());
    }
    std::int64_t operator()(const ThreePoint& s) const { return s.n; }
    std::int64_t operator()(const SinCosRademacher& s) const { return s.n; }
    std::int64_t operator()(const BoundedBelowExponential& s) const { return s.n; }
    std::int64_t operator()(const BernsteinTwoPoint& s) const { return s.n; }
    std::int64_t operator()(const Regression& s) const { return s.n; }
    std::int64_t operator()(const Ar1& s) const { return s.n; }
    std::int64_t operator()(const GaltonWatson& s) const { return s.generations; }
  };
  return std::visit(Steps{}, spec);
}

// ----- path sampling ----------------------------------------------------------

void PathStats::clear() {
  s.clear();
  sq_var.clear();
  cond_var.clear();
  neg_third.clear();
  abs_third.clear();
  v_sum.clear();
  max_s = 0.0;
  max_diff = 0.0;
}

namespace {

// Running accumulator pushing one step's realized difference plus its
// analytic conditional moments into the cumulative vectors.
struct Accum {
  PathStats& st;
  double s = 0.0, sq = 0.0, cv = 0.0, n3 = 0.0, a3 = 0.0, vs = 0.0;

  explicit Accum(PathStats& out, std::size_t reserve) : st(out) {
    st.clear();
    st.max_s = -kInf;
    st.max_diff = -kInf;
    st.s.reserve(reserve);
    st.sq_var.reserve(reserve);
    st.cond_var.reserve(reserve);
    st.neg_third.reserve(reserve);
    st.abs_third.reserve(reserve);
    st.v_sum.reserve(reserve);
  }

  void step(double xi, double cond_var, double neg3, double abs3, double vproxy) {
    s += xi;
    sq += xi * xi;
    cv += cond_var;
    n3 += neg3;
    a3 += abs3;
    vs += vproxy;
    push(xi, cv, vs);
  }

  // Variants with closed-form cumulative statistics override the running
  // sums to keep deterministic totals exact.
  void step_exact_cums(double xi, double cum_cond_var, double cum_neg3,
                       double cum_abs3, double cum_vsum, double cum_sq) {
    s += xi;
    sq = cum_sq;
    cv = cum_cond_var;
    n3 = cum_neg3;
    a3 = cum_abs3;
    vs = cum_vsum;
    push(xi, cv, vs);
  }

 private:
  void push(double xi, double cum_cv, double cum_vs) {
    st.s.push_back(s);
    st.sq_var.push_back(sq);
    st.cond_var.push_back(cum_cv);
    st.neg_third.push_back(n3);
    st.abs_third.push_back(a3);
    st.v_sum.push_back(cum_vs);
    st.max_s = std::max(st.max_s, s);
    st.max_diff = std::max(st.max_diff, xi);
  }
};

void sample_one(const RademacherWeighted& s, RngStream& rng, PathStats& out) {
  Accum acc(out, s.weights.size());
  for (double a : s.weights) {
    const double mag = std::fabs(a);
    const double xi = mag * rng.rademacher();
    const double m3 = mag * mag * mag;
    // sup = sd here, so the c^2 proxy equals the conditional variance.
    acc.step(xi, mag * mag, 0.5 * m3, m3, mag * mag);
  }
}

void sample_one(const ThreePoint& s, RngStream& rng, PathStats& out) {
  const double nd = static_cast<double>(s.n);
  const double q = s.v_sq / (nd * s.y * s.y);  // P(step != 0)
  const double y3 = s.y * s.y * s.y;
  const double c_sq_step = bounds::c_squared(s.y, s.v_sq / nd);
  Accum acc(out, static_cast<std::size_t>(s.n));
  for (std::int64_t k = 1; k <= s.n; ++k) {
    const double u = rng.uniform01();
    const double xi = u < 0.5 * q ? s.y : (u < q ? -s.y : 0.0);
    // Cumulative conditional variance k v_sq / n, pinned to exactly v_sq at
    // k = n so variance-budget clauses match the law rather than rounding.
    const double cum_cv =
        k == s.n ? s.v_sq : s.v_sq * (static_cast<double>(k) / nd);
    const double step_a3 = q * y3;
    acc.step_exact_cums(xi, cum_cv, 0.5 * step_a3 * static_cast<double>(k),
                        step_a3 * static_cast<double>(k),
                        c_sq_step * static_cast<double>(k), acc.sq + xi * xi);
  }
}

void sample_one(const SinCosRademacher& s, RngStream& rng, PathStats& out) {
  const double nd = static_cast<double>(s.n);
  const double angle = rng.uniform(0.0, kTwoPi);
  const double root_n = std::sqrt(nd);
  const double sin_mag = std::fabs(std::sin(angle)) / root_n;
  const double cos_mag = std::fabs(std::cos(angle)) / root_n;
  const double sin_sq = sin_mag * sin_mag, cos_sq = cos_mag * cos_mag;
  const double sin_cube = sin_sq * sin_mag, cos_cube = cos_sq * cos_mag;
  Accum acc(out, static_cast<std::size_t>(s.n));
  double a3 = 0.0;
  for (std::int64_t k = 1; k <= s.n; ++k) {
    const bool odd = (k % 2) != 0;
    const double mag = odd ? sin_mag : cos_mag;
    const double xi = mag * rng.rademacher();
    a3 += odd ? sin_cube : cos_cube;
    // Pairs of steps contribute exactly 1/n of variance: close each pair at
    // the analytic value so the total lands on 1/2 without rounding drift.
    const double cum_cv = odd
        ? static_cast<double>((k - 1) / 2) / nd + sin_sq / nd
        : static_cast<double>(k / 2) / nd;
    acc.step_exact_cums(xi, cum_cv, 0.5 * a3, a3, cum_cv, cum_cv);
  }
}

void sample_one(const BoundedBelowExponential& s, RngStream& rng, PathStats& out) {
  const double r = s.rate, sh = s.shift;
  const double mean = 1.0 / r - sh;  // <= 0 by validation
  const double cond_var = 1.0 / (r * r) + mean * mean;
  // E((xi^-)^3) = s^3 - 3 s^2/r + 6 s/r^2 - 6/r^3 + 6 e^{-r s}/r^3 and
  // E((xi^+)^3) = 6 e^{-r s}/r^3, from integrating the shifted density.
  const double er = std::exp(-r * sh);
  const double neg3 = sh * sh * sh - 3.0 * sh * sh / r + 6.0 * sh / (r * r) -
                      6.0 / (r * r * r) + 6.0 * er / (r * r * r);
  const double pos3 = 6.0 * er / (r * r * r);
  const double abs3 = neg3 + pos3;
  Accum acc(out, static_cast<std::size_t>(s.n));
  for (std::int64_t k = 0; k < s.n; ++k) {
    const double xi = rng.exponential(r) - sh;
    acc.step(xi, cond_var, neg3, abs3, cond_var);
  }
}

void sample_one(const BernsteinTwoPoint& s, RngStream& rng, PathStats& out) {
  const double var = s.p * s.b * s.b + (1.0 - s.p) * s.a * s.a;
  const double neg3 = (1.0 - s.p) * (-s.a) * (-s.a) * (-s.a);
  const double abs3 = s.p * s.b * s.b * s.b + neg3;
  const double c_sq_step = bounds::c_squared(s.b, var);
  Accum acc(out, static_cast<std::size_t>(s.n));
  for (std::int64_t k = 0; k < s.n; ++k) {
    const double xi = rng.uniform01() < s.p ? s.b : s.a;
    acc.step(xi, var, neg3, abs3, c_sq_step);
  }
}

void sample_one(const Regression& s, RngStream& rng, PathStats& out) {
  // Stream layout: n design draws first, then n noise draws.
  std::vector<double> phis(static_cast<std::size_t>(s.n));
  double norm_sq = 0.0;
  for (auto& phi : phis) {
    phi = s.design.sample(rng);
    norm_sq += phi * phi;
  }
  const double sigma = s.noise.sd();
  const double scale = sigma * std::sqrt(norm_sq);
  const double noise_a3 = s.noise.abs_third_moment();
  const double noise_n3 = s.noise.neg_third_moment();
  const double noise_p3 = s.noise.pos_third_moment();
  const std::optional<double> noise_sup = s.noise.sup();
  const double cube_scale = scale * scale * scale;
  Accum acc(out, phis.size());
  for (double phi : phis) {
    const double xi = phi * s.noise.sample(rng) / scale;
    const double cvar = phi * phi / norm_sq;
    const double mag3 = std::fabs(phi * phi * phi);
    const double neg3 = mag3 * (phi > 0.0 ? noise_n3 : noise_p3) / cube_scale;
    const double abs3 = mag3 * noise_a3 / cube_scale;
    double vproxy = cvar;
    if (noise_sup) {
      const double u = std::fabs(phi) * *noise_sup / scale;
      vproxy = bounds::c_squared(u, cvar);
    }
    acc.step(xi, cvar, neg3, abs3, vproxy);
  }
}

void sample_one(const Ar1& s, RngStream& rng, PathStats& out) {
  const double sigma_sq = s.noise.second_moment();
  const double noise_a3 = s.noise.abs_third_moment();
  const double noise_n3 = s.noise.neg_third_moment();
  const double noise_p3 = s.noise.pos_third_moment();
  const std::optional<double> noise_sup = s.noise.sup();
  // With |eps| <= sup, each step's c^2 proxy is x_prev^2 c^2(sup, sigma^2).
  const double c_sq_unit =
      noise_sup ? bounds::c_squared(*noise_sup, sigma_sq) : sigma_sq;
  Accum acc(out, static_cast<std::size_t>(s.n));
  double x_prev = s.x0;
  for (std::int64_t k = 0; k < s.n; ++k) {
    const double eps = s.noise.sample(rng);
    const double xi = x_prev * eps;
    const double mag = std::fabs(x_prev);
    const double mag3 = mag * mag * mag;
    acc.step(xi, x_prev * x_prev * sigma_sq,
             mag3 * (x_prev > 0.0 ? noise_n3 : noise_p3), mag3 * noise_a3,
             x_prev * x_prev * c_sq_unit);
    x_prev = s.theta * x_prev + eps;
  }
}

void sample_one(const GaltonWatson& s, RngStream& rng, PathStats& out) {
  const double m = s.offspring.mean;
  const double var = s.offspring.variance();
  // Population at generation g-1, grown individual by individual.
  std::int64_t population = 1;
  for (std::int64_t gen = 1; gen < s.generations && population > 0; ++gen) {
    std::int64_t next = 0;
    for (std::int64_t i = 0; i < population; ++i) next += s.offspring.sample(rng);
    population = next;
  }
  // Third-moment pieces of the centered offspring law. For Poisson the
  // negative part is the finite sum over k < m; the signed third central
  // moment equals the mean, so E|Y-m|^3 = m + 2 E((Y-m)^-)^3.
  double neg3 = 0.0, abs3 = 0.0;
  if (s.offspring.kind == OffspringSpec::Kind::poisson) {
    double pmf = std::exp(-m);  // P(Y = 0)
    for (std::int64_t k = 0; static_cast<double>(k) < m; ++k) {
      const double gap = m - static_cast<double>(k);
      neg3 += gap * gap * gap * pmf;
      pmf *= m / static_cast<double>(k + 1);
    }
    abs3 = m + 2.0 * neg3;
  }
  // Variance proxy M; a zero-mean offspring law is degenerate at 0, so its
  // centered steps (and their proxy) vanish identically.
  const double m_const = m > 0.0 ? bounds::c_squared(m, var) : 0.0;
  Accum acc(out, static_cast<std::size_t>(std::max<std::int64_t>(population, 0)));
  for (std::int64_t k = 0; k < population; ++k) {
    const double xi = static_cast<double>(s.offspring.sample(rng)) - m;
    acc.step(xi, var, neg3, abs3, m_const);
  }
}

}  // namespace

void sample_path(const ProcessSpec& spec, RngStream& rng, PathStats& out) {
  std::visit([&](const auto& s) { sample_one(s, rng, out); }, spec);
  if (out.steps() == 0) {  // extinction: restore the documented empty-path values
    out.max_s = 0.0;
    out.max_diff = 0.0;
  }
}

PathStats sample_path(const ProcessSpec& spec, RngStream& rng) {
  PathStats out;
  sample_path(spec, rng, out);
  return out;
}

// ----- events -----------------------------------------------------------------

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::exists_k: return "exists";
    case EventKind::max_endpoint: return "max-endpoint";
    case EventKind::self_normalized: return "self-normalized";
    case EventKind::negated: return "negated";
  }
  return "unknown";
}

std::optional<EventKind> event_kind_from_name(std::string_view name) {
  if (name == "exists") return EventKind::exists_k;
  if (name == "max-endpoint") return EventKind::max_endpoint;
  if (name == "self-normalized") return EventKind::self_normalized;
  if (name == "negated") return EventKind::negated;
  return std::nullopt;
}

bool event_hit(const PathStats& path, const TailEvent& event) {
  const std::size_t n = path.steps();
  if (n == 0) return false;

  auto clauses_ok = [&](std::size_t k) {
    switch (event.var_clause) {
      case VarClause::none: break;
      case VarClause::squared_variation:
        if (!(path.sq_var[k] <= event.v_sq)) return false;
        break;
      case VarClause::quadratic_char:
        if (!(path.cond_var[k] <= event.v_sq)) return false;
        break;
    }
    switch (event.budget_clause) {
      case BudgetClause::none: break;
      case BudgetClause::v_sum:
        if (!(path.v_sum[k] <= event.w)) return false;
        break;
      case BudgetClause::neg_third:
        if (!(path.neg_third[k] <= event.w)) return false;
        break;
    }
    return true;
  };

  switch (event.kind) {
    case EventKind::exists_k:
      for (std::size_t k = 0; k < n; ++k)
        if (path.s[k] >= event.x && clauses_ok(k)) return true;
      return false;
    case EventKind::negated:
      for (std::size_t k = 0; k < n; ++k)
        if (-path.s[k] >= event.x && clauses_ok(k)) return true;
      return false;
    case EventKind::max_endpoint:
      return clauses_ok(n - 1) && path.max_s >= event.x;
    case EventKind::self_normalized: {
      if (!clauses_ok(n - 1)) return false;
      const double total = path.sq_var[n - 1];
      // 0/0 counts as 0: a flat path only hits nonpositive thresholds.
      if (total <= 0.0) return 0.0 >= event.x;
      return path.max_s / std::sqrt(total) >= event.x;
    }
  }
  return false;
}

// ----- traits -----------------------------------------------------------------

namespace {

ProcessTraits traits_one(const RademacherWeighted& s) {
  ProcessTraits t;
  t.martingale = true;
  t.conditionally_symmetric = true;
  t.independent_increments = true;
  double max_w = 0.0, total = 0.0;
  for (double w : s.weights) {
    max_w = std::max(max_w, std::fabs(w));
    total += std::fabs(w) * std::fabs(w);
  }
  t.lower_bound = -max_w;
  t.upper_bound = max_w;
  t.bernstein_eps = max_w;
  t.finite_third_moment = true;
  t.v_sum_is_c_squared = true;
  t.fixed_sq_var_total = total;
  t.fixed_cond_var_total = total;
  return t;
}

ProcessTraits traits_one(const ThreePoint& s) {
  ProcessTraits t;
  t.martingale = true;
  t.conditionally_symmetric = true;
  t.independent_increments = true;
  t.lower_bound = -s.y;
  t.upper_bound = s.y;
  t.bernstein_eps = s.y;
  t.finite_third_moment = true;
  t.v_sum_is_c_squared = true;
  t.fixed_cond_var_total = s.v_sq;
  return t;
}

ProcessTraits traits_one(const SinCosRademacher& s) {
  ProcessTraits t;
  t.martingale = true;
  t.conditionally_symmetric = true;
  t.independent_increments = false;  // all steps share the initial angle
  const double cap = 1.0 / std::sqrt(static_cast<double>(s.n));
  t.lower_bound = -cap;
  t.upper_bound = cap;
  t.bernstein_eps = cap;
  t.finite_third_moment = true;
  t.v_sum_is_c_squared = true;
  t.fixed_sq_var_total = 0.5;
  t.fixed_cond_var_total = 0.5;
  return t;
}

ProcessTraits traits_one(const BoundedBelowExponential& s) {
  ProcessTraits t;
  t.martingale = s.shift * s.rate == 1.0;
  t.conditionally_symmetric = false;
  t.independent_increments = true;
  t.lower_bound = -s.shift;
  if (t.martingale) t.bernstein_eps = 1.0 / s.rate;
  t.finite_third_moment = true;
  return t;
}

ProcessTraits traits_one(const BernsteinTwoPoint& s) {
  ProcessTraits t;
  t.martingale = true;
  t.conditionally_symmetric = s.p == 0.5 && s.b == -s.a;
  t.independent_increments = true;
  t.lower_bound = s.a;
  t.upper_bound = s.b;
  t.bernstein_eps = std::max(-s.a, s.b);
  t.finite_third_moment = true;
  t.v_sum_is_c_squared = true;
  const double var = s.p * s.b * s.b + (1.0 - s.p) * s.a * s.a;
  t.fixed_cond_var_total = static_cast<double>(s.n) * var;
  return t;
}

ProcessTraits traits_one(const Regression& s) {
  ProcessTraits t;
  t.martingale = true;
  t.conditionally_symmetric = s.noise.symmetric();
  t.independent_increments =
      s.design.kind == DesignSpec::Kind::constant && s.noise.symmetric();
  const double sigma = s.noise.sd();
  if (auto cap = s.noise.sup()) {
    // |phi_i| / sqrt(sum phi^2) <= 1, so the normalized step is bounded.
    t.lower_bound = -*cap / sigma;
    t.upper_bound = *cap / sigma;
    t.v_sum_is_c_squared = true;
  }
  if (auto eps = s.noise.bernstein_eps()) t.bernstein_eps = *eps / sigma;
  t.finite_third_moment = true;
  t.fixed_cond_var_total = 1.0;  // sum phi^2 / sum phi^2, up to accumulation
  return t;
}

ProcessTraits traits_one(const Ar1& s) {
  ProcessTraits t;
  t.martingale = true;
  t.conditionally_symmetric = s.noise.symmetric();
  t.independent_increments = false;
  t.finite_third_moment = true;
  // xi_k = X_{k-1} eps_k <= |X_{k-1}| sup: a predictable upper bound, so the
  // accumulated X^2 c^2(sup, sigma^2) proxy is valid even though no constant
  // step bound exists.
  t.v_sum_is_c_squared = s.noise.sup().has_value();
  return t;
}

ProcessTraits traits_one(const GaltonWatson& s) {
  ProcessTraits t;
  t.martingale = true;
  t.conditionally_symmetric = false;
  t.independent_increments = false;
  t.lower_bound = -s.offspring.mean;
  if (s.offspring.kind == OffspringSpec::Kind::deterministic)
    t.upper_bound = 0.0;
  t.bernstein_eps = s.bernstein_eps;
  t.finite_third_moment = true;
  return t;
}

}  // namespace

ProcessTraits traits(const ProcessSpec& spec) {
  return std::visit([](const auto& s) { return traits_one(s); }, spec);
}

double exact_chernoff_three_point(double x, double y, double v_sq,
                                  std::int64_t n) {
  ThreePoint probe{y, v_sq, n};
  validate_one(probe);
  if (!(x >= 0.0)) throw domain_error("x must be >= 0");
  const double nd = static_cast<double>(n);
  if (x >= nd * y)
    throw domain_error("exact_chernoff_three_point: requires x < n y");
  if (x == 0.0) return 1.0;
  const double d = v_sq / (nd * y * y);
  auto exponent = [&](double lambda) {
    return -lambda * x + nd * bounds::log1p_cosh_term(d, lambda * y);
  };
  // Grow the bracket until the objective turns upward; the optimizer then
  // homes in on the interior minimum.
  double hi = 1.0 / y;
  for (int i = 0; i < 64 && exponent(2.0 * hi) < exponent(hi); ++i) hi *= 2.0;
  const auto opt = optimize::optimize_lambda(exponent, 0.0, 2.0 * hi);
  return std::exp(opt.value);
}

}  // namespace tailbound
