#include "tailbound/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "tailbound/rng.hpp"

namespace tailbound::estimators {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw domain_error(msg);
}

// Clip a doubled bound 2 B back into (0, 1] in log space.
BoundResult doubled(BoundResult base, BoundFamily family) {
  base.family = family;
  base.log_value += std::log(2.0);
  if (base.log_value > 0.0) {
    base.log_value = 0.0;
    base.clipped = true;
  }
  base.value = std::exp(base.log_value);
  return base;
}

}  // namespace

// ----- regression ---------------------------------------------------------------

void RegressionData::validate() const {
  require(!phis.empty(), "regression data: at least one observation required");
  require(phis.size() == xs.size(),
          "regression data: phi and x columns must have equal length");
  require(std::isfinite(sigma) && sigma > 0.0,
          "regression data: sigma must be > 0");
  double norm_sq = 0.0;
  for (double phi : phis) {
    require(std::isfinite(phi), "regression data: phi values must be finite");
    norm_sq += phi * phi;
  }
  for (double x : xs)
    require(std::isfinite(x), "regression data: x values must be finite");
  require(norm_sq > 0.0, "regression data: sum of phi^2 must be > 0");
}

LinearFit fit_linear(const RegressionData& data) {
  data.validate();
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < data.phis.size(); ++k) {
    num += data.phis[k] * data.xs[k];
    den += data.phis[k] * data.phis[k];
  }
  LinearFit fit;
  fit.theta_hat = num / den;
  fit.norm_sq = den;
  fit.n = static_cast<std::int64_t>(data.phis.size());
  return fit;
}

BoundResult regression_envelope(const EnvelopeSpec& spec,
                                const RegressionData& data, double x) {
  data.validate();
  require(std::isfinite(x) && x >= 0.0, "x must be >= 0");
  const double sigma = data.sigma;
  switch (spec.kind) {
    case EnvelopeSpec::Kind::bernstein: {
      require(spec.eps1 > 0.0 && spec.eps2 > 0.0,
              "bernstein envelope: eps1 and eps2 must be > 0");
      double norm_sq = 0.0;
      for (double phi : data.phis) norm_sq += phi * phi;
      const double root = std::sqrt(norm_sq);
      for (std::size_t k = 0; k < data.phis.size(); ++k) {
        if (std::fabs(data.phis[k]) / root > spec.eps1)
          throw domain_error(
              "bernstein envelope: hypothesis |phi_k|/sqrt(sum phi^2) <= eps1 "
              "fails at row " +
              std::to_string(k + 1));
      }
      BoundResult r = bounds::bennett_refined(
          x, spec.eps1 * spec.eps2 / sigma, 1.0,
          static_cast<std::int64_t>(data.phis.size()));
      r.family = BoundFamily::regression_bernstein;
      return r;
    }
    case EnvelopeSpec::Kind::bounded_above: {
      require(spec.eps > 0.0, "bounded envelope: eps must be > 0");
      const double ratio = spec.eps / sigma;
      const double c_n = 0.25 * (ratio + 1.0 / ratio) * (ratio + 1.0 / ratio);
      BoundResult r = bounds::subgaussian(x, std::sqrt(c_n));
      r.family = BoundFamily::regression_bounded;
      return r;
    }
    case EnvelopeSpec::Kind::alpha_mgf: {
      double norm_alpha = 0.0;
      for (double phi : data.phis)
        norm_alpha += std::pow(std::fabs(phi), spec.alpha);
      require(norm_alpha > 0.0,
              "alpha envelope: the alpha-norm of the design must be > 0");
      BoundResult r = bounds::weighted_alpha(
          x, std::pow(norm_alpha, 1.0 / spec.alpha), spec.alpha, spec.c);
      r.family = BoundFamily::regression_alpha;
      return r;
    }
  }
  throw domain_error("regression envelope: unknown kind");
}

// ----- AR(1) --------------------------------------------------------------------

Ar1Fit fit_ar1(std::span<const double> series) {
  require(series.size() >= 2, "ar1 fit: need X_0 and at least one transition");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    require(std::isfinite(series[k - 1]) && std::isfinite(series[k]),
            "ar1 fit: series values must be finite");
    num += series[k] * series[k - 1];
    den += series[k - 1] * series[k - 1];
  }
  require(den > 0.0, "ar1 fit: sum of X_{k-1}^2 must be > 0");
  Ar1Fit fit;
  fit.theta_hat = num / den;
  fit.sum_sq = den;
  fit.n = static_cast<std::int64_t>(series.size()) - 1;
  return fit;
}

Ar1Envelope ar1_envelope(double eps, double sigma, double sum_sq, double x,
                         double v_sq) {
  require(std::isfinite(eps) && eps > 0.0, "ar1 envelope: eps must be > 0");
  require(std::isfinite(sigma) && sigma > 0.0,
          "ar1 envelope: sigma must be > 0");
  require(std::isfinite(sum_sq) && sum_sq > 0.0,
          "ar1 envelope: sum_sq must be > 0");
  require(std::isfinite(x) && x >= 0.0, "x must be >= 0");
  require(std::isfinite(v_sq) && v_sq > 0.0,
          "ar1 envelope: v_sq must be > 0");
  Ar1Envelope out;
  const double half = 0.5 * (eps + sigma * sigma / eps);
  out.l_n = half * half * sum_sq;
  out.bound = bounds::subgaussian(x, std::sqrt(v_sq));
  out.bound.family = BoundFamily::ar1_bounded;
  return out;
}

BoundResult ar1_envelope_alpha(double alpha, double c,
                               std::span<const double> history, double x) {
  require(!history.empty(), "ar1 alpha envelope: empty history");
  double norm_alpha = 0.0;
  for (double v : history) {
    require(std::isfinite(v), "ar1 alpha envelope: history must be finite");
    norm_alpha += std::pow(std::fabs(v), alpha);
  }
  require(norm_alpha > 0.0,
          "ar1 alpha envelope: the alpha-norm of the history must be > 0");
  BoundResult r =
      bounds::weighted_alpha(x, std::pow(norm_alpha, 1.0 / alpha), alpha, c);
  r.family = BoundFamily::ar1_alpha;
  return r;
}

// ----- branching ----------------------------------------------------------------

double lotka_nagaev(const BranchingObservation& obs) {
  require(obs.x_prev >= 1,
          "lotka-nagaev: the previous generation must be nonempty");
  require(obs.x_curr >= 0, "lotka-nagaev: offspring count must be >= 0");
  return static_cast<double>(obs.x_curr) / static_cast<double>(obs.x_prev);
}

BranchingEnvelopeResult branching_envelope(BranchingEnvelope kind,
                                           const BranchingObservation& obs,
                                           double x, double v_sq) {
  require(obs.x_prev >= 1,
          "branching envelope: the previous generation must be nonempty");
  require(std::isfinite(x) && x >= 0.0, "x must be >= 0");
  require(std::isfinite(v_sq) && v_sq > 0.0,
          "branching envelope: v_sq must be > 0");
  require(std::isfinite(obs.m) && obs.m > 0.0,
          "branching envelope: offspring mean must be > 0");
  require(std::isfinite(obs.sigma) && obs.sigma > 0.0,
          "branching envelope: offspring sigma must be > 0");
  BranchingEnvelopeResult out;
  switch (kind) {
    case BranchingEnvelope::bernstein_two_sided: {
      require(std::isfinite(obs.eps) && obs.eps > 0.0,
              "branching envelope: Bernstein eps must be > 0");
      out.envelope =
          doubled(bounds::bennett_refined(x, obs.eps, std::sqrt(v_sq),
                                          obs.x_prev),
                  BoundFamily::branching_two_sided);
      out.relaxation = doubled(bounds::freedman_b2(x, obs.eps, std::sqrt(v_sq)),
                               BoundFamily::branching_two_sided);
      return out;
    }
    case BranchingEnvelope::lower_one_sided: {
      out.m_constant = bounds::c_squared(obs.m, obs.sigma * obs.sigma);
      out.envelope = bounds::subgaussian(x, std::sqrt(v_sq));
      out.envelope.family = BoundFamily::branching_lower;
      return out;
    }
  }
  throw domain_error("branching envelope: unknown kind");
}

UnconditionalEstimate branching_unconditional(BranchingEnvelope kind,
                                              const OffspringSpec& offspring,
                                              std::int64_t generations,
                                              double x, double eps,
                                              std::uint64_t trials,
                                              std::uint64_t seed,
                                              double confidence) {
  offspring.validate();
  require(generations >= 1 && generations <= 30,
          "branching unconditional: generations must lie in [1, 30]");
  require(std::isfinite(x) && x >= 0.0, "x must be >= 0");
  require(trials >= 2, "branching unconditional: trials must be >= 2");
  require(confidence > 0.5 && confidence < 1.0,
          "branching unconditional: confidence must lie in (0.5, 1)");

  const double m = offspring.mean;
  const double var = offspring.variance();
  double decay;  // per-individual exponent: envelope = exp{-X decay} (capped)
  double cap_log;
  if (kind == BranchingEnvelope::bernstein_two_sided) {
    require(std::isfinite(eps) && eps > 0.0,
            "branching unconditional: Bernstein eps must be > 0");
    // x == 0 clips the envelope to 1; avoid 0/0 when the variance is 0 too.
    decay = x == 0.0 ? 0.0 : x * x / (2.0 * (var + x * eps));
    cap_log = std::log(2.0);
  } else {
    const double m_const = bounds::c_squared(m, var);
    decay = x == 0.0 ? 0.0 : x * x / (2.0 * m_const);
    cap_log = 0.0;
  }

  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream rng = RngStream::substream(seed, t);
    std::int64_t population = 1;
    for (std::int64_t gen = 1; gen < generations && population > 0; ++gen) {
      std::int64_t next = 0;
      for (std::int64_t i = 0; i < population; ++i)
        next += offspring.sample(rng);
      population = next;
    }
    // Extinction contributes exp{0} = 1; the two-sided factor 2 is clipped.
    const double log_env =
        std::min(0.0, cap_log - static_cast<double>(population) * decay);
    const double env = std::exp(log_env);
    sum += env;
    sum_sq += env * env;
  }

  UnconditionalEstimate out;
  out.trials = trials;
  out.seed = seed;
  const double n = static_cast<double>(trials);
  out.mean = sum / n;
  const double var_hat =
      std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1.0));
  const double z =
      std::sqrt(2.0) * boost::math::erfc_inv(1.0 - confidence);
  const double half_width = z * std::sqrt(var_hat / n);
  out.ci_low = std::max(0.0, out.mean - half_width);
  out.ci_high = std::min(1.0, out.mean + half_width);
  return out;
}

// ----- CSV ingestion -------------------------------------------------------------

namespace {

[[noreturn]] void csv_error(const std::string& path, std::size_t line,
                            const std::string& why) {
  throw configuration_error(path + ":" + std::to_string(line) + ": " + why);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    const auto a = cell.find_first_not_of(" \t\r");
    const auto b = cell.find_last_not_of(" \t\r");
    cells.push_back(a == std::string::npos ? std::string()
                                           : cell.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& path, std::size_t line,
                    const std::string& cell) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    csv_error(path, line, "expected a numeric field, got '" + cell + "'");
  }
}

std::int64_t parse_int(const std::string& path, std::size_t line,
                       const std::string& cell) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    csv_error(path, line, "expected an integer field, got '" + cell + "'");
  }
}

// Reads all non-empty lines; requires the exact header in line 1.
std::vector<std::vector<std::string>> read_rows(const std::string& path,
                                                const std::string& header) {
  std::ifstream in(path);
  if (!in) throw configuration_error(path + ": cannot open for reading");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      std::string got;
      for (const auto& cell : split_row(line)) {
        if (!got.empty()) got += ',';
        got += cell;
      }
      if (got != header)
        csv_error(path, lineno, "expected header '" + header + "'");
      saw_header = true;
      continue;
    }
    auto cells = split_row(line);
    rows.push_back(std::move(cells));
  }
  if (!saw_header)
    throw configuration_error(path + ": empty file, expected header '" +
                              header + "'");
  return rows;
}

}  // namespace

RegressionData read_regression_csv(const std::string& path, double sigma) {
  RegressionData data;
  data.sigma = sigma;
  std::size_t lineno = 1;
  for (const auto& row : read_rows(path, "phi,x")) {
    ++lineno;
    if (row.size() != 2)
      csv_error(path, lineno, "expected two fields (phi,x)");
    data.phis.push_back(parse_double(path, lineno, row[0]));
    data.xs.push_back(parse_double(path, lineno, row[1]));
  }
  data.validate();
  return data;
}

std::vector<double> read_ar1_csv(const std::string& path) {
  std::vector<double> series;
  std::size_t lineno = 1;
  for (const auto& row : read_rows(path, "x")) {
    ++lineno;
    if (row.size() != 1) csv_error(path, lineno, "expected one field (x)");
    series.push_back(parse_double(path, lineno, row[0]));
  }
  if (series.size() < 2)
    throw configuration_error(path +
                              ": need X_0 plus at least one transition");
  return series;
}

std::vector<std::int64_t> read_branching_csv(const std::string& path) {
  std::vector<std::int64_t> counts;
  std::size_t lineno = 1;
  for (const auto& row : read_rows(path, "generation,count")) {
    ++lineno;
    if (row.size() != 2)
      csv_error(path, lineno, "expected two fields (generation,count)");
    const std::int64_t gen = parse_int(path, lineno, row[0]);
    const std::int64_t count = parse_int(path, lineno, row[1]);
    if (gen != static_cast<std::int64_t>(counts.size()))
      csv_error(path, lineno,
                "generations must be consecutive starting at 0");
    if (count < 0) csv_error(path, lineno, "counts must be >= 0");
    if (counts.empty() && count != 1)
      csv_error(path, lineno, "generation 0 must have count 1");
    counts.push_back(count);
  }
  if (counts.size() < 2)
    throw configuration_error(path + ": need at least generations 0 and 1");
  return counts;
}

}  // namespace tailbound::estimators
