#include "tailbound/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tailbound/bounds.hpp"
#include "tailbound/errors.hpp"
#include "tailbound/estimators.hpp"
#include "tailbound/montecarlo.hpp"
#include "tailbound/processes.hpp"

namespace tailbound::cli {
namespace {

using nlohmann::json;

// ----- formatting ----------------------------------------------------------------

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

json jcell(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

// ----- config file handling -------------------------------------------------------
// Flags override config-file values, which override built-in defaults. Every
// key the command could read is tracked so a stray key in the file fails
// loudly instead of being ignored.

struct Cfg {
  json data = json::object();
  mutable std::set<std::string> usable;

  static Cfg load(const std::optional<std::string>& path) {
    Cfg cfg;
    if (!path) return cfg;
    std::ifstream in(*path);
    if (!in)
      throw configuration_error("cannot open config file " + *path);
    try {
      cfg.data = json::parse(in);
    } catch (const json::exception& e) {
      throw configuration_error("config file " + *path + ": " + e.what());
    }
    if (!cfg.data.is_object())
      throw configuration_error("config file " + *path +
                                " must hold a JSON object");
    return cfg;
  }

  template <class T>
  std::optional<T> get(const std::string& key) const {
    usable.insert(key);
    auto it = data.find(key);
    if (it == data.end() || it->is_null()) return std::nullopt;
    try {
      return it->get<T>();
    } catch (const json::exception&) {
      throw configuration_error("config key '" + key +
                                "' has the wrong type");
    }
  }

  // Call after resolution: keys the command could never read are errors.
  void finish() const {
    for (const auto& item : data.items())
      if (!usable.count(item.key()))
        throw configuration_error("config key '" + item.key() +
                                  "' is not used by this command");
  }
};

template <class T>
std::optional<T> pick_opt(const std::optional<T>& flag, const Cfg& cfg,
                          const std::string& key) {
  // Read the file first even when the flag wins, so the key counts as used
  // (and an ill-typed config value always fails loudly).
  auto from_file = cfg.template get<T>(key);
  if (flag) return flag;
  return from_file;
}

template <class T>
T pick(const std::optional<T>& flag, const Cfg& cfg, const std::string& key,
       T fallback) {
  return pick_opt(flag, cfg, key).value_or(fallback);
}

template <class T>
T pick_req(const std::optional<T>& flag, const Cfg& cfg,
           const std::string& key) {
  if (auto v = pick_opt(flag, cfg, key)) return *v;
  throw configuration_error("missing required parameter: " + key);
}

std::vector<double> pick_grid(const std::vector<double>& flag, const Cfg& cfg,
                              const std::string& key) {
  auto from_file = cfg.get<std::vector<double>>(key);
  if (!flag.empty()) return flag;
  return from_file.value_or(std::vector<double>{});
}

// x values: an explicit grid wins over the scalar; one of them is required.
std::vector<double> resolve_xs(const std::optional<double>& x,
                               const std::vector<double>& x_grid,
                               const Cfg& cfg, json& rc) {
  const std::vector<double> grid = pick_grid(x_grid, cfg, "x_grid");
  if (!grid.empty()) {
    rc["x_grid"] = grid;
    cfg.get<double>("x");  // mark usable so a config scalar is not a stray
    return grid;
  }
  if (auto xv = pick_opt(x, cfg, "x")) {
    rc["x"] = *xv;
    return {*xv};
  }
  throw configuration_error("missing required parameter: x (or x_grid)");
}

// ----- report emission ------------------------------------------------------------

void deliver(const std::string& content,
             const std::optional<std::string>& output, std::ostream& out) {
  if (!output) {
    out << content;
    return;
  }
  const std::string tmp = *output + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
      throw configuration_error("cannot open " + tmp + " for writing");
    f << content;
    f.flush();
    if (!f) throw configuration_error("failed while writing " + tmp);
  }
  if (std::rename(tmp.c_str(), output->c_str()) != 0)
    throw configuration_error("cannot move " + tmp + " into place at " +
                              *output);
}

std::string render_json(const std::string& command, const json& rc,
                        const json& body) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool_version"] = kToolVersion;
  doc["command"] = command;
  doc["config"] = rc;
  for (const auto& item : body.items()) doc[item.key()] = item.value();
  return doc.dump(2) + "\n";
}

std::string csv_preamble(const std::string& command, const json& rc) {
  std::ostringstream os;
  os << "# schema_version=" << kSchemaVersion << "\n"
     << "# tool_version=" << kToolVersion << "\n"
     << "# command=" << command << "\n"
     << "# config=" << rc.dump() << "\n";
  return os.str();
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

std::string resolve_format(const std::optional<std::string>& flag,
                           const Cfg& cfg, json& rc) {
  const std::string format = pick(flag, cfg, "format", std::string("csv"));
  if (format != "csv" && format != "json")
    throw configuration_error("format must be csv or json, got '" + format +
                              "'");
  rc["format"] = format;
  return format;
}

std::optional<std::string> resolve_output(
    const std::optional<std::string>& flag, const Cfg& cfg, json& rc) {
  auto output = pick_opt(flag, cfg, "output");
  if (output) rc["output"] = *output;
  return output;
}

// ----- shared flag blocks ----------------------------------------------------------

struct CommonFlags {
  std::optional<std::string> config;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CommonFlags& cf, bool with_format = true) {
  cmd->add_option("--config", cf.config,
                  "JSON file with parameter defaults (flags override)");
  cmd->add_option("--output", cf.output,
                  "report file path (written atomically; default stdout)");
  if (with_format)
    cmd->add_option("--format", cf.format, "report format: csv or json");
}

struct ProcessFlags {
  std::optional<std::string> process;
  std::vector<double> weights;
  std::optional<double> weight;
  std::optional<std::int64_t> n;
  std::optional<double> y, vsq, shift, rate, p, a, b, theta, x0;
  std::optional<std::string> noise;
  std::optional<double> noise_sigma, noise_half_width, noise_p, noise_lo,
      noise_hi;
  std::optional<std::string> design;
  std::optional<double> design_a, design_b;
  std::optional<std::string> offspring;
  std::optional<double> offspring_mean;
  std::optional<std::int64_t> generations;
  std::optional<double> bernstein_eps;
};

void add_process_flags(CLI::App* cmd, ProcessFlags& pf) {
  cmd->add_option("--process", pf.process,
                  "process kind: rademacher | three-point | sin-cos | "
                  "bounded-below-exp | bernstein-two-point | regression | "
                  "ar1 | galton-watson");
  cmd->add_option("--weights", pf.weights,
                  "rademacher: explicit step weights, comma separated")
      ->delimiter(',');
  cmd->add_option("--weight", pf.weight,
                  "rademacher: uniform weight used with --n (default 1)");
  cmd->add_option("--n", pf.n, "number of steps");
  cmd->add_option("--y", pf.y, "three-point: step magnitude");
  cmd->add_option("--vsq", pf.vsq,
                  "three-point: total conditional variance");
  cmd->add_option("--shift", pf.shift,
                  "bounded-below-exp: lower-bound shift (steps >= -shift)");
  cmd->add_option("--rate", pf.rate, "bounded-below-exp: exponential rate");
  cmd->add_option("--p", pf.p, "bernstein-two-point: probability of the "
                               "upper value");
  cmd->add_option("--a", pf.a, "bernstein-two-point: lower step value");
  cmd->add_option("--b", pf.b, "bernstein-two-point: upper step value");
  cmd->add_option("--theta", pf.theta, "ar1: autoregression coefficient");
  cmd->add_option("--x0", pf.x0, "ar1: initial state");
  cmd->add_option("--noise", pf.noise,
                  "noise law: gaussian | uniform | two-point | rademacher");
  cmd->add_option("--noise-sigma", pf.noise_sigma,
                  "gaussian std dev / rademacher magnitude");
  cmd->add_option("--noise-half-width", pf.noise_half_width,
                  "uniform noise half width");
  cmd->add_option("--noise-p", pf.noise_p,
                  "two-point noise: probability of the upper value");
  cmd->add_option("--noise-lo", pf.noise_lo, "two-point noise: lower value");
  cmd->add_option("--noise-hi", pf.noise_hi, "two-point noise: upper value");
  cmd->add_option("--design", pf.design,
                  "regression design: constant | uniform-magnitude");
  cmd->add_option("--design-a", pf.design_a,
                  "design magnitude (constant value / interval low end)");
  cmd->add_option("--design-b", pf.design_b,
                  "design magnitude interval high end");
  cmd->add_option("--offspring", pf.offspring,
                  "galton-watson offspring law: poisson | deterministic");
  cmd->add_option("--offspring-mean", pf.offspring_mean,
                  "galton-watson offspring mean");
  cmd->add_option("--generations", pf.generations,
                  "galton-watson: generation index being split (1..30)");
  cmd->add_option("--bernstein-eps", pf.bernstein_eps,
                  "galton-watson: Bernstein scale asserted for the "
                  "centered offspring law");
}

NoiseSpec build_noise(const ProcessFlags& pf, const Cfg& cfg, json& rc) {
  NoiseSpec ns;
  const std::string kind =
      pick(pf.noise, cfg, "noise", std::string("gaussian"));
  rc["noise"] = kind;
  if (kind == "gaussian") {
    ns.kind = NoiseSpec::Kind::gaussian;
    ns.sigma = pick(pf.noise_sigma, cfg, "noise_sigma", 1.0);
    rc["noise_sigma"] = ns.sigma;
  } else if (kind == "uniform") {
    ns.kind = NoiseSpec::Kind::uniform;
    ns.half_width = pick(pf.noise_half_width, cfg, "noise_half_width", 1.0);
    rc["noise_half_width"] = ns.half_width;
  } else if (kind == "two-point") {
    ns.kind = NoiseSpec::Kind::two_point;
    ns.p = pick(pf.noise_p, cfg, "noise_p", 0.5);
    ns.lo = pick(pf.noise_lo, cfg, "noise_lo", -1.0);
    ns.hi = pick(pf.noise_hi, cfg, "noise_hi", 1.0);
    rc["noise_p"] = ns.p;
    rc["noise_lo"] = ns.lo;
    rc["noise_hi"] = ns.hi;
  } else if (kind == "rademacher") {
    ns.kind = NoiseSpec::Kind::rademacher;
    ns.sigma = pick(pf.noise_sigma, cfg, "noise_sigma", 1.0);
    rc["noise_sigma"] = ns.sigma;
  } else {
    throw configuration_error("unknown noise kind: " + kind);
  }
  return ns;
}

DesignSpec build_design(const ProcessFlags& pf, const Cfg& cfg, json& rc) {
  DesignSpec ds;
  const std::string kind =
      pick(pf.design, cfg, "design", std::string("constant"));
  rc["design"] = kind;
  if (kind == "constant") {
    ds.kind = DesignSpec::Kind::constant;
    ds.a = pick(pf.design_a, cfg, "design_a", 1.0);
    ds.b = ds.a;
    rc["design_a"] = ds.a;
  } else if (kind == "uniform-magnitude") {
    ds.kind = DesignSpec::Kind::uniform_magnitude;
    ds.a = pick(pf.design_a, cfg, "design_a", 1.0);
    ds.b = pick(pf.design_b, cfg, "design_b", 1.0);
    rc["design_a"] = ds.a;
    rc["design_b"] = ds.b;
  } else {
    throw configuration_error("unknown design kind: " + kind);
  }
  return ds;
}

ProcessSpec build_process(const ProcessFlags& pf, const Cfg& cfg, json& rc) {
  const std::string name = pick_req(pf.process, cfg, "process");
  rc["process"] = name;
  ProcessSpec spec;
  if (name == "rademacher") {
    RademacherWeighted rw;
    const std::vector<double> w = pick_grid(pf.weights, cfg, "weights");
    if (!w.empty()) {
      rw.weights = w;
      rc["weights"] = w;
    } else {
      const auto n = pick_req(pf.n, cfg, "n");
      const double wt = pick(pf.weight, cfg, "weight", 1.0);
      if (n < 1)
        throw configuration_error("rademacher: n must be >= 1");
      rw.weights.assign(static_cast<std::size_t>(n), wt);
      rc["n"] = n;
      rc["weight"] = wt;
    }
    spec = rw;
  } else if (name == "three-point") {
    ThreePoint tp;
    tp.y = pick(pf.y, cfg, "y", tp.y);
    tp.v_sq = pick(pf.vsq, cfg, "vsq", tp.v_sq);
    tp.n = pick(pf.n, cfg, "n", tp.n);
    rc["y"] = tp.y;
    rc["vsq"] = tp.v_sq;
    rc["n"] = tp.n;
    spec = tp;
  } else if (name == "sin-cos") {
    SinCosRademacher sc;
    sc.n = pick(pf.n, cfg, "n", sc.n);
    rc["n"] = sc.n;
    spec = sc;
  } else if (name == "bounded-below-exp") {
    BoundedBelowExponential bb;
    bb.shift = pick(pf.shift, cfg, "shift", bb.shift);
    bb.rate = pick(pf.rate, cfg, "rate", bb.rate);
    bb.n = pick(pf.n, cfg, "n", bb.n);
    rc["shift"] = bb.shift;
    rc["rate"] = bb.rate;
    rc["n"] = bb.n;
    spec = bb;
  } else if (name == "bernstein-two-point") {
    BernsteinTwoPoint b2;
    b2.p = pick(pf.p, cfg, "p", b2.p);
    b2.a = pick(pf.a, cfg, "a", b2.a);
    b2.b = pick(pf.b, cfg, "b", b2.b);
    b2.n = pick(pf.n, cfg, "n", b2.n);
    rc["p"] = b2.p;
    rc["a"] = b2.a;
    rc["b"] = b2.b;
    rc["n"] = b2.n;
    spec = b2;
  } else if (name == "regression") {
    Regression rg;
    rg.design = build_design(pf, cfg, rc);
    rg.noise = build_noise(pf, cfg, rc);
    rg.n = pick(pf.n, cfg, "n", rg.n);
    rc["n"] = rg.n;
    spec = rg;
  } else if (name == "ar1") {
    Ar1 ar;
    ar.theta = pick(pf.theta, cfg, "theta", ar.theta);
    ar.x0 = pick(pf.x0, cfg, "x0", ar.x0);
    ar.noise = build_noise(pf, cfg, rc);
    ar.n = pick(pf.n, cfg, "n", ar.n);
    rc["theta"] = ar.theta;
    rc["x0"] = ar.x0;
    rc["n"] = ar.n;
    spec = ar;
  } else if (name == "galton-watson") {
    GaltonWatson gw;
    const std::string kind =
        pick(pf.offspring, cfg, "offspring", std::string("poisson"));
    rc["offspring"] = kind;
    if (kind == "poisson")
      gw.offspring.kind = OffspringSpec::Kind::poisson;
    else if (kind == "deterministic")
      gw.offspring.kind = OffspringSpec::Kind::deterministic;
    else
      throw configuration_error("unknown offspring kind: " + kind);
    gw.offspring.mean =
        pick(pf.offspring_mean, cfg, "offspring_mean", gw.offspring.mean);
    gw.generations = pick(pf.generations, cfg, "generations", gw.generations);
    gw.bernstein_eps =
        pick(pf.bernstein_eps, cfg, "bernstein_eps", gw.bernstein_eps);
    rc["offspring_mean"] = gw.offspring.mean;
    rc["generations"] = gw.generations;
    rc["bernstein_eps"] = gw.bernstein_eps;
    spec = gw;
  } else {
    throw configuration_error("unknown process kind: " + name);
  }
  validate(spec);
  return spec;
}

struct TrialFlags {
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> confidence;
  std::optional<int> workers;
};

void add_trial_flags(CLI::App* cmd, TrialFlags& tf) {
  cmd->add_option("--trials", tf.trials, "Monte Carlo trial count");
  cmd->add_option("--seed", tf.seed, "master seed for the trial substreams");
  cmd->add_option("--confidence", tf.confidence,
                  "confidence level for binomial intervals, in (0.5, 1)");
  cmd->add_option("--workers", tf.workers,
                  "worker threads (0 = auto; TAILBOUND_WORKERS overrides "
                  "auto)");
}

montecarlo::EstimateOptions resolve_trials(const TrialFlags& tf,
                                           const Cfg& cfg, json& rc,
                                           std::uint64_t default_trials) {
  montecarlo::EstimateOptions opt;
  opt.trials = pick(tf.trials, cfg, "trials", default_trials);
  opt.seed = pick(tf.seed, cfg, "seed", std::uint64_t{1});
  opt.confidence = pick(tf.confidence, cfg, "confidence", 0.99);
  opt.workers = pick(tf.workers, cfg, "workers", 0);
  rc["trials"] = opt.trials;
  rc["seed"] = opt.seed;
  rc["confidence"] = opt.confidence;
  rc["workers"] = opt.workers;
  return opt;
}

// ----- bound ---------------------------------------------------------------------

struct BoundCmd {
  CommonFlags common;
  std::optional<std::string> family;
  std::optional<double> x, v, epsilon, w, y, alpha, c;
  std::optional<std::int64_t> n;
  std::vector<double> x_grid, v_grid;
};

int run_bound(const BoundCmd& fl, std::ostream& out) {
  const Cfg cfg = Cfg::load(fl.common.config);
  json rc;
  const std::string family_s = pick_req(fl.family, cfg, "family");
  const auto family = family_from_name(family_s);
  if (!family)
    throw configuration_error("unknown bound family: " + family_s);
  rc["family"] = family_s;

  const std::vector<double> xs = resolve_xs(fl.x, fl.x_grid, cfg, rc);

  std::vector<std::optional<double>> vs;
  const std::vector<double> v_grid = pick_grid(fl.v_grid, cfg, "v_grid");
  if (!v_grid.empty()) {
    rc["v_grid"] = v_grid;
    cfg.get<double>("v");
    for (double v : v_grid) vs.emplace_back(v);
  } else {
    const auto v = pick_opt(fl.v, cfg, "v");
    if (v) rc["v"] = *v;
    vs.emplace_back(v);
  }

  BoundQuery base;
  base.epsilon = pick_opt(fl.epsilon, cfg, "epsilon");
  base.w = pick_opt(fl.w, cfg, "w");
  base.y = pick_opt(fl.y, cfg, "y");
  base.alpha = pick_opt(fl.alpha, cfg, "alpha");
  base.c = pick_opt(fl.c, cfg, "c");
  base.n = pick_opt(fl.n, cfg, "n");
  if (base.epsilon) rc["epsilon"] = *base.epsilon;
  if (base.w) rc["w"] = *base.w;
  if (base.y) rc["y"] = *base.y;
  if (base.alpha) rc["alpha"] = *base.alpha;
  if (base.c) rc["c"] = *base.c;
  if (base.n) rc["n"] = *base.n;

  const std::string format = resolve_format(fl.common.format, cfg, rc);
  const auto output = resolve_output(fl.common.output, cfg, rc);
  cfg.finish();

  json jrows = json::array();
  std::vector<std::vector<std::string>> rows;
  for (double x : xs) {
    for (const auto& v : vs) {
      BoundQuery q = base;
      q.x = x;
      q.v = v;
      const BoundResult r = bounds::evaluate(*family, q);
      json jr;
      jr["family"] = family_s;
      jr["x"] = x;
      jr["v"] = jcell(v);
      jr["epsilon"] = jcell(base.epsilon);
      jr["w"] = jcell(base.w);
      jr["y"] = jcell(base.y);
      jr["alpha"] = jcell(base.alpha);
      jr["c"] = jcell(base.c);
      jr["n"] = base.n ? json(*base.n) : json(nullptr);
      jr["value"] = r.value;
      jr["log_value"] = r.log_value;
      jr["lambda"] = r.lambda;
      jr["clipped"] = r.clipped;
      jr["limit_form"] = r.limit_form;
      jr["degenerate"] = r.degenerate;
      jrows.push_back(jr);
      rows.push_back({family_s, fmt(x), cell(v), cell(base.epsilon),
                      cell(base.w), cell(base.y), cell(base.alpha),
                      cell(base.c), base.n ? std::to_string(*base.n) : "",
                      fmt(r.value), fmt(r.log_value), fmt(r.lambda),
                      r.clipped ? "true" : "false",
                      r.limit_form ? "true" : "false",
                      r.degenerate ? "true" : "false"});
    }
  }

  std::string content;
  if (format == "json") {
    content = render_json("bound", rc, json{{"rows", jrows}});
  } else {
    content = csv_preamble("bound", rc) +
              csv_table({"family", "x", "v", "epsilon", "w", "y", "alpha",
                         "c", "n", "value", "log_value", "lambda", "clipped",
                         "limit_form", "degenerate"},
                        rows);
  }
  deliver(content, output, out);
  return 0;
}

// ----- simulate --------------------------------------------------------------------

struct SimulateCmd {
  CommonFlags common;
  ProcessFlags process;
  std::optional<std::uint64_t> seed, trial;
};

int run_simulate(const SimulateCmd& fl, std::ostream& out) {
  const Cfg cfg = Cfg::load(fl.common.config);
  json rc;
  const ProcessSpec spec = build_process(fl.process, cfg, rc);
  const std::uint64_t seed = pick(fl.seed, cfg, "seed", std::uint64_t{1});
  const std::uint64_t trial = pick(fl.trial, cfg, "trial", std::uint64_t{0});
  rc["seed"] = seed;
  rc["trial"] = trial;
  const std::string format = resolve_format(fl.common.format, cfg, rc);
  const auto output = resolve_output(fl.common.output, cfg, rc);
  cfg.finish();

  RngStream rng = RngStream::substream(seed, trial);
  const PathStats path = sample_path(spec, rng);

  json jrows = json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < path.steps(); ++k) {
    const double xi = path.s[k] - (k > 0 ? path.s[k - 1] : 0.0);
    json jr;
    jr["k"] = k + 1;
    jr["xi"] = xi;
    jr["s"] = path.s[k];
    jr["sq_var"] = path.sq_var[k];
    jr["cond_var"] = path.cond_var[k];
    jr["neg_third"] = path.neg_third[k];
    jr["abs_third"] = path.abs_third[k];
    jr["v_sum"] = path.v_sum[k];
    jrows.push_back(jr);
    rows.push_back({std::to_string(k + 1), fmt(xi), fmt(path.s[k]),
                    fmt(path.sq_var[k]), fmt(path.cond_var[k]),
                    fmt(path.neg_third[k]), fmt(path.abs_third[k]),
                    fmt(path.v_sum[k])});
  }

  std::string content;
  if (format == "json") {
    content = render_json("simulate", rc, json{{"rows", jrows}});
  } else {
    content = csv_preamble("simulate", rc) +
              csv_table({"k", "xi", "s", "sq_var", "cond_var", "neg_third",
                         "abs_third", "v_sum"},
                        rows);
  }
  deliver(content, output, out);
  return 0;
}

// ----- verify ----------------------------------------------------------------------

// Derives the tail event a family certifies: its clause shape is fixed by
// the family's hypotheses; budgets come from flags or, when the process has
// a deterministic total, from the process itself.
TailEvent derive_event(BoundFamily family, const ProcessSpec& spec,
                       EventKind kind, double x,
                       const std::optional<double>& event_vsq,
                       const std::optional<double>& event_w) {
  const ProcessTraits t = traits(spec);
  TailEvent e;
  e.kind = kind;
  e.x = x;
  const auto var_budget = [&](const std::optional<double>& fixed,
                              const char* which) -> double {
    if (event_vsq) return *event_vsq;
    if (fixed) return *fixed;
    throw configuration_error(
        std::string(family_name(family)) + ": supply event_vsq (process has no deterministic " + which +
        " total)");
  };
  switch (family) {
    case BoundFamily::freedman_b2:
    case BoundFamily::bennett_b1:
    case BoundFamily::bennett_b1n:
    case BoundFamily::lower_bounded:
    case BoundFamily::fuk_nagaev_tight:
    case BoundFamily::fuk_nagaev_loose:
      e.var_clause = VarClause::quadratic_char;
      e.v_sq = var_budget(t.fixed_cond_var_total, "conditional-variance");
      return e;
    case BoundFamily::third_moment:
      e.var_clause = VarClause::squared_variation;
      e.v_sq = var_budget(t.fixed_sq_var_total, "squared-variation");
      e.budget_clause = BudgetClause::neg_third;
      if (!event_w)
        throw configuration_error(
            "third-moment: supply event_w (negative-part third-moment "
            "budget)");
      e.w = *event_w;
      return e;
    case BoundFamily::subgaussian:
      if (kind == EventKind::self_normalized) return e;
      if (event_w) {
        e.budget_clause = BudgetClause::v_sum;
        e.w = *event_w;
        return e;
      }
      e.var_clause = VarClause::squared_variation;
      e.v_sq = var_budget(t.fixed_sq_var_total, "squared-variation");
      return e;
    default:
      throw configuration_error(
          std::string(family_name(family)) +
          " is not verifiable against simulated paths");
  }
}

struct VerifyCmd {
  CommonFlags common;
  ProcessFlags process;
  TrialFlags trial;
  std::optional<std::string> family;
  std::optional<double> x;
  std::vector<double> x_grid;
  std::optional<std::string> event;
  std::optional<double> event_vsq, event_w, diff_threshold;
};

json verdict_row_json(const montecarlo::VerificationVerdict& v,
                      std::int64_t n_steps) {
  json jr;
  jr["family"] = std::string(family_name(v.family));
  jr["process"] = v.process;
  jr["event_kind"] = event_kind_name(v.event.kind);
  jr["x"] = v.event.x;
  jr["v_sq"] = v.event.var_clause == VarClause::none ? json(nullptr)
                                                     : json(v.event.v_sq);
  jr["w"] = v.event.budget_clause == BudgetClause::none ? json(nullptr)
                                                        : json(v.event.w);
  jr["n"] = n_steps;
  jr["trials"] = v.estimate.trials;
  jr["hits"] = v.estimate.hits;
  jr["p_hat"] = v.estimate.p_hat;
  jr["ci_low"] = v.estimate.ci_low;
  jr["ci_high"] = v.estimate.ci_high;
  jr["bound"] = v.bound.value;
  jr["extra_term"] = v.extra_term;
  jr["verdict"] = v.passed ? "pass" : "fail";
  return jr;
}

std::vector<std::string> verdict_row_csv(
    const montecarlo::VerificationVerdict& v, std::int64_t n_steps) {
  return {std::string(family_name(v.family)),
          v.process,
          event_kind_name(v.event.kind),
          fmt(v.event.x),
          v.event.var_clause == VarClause::none ? "" : fmt(v.event.v_sq),
          v.event.budget_clause == BudgetClause::none ? "" : fmt(v.event.w),
          std::to_string(n_steps),
          std::to_string(v.estimate.trials),
          std::to_string(v.estimate.hits),
          fmt(v.estimate.p_hat),
          fmt(v.estimate.ci_low),
          fmt(v.estimate.ci_high),
          fmt(v.bound.value),
          fmt(v.extra_term),
          v.passed ? "pass" : "fail"};
}

const std::vector<std::string> kVerdictHeader = {
    "family", "process", "event_kind", "x",      "v_sq",
    "w",      "n",       "trials",     "hits",   "p_hat",
    "ci_low", "ci_high", "bound",      "extra_term", "verdict"};

int run_verify(const VerifyCmd& fl, std::ostream& out) {
  const Cfg cfg = Cfg::load(fl.common.config);
  json rc;
  const ProcessSpec spec = build_process(fl.process, cfg, rc);
  const std::string family_s = pick_req(fl.family, cfg, "family");
  const auto family = family_from_name(family_s);
  if (!family)
    throw configuration_error("unknown bound family: " + family_s);
  rc["family"] = family_s;

  const std::string event_s =
      pick(fl.event, cfg, "event", std::string("exists"));
  const auto kind = event_kind_from_name(event_s);
  if (!kind) throw configuration_error("unknown event kind: " + event_s);
  rc["event"] = event_s;

  const auto event_vsq = pick_opt(fl.event_vsq, cfg, "event_vsq");
  const auto event_w = pick_opt(fl.event_w, cfg, "event_w");
  if (event_vsq) rc["event_vsq"] = *event_vsq;
  if (event_w) rc["event_w"] = *event_w;

  montecarlo::EstimateOptions opt = resolve_trials(fl.trial, cfg, rc, 100000);
  opt.diff_threshold = pick_opt(fl.diff_threshold, cfg, "diff_threshold");
  if (opt.diff_threshold) rc["diff_threshold"] = *opt.diff_threshold;

  const std::vector<double> xs = resolve_xs(fl.x, fl.x_grid, cfg, rc);
  const std::string format = resolve_format(fl.common.format, cfg, rc);
  const auto output = resolve_output(fl.common.output, cfg, rc);
  cfg.finish();

  const std::int64_t n_steps = nominal_steps(spec);
  json jrows = json::array();
  std::vector<std::vector<std::string>> rows;
  bool all_passed = true;
  for (double x : xs) {
    const TailEvent e =
        derive_event(*family, spec, *kind, x, event_vsq, event_w);
    const montecarlo::VerificationVerdict v =
        montecarlo::verify_bound(*family, spec, e, opt);
    all_passed = all_passed && v.passed;
    jrows.push_back(verdict_row_json(v, n_steps));
    rows.push_back(verdict_row_csv(v, n_steps));
  }

  std::string content;
  if (format == "json") {
    content = render_json("verify", rc,
                          json{{"rows", jrows}, {"all_passed", all_passed}});
  } else {
    content = csv_preamble("verify", rc) + csv_table(kVerdictHeader, rows);
  }
  deliver(content, output, out);
  return all_passed ? 0 : 2;
}

// ----- estimate --------------------------------------------------------------------

struct EstimateCmd {
  CommonFlags common;  // format fixed to json
  std::optional<std::string> estimator, input, envelope;
  std::optional<double> sigma, eps1, eps2, eps, alpha, c, vsq, m;
  std::optional<double> x;
  std::vector<double> x_grid;
  bool unconditional = false;
  std::optional<std::string> offspring;
  std::optional<double> offspring_mean;
  std::optional<std::int64_t> generations;
  TrialFlags trial;
};

json envelope_row(double x, const BoundResult& r) {
  json jr;
  jr["x"] = x;
  jr["family"] = std::string(family_name(r.family));
  jr["value"] = r.value;
  jr["log_value"] = r.log_value;
  jr["lambda"] = r.lambda;
  return jr;
}

int run_estimate(const EstimateCmd& fl, std::ostream& out) {
  namespace est = tailbound::estimators;
  const Cfg cfg = Cfg::load(fl.common.config);
  json rc;
  const std::string which = pick_req(fl.estimator, cfg, "estimator");
  rc["estimator"] = which;
  const std::vector<double> xs = resolve_xs(fl.x, fl.x_grid, cfg, rc);
  json body;

  if (which == "regression") {
    const std::string input = pick_req(fl.input, cfg, "input");
    const double sigma = pick(fl.sigma, cfg, "sigma", 1.0);
    rc["input"] = input;
    rc["sigma"] = sigma;
    const est::RegressionData data = est::read_regression_csv(input, sigma);
    const est::LinearFit fit = est::fit_linear(data);
    body["fit"] = {{"theta_hat", fit.theta_hat},
                   {"norm_sq", fit.norm_sq},
                   {"n", fit.n}};

    est::EnvelopeSpec spec;
    const std::string env =
        pick(fl.envelope, cfg, "envelope", std::string("bernstein"));
    rc["envelope"] = env;
    if (env == "bernstein") {
      spec.kind = est::EnvelopeSpec::Kind::bernstein;
      spec.eps1 = pick(fl.eps1, cfg, "eps1", 1.0);
      spec.eps2 = pick(fl.eps2, cfg, "eps2", 1.0);
      rc["eps1"] = spec.eps1;
      rc["eps2"] = spec.eps2;
    } else if (env == "bounded") {
      spec.kind = est::EnvelopeSpec::Kind::bounded_above;
      spec.eps = pick(fl.eps, cfg, "eps", 1.0);
      rc["eps"] = spec.eps;
    } else if (env == "alpha") {
      spec.kind = est::EnvelopeSpec::Kind::alpha_mgf;
      spec.alpha = pick(fl.alpha, cfg, "alpha", 2.0);
      spec.c = pick(fl.c, cfg, "c", 0.5);
      rc["alpha"] = spec.alpha;
      rc["c"] = spec.c;
    } else {
      throw configuration_error(
          "regression envelope must be bernstein, bounded, or alpha");
    }
    json jrows = json::array();
    for (double x : xs)
      jrows.push_back(envelope_row(x, est::regression_envelope(spec, data, x)));
    body["envelope_rows"] = jrows;
  } else if (which == "ar1") {
    const std::string input = pick_req(fl.input, cfg, "input");
    rc["input"] = input;
    const std::vector<double> series = est::read_ar1_csv(input);
    const est::Ar1Fit fit = est::fit_ar1(series);
    body["fit"] = {{"theta_hat", fit.theta_hat},
                   {"sum_sq", fit.sum_sq},
                   {"n", fit.n}};
    const std::string env =
        pick(fl.envelope, cfg, "envelope", std::string("bounded"));
    rc["envelope"] = env;
    json jrows = json::array();
    if (env == "bounded") {
      const double eps = pick(fl.eps, cfg, "eps", 1.0);
      const double sigma = pick(fl.sigma, cfg, "sigma", 1.0);
      const double vsq = pick_req(fl.vsq, cfg, "vsq");
      rc["eps"] = eps;
      rc["sigma"] = sigma;
      rc["vsq"] = vsq;
      for (double x : xs) {
        const est::Ar1Envelope envl =
            est::ar1_envelope(eps, sigma, fit.sum_sq, x, vsq);
        if (!body.contains("l_n")) body["l_n"] = envl.l_n;
        jrows.push_back(envelope_row(x, envl.bound));
      }
    } else if (env == "alpha") {
      const double alpha = pick(fl.alpha, cfg, "alpha", 2.0);
      const double c = pick(fl.c, cfg, "c", 0.5);
      rc["alpha"] = alpha;
      rc["c"] = c;
      const std::span<const double> history(series.data(),
                                            series.size() - 1);
      for (double x : xs)
        jrows.push_back(
            envelope_row(x, est::ar1_envelope_alpha(alpha, c, history, x)));
    } else {
      throw configuration_error("ar1 envelope must be bounded or alpha");
    }
    body["envelope_rows"] = jrows;
  } else if (which == "branching") {
    const std::string env =
        pick(fl.envelope, cfg, "envelope", std::string("two-sided"));
    rc["envelope"] = env;
    est::BranchingEnvelope kind;
    if (env == "two-sided")
      kind = est::BranchingEnvelope::bernstein_two_sided;
    else if (env == "lower")
      kind = est::BranchingEnvelope::lower_one_sided;
    else
      throw configuration_error(
          "branching envelope must be two-sided or lower");

    const bool uncond = fl.unconditional || pick(std::optional<bool>{}, cfg,
                                                 "unconditional", false);
    rc["unconditional"] = uncond;
    if (uncond) {
      OffspringSpec off;
      const std::string okind =
          pick(fl.offspring, cfg, "offspring", std::string("poisson"));
      rc["offspring"] = okind;
      if (okind == "poisson")
        off.kind = OffspringSpec::Kind::poisson;
      else if (okind == "deterministic")
        off.kind = OffspringSpec::Kind::deterministic;
      else
        throw configuration_error("unknown offspring kind: " + okind);
      off.mean = pick(fl.offspring_mean, cfg, "offspring_mean", off.mean);
      rc["offspring_mean"] = off.mean;
      const std::int64_t generations =
          pick(fl.generations, cfg, "generations", std::int64_t{1});
      rc["generations"] = generations;
      const double eps = pick(fl.eps, cfg, "eps", 1.0);
      rc["eps"] = eps;
      const std::uint64_t trials =
          pick(fl.trial.trials, cfg, "trials", std::uint64_t{100000});
      const std::uint64_t seed =
          pick(fl.trial.seed, cfg, "seed", std::uint64_t{1});
      const double confidence =
          pick(fl.trial.confidence, cfg, "confidence", 0.99);
      rc["trials"] = trials;
      rc["seed"] = seed;
      rc["confidence"] = confidence;
      json jrows = json::array();
      for (double x : xs) {
        const est::UnconditionalEstimate u = est::branching_unconditional(
            kind, off, generations, x, eps, trials, seed, confidence);
        json jr;
        jr["x"] = x;
        jr["mean"] = u.mean;
        jr["ci_low"] = u.ci_low;
        jr["ci_high"] = u.ci_high;
        jrows.push_back(jr);
      }
      body["envelope_rows"] = jrows;
    } else {
      const std::string input = pick_req(fl.input, cfg, "input");
      rc["input"] = input;
      const std::vector<std::int64_t> counts = est::read_branching_csv(input);
      est::BranchingObservation obs;
      obs.x_prev = counts[counts.size() - 2];
      obs.x_curr = counts.back();
      obs.sigma = pick(fl.sigma, cfg, "sigma", 1.0);
      obs.eps = pick(fl.eps, cfg, "eps", 1.0);
      rc["sigma"] = obs.sigma;
      rc["eps"] = obs.eps;
      const double m_hat = est::lotka_nagaev(obs);
      obs.m = pick(fl.m, cfg, "m", m_hat);  // default: plug in the estimate
      rc["m"] = obs.m;
      const double vsq = pick_req(fl.vsq, cfg, "vsq");
      rc["vsq"] = vsq;
      body["fit"] = {{"m_hat", m_hat},
                     {"x_prev", obs.x_prev},
                     {"x_curr", obs.x_curr}};
      json jrows = json::array();
      for (double x : xs) {
        const est::BranchingEnvelopeResult r =
            est::branching_envelope(kind, obs, x, vsq);
        json jr = envelope_row(x, r.envelope);
        if (r.relaxation) jr["relaxation"] = r.relaxation->value;
        jrows.push_back(jr);
        if (r.m_constant && !body.contains("m_constant"))
          body["m_constant"] = *r.m_constant;
      }
      body["envelope_rows"] = jrows;
    }
  } else {
    throw configuration_error(
        "estimator must be regression, ar1, or branching");
  }

  const auto output = resolve_output(fl.common.output, cfg, rc);
  cfg.finish();
  deliver(render_json("estimate", rc, body), output, out);
  return 0;
}

// ----- sharpness -------------------------------------------------------------------

struct SharpnessCmd {
  CommonFlags common;
  TrialFlags trial;
  std::optional<std::int64_t> n;
  std::optional<double> y, vsq, window_low, window_high;
  std::optional<double> x;
  std::vector<double> x_grid;
};

int run_sharpness(const SharpnessCmd& fl, std::ostream& out) {
  const Cfg cfg = Cfg::load(fl.common.config);
  json rc;
  ThreePoint tp;
  tp.n = pick(fl.n, cfg, "n", std::int64_t{20});
  tp.y = pick(fl.y, cfg, "y", 1.0);
  tp.v_sq = pick(fl.vsq, cfg, "vsq", 10.0);
  rc["n"] = tp.n;
  rc["y"] = tp.y;
  rc["vsq"] = tp.v_sq;
  const double window_low = pick(fl.window_low, cfg, "window_low", 0.8);
  const double window_high = pick(fl.window_high, cfg, "window_high", 1.0);
  rc["window_low"] = window_low;
  rc["window_high"] = window_high;
  montecarlo::EstimateOptions opt =
      resolve_trials(fl.trial, cfg, rc, 1000000);
  const std::vector<double> xs = resolve_xs(fl.x, fl.x_grid, cfg, rc);
  const std::string format = resolve_format(fl.common.format, cfg, rc);
  const auto output = resolve_output(fl.common.output, cfg, rc);
  cfg.finish();

  const ProcessSpec spec = tp;
  validate(spec);
  json jrows = json::array();
  std::vector<std::vector<std::string>> rows;
  for (double x : xs) {
    TailEvent e;
    e.kind = EventKind::exists_k;
    e.x = x;
    e.var_clause = VarClause::quadratic_char;
    e.v_sq = tp.v_sq;
    const montecarlo::VerificationVerdict v = montecarlo::verify_bound(
        BoundFamily::fuk_nagaev_tight, spec, e, opt);
    const double exact = exact_chernoff_three_point(x, tp.y, tp.v_sq, tp.n);
    std::optional<double> ratio;
    if (v.estimate.p_hat > 0.0 && v.estimate.p_hat < 1.0)
      ratio = v.bound.log_value / std::log(v.estimate.p_hat);
    const bool in_window =
        ratio && *ratio >= window_low && *ratio <= window_high;
    json jr;
    jr["x"] = x;
    jr["trials"] = v.estimate.trials;
    jr["hits"] = v.estimate.hits;
    jr["p_hat"] = v.estimate.p_hat;
    jr["ci_low"] = v.estimate.ci_low;
    jr["ci_high"] = v.estimate.ci_high;
    jr["bound"] = v.bound.value;
    jr["exact_chernoff"] = exact;
    jr["log_ratio"] = jcell(ratio);
    jr["in_window"] = in_window;
    jrows.push_back(jr);
    rows.push_back({fmt(x), std::to_string(v.estimate.trials),
                    std::to_string(v.estimate.hits), fmt(v.estimate.p_hat),
                    fmt(v.estimate.ci_low), fmt(v.estimate.ci_high),
                    fmt(v.bound.value), fmt(exact), cell(ratio),
                    in_window ? "true" : "false"});
  }

  std::string content;
  if (format == "json") {
    content = render_json("sharpness", rc, json{{"rows", jrows}});
  } else {
    content = csv_preamble("sharpness", rc) +
              csv_table({"x", "trials", "hits", "p_hat", "ci_low", "ci_high",
                         "bound", "exact_chernoff", "log_ratio", "in_window"},
                        rows);
  }
  deliver(content, output, out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    CLI::App app{
        "tailbound: closed-form martingale tail bounds with Monte Carlo "
        "verification and estimator confidence envelopes"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    BoundCmd bound_fl;
    CLI::App* bound_cmd = app.add_subcommand(
        "bound", "evaluate a closed-form tail bound on a parameter grid");
    bound_cmd->add_option("family", bound_fl.family,
                          "bound family (e.g. freedman-b2, bennett-b1n, "
                          "fuk-nagaev-tight, subgaussian, weighted-alpha)");
    bound_cmd->add_option("--x", bound_fl.x, "deviation threshold");
    bound_cmd->add_option("--x-grid", bound_fl.x_grid,
                          "comma-separated thresholds (one row per value)")
        ->delimiter(',');
    bound_cmd->add_option("--v", bound_fl.v, "variance scale (standard-"
                                             "deviation units)");
    bound_cmd->add_option("--v-grid", bound_fl.v_grid,
                          "comma-separated variance scales")
        ->delimiter(',');
    bound_cmd->add_option("--epsilon", bound_fl.epsilon,
                          "Bernstein / upper-step scale");
    bound_cmd->add_option("--w", bound_fl.w, "third-moment budget");
    bound_cmd->add_option("--y", bound_fl.y, "truncation level");
    bound_cmd->add_option("--alpha", bound_fl.alpha,
                          "MGF growth exponent, in (1, 2]");
    bound_cmd->add_option("--c", bound_fl.c, "MGF growth constant");
    bound_cmd->add_option("--n", bound_fl.n, "number of steps");
    add_common(bound_cmd, bound_fl.common);

    SimulateCmd sim_fl;
    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "sample one process path and export its statistics");
    add_process_flags(sim_cmd, sim_fl.process);
    sim_cmd->add_option("--seed", sim_fl.seed, "master seed");
    sim_cmd->add_option("--trial", sim_fl.trial,
                        "trial index (selects the substream)");
    add_common(sim_cmd, sim_fl.common);

    VerifyCmd verify_fl;
    CLI::App* verify_cmd = app.add_subcommand(
        "verify",
        "estimate a tail event by Monte Carlo and compare it to a bound");
    add_process_flags(verify_cmd, verify_fl.process);
    verify_cmd->add_option("--family", verify_fl.family, "bound family");
    verify_cmd->add_option("--x", verify_fl.x, "deviation threshold");
    verify_cmd->add_option("--x-grid", verify_fl.x_grid,
                           "comma-separated thresholds (one verdict per "
                           "value)")
        ->delimiter(',');
    verify_cmd->add_option("--event", verify_fl.event,
                           "event kind: exists | max-endpoint | "
                           "self-normalized | negated (default exists)");
    verify_cmd->add_option("--event-vsq", verify_fl.event_vsq,
                           "variance budget of the event clause (defaults "
                           "to the process's deterministic total)");
    verify_cmd->add_option("--event-w", verify_fl.event_w,
                           "moment budget of the event clause");
    verify_cmd->add_option("--diff-threshold", verify_fl.diff_threshold,
                           "truncation level whose exceedances are counted "
                           "(fuk-nagaev extra term)");
    add_trial_flags(verify_cmd, verify_fl.trial);
    add_common(verify_cmd, verify_fl.common);

    EstimateCmd est_fl;
    CLI::App* est_cmd = app.add_subcommand(
        "estimate",
        "fit an estimator from CSV data and report its confidence envelope");
    est_cmd->add_option("--estimator", est_fl.estimator,
                        "estimator: regression | ar1 | branching");
    est_cmd->add_option("--input", est_fl.input, "input CSV path");
    est_cmd->add_option("--envelope", est_fl.envelope,
                        "regression: bernstein | bounded | alpha; ar1: "
                        "bounded | alpha; branching: two-sided | lower");
    est_cmd->add_option("--sigma", est_fl.sigma,
                        "noise / offspring standard deviation");
    est_cmd->add_option("--eps1", est_fl.eps1,
                        "design regularity scale (1 is always valid)");
    est_cmd->add_option("--eps2", est_fl.eps2, "noise Bernstein scale");
    est_cmd->add_option("--eps", est_fl.eps,
                        "noise bound / offspring Bernstein scale");
    est_cmd->add_option("--alpha", est_fl.alpha, "MGF growth exponent");
    est_cmd->add_option("--c", est_fl.c, "MGF growth constant");
    est_cmd->add_option("--vsq", est_fl.vsq, "variance budget");
    est_cmd->add_option("--m", est_fl.m,
                        "offspring mean (default: the fitted estimate)");
    est_cmd->add_option("--x", est_fl.x, "deviation threshold");
    est_cmd->add_option("--x-grid", est_fl.x_grid,
                        "comma-separated thresholds for the envelope curve")
        ->delimiter(',');
    est_cmd->add_flag("--unconditional", est_fl.unconditional,
                      "branching: average the conditional envelope over "
                      "simulated populations");
    est_cmd->add_option("--offspring", est_fl.offspring,
                        "offspring law: poisson | deterministic");
    est_cmd->add_option("--offspring-mean", est_fl.offspring_mean,
                        "offspring mean of the simulated law");
    est_cmd->add_option("--generations", est_fl.generations,
                        "generation index being split");
    est_cmd->add_option("--trials", est_fl.trial.trials,
                        "replications for --unconditional");
    est_cmd->add_option("--seed", est_fl.trial.seed, "master seed");
    est_cmd->add_option("--confidence", est_fl.trial.confidence,
                        "confidence level for the unconditional CI");
    add_common(est_cmd, est_fl.common, /*with_format=*/false);

    SharpnessCmd sharp_fl;
    CLI::App* sharp_cmd = app.add_subcommand(
        "sharpness",
        "compare the tight symmetric bound to the empirical tail of the "
        "three-point process on a threshold grid");
    sharp_cmd->add_option("--n", sharp_fl.n, "path length (default 20)");
    sharp_cmd->add_option("--y", sharp_fl.y, "step magnitude (default 1)");
    sharp_cmd->add_option("--vsq", sharp_fl.vsq,
                          "total conditional variance (default 10)");
    sharp_cmd->add_option("--x", sharp_fl.x, "deviation threshold");
    sharp_cmd->add_option("--x-grid", sharp_fl.x_grid,
                          "comma-separated thresholds")
        ->delimiter(',');
    sharp_cmd->add_option("--window-low", sharp_fl.window_low,
                          "lower edge of the log-ratio window (default 0.8)");
    sharp_cmd->add_option("--window-high", sharp_fl.window_high,
                          "upper edge of the log-ratio window (default 1.0)");
    add_trial_flags(sharp_cmd, sharp_fl.trial);
    add_common(sharp_cmd, sharp_fl.common);

    try {
      std::vector<std::string> rev(args.rbegin(), args.rend());
      app.parse(rev);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e, out, err);
      throw configuration_error(e.what());
    }

    if (app.got_subcommand(bound_cmd)) return run_bound(bound_fl, out);
    if (app.got_subcommand(sim_cmd)) return run_simulate(sim_fl, out);
    if (app.got_subcommand(verify_cmd)) return run_verify(verify_fl, out);
    if (app.got_subcommand(est_cmd)) return run_estimate(est_fl, out);
    if (app.got_subcommand(sharp_cmd)) return run_sharpness(sharp_fl, out);
    throw configuration_error("no subcommand selected");
  } catch (const configuration_error& e) {
    err << "error: CONFIG: " << e.what() << "\n";
    return 1;
  } catch (const consistency_error& e) {
    err << "error: CONSISTENCY: " << e.what() << "\n";
    return 1;
  } catch (const optimization_error& e) {
    err << "error: OPTIMIZE: " << e.what() << "\n";
    return 1;
  } catch (const partial_result_error& e) {
    err << "error: PARTIAL: " << e.what() << "\n";
    return 1;
  } catch (const evaluation_error& e) {
    err << "error: EVAL: " << e.what() << "\n";
    return 1;
  } catch (const domain_error& e) {
    err << "error: DOMAIN: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: INTERNAL: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tailbound::cli
