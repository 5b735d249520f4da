//! lorpe command-line front end: fit, tune, effkernel, simulate, oracle.
//!
//! Exit codes: 0 success, 1 bad flags, 2 unreadable or empty input,
//! 3 estimator error.

#include "lorpe/baselines.hpp"
#include "lorpe/distributions.hpp"
#include "lorpe/error.hpp"
#include "lorpe/lorpe.hpp"
#include "lorpe/simlab.hpp"
#include "lorpe/tuning.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <omp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;

//! Input problems (exit 2).
struct InputError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

//! Flag values that parse but make no sense together (exit 1).
struct FlagError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s)
{
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_real(const std::string& text)
{
  std::string t = trim(text);
  if (t.empty())
    return std::nullopt;
  const char* first = t.data();
  if (*first == '+')
    ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    out.push_back(item);
  return out;
}

//! One real per line; blank lines are skipped.
std::vector<double> read_sample(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  std::vector<double> x;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty())
      continue;
    auto v = parse_real(line);
    if (!v || !std::isfinite(*v))
      throw InputError(path + ":" + std::to_string(lineno) + ": not a finite real number: '" + trim(line) + "'");
    x.push_back(*v);
  }
  if (x.empty())
    throw InputError(path + ": no data");
  return x;
}

lorpe::Support parse_support(const std::string& text, std::span<const double> sample)
{
  lorpe::Support s;
  if (text.empty())
    return s;
  if (text == "data") {
    auto [mn, mx] = std::minmax_element(sample.begin(), sample.end());
    s.lo = *mn;
    s.hi = *mx;
    return s;
  }
  auto parts = split(text, ',');
  if (parts.size() != 2)
    throw FlagError("--support expects lo,hi");
  auto lo = parse_real(parts[0]);
  auto hi = parse_real(parts[1]);
  if (!lo || !hi || !(*lo < *hi))
    throw FlagError("--support expects lo,hi with lo < hi");
  s.lo = *lo;
  s.hi = *hi;
  return s;
}

//! "lo:hi:count" (log-spaced, count >= 2) or a comma list.
std::vector<double> parse_h_grid(const std::string& text)
{
  auto parts = split(text, ':');
  if (parts.size() == 3) {
    auto lo = parse_real(parts[0]);
    auto hi = parse_real(parts[1]);
    auto count = parse_real(parts[2]);
    if (!lo || !hi || !count || !(*lo > 0.0) || !(*hi > *lo) || *count < 2.0 || *count != std::floor(*count))
      throw FlagError("--h-grid expects lo:hi:count with 0 < lo < hi, count >= 2");
    auto c = static_cast<std::size_t>(*count);
    std::vector<double> g(c);
    for (std::size_t i = 0; i < c; ++i)
      g[i] = *lo * std::pow(*hi / *lo, static_cast<double>(i) / static_cast<double>(c - 1));
    return g;
  }
  std::vector<double> g;
  for (const auto& p : split(text, ',')) {
    auto v = parse_real(p);
    if (!v || !(*v > 0.0))
      throw FlagError("--h-grid values must be positive reals");
    g.push_back(*v);
  }
  if (g.empty())
    throw FlagError("--h-grid is empty");
  return g;
}

//! "lo:hi:step" or a comma list.
std::vector<double> parse_m_grid(const std::string& text)
{
  auto parts = split(text, ':');
  if (parts.size() == 3) {
    auto lo = parse_real(parts[0]);
    auto hi = parse_real(parts[1]);
    auto step = parse_real(parts[2]);
    if (!lo || !hi || !step || *lo < 0.0 || *hi < *lo || !(*step > 0.0))
      throw FlagError("--m-grid expects lo:hi:step with 0 <= lo <= hi, step > 0");
    std::vector<double> g;
    for (std::size_t i = 0;; ++i) {
      double v = *lo + static_cast<double>(i) * *step;
      if (v > *hi + 1e-9 * *step)
        break;
      g.push_back(v);
    }
    return g;
  }
  std::vector<double> g;
  for (const auto& p : split(text, ',')) {
    auto v = parse_real(p);
    if (!v || *v < 0.0)
      throw FlagError("--m-grid values must be non-negative reals");
    g.push_back(*v);
  }
  if (g.empty())
    throw FlagError("--m-grid is empty");
  return g;
}

std::string fmt(double v, const char* spec = "%.10g")
{
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

//! Column-ordered records written as CSV (header row) or a JSON array.
struct Table
{
  std::vector<std::string> columns;
  std::vector<json> rows;

  void write(std::ostream& os, const std::string& format) const
  {
    if (format == "json") {
      json arr = json::array();
      for (const auto& r : rows)
        arr.push_back(r);
      os << arr.dump(2) << '\n';
      return;
    }
    for (std::size_t c = 0; c < columns.size(); ++c)
      os << (c ? "," : "") << columns[c];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < columns.size(); ++c) {
        const json& v = r.at(columns[c]);
        os << (c ? "," : "");
        if (v.is_string())
          os << v.get<std::string>();
        else if (v.is_number_float())
          os << fmt(v.get<double>());
        else if (v.is_null())
          os << "nan";
        else
          os << v.dump();
      }
      os << '\n';
    }
  }
};

json number(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

struct Common
{
  std::string kernel = "quadweight";
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string boundary = "clip";
};

void apply_threads(const Common& c)
{
  int t = c.threads;
  if (t <= 0)
    if (const char* env = std::getenv("LORPE_THREADS"))
      t = std::atoi(env);
  if (t > 0)
    omp_set_num_threads(t);
}

lorpe::BoundaryMode boundary_mode(const std::string& name)
{
  return name == "mirror" ? lorpe::BoundaryMode::kernel_mirror : lorpe::BoundaryMode::clip_polys;
}

lorpe::DegreeRule degree_rule(const std::string& name)
{
  return name == "order" ? lorpe::DegreeRule::kernel_order : lorpe::DegreeRule::case_table;
}

template<class F>
void with_output(const Common& c, F&& body)
{
  if (c.output.empty() || c.output == "-") {
    body(std::cout);
    return;
  }
  std::ofstream os(c.output);
  if (!os)
    throw FlagError("cannot write '" + c.output + "'");
  body(os);
}

void add_common(CLI::App* cmd, Common& c)
{
  cmd->add_option("--kernel", c.kernel, "gauss | epan | biweight | triweight | quadweight | uniform")
    ->check(CLI::IsMember({ "gauss", "epan", "biweight", "triweight", "quadweight", "uniform" }));
  cmd->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({ "csv", "json" }));
  cmd->add_option("--output,-o", c.output, "output file (default stdout)");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--threads", c.threads, "worker threads (default: LORPE_THREADS or all cores)")
    ->check(CLI::NonNegativeNumber);
  cmd->add_option("--boundary", c.boundary, "clip | mirror")->check(CLI::IsMember({ "clip", "mirror" }));
}

struct TuneFlags
{
  std::string input;
  std::string support;
  std::string method = "rlcv";
  std::string estimator = "lorpe";
  std::optional<double> h;
  std::optional<double> M;
  double alpha = 0.5;
  std::string h_grid;
  std::string m_grid;
  bool exact_fitpoint = false;
  bool cv_raw = false;
  std::string degree_rule = "table";
  std::size_t grid_size = 1024;
};

void add_tune_flags(CLI::App* cmd, TuneFlags& f)
{
  cmd->add_option("input,--input,-i", f.input, "data file, one real per line")->required();
  cmd->add_option("--support", f.support, "lo,hi (inf allowed) or 'data' for the sample range");
  cmd->add_option("--method", f.method, "fixed | plugin | lscv | rlcv")
    ->check(CLI::IsMember({ "fixed", "plugin", "lscv", "rlcv" }));
  cmd->add_option("--h", f.h, "bandwidth for --method fixed")->check(CLI::PositiveNumber);
  cmd->add_option("--M", f.M, "degree for --method fixed")->check(CLI::NonNegativeNumber);
  cmd->add_option("--alpha", f.alpha, "RLCV regularization in (0, 1]")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--h-grid", f.h_grid, "lo:hi:count (log-spaced) or comma list");
  cmd->add_option("--m-grid", f.m_grid, "lo:hi:step or comma list");
  cmd->add_flag("--cv-exact-fitpoint", f.exact_fitpoint, "leave-one-out expansions at the data points");
  cmd->add_flag("--cv-raw", f.cv_raw, "score unnormalized estimates in CV");
  cmd->add_option("--degree-rule", f.degree_rule, "plug-in degree rule: table | order")
    ->check(CLI::IsMember({ "table", "order" }));
  cmd->add_option("--grid-size", f.grid_size, "estimation grid points")->check(CLI::Range(2, 1 << 24));
}

struct Tuned
{
  double h = 0.0;
  double M = 0.0;
  std::string method;
  std::optional<lorpe::CvResult> cv;
  std::optional<lorpe::PluginResult> plugin;
};

Tuned tune_lorpe(const TuneFlags& f,
                 const lorpe::LorpeConfig& base,
                 std::span<const double> sample)
{
  Tuned t;
  t.method = f.method;
  if (f.method == "fixed") {
    if (!f.h)
      throw FlagError("--method fixed needs --h");
    t.h = *f.h;
    t.M = f.M.value_or(0.0);
    return t;
  }
  auto p = lorpe::plug_in(sample, base.kernel, degree_rule(f.degree_rule));
  if (f.method == "plugin") {
    t.h = p.h_hat;
    t.M = p.M_hat;
    t.plugin = p;
    return t;
  }
  auto hg = f.h_grid.empty() ? lorpe::default_h_grid(p.h_hat) : parse_h_grid(f.h_grid);
  auto mg = f.m_grid.empty() ? lorpe::default_M_grid() : parse_m_grid(f.m_grid);
  auto crit = f.method == "lscv" ? lorpe::CvCriterion::lscv() : lorpe::CvCriterion::rlcv(f.alpha);
  lorpe::CvOptions co;
  co.fit_point = f.exact_fitpoint ? lorpe::FitPoint::exact : lorpe::FitPoint::nearest_grid;
  co.scale = f.cv_raw ? lorpe::CvScale::raw : lorpe::CvScale::renormalized;
  co.grid_size = f.grid_size;
  auto cv = lorpe::select_by_cv(sample, base, hg, mg, crit, co);
  t.h = cv.best_h;
  t.M = cv.best_M;
  t.cv = std::move(cv);
  return t;
}

lorpe::LorpeConfig base_config(const Common& c, const lorpe::Support& support)
{
  lorpe::LorpeConfig cfg;
  cfg.kernel = lorpe::KernelSpec::from_name(c.kernel);
  cfg.support = support;
  cfg.boundary_mode = boundary_mode(c.boundary);
  return cfg;
}

int cmd_fit(const Common& c, const TuneFlags& f)
{
  auto sample = read_sample(f.input);
  auto support = parse_support(f.support, sample);
  auto cfg = base_config(c, support);

  lorpe::Fit fit;
  std::string method = f.method;
  if (f.estimator == "lorpe") {
    Tuned t = tune_lorpe(f, cfg, sample);
    cfg.h = t.h;
    cfg.M = t.M;
    auto grid = lorpe::default_grid(sample, support, cfg.h, cfg.kernel, f.grid_size);
    fit = lorpe::Fit{ lorpe::estimate_on_grid(sample, cfg, grid), cfg.h, cfg.M };
  } else if (f.estimator == "osde") {
    lorpe::EstimatorSpec spec;
    spec.kind = lorpe::EstimatorKind::osde;
    fit = lorpe::run_estimator(spec, sample, support);
    method = "threshold";
  } else {
    lorpe::EstimatorSpec spec;
    spec.kind = lorpe::estimator_kind_from_name(f.estimator);
    spec.kernel = cfg.kernel;
    spec.M = f.M.value_or(0.0);
    spec.grid_size = f.grid_size;
    if (f.h) {
      spec.h = *f.h;
      method = "fixed";
    } else {
      // normal-reference bandwidth for the kernel's order
      int r = spec.M == std::floor(spec.M) ? static_cast<int>(spec.M) + (static_cast<int>(spec.M) % 2 ? 1 : 2) : 0;
      if (r == 0)
        throw FlagError("--estimator " + f.estimator + " needs --h for fractional --M");
      double sd = lorpe::sample_sd(sample);
      if (!(sd > 0.0))
        throw lorpe::Error(lorpe::ErrorCode::degenerate_sample, "sample standard deviation is zero");
      spec.h = lorpe::normal_reference_bandwidth(r, sd, sample.size(), lorpe::effective_kernel_moments(cfg.kernel, r));
      method = "normal_reference";
    }
    fit = lorpe::run_estimator(spec, sample, support);
  }

  std::cerr << "h=" << fmt(fit.h) << " M=" << fmt(fit.M) << " method=" << method << " estimator=" << f.estimator
            << '\n';
  Table t{ { "grid", "value" }, {} };
  for (std::size_t g = 0; g < fit.estimate.grid.size(); ++g)
    t.rows.push_back(json{ { "grid", fit.estimate.grid[g] }, { "value", fit.estimate.value[g] } });
  with_output(c, [&](std::ostream& os) { t.write(os, c.format); });
  return 0;
}

int cmd_tune(const Common& c, const TuneFlags& f, bool surface)
{
  auto sample = read_sample(f.input);
  auto cfg = base_config(c, parse_support(f.support, sample));
  Tuned t = tune_lorpe(f, cfg, sample);
  std::cerr << "h=" << fmt(t.h) << " M=" << fmt(t.M) << " method=" << t.method << '\n';

  Table out;
  if (surface && t.cv) {
    out.columns = { "method", "h", "M", "score" };
    for (std::size_t ih = 0; ih < t.cv->h_grid.size(); ++ih)
      for (std::size_t im = 0; im < t.cv->M_grid.size(); ++im)
        out.rows.push_back(json{ { "method", t.method },
                                 { "h", t.cv->h_grid[ih] },
                                 { "M", t.cv->M_grid[im] },
                                 { "score", number(t.cv->score(ih, im)) } });
  } else {
    out.columns = { "method", "h", "M", "score" };
    double score = t.cv ? t.cv->best_score : std::numeric_limits<double>::quiet_NaN();
    if (t.plugin)
      score = t.plugin->amise_curve.at(t.plugin->r_hat);
    out.rows.push_back(json{ { "method", t.method }, { "h", t.h }, { "M", t.M }, { "score", number(score) } });
  }
  with_output(c, [&](std::ostream& os) { out.write(os, c.format); });
  return 0;
}

int cmd_effkernel(const Common& c, double M, double h, double xfit, const std::string& support_text, std::size_t points)
{
  auto support = parse_support(support_text, {});
  auto cfg = base_config(c, support);
  cfg.h = h;
  cfg.M = M;
  cfg.validate();
  const double a = cfg.kernel.effective_half_width();
  auto u = lorpe::uniform_grid(-a, a, points);
  auto k = lorpe::effective_kernel(cfg, xfit, u);
  Table t{ { "u", "x", "k" }, {} };
  for (std::size_t i = 0; i < u.size(); ++i)
    t.rows.push_back(json{ { "u", u[i] }, { "x", xfit - h * u[i] }, { "k", k[i] } });
  with_output(c, [&](std::ostream& os) { t.write(os, c.format); });
  return 0;
}

void write_rows(const Common& c, std::span<const lorpe::CsvRow> rows)
{
  with_output(c, [&](std::ostream& os) {
    if (c.format == "csv") {
      lorpe::write_csv(os, rows);
      return;
    }
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back(json{ { "distribution", r.distribution },
                          { "n", r.n },
                          { "estimator", r.estimator },
                          { "M", number(r.M) },
                          { "h", number(r.h) },
                          { "alpha", number(r.alpha) },
                          { "reps", r.reps },
                          { "log10_mise", number(r.log10_mise) },
                          { "se", number(r.se) },
                          { "seed", r.seed } });
    os << arr.dump(2) << '\n';
  });
}

struct SimFlags
{
  std::string dist;
  std::size_t n = 100;
  std::size_t reps = 500;
  bool full = false;
  std::string estimator = "lorpe";
  double h = 1.0;
  double M = 0.0;
  double alpha = 0.5;
  bool exact_fitpoint = false;
  bool cv_raw = false;
  std::string degree_rule = "table";
  std::string h_grid;
  std::string m_grid;
};

void add_sim_flags(CLI::App* cmd, SimFlags& f)
{
  cmd->add_option("--dist", f.dist, "beta44 | normal | mix1 | exp1 | truncnorm0 | truncnormm1 | mix2 | trunct<df>")
    ->required();
  cmd->add_option("--n", f.n, "sample size")->check(CLI::PositiveNumber);
  cmd->add_option("--reps", f.reps, "replications (default 500)")->check(CLI::PositiveNumber);
  cmd->add_flag("--full", f.full, "1000 replications");
  cmd->add_option("--alpha", f.alpha, "RLCV regularization in (0, 1]")->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("--cv-exact-fitpoint", f.exact_fitpoint, "leave-one-out expansions at the data points");
  cmd->add_flag("--cv-raw", f.cv_raw, "score unnormalized estimates in CV");
  cmd->add_option("--degree-rule", f.degree_rule, "plug-in degree rule: table | order")
    ->check(CLI::IsMember({ "table", "order" }));
}

lorpe::DistributionSpec dist_from_flag(const std::string& name)
{
  try {
    return lorpe::DistributionSpec::from_name(name);
  } catch (const lorpe::Error& e) {
    throw FlagError(e.what());
  }
}

int cmd_simulate(const Common& c, const SimFlags& f)
{
  auto dist = dist_from_flag(f.dist);
  lorpe::EstimatorSpec spec;
  spec.kind = lorpe::estimator_kind_from_name(f.estimator);
  spec.h = f.h;
  spec.M = f.M;
  spec.alpha = f.alpha;
  spec.kernel = lorpe::KernelSpec::from_name(c.kernel);
  spec.boundary_mode = boundary_mode(c.boundary);
  spec.degree_rule = degree_rule(f.degree_rule);
  spec.fit_point = f.exact_fitpoint ? lorpe::FitPoint::exact : lorpe::FitPoint::nearest_grid;
  spec.cv_scale = f.cv_raw ? lorpe::CvScale::raw : lorpe::CvScale::renormalized;
  auto res = lorpe::mise_study(dist, spec, f.n, f.full ? 1000 : f.reps, c.seed);
  if (res.dropped > 0)
    std::cerr << "dropped " << res.dropped << " failed replications\n";
  lorpe::CsvRow row = lorpe::to_row(res);
  write_rows(c, std::span<const lorpe::CsvRow>(&row, 1));
  return 0;
}

int cmd_oracle(const Common& c, const SimFlags& f)
{
  auto dist = dist_from_flag(f.dist);
  auto kind = lorpe::estimator_kind_from_name(f.estimator);
  auto hg = f.h_grid.empty() ? lorpe::default_oracle_h_grid(dist) : parse_h_grid(f.h_grid);
  auto mg = f.m_grid.empty() ? lorpe::default_oracle_M_grid() : parse_m_grid(f.m_grid);
  lorpe::StudyOptions so;
  so.kernel = lorpe::KernelSpec::from_name(c.kernel);
  so.boundary_mode = boundary_mode(c.boundary);
  auto s = lorpe::oracle_search(dist, f.n, hg, mg, f.full ? 1000 : f.reps, kind, c.seed, so);
  std::cerr << "best M=" << fmt(s.best_M) << " h=" << fmt(s.best_h) << " log10_mise=" << fmt(s.best_log10_mise)
            << '\n';
  auto rows = lorpe::to_rows(s);
  write_rows(c, rows);
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Local orthogonal polynomial expansion density estimation" };
  app.require_subcommand(1);
  // --h is the bandwidth, so help is long-form only
  app.set_help_flag("--help", "print this help and exit");

  Common common;
  TuneFlags fit_flags;
  TuneFlags tune_flags;
  bool tune_surface = false;
  SimFlags sim_flags;
  SimFlags oracle_flags;
  double ek_M = 0.0;
  double ek_h = 1.0;
  double ek_xfit = 0.0;
  std::string ek_support;
  std::size_t ek_points = 401;

  auto* fit = app.add_subcommand("fit", "estimate a density from a data file");
  add_common(fit, common);
  add_tune_flags(fit, fit_flags);
  fit->add_option("--estimator", fit_flags.estimator, "lorpe | kde | kde_mirror | osde")
    ->check(CLI::IsMember({ "lorpe", "kde", "kde_mirror", "osde" }));

  auto* tune = app.add_subcommand("tune", "select (h, M) for a data file");
  add_common(tune, common);
  add_tune_flags(tune, tune_flags);
  tune->add_flag("--surface", tune_surface, "write every CV score instead of the optimum");

  auto* ek = app.add_subcommand("effkernel", "tabulate the effective kernel at a fit point");
  add_common(ek, common);
  ek->add_option("--M", ek_M, "degree")->check(CLI::NonNegativeNumber);
  ek->add_option("--h", ek_h, "bandwidth")->check(CLI::PositiveNumber);
  ek->add_option("--xfit", ek_xfit, "fit point");
  ek->add_option("--support", ek_support, "lo,hi (inf allowed)");
  ek->add_option("--points", ek_points, "table size")->check(CLI::Range(2, 1 << 20));

  auto* sim = app.add_subcommand("simulate", "Monte Carlo MISE of one estimator");
  add_common(sim, common);
  add_sim_flags(sim, sim_flags);
  sim->add_option("--estimator", sim_flags.estimator, "lorpe | kde | kde_mirror | plugin | lscv | rlcv | osde")
    ->check(CLI::IsMember({ "lorpe", "kde", "kde_mirror", "plugin", "lscv", "rlcv", "osde" }));
  sim->add_option("--h", sim_flags.h, "bandwidth for fixed estimators")->check(CLI::PositiveNumber);
  sim->add_option("--M", sim_flags.M, "degree for fixed estimators")->check(CLI::NonNegativeNumber);

  auto* oracle = app.add_subcommand("oracle", "MISE surface over an (h, M) grid");
  add_common(oracle, common);
  add_sim_flags(oracle, oracle_flags);
  oracle->add_option("--estimator", oracle_flags.estimator, "lorpe | kde | kde_mirror")
    ->check(CLI::IsMember({ "lorpe", "kde", "kde_mirror" }));
  oracle->add_option("--h-grid", oracle_flags.h_grid, "lo:hi:count (log-spaced) or comma list");
  oracle->add_option("--m-grid", oracle_flags.m_grid, "lo:hi:step or comma list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    apply_threads(common);
    if (*fit)
      return cmd_fit(common, fit_flags);
    if (*tune)
      return cmd_tune(common, tune_flags, tune_surface);
    if (*ek)
      return cmd_effkernel(common, ek_M, ek_h, ek_xfit, ek_support, ek_points);
    if (*sim)
      return cmd_simulate(common, sim_flags);
    if (*oracle)
      return cmd_oracle(common, oracle_flags);
  } catch (const FlagError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const lorpe::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
