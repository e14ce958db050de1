#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include <nld/nld.hpp>

namespace nld::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Residual of one point: masked points carry no values.
struct PointValues {
  bool masked = false;
  std::vector<double> values; // one per suite, NaN when not applicable
  std::string error;
};

/// Collects per-point values into one suite result.
struct SuiteAccumulator {
  SuiteResult result;
  std::vector<double> values;
  std::size_t masked = 0;

  void add(double v) {
    if (std::isnan(v)) return;
    values.push_back(v);
  }
  void fail(std::string const& what) {
    if (result.error.empty()) result.error = what;
  }
  SuiteResult finish() {
    result.stats = residual_stats(values, masked);
    return result;
  }
};

std::string where(GridPoint const& pt) {
  std::ostringstream os;
  os << "(r = " << pt.r() << ", theta = " << pt.theta() << ")";
  return os.str();
}

SuiteResult fierz_suite(RunConfig const& cfg) {
  SuiteAccumulator acc{{"fierz", true, {}, cfg.identity_tol, {}}, {}, 0};
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> n(0.0, 1.0);
  for (std::size_t k = 0; k < kRandomSpinors; ++k) {
    Spinor psi;
    for (int i = 0; i < 4; ++i) psi[i] = cplx(n(rng), n(rng));
    try {
      acc.add(fierz_defects(bilinears(psi)).max());
    } catch (std::exception const& e) {
      acc.fail(e.what());
    }
  }
  return acc.finish();
}

SuiteResult gamma_suite(RunConfig const& cfg) {
  SuiteAccumulator acc{{"gamma-algebra", true, {}, cfg.identity_tol, {}}, {}, 0};
  ComplexMatrix const& p = chiral_pi();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      ComplexMatrix const ac = anticommutator(gamma_upper(a), gamma_upper(b));
      double v = (ac - 2.0 * eta(a, b) * ComplexMatrix::Identity()).cwiseAbs().maxCoeff();
      ComplexMatrix rhs = ComplexMatrix::Zero();
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          if (int e = levi_civita(a, b, c, d)) rhs += double(e) * p * sigma_upper(c, d);
      v = std::max(v, (cplx(0.0, 2.0) * sigma(a, b) - rhs).cwiseAbs().maxCoeff());
      acc.add(v);
    }
  return acc.finish();
}

/// Identity suites on seeded random points: flatness and transport.
std::vector<SuiteResult> background_suites(RunConfig const& cfg, std::vector<GridPoint> const& pts) {
  ModelSpec const spec = cfg.spec();
  SuiteAccumulator flat{{"flatness", true, {}, cfg.identity_tol, {}}, {}, 0};
  SuiteAccumulator transport{{"transport", true, {}, cfg.identity_tol, {}}, {}, 0};
  for (auto const& pt : pts) {
    flat.add(riemann_at(pt).max_abs());
    try {
      transport.add(transport_residual(pt, angles_at(pt, X_exact(pt.r(), spec))).max());
    } catch (std::exception const& e) {
      transport.fail(where(pt) + ": " + e.what());
    }
  }
  return {flat.finish(), transport.finish()};
}

/// Finite-difference suites on seeded random points: curvature/strength and
/// the polar decomposition of the spinor derivative.
std::vector<SuiteResult> fd_suites(RunConfig const& cfg, std::vector<GridPoint> const& pts) {
  ModelSpec const spec = cfg.spec();
  ModuleLaw const law = cfg.model.law();
  ClosedFormProfile const profile{spec.m, 0.0};
  auto eval = [&](GridPoint const& pt) {
    PointValues pv;
    pv.masked = cfg.mask.masked(pt, spec);
    pv.values = {kNaN, kNaN};
    if (pv.masked) return pv;
    try {
      auto const cr = curvature_residual(
          pt, [&](GridPoint const& q) { return tensorial_connection_at(q, polar_fields(profile, q, spec, law).angles); },
          [&](GridPoint const&) { return momentum_covector(spec); });
      pv.values[0] = cr.max();
      pv.values[1] = polar_decomposition_residual(profile, pt, spec, law);
    } catch (std::exception const& e) {
      pv.error = where(pt) + ": " + e.what();
    }
    return pv;
  };
  auto const res = parallel_map(pts, eval);
  SuiteAccumulator curv{{"curvature-strength", false, {}, cfg.tol, {}}, {}, 0};
  SuiteAccumulator dec{{"decomposition", false, {}, cfg.tol, {}}, {}, 0};
  for (auto const& pv : res) {
    if (pv.masked) {
      ++curv.masked;
      ++dec.masked;
      continue;
    }
    if (!pv.error.empty()) {
      curv.fail(pv.error);
      dec.fail(pv.error);
    }
    curv.add(pv.values[0]);
    dec.add(pv.values[1]);
  }
  return {curv.finish(), dec.finish()};
}

/// Model suites over the configured grid.
std::vector<SuiteResult> grid_suites(RunConfig const& cfg) {
  ModelSpec const spec = cfg.spec();
  ModuleLaw const law = cfg.model.law();
  std::optional<Model> const model = cfg.model.model();
  auto const pts = cfg.grid.points(spec.m);

  enum { kModule, kCovector, kExpanded, kReduced, kStandard, kCount };
  auto eval = [&](GridPoint const& pt) {
    PointValues pv;
    pv.masked = cfg.mask.masked(pt, spec);
    pv.values.assign(kCount, kNaN);
    if (pv.masked) return pv;
    try {
      PolarFields const f = exact_fields(pt, spec, law);
      double const closed = module_for(pt, spec);
      pv.values[kModule] = std::abs(f.phi2 - closed) / closed;
      if (model) {
        pv.values[kCovector] = residual_polar_covector(f, *model, cfg.mask).max();
        pv.values[kExpanded] = residual_expanded(f, *model, cfg.mask).max();
      }
      pv.values[kReduced] = residual_reduced(reduced_fields(f), spec.p, cfg.mask).max();
      pv.values[kStandard] = residual_standard(f, spec.p);
    } catch (std::exception const& e) {
      pv.error = where(pt) + ": " + e.what();
    }
    return pv;
  };
  auto const res = parallel_map(pts, eval);

  std::vector<SuiteAccumulator> acc{
      {{"module-closed-form", true, {}, cfg.identity_tol, {}}, {}, 0},
      {{"covector-residuals", false, {}, cfg.tol, {}}, {}, 0},
      {{"expanded-residuals", false, {}, cfg.tol, {}}, {}, 0},
      {{"reduced-residuals", false, {}, cfg.tol, {}}, {}, 0},
      {{"standard-residuals", false, {}, cfg.tol, {}}, {}, 0}};
  for (auto const& pv : res) {
    for (std::size_t k = 0; k < acc.size(); ++k) {
      if (pv.masked) {
        ++acc[k].masked;
        continue;
      }
      if (!pv.error.empty()) acc[k].fail(pv.error);
      acc[k].add(pv.values[k]);
    }
  }
  std::vector<SuiteResult> out;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (!model && (k == kCovector || k == kExpanded)) continue; // written out only for the two models
    out.push_back(acc[k].finish());
  }
  return out;
}

void write_number(std::ostream& os, double v) {
  if (std::isnan(v))
    os << "nan";
  else if (std::isinf(v))
    os << (v > 0 ? "inf" : "-inf");
  else
    os << v;
}

std::unique_ptr<std::ostream> open_output(std::string const& path) {
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*f) throw std::runtime_error("cannot open output file: " + path);
  return f;
}

} // namespace

bool VerifyReport::pass() const {
  return std::all_of(suites.begin(), suites.end(), [](SuiteResult const& s) { return s.pass(); });
}

std::vector<std::string> VerifyReport::failing() const {
  std::vector<std::string> out;
  for (auto const& s : suites)
    if (!s.pass()) out.push_back(s.name);
  return out;
}

SuiteResult const& VerifyReport::suite(std::string const& name) const {
  for (auto const& s : suites)
    if (s.name == name) return s;
  throw std::out_of_range("no suite named " + name);
}

VerifyReport run_verify(RunConfig const& cfg) {
  cfg.validate();
  double const m = cfg.mass;
  auto const pts = random_points(kRandomPoints, cfg.seed, 0.05 / m, 20.0 / m, 1e-2);
  VerifyReport rep;
  rep.suites.push_back(gamma_suite(cfg));
  rep.suites.push_back(fierz_suite(cfg));
  for (auto& s : background_suites(cfg, pts)) rep.suites.push_back(std::move(s));
  for (auto& s : fd_suites(cfg, pts)) rep.suites.push_back(std::move(s));
  for (auto& s : grid_suites(cfg)) rep.suites.push_back(std::move(s));
  return rep;
}

ordered_json to_json(VerifyReport const& report, RunConfig const& cfg) {
  ordered_json j;
  j["schema"] = "1";
  j["command"] = "verify";
  j["config"] = describe(cfg);
  j["suites"] = ordered_json::array();
  for (auto const& s : report.suites) {
    ordered_json js;
    js["name"] = s.name;
    js["kind"] = s.identity ? "identity" : "model";
    js["count"] = s.stats.count;
    js["masked"] = s.stats.masked;
    js["max"] = s.stats.max;
    js["mean"] = s.stats.mean;
    js["q50"] = s.stats.q50;
    js["q90"] = s.stats.q90;
    js["q99"] = s.stats.q99;
    js["tolerance"] = s.tolerance;
    js["pass"] = s.pass();
    if (!s.error.empty()) js["error"] = s.error;
    j["suites"].push_back(js);
  }
  j["failing"] = report.failing();
  j["pass"] = report.pass();
  return j;
}

void write_verify_csv(std::ostream& os, VerifyReport const& report) {
  os << "suite,kind,count,masked,max,mean,tolerance,pass\n" << std::setprecision(17);
  for (auto const& s : report.suites) {
    os << s.name << ',' << (s.identity ? "identity" : "model") << ',' << s.stats.count << ',' << s.stats.masked << ',';
    write_number(os, s.stats.max);
    os << ',';
    write_number(os, s.stats.mean);
    os << ',' << s.tolerance << ',' << (s.pass() ? "true" : "false") << '\n';
  }
}

namespace {

struct FieldRow {
  double r, theta, phi2, sin_beta, cos_beta, X;
  bool masked;
};

std::vector<FieldRow> fieldmap_rows(RunConfig const& cfg) {
  cfg.validate();
  ModelSpec const spec = cfg.spec();
  std::vector<FieldRow> rows;
  for (auto const& pt : cfg.grid.points(spec.m)) {
    FieldRow row{pt.r(), pt.theta(), kNaN, kNaN, kNaN, X_exact(pt.r(), spec), cfg.mask.masked(pt, spec)};
    try {
      row.phi2 = module_for(pt, spec);
    } catch (SingularPoint const&) {
      row.phi2 = std::numeric_limits<double>::infinity();
    }
    double const c = cos_theta(pt.theta());
    double const d2 = row.X * row.X + c * c;
    if (d2 > 0.0) {
      double const d = std::sqrt(d2);
      row.sin_beta = -c / d;
      row.cos_beta = row.X / d;
    }
    rows.push_back(row);
  }
  return rows;
}

} // namespace

void write_fieldmap_csv(std::ostream& os, RunConfig const& cfg) {
  auto const rows = fieldmap_rows(cfg);
  os << "r,theta,phi2,sin_beta,cos_beta,X,masked\n" << std::setprecision(17);
  for (auto const& row : rows) {
    for (double v : {row.r, row.theta, row.phi2, row.sin_beta, row.cos_beta, row.X}) {
      write_number(os, v);
      os << ',';
    }
    os << (row.masked ? "true" : "false") << '\n';
  }
}

ordered_json fieldmap_json(RunConfig const& cfg) {
  ordered_json j;
  j["schema"] = "1";
  j["command"] = "fieldmap";
  j["config"] = describe(cfg);
  j["columns"] = {"r", "theta", "phi2", "sin_beta", "cos_beta", "X", "masked"};
  j["rows"] = ordered_json::array();
  auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  for (auto const& row : fieldmap_rows(cfg))
    j["rows"].push_back({num(row.r), num(row.theta), num(row.phi2), num(row.sin_beta), num(row.cos_beta),
                         num(row.X), row.masked});
  return j;
}

ordered_json run_scan(RunConfig const& cfg, int n_E, int n_l) {
  ScanGrid g;
  g.n_E = n_E;
  g.n_l = n_l;
  ScanSurface const s = quantum_number_scan(cfg.mass, g);
  ordered_json j;
  j["n_E"] = n_E;
  j["n_l"] = n_l;
  j["E_range"] = {g.E_min, g.E_max};
  j["l_range"] = {g.l_min, g.l_max};
  j["cells"] = ordered_json::array();
  for (auto const& c : s.cells)
    j["cells"].push_back({{"E", c.E}, {"l", c.l}, {"residual", c.residual}, {"separation", c.separation},
                          {"reduced", c.reduced}});
  auto const zeros = s.zero_cells(1e-10);
  j["zero_cells"] = ordered_json::array();
  for (auto const& c : zeros) j["zero_cells"].push_back({{"E", c.E}, {"l", c.l}});
  j["unique_zero"] = zeros.size() == 1;
  return j;
}

ordered_json run_ode(RunConfig const& cfg, std::ostream* csv) {
  cfg.validate();
  if (cfg.model_set && cfg.model.family != ModelChoice::Family::Soler)
    throw std::invalid_argument("ode: the radial system belongs to the soler model (use --model soler)");
  ModelSpec const spec = ModelSpec::soler(cfg.mass);
  double const r0 = cfg.ode.r_start / spec.m;
  double const r1 = cfg.ode.r_end / spec.m;
  // checked before touching the exact data, which is singular on the split radius
  if (!(r0 > 0.0) || !(r1 > 0.0)) throw std::invalid_argument("ode: radii must be positive");
  detail::check_split_rule(r0, r1, spec);

  OdeState init = exact_state(r0, spec);
  bool const on_branch = !cfg.ode.x0 && !cfg.ode.g0;
  if (cfg.ode.x0) init.X = *cfg.ode.x0;
  if (cfg.ode.g0) init.G = *cfg.ode.g0;
  IntegratorConfig ic;
  ic.rtol = cfg.ode.rtol;
  ic.atol = cfg.ode.atol;

  ordered_json j;
  j["schema"] = "1";
  j["command"] = "ode";
  j["mass"] = spec.m;
  j["r_start"] = r0;
  j["r_end"] = r1;
  j["initial"] = {{"X", init.X}, {"G", init.G}};
  j["exact_branch_start"] = on_branch;
  j["rtol"] = ic.rtol;
  j["atol"] = ic.atol;
  try {
    SolerTrajectory const traj = integrate(ic, init, spec, r1);
    TrackingReport const tr = tracking_report(traj);
    j["status"] = "ok";
    j["steps"] = {{"accepted", traj.stats.accepted},
                  {"rejected", traj.stats.rejected},
                  {"evaluations", traj.stats.evaluations},
                  {"min_step", traj.stats.min_step},
                  {"max_step", traj.stats.max_step}};
    j["stiffness_warning"] = traj.stiffness_warning;
    j["max_deviation"] = tr.max_deviation();
    j["max_deviation_X"] = tr.max_dev_X;
    j["max_deviation_G"] = tr.max_dev_G;
    j["max_departure_X"] = tr.max_abs_departure_X;
    if (csv) write_trajectory_csv(*csv, traj);
  } catch (DivergingState const& e) {
    j["status"] = "diverged";
    j["error"] = e.what();
    j["last_good_r"] = e.last_good_r();
  } catch (StepUnderflow const& e) {
    j["status"] = "step-underflow";
    j["error"] = e.what();
    j["last_good_r"] = e.r();
  }
  if (cfg.scan_el) j["scan"] = run_scan(cfg, cfg.scan_el->first, cfg.scan_el->second);
  return j;
}

ordered_json run_locus(RunConfig const& cfg) {
  cfg.validate();
  ModelSpec const spec = cfg.spec();
  SingularLocus const an = singular_locus(spec);
  LocusGrid g;
  g.r_min /= spec.m;
  g.r_max /= spec.m;
  if (cfg.grid_set) {
    g.r_min = cfg.grid.r_min / spec.m;
    g.r_max = cfg.grid.r_max / spec.m;
    g.n_r = cfg.grid.n_r;
    g.n_theta = cfg.grid.n_theta;
    g.theta_min = cfg.grid.theta_margin;
    g.theta_max = pi - cfg.grid.theta_margin;
  }
  AsymptoticsReport const asym = asymptotics_report(spec);

  ordered_json j;
  j["schema"] = "1";
  j["command"] = "locus";
  j["model"] = cfg.model.name();
  j["p"] = spec.p;
  j["mass"] = spec.m;
  j["kind"] = to_string(an.kind);
  j["radius"] = an.radius;
  j["angular_constraint"] = an.theta ? ordered_json("cos(theta) = 0") : ordered_json(nullptr);
  j["decay_exponent"] = asym.exponent;
  j["limit_constant"] = asym.limit_constant;
  j["origin_phi2"] = asym.origin_phi2;
  j["asymptotics"] = ordered_json::array();
  for (auto const& row : asym.table)
    j["asymptotics"].push_back({{"r", row.r}, {"theta", row.theta}, {"phi2_r2", row.phi2_r2}});
  try {
    LocusEstimate const est = locate_numerically(spec, g);
    j["numerical"] = {{"kind", to_string(est.kind)},     {"radius", est.radius},
                      {"theta", est.theta},              {"r_cell", est.r_cell},
                      {"theta_cell", est.theta_cell},    {"levels", est.levels},
                      {"divergent", est.divergent},      {"shell_fraction", est.shell_fraction},
                      {"peak_phi2", std::isfinite(est.peak_phi2) ? ordered_json(est.peak_phi2) : ordered_json(nullptr)}};
  } catch (GridTooCoarse const& e) {
    j["numerical"] = {{"error", e.what()}};
  }
  return j;
}

ordered_json run_report(RunConfig const& cfg, int& exit_code) {
  VerifyReport const v = run_verify(cfg);
  RunConfig ode_cfg = cfg;
  ode_cfg.model_set = false;
  ode_cfg.ode = {};
  ode_cfg.scan_el.reset();
  ordered_json j;
  j["schema"] = "1";
  j["command"] = "report";
  j["verify"] = to_json(v, cfg);
  j["locus"] = run_locus(cfg);
  j["ode"] = run_ode(ode_cfg, nullptr);
  j["scan"] = run_scan(cfg, 11, 11);
  bool const ok = v.pass() && j["ode"]["status"] == "ok" && j["scan"]["unique_zero"].get<bool>();
  j["pass"] = ok;
  exit_code = ok ? 0 : 1;
  return j;
}

namespace {

struct Flags {
  std::optional<std::string> model, grid, mask, out, format, scan_el, config, r_span;
  std::optional<double> mass, p, energy, l, tol, theta_margin, x0, g0, rtol, atol;
  std::optional<std::uint64_t> seed;
};

void add_options(CLI::App& app, Flags& f) {
  app.add_option("--model", f.model, "njl | soler | p:<value>");
  app.add_option("--mass", f.mass, "fermion mass m (default 1)");
  app.add_option("--p", f.p, "interpolation parameter, same as --model p:<value>");
  app.add_option("--energy", f.energy, "energy E (default m)");
  app.add_option("--l", f.l, "angular momentum l (default 1/2)");
  app.add_option("--grid", f.grid, "r_min,r_max,n_r,n_theta (radii in units of 1/m, log-spaced)");
  app.add_option("--theta-margin", f.theta_margin, "distance of the theta grid from the poles");
  app.add_option("--seed", f.seed, "seed of the random suites (default 42)");
  app.add_option("--tol", f.tol, "tolerance of the model suites (default 1e-8)");
  app.add_option("--mask-margin", f.mask, "<margin> or <radial>,<angular> (default 0.02)");
  app.add_option("--out", f.out, "output path (default stdout)");
  app.add_option("--format", f.format, "csv | json");
  app.add_option("--scan-el", f.scan_el, "quantum-number scan grid NxM over E/m in [0.5,1.5], l in [0,1]");
  app.add_option("--config", f.config, "JSON config file; flags take precedence");
  app.add_option("--r-span", f.r_span, "ode: r_start,r_end in units of 1/m (default 1,10)");
  app.add_option("--x0", f.x0, "ode: initial X (default exact branch)");
  app.add_option("--g0", f.g0, "ode: initial G (default exact branch)");
  app.add_option("--rtol", f.rtol, "ode: relative tolerance (default 1e-9)");
  app.add_option("--atol", f.atol, "ode: absolute tolerance (default 1e-12)");
}

RunConfig resolve(Flags const& f) {
  RunConfig cfg;
  if (f.config) cfg = load_config_file(*f.config, cfg);
  if (f.model) {
    cfg.model = ModelChoice::parse(*f.model);
    cfg.model_set = true;
  }
  if (f.p) {
    std::ostringstream os;
    os << std::setprecision(17) << "p:" << *f.p;
    cfg.model = ModelChoice::parse(os.str());
    cfg.model_set = true;
  }
  if (f.mass) cfg.mass = *f.mass;
  if (f.energy) cfg.energy = *f.energy;
  if (f.l) cfg.l = *f.l;
  if (f.grid) {
    cfg.grid = parse_grid(*f.grid, cfg.grid);
    cfg.grid_set = true;
  }
  if (f.theta_margin) cfg.grid.theta_margin = *f.theta_margin;
  if (f.seed) cfg.seed = *f.seed;
  if (f.tol) cfg.tol = *f.tol;
  if (f.mask) cfg.mask = parse_mask(*f.mask);
  if (f.out) cfg.out = *f.out;
  if (f.format) cfg.format = *f.format;
  if (f.scan_el) cfg.scan_el = parse_scan_el(*f.scan_el);
  if (f.r_span) {
    auto const pos = f.r_span->find(',');
    if (pos == std::string::npos) throw std::invalid_argument("--r-span: expected r_start,r_end");
    cfg.ode.r_start = std::stod(f.r_span->substr(0, pos));
    cfg.ode.r_end = std::stod(f.r_span->substr(pos + 1));
  }
  if (f.x0) cfg.ode.x0 = *f.x0;
  if (f.g0) cfg.ode.g0 = *f.g0;
  if (f.rtol) cfg.ode.rtol = *f.rtol;
  if (f.atol) cfg.ode.atol = *f.atol;
  cfg.validate();
  return cfg;
}

/// Writes text to --out or to the given stream.
void emit(RunConfig const& cfg, std::ostream& out, std::string const& text) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    auto f = open_output(cfg.out);
    *f << text;
    if (!*f) throw std::runtime_error("failed writing " + cfg.out);
  }
}

} // namespace

int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polar-form verification of exact nonlinear Dirac solutions"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  add_options(app, flags);
  auto* verify = app.add_subcommand("verify", "run every identity and residual suite; exit 0 iff all pass");
  auto* fieldmap = app.add_subcommand("fieldmap", "tabulate phi^2, beta and X on the grid");
  auto* ode = app.add_subcommand("ode", "integrate the Soler radial system");
  auto* locus = app.add_subcommand("locus", "singular locus and large-r decay");
  auto* report = app.add_subcommand("report", "verify, locus, ode and quantum-number scan in one JSON");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    out << app.help();
    return 0;
  } catch (CLI::ParseError const& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    RunConfig const cfg = resolve(flags);
    if (verify->parsed()) {
      VerifyReport const rep = run_verify(cfg);
      std::ostringstream os;
      if (cfg.format == "csv")
        write_verify_csv(os, rep);
      else
        os << to_json(rep, cfg).dump(2) << '\n';
      emit(cfg, out, os.str());
      for (auto const& name : rep.failing()) err << "failing suite: " << name << '\n';
      return rep.pass() ? 0 : 1;
    }
    if (fieldmap->parsed()) {
      std::ostringstream os;
      if (cfg.format == "json")
        os << fieldmap_json(cfg).dump(2) << '\n';
      else
        write_fieldmap_csv(os, cfg);
      emit(cfg, out, os.str());
      return 0;
    }
    if (ode->parsed()) {
      std::ostringstream csv;
      ordered_json const summary = run_ode(cfg, cfg.out.empty() ? nullptr : &csv);
      if (!cfg.out.empty()) emit(cfg, out, csv.str());
      out << summary.dump(2) << '\n';
      if (summary["status"] != "ok") {
        err << "error: " << summary["error"].get<std::string>() << " (last good r = " << summary["last_good_r"]
            << ")\n";
        return 3;
      }
      return 0;
    }
    if (locus->parsed()) {
      emit(cfg, out, run_locus(cfg).dump(2) + "\n");
      return 0;
    }
    if (report->parsed()) {
      int code = 0;
      ordered_json const j = run_report(cfg, code);
      emit(cfg, out, j.dump(2) + "\n");
      return code;
    }
  } catch (SpanCrossesSingularRadius const& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (std::invalid_argument const& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (std::exception const& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

} // namespace nld::cli
