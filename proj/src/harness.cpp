#include "kinkflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kinkflow/diagnostics.hpp"
#include "kinkflow/error.hpp"

namespace kinkflow {

using nlohmann::json;
namespace fs = std::filesystem;

// --- config ------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (!(L > 0.0) || N < 16) throw config_error("bad-grid", "need L > 0 and N >= 16");
  solver.validate();
  if (!(solver.T_final > 0.0)) throw config_error("bad-horizon", "T_final must be positive");
  if (C1 < 0.0 || !(Lambda >= 1.0)) throw config_error("bad-curve", "need C1 >= 0 and Lambda >= 1");
  if (data_case != "i" && data_case != "ii" && data_case != "none")
    throw config_error("bad-case", "case must be i, ii or none");
  if (suites.empty()) throw config_error("bad-suites", "no verification suite selected");
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw config_error("bad-config", where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) throw config_error("unknown-key", "'" + it.key() + "' in " + where);
}

template <class T>
void take(const json& obj, const char* key, T& dst) {
  if (obj.contains(key)) {
    try {
      dst = obj.at(key).get<T>();
    } catch (const json::exception&) {
      throw config_error("bad-value", std::string("cannot read '") + key + "'");
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error("bad-json", e.what());
  }
  reject_unknown(j, {"name", "grid", "solver", "initial", "diagnostics", "case", "suites"}, "config");
  ExperimentConfig c;
  take(j, "name", c.name);
  take(j, "case", c.data_case);
  take(j, "suites", c.suites);
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, {"L", "N"}, "grid");
    take(g, "L", c.L);
    take(g, "N", c.N);
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    reject_unknown(s, {"dt", "S", "T_final", "output_stride", "early_per_decade", "truncation_tol", "blowup"}, "solver");
    take(s, "dt", c.solver.dt);
    take(s, "S", c.solver.S);
    take(s, "T_final", c.solver.T_final);
    take(s, "output_stride", c.solver.output_stride);
    take(s, "early_per_decade", c.solver.early_per_decade);
    take(s, "truncation_tol", c.solver.truncation_tol);
    take(s, "blowup", c.solver.blowup);
  }
  if (j.contains("initial")) {
    const json& i = j["initial"];
    reject_unknown(i, {"family", "amplitude", "width", "center", "separation", "shift", "count", "seed", "energy_margin"},
                   "initial");
    take(i, "family", c.initial.family);
    take(i, "amplitude", c.initial.amplitude);
    take(i, "width", c.initial.width);
    take(i, "center", c.initial.center);
    take(i, "separation", c.initial.separation);
    take(i, "shift", c.initial.shift);
    take(i, "count", c.initial.count);
    take(i, "seed", c.initial.seed);
    take(i, "energy_margin", c.initial.energy_margin);
  }
  if (j.contains("diagnostics")) {
    const json& d = j["diagnostics"];
    reject_unknown(d, {"C1", "Lambda"}, "diagnostics");
    take(d, "C1", c.C1);
    take(d, "Lambda", c.Lambda);
  }
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["grid"] = {{"L", c.L}, {"N", c.N}};
  j["solver"] = {{"dt", c.solver.dt},
                 {"S", c.solver.S},
                 {"T_final", c.solver.T_final},
                 {"output_stride", c.solver.output_stride},
                 {"early_per_decade", c.solver.early_per_decade},
                 {"truncation_tol", c.solver.truncation_tol},
                 {"blowup", c.solver.blowup}};
  j["initial"] = {{"family", c.initial.family},       {"amplitude", c.initial.amplitude},
                  {"width", c.initial.width},         {"center", c.initial.center},
                  {"separation", c.initial.separation}, {"shift", c.initial.shift},
                  {"count", c.initial.count},         {"seed", c.initial.seed},
                  {"energy_margin", c.initial.energy_margin}};
  j["diagnostics"] = {{"C1", c.C1}, {"Lambda", c.Lambda}};
  j["case"] = c.data_case;
  j["suites"] = c.suites;
  return j.dump(2) + "\n";
}

// --- presets -----------------------------------------------------------------

namespace {

ExperimentConfig long_run(const std::string& name, double T, double stride) {
  ExperimentConfig c;
  c.name = name;
  // the disturbance spreads diffusively; L = 400 keeps |w| at the ends below 1e-9 to T = 1000
  c.L = 400.0;
  c.N = 16384;
  c.solver.dt = 0.05;
  c.solver.T_final = T;
  c.solver.output_stride = stride;
  c.solver.early_per_decade = 10;
  return c;
}

const std::vector<std::pair<PresetInfo, ExperimentConfig>>& presets() {
  static const auto table = [] {
    std::vector<std::pair<PresetInfo, ExperimentConfig>> t;
    {
      ExperimentConfig c;
      c.name = "kink-idle";
      c.L = 100.0;
      c.N = 4096;
      c.solver.T_final = 500.0;
      c.solver.output_stride = 5.0;
      c.initial.family = "none";
      c.data_case = "none";
      t.push_back({{c.name, "the kink itself; every diagnostic stays zero"}, c});
    }
    {
      ExperimentConfig c = long_run("case-i-bump", 1000.0, 0.5);
      c.initial.family = "bump";
      c.initial.amplitude = 0.3;
      c.initial.width = 2.0;
      t.push_back({{c.name, "mean-zero mexican hat on the kink, finite first moment"}, c});
    }
    for (double R : {50.0, 100.0}) {
      ExperimentConfig c = long_run("two-bump-R" + std::to_string(int(R)), 500.0, 2.0);
      c.initial.family = "two-bump";
      c.initial.amplitude = 0.3;
      c.initial.width = 2.0;
      c.initial.separation = R;
      c.data_case = "ii";
      t.push_back({{c.name, "opposite gaussians at -R/2 and +R/2, finite excess mass"}, c});
    }
    {
      ExperimentConfig c = long_run("shifted-kink-plus-bump", 500.0, 2.0);
      c.initial.family = "shifted-kink-plus-bump";
      c.initial.shift = 0.5;
      c.initial.width = 2.0;
      c.data_case = "ii";
      t.push_back({{c.name, "kink shifted by 0.5 with the mass put back as a gaussian"}, c});
    }
    {
      ExperimentConfig c = long_run("random-bumps", 500.0, 2.0);
      c.initial.family = "random-bumps";
      c.initial.amplitude = 0.2;
      c.initial.width = 1.5;
      c.initial.count = 3;
      c.initial.seed = 1;
      t.push_back({{c.name, "three seeded mexican hats"}, c});
    }
    return t;
  }();
  return table;
}

}  // namespace

std::vector<PresetInfo> preset_list() {
  std::vector<PresetInfo> out;
  for (const auto& [info, cfg] : presets()) out.push_back(info);
  return out;
}

ExperimentConfig builtin_preset(const std::string& name) {
  for (const auto& [info, cfg] : presets())
    if (info.name == name) return cfg;
  throw config_error("unknown-preset", "no preset '" + name + "'");
}

std::string preset_directory() {
  if (const char* env = std::getenv("KINKFLOW_PRESET_DIR")) return env;
#ifdef KINKFLOW_PRESET_DIR
  return KINKFLOW_PRESET_DIR;
#else
  return "presets";
#endif
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("unreadable-file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ExperimentConfig load_config(const std::string& arg) {
  if (fs::is_regular_file(arg)) return parse_config(read_file(arg));
  std::string name = fs::path(arg).filename().string();
  if (name.size() > 5 && name.substr(name.size() - 5) == ".json") name.resize(name.size() - 5);
  const fs::path shipped = fs::path(preset_directory()) / (name + ".json");
  if (fs::is_regular_file(shipped)) return parse_config(read_file(shipped.string()));
  return builtin_preset(name);
}

// --- rates -------------------------------------------------------------------

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& y, double t0, double t1,
                 const std::string& series) {
  if (t.size() != y.size()) throw config_error("bad-series", "t and y differ in length");
  if (!(t1 > t0) || !(t0 > 0.0)) throw config_error("bad-window", "need 0 < t0 < t1");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (!(y[i] > 0.0))
      throw config_error("nonpositive-values-in-window", series + " = " + num(y[i]) + " at t = " + num(t[i]));
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(y[i]));
  }
  if (lx.size() < 10) throw config_error("window-too-short", "only " + num(double(lx.size())) + " records in window");
  const double n = double(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  RateFit f;
  f.series = series;
  f.t0 = t0;
  f.t1 = t1;
  f.records = int(lx.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

RateFit fit_rate(const Trajectory& traj, const std::string& series, double t0, double t1) {
  std::vector<double> t, y;
  for (const auto& p : traj.points) {
    t.push_back(p.rec.t);
    y.push_back(series_value(p, series));
  }
  return fit_rate(t, y, t0, t1, series);
}

RatioReport slope_check(const RateFit& fit, double lo, double hi, const std::string& ref) {
  RatioScan s;
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  s.add(fit.t1, std::abs(fit.slope - mid), half);
  RatioReport r = s.finish("slope-" + fit.series, ref, 1.0);
  return r;
}

RatioReport envelope_check(const Envelope& e, double ceiling, const std::string& ref) {
  RatioScan s;
  if (e.samples > 0 && e.inf > 0.0) s.add(0.0, e.sup, e.inf);
  return s.finish("envelope-spread-" + e.id, ref, ceiling);
}

std::pair<double, double> rate_window(const Trajectory& traj) {
  return {50.0, std::min(500.0, 0.9 * traj.T_final)};
}

bool CaseReport::pass() const {
  if (degenerate) return false;
  return std::all_of(checks.begin(), checks.end(), [](const RatioReport& r) { return r.pass; });
}

namespace {

bool all_zero(const Trajectory& traj) {
  for (const auto& p : traj.points)
    if (p.rec.energy_gap > 1e-14 || p.rec.excess_mass_V > 1e-14) return false;
  return true;
}

void require_mean_zero(const Trajectory& traj, const char* which) {
  if (traj.points.empty()) throw config_error("wrong-case-data", "empty trajectory");
  if (std::abs(traj.points.front().rec.mass_defect) > 1e-8)
    throw config_error("wrong-case-data", std::string(which) + " needs mean-zero data");
}

RatioReport bound_series(const Trajectory& traj, const std::string& id, const std::string& ref,
                         const std::function<double(const TrajectoryPoint&)>& ratio, double t0 = 0.0,
                         double t1 = INFINITY) {
  RatioScan s;
  for (const auto& p : traj.points)
    if (p.rec.t >= t0 && p.rec.t <= t1) s.add_ratio(p.rec.t, ratio(p));
  return s.finish(id, ref, default_ceiling(id));
}

}  // namespace

CaseReport case_i_report(const Trajectory& traj) {
  CaseReport rep;
  rep.case_id = "i";
  require_mean_zero(traj, "case (i)");
  if (all_zero(traj)) {
    rep.degenerate = true;
    return rep;
  }
  const double M0 = traj.points.front().rec.first_moment_M;
  if (!std::isfinite(M0)) throw config_error("wrong-case-data", "M_0 is not finite");
  rep.data_size = M0;
  for (const auto& p : traj.points) rep.slowdown = std::max(rep.slowdown, p.rec.first_moment_M / (M0 + 1.0));
  rep.checks.push_back(bound_series(traj, "slowdown-M", "M(t) <~ M_0 + 1",
                                    [M0](const TrajectoryPoint& p) { return p.rec.first_moment_M / (M0 + 1.0); }));

  const auto [t0, t1] = rate_window(traj);
  const double m2 = M0 * M0 + 1.0;
  rep.checks.push_back(bound_series(
      traj, "envelope-E-M0", "E t^{3/2} <~ M_0^2 + 1",
      [m2](const TrajectoryPoint& p) { return p.rec.energy_gap * std::pow(p.rec.t, 1.5) / m2; }, t0, t1));
  rep.checks.push_back(bound_series(
      traj, "envelope-c-M0", "c^2 t <~ M_0^2 + 1",
      [m2](const TrajectoryPoint& p) { return p.rec.shift_c * p.rec.shift_c * p.rec.t / m2; }, t0, t1));

  struct Target {
    const char* series;
    double power, lo, hi;
    const char* ref;
    const char* env_ref;
  };
  const Target targets[] = {
      {"energy_gap", 1.5, -1.8, -1.2, "slope of E in [-1.8, -1.2] (E <~ t^{-3/2})", "E t^{3/2} bounded"},
      {"sup_fc", 1.0, -1.3, -0.7, "slope of sup|f_c| in [-1.3, -0.7] (sup|f_c| <~ t^{-1})", "sup|f_c| t bounded"},
      {"abs_shift_c", 0.5, -0.8, -0.25, "slope of |c| in [-0.8, -0.25] (c^2 <~ (M_0^2+1)/t)", "|c| t^{1/2} bounded"},
      {"dissipation", 2.5, -2.8, -2.2, "slope of D in [-2.8, -2.2] (D <~ t^{-5/2})", "D t^{5/2} bounded"},
  };
  for (const auto& tg : targets) {
    const RateFit f = fit_rate(traj, tg.series, t0, t1);
    rep.fits.push_back(f);
    rep.checks.push_back(slope_check(f, tg.lo, tg.hi, tg.ref));
    const Envelope e = envelope(traj, tg.series, tg.power, 1.0, t0, t1);
    rep.envelopes.push_back(e);
    if (std::string(tg.series) != "abs_shift_c") rep.checks.push_back(envelope_check(e, 3.0, tg.env_ref));
  }
  return rep;
}

CaseReport case_ii_report(const Trajectory& traj) {
  CaseReport rep;
  rep.case_id = "ii";
  require_mean_zero(traj, "case (ii)");
  if (all_zero(traj)) {
    rep.degenerate = true;
    return rep;
  }
  const double V0 = traj.points.front().rec.excess_mass_V;
  if (!std::isfinite(V0)) throw config_error("wrong-case-data", "V_0 is not finite");
  rep.data_size = V0;
  for (const auto& p : traj.points) rep.slowdown = std::max(rep.slowdown, p.rec.excess_mass_V / (V0 + 1.0));
  rep.checks.push_back(bound_series(traj, "slowdown-V", "V(t) <~ V_0 + 1",
                                    [V0](const TrajectoryPoint& p) { return p.rec.excess_mass_V / (V0 + 1.0); }));
  const double t1 = 0.9 * traj.T_final;
  const double v2 = V0 * V0 + 1.0;
  rep.checks.push_back(bound_series(
      traj, "envelope-E-V0", "E t^{1/2} <~ V_0^2 + 1",
      [v2](const TrajectoryPoint& p) { return p.rec.energy_gap * std::sqrt(p.rec.t) / v2; }, 10.0, t1));
  rep.checks.push_back(bound_series(traj, "bound-c-V0", "c^2 <~ V_0^2 + 1",
                                    [v2](const TrajectoryPoint& p) { return p.rec.shift_c * p.rec.shift_c / v2; }));
  const double v32 = std::pow(V0, 1.5) + 1.0;
  rep.checks.push_back(bound_series(
      traj, "envelope-fc-t38", "sup|f_c| t^{3/8} <~ V_0^{3/2} + 1",
      [v32](const TrajectoryPoint& p) { return p.rec.sup_fc * std::pow(p.rec.t, 0.375) / v32; }, 10.0, t1));
  rep.checks.push_back(bound_series(
      traj, "envelope-fc-t14", "sup|f_c| t^{1/4} <~ V_0 + 1",
      [V0](const TrajectoryPoint& p) { return p.rec.sup_fc * std::pow(p.rec.t, 0.25) / (V0 + 1.0); }, 10.0, t1));
  rep.envelopes.push_back(envelope(traj, "energy_gap", 0.5, v2, 10.0, t1));
  return rep;
}

// --- stand-in curve ----------------------------------------------------------

double calibrate_C1(const Trajectory& traj, double Lambda) {
  if (traj.points.empty()) return 1.0;
  const double cT = traj.points.back().rec.shift_c;
  const double T = traj.points.back().rec.t;
  double worst = 0.0;
  for (const auto& p : traj.points)
    worst = std::max(worst, std::abs(cT - p.rec.shift_c) / std::pow(T - p.rec.t + Lambda, 0.25));
  return 1.0 + worst;
}

void recompute_stand_ins(Trajectory& traj, const Kink& kink, const StandInCurve& curve) {
  Diagnostics diag(kink, traj.grid);
  const double dx = traj.grid.dx();
  for (auto& p : traj.points) {
    if (p.w.empty()) throw config_error("no-states", "stand-ins need the stored states");
    const FieldState s(traj.grid, p.rec.t, p.w);
    const double gm = std::min(curve.minus(p.rec.t), p.rec.shift_c - dx);
    const double gp = std::max(curve.plus(p.rec.t), p.rec.shift_c + dx);
    const StandIns si = diag.stand_ins(s, gm, gp);
    p.rec.m_tilde = si.m_tilde;
    p.rec.v_tilde = si.v_tilde;
  }
}

std::vector<double> branch_switches(const Trajectory& traj, double jump) {
  std::vector<double> out;
  for (std::size_t i = 1; i < traj.points.size(); ++i)
    if (std::abs(traj.points[i].rec.shift_c - traj.points[i - 1].rec.shift_c) > jump) out.push_back(traj.points[i].rec.t);
  return out;
}

// --- suites ------------------------------------------------------------------

namespace {

void need_obs(bool has_obs, const std::string& suite) {
  if (!has_obs) throw config_error("missing-observables", "suite '" + suite + "' needs observables.csv");
}

RatioReport mass_report(const Trajectory& traj) {
  RatioScan s(0.0);
  double m0 = traj.points.empty() ? 0.0 : traj.points.front().rec.mass_defect;
  for (const auto& p : traj.points) s.add_ratio(p.rec.t, std::abs(p.rec.mass_defect - m0));
  return s.finish("mass-drift", "|int w(t) - int w(0)| <= 1e-10", 1e-10);
}

}  // namespace

std::vector<RatioReport> run_suite(const Trajectory& traj, const std::string& suite, bool has_obs,
                                   const std::string& data_case) {
  std::vector<RatioReport> out;
  auto append = [&](std::vector<RatioReport> v) { out.insert(out.end(), v.begin(), v.end()); };
  if (suite == "all") {
    for (const char* s : {"nash", "links", "integral", "identity", "zero-motion", "diff-D", "V-lower", "mass"})
      append(run_suite(traj, s, has_obs, data_case));
    if (has_obs)
      for (const char* s : {"equivalences", "shift", "l2"}) append(run_suite(traj, s, has_obs, data_case));
    if (data_case == "i") append(run_suite(traj, "case-i", has_obs, data_case));
    if (data_case == "ii") append(run_suite(traj, "case-ii", has_obs, data_case));
    return out;
  }
  if (suite == "nash") {
    out.push_back(verify_nash_M(traj));
    out.push_back(verify_nash_V(traj));
  } else if (suite == "equivalences") {
    need_obs(has_obs, suite);
    append(verify_equivalences(traj, Kink(Potential::canonical()).e_star()));
  } else if (suite == "shift") {
    need_obs(has_obs, suite);
    append(verify_shift_bounds(traj));
  } else if (suite == "l2") {
    need_obs(has_obs, suite);
    out.push_back(verify_l2_holder(traj));
  } else if (suite == "links") {
    append(verify_stand_in_links(traj));
  } else if (suite == "integral") {
    out.push_back(verify_integral_dissipation(traj, 0.7, 'M'));
    out.push_back(verify_integral_dissipation(traj, 0.8, 'V'));
  } else if (suite == "identity") {
    out.push_back(verify_gradient_flow_identity(traj));
  } else if (suite == "zero-motion") {
    out.push_back(verify_zero_motion(traj));
  } else if (suite == "diff-D") {
    out.push_back(verify_diff_ineq_D(traj));
  } else if (suite == "V-lower") {
    out.push_back(verify_V_lower_bound(traj));
  } else if (suite == "mass") {
    out.push_back(mass_report(traj));
  } else if (suite == "case-i" || suite == "case-ii") {
    const CaseReport c = suite == "case-i" ? case_i_report(traj) : case_ii_report(traj);
    if (c.degenerate) {
      RatioReport r = RatioScan().finish(suite, "no disturbance", 0.0);
      out.push_back(r);
    } else {
      append(c.checks);
    }
  } else {
    throw config_error("unknown-suite", "no suite '" + suite + "'");
  }
  return out;
}

bool ExperimentResult::pass() const {
  return std::all_of(reports.begin(), reports.end(), [](const RatioReport& r) { return r.pass || r.degenerate; });
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, bool keep_states) {
  cfg.validate();
  ExperimentResult res;
  res.cfg = cfg;
  const Kink kink(Potential::canonical());
  const Grid1D grid(cfg.L, cfg.N);
  const FieldState s0 = make_initial_data(cfg.initial, grid, kink, &res.initial);

  SolverConfig sc = cfg.solver;
  sc.keep_states = true;
  StandInCurve provisional{0.0, cfg.C1 > 0.0 ? cfg.C1 : 1.0, cfg.Lambda, sc.T_final};
  res.traj = run(s0, kink, sc, provisional);

  res.c_T = res.traj.points.back().rec.shift_c;
  res.C1 = cfg.C1 > 0.0 ? cfg.C1 : calibrate_C1(res.traj, cfg.Lambda);
  recompute_stand_ins(res.traj, kink, StandInCurve{res.c_T, res.C1, cfg.Lambda, sc.T_final});
  if (!keep_states)
    for (auto& p : res.traj.points) std::vector<double>().swap(p.w);
  res.branch_switch_times = branch_switches(res.traj);

  for (const auto& s : cfg.suites) {
    auto r = run_suite(res.traj, s, true, cfg.data_case);
    res.reports.insert(res.reports.end(), r.begin(), r.end());
  }

  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw config_error("unwritable-output", out_dir + ": " + ec.message());
    write_trajectory_csv(res.traj, (fs::path(out_dir) / "trajectory.csv").string());
    write_observables_csv(res.traj, (fs::path(out_dir) / "observables.csv").string());
    write_text((fs::path(out_dir) / "report.json").string(), reports_to_json(res.reports));
    write_text((fs::path(out_dir) / "config.json").string(), config_to_json(cfg));
    json meta;
    meta["C1"] = res.C1;
    meta["Lambda"] = cfg.Lambda;
    meta["c_T"] = res.c_T;
    meta["initial_energy_gap"] = res.initial.energy_gap;
    meta["energy_margin"] = res.initial.margin;
    meta["max_mass_drift"] = res.traj.max_mass_drift;
    meta["branch_switch_times"] = res.branch_switch_times;
    write_text((fs::path(out_dir) / "run.json").string(), meta.dump(2) + "\n");
  }
  return res;
}

// --- I/O ---------------------------------------------------------------------

const char* const kTrajectoryHeader =
    "t,energy_gap,dissipation,shift_c,first_moment_M,excess_mass_V,m_tilde,v_tilde,sup_fc,mass_defect,hm1_sq";

namespace {

const char* const kObservablesHeader =
    "t,c,energy_norm,dissipation_norm,l2_sq,sup_fc,V,M,f_at_0,f_at_c,sup_F,jump,moment_xc";

void put(std::string& line, double v, bool first = false) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  if (!first) line += ',';
  line += buf;
}

std::vector<std::vector<double>> read_rows(const std::string& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw config_error("unreadable-file", path);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw config_error("bad-header", path + " does not carry the expected header");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      row.push_back(std::strtod(cell.c_str(), &end));
      if (end == cell.c_str()) throw config_error("bad-row", "unparsable cell '" + cell + "' in " + path);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (const auto& p : traj.points) {
    const auto& r = p.rec;
    std::string line;
    put(line, r.t, true);
    for (double v : {r.energy_gap, r.dissipation, r.shift_c, r.first_moment_M, r.excess_mass_V, r.m_tilde, r.v_tilde,
                     r.sup_fc, r.mass_defect, r.hm1_sq})
      put(line, v);
    out += line + "\n";
  }
  write_text(path, out);
}

void write_observables_csv(const Trajectory& traj, const std::string& path) {
  std::string out = std::string(kObservablesHeader) + "\n";
  for (const auto& p : traj.points) {
    const auto& o = p.obs;
    std::string line;
    put(line, o.t, true);
    for (double v : {o.c, o.energy_norm, o.dissipation_norm, o.l2_sq, o.sup_fc, o.V, o.M, o.f_at_0, o.f_at_c, o.sup_F,
                     o.jump, o.moment_xc})
      put(line, v);
    out += line + "\n";
  }
  write_text(path, out);
}

Trajectory read_trajectory_csv(const std::string& path, bool* has_obs) {
  Trajectory traj;
  for (const auto& row : read_rows(path, kTrajectoryHeader)) {
    if (row.size() != 11) throw config_error("bad-row", "expected 11 columns in " + path);
    TrajectoryPoint p;
    auto& r = p.rec;
    r.t = row[0];
    r.energy_gap = row[1];
    r.dissipation = row[2];
    r.shift_c = row[3];
    r.first_moment_M = row[4];
    r.excess_mass_V = row[5];
    r.m_tilde = row[6];
    r.v_tilde = row[7];
    r.sup_fc = row[8];
    r.mass_defect = row[9];
    r.hm1_sq = row[10];
    traj.points.push_back(p);
  }
  if (!traj.points.empty()) {
    traj.T_final = traj.points.back().rec.t;
    // the step comes from the sibling config.json; failing that, the
    // smallest record spacing is an upper bound for it
    traj.dt = traj.T_final;
    for (std::size_t i = 1; i < traj.points.size(); ++i)
      traj.dt = std::min(traj.dt, traj.points[i].rec.t - traj.points[i - 1].rec.t);
    const fs::path cfg = fs::path(path).parent_path() / "config.json";
    if (fs::is_regular_file(cfg)) {
      const json j = json::parse(read_file(cfg.string()), nullptr, false);
      if (j.is_object() && j.contains("solver") && j["solver"].contains("dt") && j["solver"]["dt"].is_number())
        traj.dt = j["solver"]["dt"].get<double>();
    }
    traj.mass0 = traj.points.front().rec.mass_defect;
    for (const auto& p : traj.points)
      traj.max_mass_drift = std::max(traj.max_mass_drift, std::abs(p.rec.mass_defect - traj.mass0));
  }
  const fs::path obs = fs::path(path).parent_path() / "observables.csv";
  bool ok = false;
  if (fs::is_regular_file(obs)) {
    const auto rows = read_rows(obs.string(), kObservablesHeader);
    if (rows.size() == traj.points.size()) {
      ok = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& q = rows[i];
        if (q.size() != 13 || q[0] != traj.points[i].rec.t) {
          ok = false;
          break;
        }
        auto& o = traj.points[i].obs;
        o = {q[0], q[1], q[2], q[3], q[4], q[5], q[6], q[7], q[8], q[9], q[10], q[11], q[12]};
      }
    }
  }
  if (has_obs) *has_obs = ok;
  return traj;
}

namespace {

json report_json(const RatioReport& r) {
  json j;
  j["id"] = r.id;
  j["paper_ref"] = r.paper_ref;
  j["max_ratio"] = r.max_ratio;
  j["argmax_t"] = r.argmax_t;
  j["samples"] = r.samples;
  j["excluded"] = r.excluded;
  j["drift_pct"] = r.drift_pct;  // NaN becomes null
  j["ceiling"] = r.ceiling;
  j["pass"] = r.pass;
  if (r.degenerate) j["degenerate"] = true;
  return j;
}

json fit_json(const RateFit& f) {
  return {{"series", f.series}, {"window", {f.t0, f.t1}}, {"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
}

}  // namespace

std::string reports_to_json(const std::vector<RatioReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  return arr.dump(2) + "\n";
}

std::string rate_fit_to_json(const RateFit& fit) { return fit_json(fit).dump(2) + "\n"; }

std::string kernel_rows_to_json(const KernelNormTable& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j = {{"kernel", r.kernel}, {"k", r.k},   {"t", r.t}, {"l1", r.l1}, {"scaled_small_t", r.scaled_small_t},
              {"scaled_large_t", r.scaled_large_t}};
    if (r.moment != 0.0) j["moment"] = r.moment;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::string dual_rows_to_json(const DualEstimateReport& rep) {
  json arr = json::array();
  for (const auto& r : rep.rows)
    arr.push_back({{"estimate_id", r.estimate_id},
                   {"weight", r.weight},
                   {"scaled_sup", r.scaled_sup},
                   {"argmax_tau", r.argmax_tau},
                   {"tail_slope", r.tail_slope}});
  return arr.dump(2) + "\n";
}

std::string case_report_to_json(const CaseReport& rep) {
  json j;
  j["case"] = rep.case_id;
  j["degenerate"] = rep.degenerate;
  j["data_size"] = rep.data_size;
  j["slowdown"] = rep.slowdown;
  j["fits"] = json::array();
  for (const auto& f : rep.fits) j["fits"].push_back(fit_json(f));
  j["envelopes"] = json::array();
  for (const auto& e : rep.envelopes)
    j["envelopes"].push_back({{"id", e.id}, {"sup", e.sup}, {"inf", e.inf}, {"variation", e.variation}, {"samples", e.samples}});
  j["checks"] = json::parse(reports_to_json(rep.checks));
  j["pass"] = rep.pass();
  return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw config_error("unwritable-output", path);
  out << text;
  if (!out) throw config_error("unwritable-output", path);
}

DualConfig parse_dual_config(const std::string& text, char dual_case) {
  json j = text.empty() ? json::object() : json(nullptr);
  if (!text.empty()) {
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw config_error("bad-json", e.what());
    }
  }
  reject_unknown(j, {"case", "T", "terminal", "half_width", "dx", "kappa", "dt_frac", "dt_min", "dt_max", "tau_min",
                     "per_decade", "C1", "Lambda", "c_T"},
                 "dual config");
  DualConfig c;
  c.dual_case = dual_case;
  if (dual_case == 'V') {
    c.kappa = 1.0;
    c.g.family = "plateau";
    c.g.width = 0.5;
    c.T = 200.0;
  } else {
    c.g.slope = 4.0;
  }
  if (j.contains("case")) {
    const std::string s = j["case"].get<std::string>();
    if (s != std::string(1, dual_case)) throw config_error("case-mismatch", "config is for case " + s);
  }
  take(j, "T", c.T);
  take(j, "half_width", c.half_width);
  take(j, "dx", c.dx);
  take(j, "kappa", c.kappa);
  take(j, "dt_frac", c.dt_frac);
  take(j, "dt_min", c.dt_min);
  take(j, "dt_max", c.dt_max);
  take(j, "tau_min", c.tau_min);
  take(j, "per_decade", c.per_decade);
  take(j, "C1", c.C1);
  take(j, "Lambda", c.Lambda);
  take(j, "c_T", c.c_T);
  if (j.contains("terminal")) {
    const json& g = j["terminal"];
    reject_unknown(g, {"family", "slope", "width", "amplitude"}, "terminal");
    take(g, "family", c.g.family);
    take(g, "slope", c.g.slope);
    take(g, "width", c.g.width);
    take(g, "amplitude", c.g.amplitude);
  }
  c.validate();
  return c;
}

int thread_cap() {
  int hw = int(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("KINKFLOW_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min(v, std::max(hw, v));
  }
  return hw;
}

}  // namespace kinkflow
