// Command-line front end: simulate, verify, kernels, dual, rates, presets.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kinkflow/error.hpp"
#include "kinkflow/harness.hpp"
#include "kinkflow/numerics.hpp"

namespace fs = std::filesystem;
using namespace kinkflow;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kBreach = 1, kUsage = 2, kNumerical = 3 };

bool breached(const std::vector<RatioReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass && !r.degenerate) return true;
  return false;
}

void summarize(const std::vector<RatioReport>& reports) {
  for (const auto& r : reports) {
    const char* verdict = r.degenerate ? "degenerate" : (r.pass ? "ok" : "BREACH");
    std::fprintf(stderr, "  %-28s max %-12s ceiling %-10s %s\n", r.id.c_str(), num(r.max_ratio).c_str(),
                 num(r.ceiling).c_str(), verdict);
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("unreadable-file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

int cmd_simulate(const std::vector<std::string>& configs, const std::string& out, double T_override) {
  std::vector<ExperimentConfig> cfgs;
  for (const auto& c : configs) {
    ExperimentConfig cfg = load_config(c);
    if (T_override > 0.0) cfg.solver.T_final = T_override;
    cfgs.push_back(cfg);
  }
  const bool nested = cfgs.size() > 1;
  auto results = parallel_map(cfgs, [&](const ExperimentConfig& cfg) {
    const std::string dir = nested ? (fs::path(out) / cfg.name).string() : out;
    ExperimentResult r = run_experiment(cfg, dir);
    r.traj.points.clear();  // only the reports are needed from here on
    return r;
  });
  bool bad = false;
  for (const auto& r : results) {
    std::fprintf(stderr, "%s: C1 = %s, %zu reports\n", r.cfg.name.c_str(), num(r.C1).c_str(), r.reports.size());
    summarize(r.reports);
    for (double t : r.branch_switch_times) std::fprintf(stderr, "  shift branch switch at t = %s\n", num(t).c_str());
    bad = bad || breached(r.reports);
  }
  return bad ? kBreach : kOk;
}

std::string infer_case(const std::string& traj_path, const Trajectory& traj) {
  const fs::path cfg = fs::path(traj_path).parent_path() / "config.json";
  if (fs::is_regular_file(cfg)) {
    const json j = json::parse(slurp(cfg.string()), nullptr, false);
    if (j.is_object() && j.contains("case") && j["case"].is_string()) return j["case"].get<std::string>();
  }
  if (!traj.points.empty() && std::isfinite(traj.points.front().rec.first_moment_M)) return "i";
  return "ii";
}

int cmd_verify(const std::string& traj_path, const std::string& suite, const std::string& out, std::string data_case) {
  bool has_obs = false;
  const Trajectory traj = read_trajectory_csv(traj_path, &has_obs);
  if (data_case.empty()) data_case = infer_case(traj_path, traj);
  const auto reports = run_suite(traj, suite, has_obs, data_case);
  write_text(out, reports_to_json(reports));
  summarize(reports);
  return breached(reports) ? kBreach : kOk;
}

int cmd_rates(const std::string& traj_path, const std::string& series, const std::string& window,
              const std::string& out) {
  const auto colon = window.find(':');
  if (colon == std::string::npos) throw config_error("bad-window", "expected a:b, got '" + window + "'");
  double t0 = 0.0, t1 = 0.0;
  try {
    t0 = std::stod(window.substr(0, colon));
    t1 = std::stod(window.substr(colon + 1));
  } catch (const std::exception&) {
    throw config_error("bad-window", "cannot parse '" + window + "'");
  }
  const Trajectory traj = read_trajectory_csv(traj_path);
  const RateFit fit = fit_rate(traj, series, t0, t1);
  const std::string text = rate_fit_to_json(fit);
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_text(out, text);
  return kOk;
}

// ---------------------------------------------------------------------------

json kernel_norms(bool refine) {
  const std::vector<double> ts = log_grid(1e-3, 1e3, 4);
  json j = json::object();
  json rows = json::array();
  json sups = json::array();
  bool ok = true;
  for (const std::string kernel : {"H2", "H4", "H"}) {
    const KernelNormTable coarse = kernel_norm_table(kernel, 1, 4, ts);
    const json part = json::parse(kernel_rows_to_json(coarse));
    rows.insert(rows.end(), part.begin(), part.end());
    const auto s1 = kernel_scaling_sups(coarse);
    std::vector<ScalingSup> s2;
    if (refine) s2 = kernel_scaling_sups(kernel_norm_table(kernel, 1, 4, ts, KernelAccuracy{2}));
    for (std::size_t i = 0; i < s1.size(); ++i) {
      json e = {{"kernel", kernel}, {"k", s1[i].k}, {"sup_small_t", s1[i].small_t}, {"sup_large_t", s1[i].large_t}};
      ok = ok && std::isfinite(s1[i].small_t) && std::isfinite(s1[i].large_t);
      if (refine) {
        const double d1 = 100.0 * std::abs(s2[i].small_t / s1[i].small_t - 1.0);
        const double d2 = 100.0 * std::abs(s2[i].large_t / s1[i].large_t - 1.0);
        e["drift_pct"] = std::max(d1, d2);
        ok = ok && std::max(d1, d2) < 5.0;
      }
      sups.push_back(e);
    }
  }
  j["rows"] = rows;
  j["scaling_sups"] = sups;
  j["pass"] = ok;
  return j;
}

json kernel_poisson(bool refine) {
  json j = json::object();
  json mass = json::array();
  bool ok = true;
  for (double x : {0.1, 1.0, 10.0}) {
    const PoissonMass m = poisson_mass(x);
    const bool pass = std::abs(m.integral - 1.0) <= 1e-4;
    ok = ok && pass;
    mass.push_back({{"x", x}, {"integral", m.integral}, {"head", m.head}, {"tail", m.tail}, {"S", m.S}, {"pass", pass}});
  }
  j["mass"] = mass;
  const std::vector<double> xs = {0.1, 1.0, 10.0};
  RatioReport w = poisson_weighted_estimate(xs, 0.2);
  if (refine) apply_drift(w, poisson_weighted_estimate(xs, 0.2, KernelAccuracy{2}), 10.0);
  ok = ok && w.pass;
  j["weighted"] = json::parse(reports_to_json({w}));
  j["pass"] = ok;
  return j;
}

json kernel_moments() {
  const std::vector<double> ts = log_grid(1e-2, 1e2, 4);
  json rows = json::array();
  for (int k : {0, 1, 2}) {
    const auto t = weighted_moment_table(k, 1.0, 0.2, ts);
    const json part = json::parse(kernel_rows_to_json(t));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  json j = {{"rows", rows}};
  bool ok = true;
  for (const auto& r : rows) ok = ok && std::isfinite(r["l1"].get<double>());
  j["pass"] = ok;
  return j;
}

int cmd_kernels(const std::string& suite, const std::string& out, bool refine) {
  json j = json::object();
  if (suite == "norms" || suite == "all") j["norms"] = kernel_norms(refine);
  if (suite == "poisson" || suite == "all") j["poisson"] = kernel_poisson(refine);
  if (suite == "moments" || suite == "all") j["moments"] = kernel_moments();
  if (j.empty()) throw config_error("unknown-suite", "kernel suites are norms, poisson, moments, all");
  write_text(out, j.dump(2) + "\n");
  bool ok = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::fprintf(stderr, "%s: %s\n", it.key().c_str(), it.value()["pass"].get<bool>() ? "ok" : "BREACH");
    ok = ok && it.value()["pass"].get<bool>();
  }
  return ok ? kOk : kBreach;
}

// ---------------------------------------------------------------------------

double half_sup(const DualTrajectory& tr, const std::vector<double>& f) {
  double m = 0.0;
  for (std::size_t i = tr.origin(); i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

int cmd_dual(char dual_case, const std::string& config, const std::string& out) {
  const DualConfig cfg = parse_dual_config(config.empty() ? "" : slurp(config), dual_case);
  const DualTrajectory tr = dual_case == 'M' ? solve_dual_fixed(cfg) : solve_dual_moving(cfg);
  const DualEstimateReport rep = dual_case == 'M' ? dual_fixed_estimates(tr) : dual_moving_estimates(tr);

  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw config_error("unwritable-output", out + ": " + ec.message());
  write_text((fs::path(out) / "estimates.json").string(), dual_rows_to_json(rep));

  std::string csv = "tau,sup_zeta,sup_zeta_x,sup_zeta_xx,sup_zeta_xxx,sup_zeta_xxxx,sup_zeta_xxxxx\n";
  for (const auto& s : tr.snaps) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", s.tau);
    csv += buf;
    for (int k = 0; k <= 5; ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g", half_sup(tr, dual_derivative(tr, s.zeta, k)));
      csv += buf;
    }
    csv += "\n";
  }
  write_text((fs::path(out) / "trajectory.csv").string(), csv);

  // a handful of profiles on x >= 0, every 4th node out to x = 20
  std::string prof = "tau,x,zeta\n";
  for (std::size_t n = 0; n < tr.snaps.size(); n += std::max<std::size_t>(1, tr.snaps.size() / 8)) {
    const auto& s = tr.snaps[n];
    for (std::size_t i = tr.origin(); i < tr.x.size() && tr.x[i] <= 20.0; i += 4) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.tau, tr.x[i], s.zeta[i]);
      prof += buf;
    }
  }
  write_text((fs::path(out) / "profiles.csv").string(), prof);

  bool ok = rep.all_finite();
  for (const auto& r : rep.rows)
    std::fprintf(stderr, "  %-18s %-10s sup %-12s at tau %s\n", r.estimate_id.c_str(), r.weight.c_str(),
                 num(r.scaled_sup).c_str(), num(r.argmax_tau).c_str());
  if (dual_case == 'M') {
    const Kink kink(Potential::canonical());
    std::vector<RatioReport> pairing;
    for (double c : {0.25, 0.5, 1.0}) pairing.push_back(dual_moment_pairing(tr, kink, c));
    write_text((fs::path(out) / "pairing.json").string(), reports_to_json(pairing));
    summarize(pairing);
    ok = ok && !breached(pairing);
  }
  std::fprintf(stderr, "max odd defect %s over %d steps\n", num(tr.max_odd_defect).c_str(), tr.steps);
  return ok ? kOk : kBreach;
}

int cmd_presets(bool list, const std::string& write_dir) {
  if (!write_dir.empty()) {
    std::error_code ec;
    fs::create_directories(write_dir, ec);
    for (const auto& p : preset_list())
      write_text((fs::path(write_dir) / (p.name + ".json")).string(), config_to_json(builtin_preset(p.name)));
  }
  if (list || write_dir.empty())
    for (const auto& p : preset_list()) std::printf("%-24s %s\n", p.name.c_str(), p.description.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kink relaxation lab"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "run one or more experiments");
  std::vector<std::string> sim_configs;
  std::string sim_out = "out";
  double sim_T = 0.0;
  sim->add_option("--config", sim_configs, "config file or preset name (repeatable)")->required();
  sim->add_option("--out", sim_out, "output directory");
  sim->add_option("--T", sim_T, "override the final time");

  auto* ver = app.add_subcommand("verify", "run a verification suite on a trajectory CSV");
  std::string ver_traj, ver_suite = "all", ver_out = "report.json", ver_case;
  ver->add_option("--traj", ver_traj, "trajectory CSV")->required();
  ver->add_option("--suite", ver_suite, "suite name (default: all)");
  ver->add_option("--out", ver_out, "report JSON file");
  ver->add_option("--case", ver_case, "i | ii | none (default: from config.json next to the CSV)");

  auto* ker = app.add_subcommand("kernels", "kernel-lab tables");
  std::string ker_suite = "all", ker_out = "kernels.json";
  bool ker_refine = false;
  ker->add_option("--suite", ker_suite, "norms | poisson | moments | all");
  ker->add_option("--out", ker_out, "JSON file");
  ker->add_flag("--refine", ker_refine, "repeat at the refined level and report drift");

  auto* dual = app.add_subcommand("dual", "dual-problem estimates");
  std::string dual_case = "M", dual_config, dual_out = "dual";
  dual->add_option("--case", dual_case, "M (fixed half-line) | V (moving boundary)")->check(CLI::IsMember({"M", "V"}));
  dual->add_option("--config", dual_config, "JSON with DualConfig keys; defaults otherwise");
  dual->add_option("--out", dual_out, "output directory");

  auto* rates = app.add_subcommand("rates", "log-log rate fit");
  std::string rates_traj, rates_series = "energy_gap", rates_window = "50:500", rates_out;
  rates->add_option("--traj", rates_traj, "trajectory CSV")->required();
  rates->add_option("--series", rates_series, "column to fit");
  rates->add_option("--window", rates_window, "a:b");
  rates->add_option("--out", rates_out, "JSON file (default: stdout)");

  auto* pre = app.add_subcommand("presets", "shipped experiment presets");
  bool pre_list = false;
  std::string pre_write;
  pre->add_flag("--list", pre_list, "print the shipped presets");
  pre->add_option("--write", pre_write, "write every preset as JSON into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) return cmd_simulate(sim_configs, sim_out, sim_T);
    if (*ver) return cmd_verify(ver_traj, ver_suite, ver_out, ver_case);
    if (*ker) return cmd_kernels(ker_suite, ker_out, ker_refine);
    if (*dual) return cmd_dual(dual_case[0], dual_config, dual_out);
    if (*rates) return cmd_rates(rates_traj, rates_series, rates_window, rates_out);
    if (*pre) return cmd_presets(pre_list, pre_write);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == ErrorKind::Config ? kUsage : kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  }
  return kUsage;
}
