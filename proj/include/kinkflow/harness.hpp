#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "kinkflow/dual.hpp"
#include "kinkflow/dynamics.hpp"
#include "kinkflow/inequality.hpp"
#include "kinkflow/kernels.hpp"

namespace kinkflow {

struct ExperimentConfig {
  std::string name = "custom";
  double L = 400.0;
  std::size_t N = 16384;
  SolverConfig solver;
  InitialDataSpec initial;
  double C1 = 0.0;  // 0: calibrate from the run
  double Lambda = 16.0;
  std::string data_case = "i";  // i | ii | none
  std::vector<std::string> suites = {"all"};

  void validate() const;
};

// JSON text <-> config. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

// A file path, or the name of a shipped preset (with or without ".json").
ExperimentConfig load_config(const std::string& path_or_preset);

struct PresetInfo {
  std::string name;
  std::string description;
};
std::vector<PresetInfo> preset_list();
ExperimentConfig builtin_preset(const std::string& name);
std::string preset_directory();

// --- rates -------------------------------------------------------------------
struct RateFit {
  std::string series;
  double t0 = 0.0, t1 = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int records = 0;
};

// Least squares on (log t, log y) over t in [t0, t1]; needs >= 10 records, y > 0.
RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& y, double t0, double t1,
                 const std::string& series = "");
RateFit fit_rate(const Trajectory& traj, const std::string& series, double t0, double t1);

// Slope checks are reported as |slope - mid| / half-width against ceiling 1.
RatioReport slope_check(const RateFit& fit, double lo, double hi, const std::string& ref);
// Envelope spread sup/inf against a ceiling.
RatioReport envelope_check(const Envelope& e, double ceiling, const std::string& ref);

struct CaseReport {
  std::string case_id;
  bool degenerate = false;
  double data_size = 0.0;  // M_0 or V_0
  double slowdown = 0.0;   // sup_t M/(M_0+1) or sup_t V/(V_0+1)
  std::vector<RateFit> fits;
  std::vector<Envelope> envelopes;
  std::vector<RatioReport> checks;
  bool pass() const;
};

// Window for long-time fits: [50, min(500, 0.9 T)].
std::pair<double, double> rate_window(const Trajectory& traj);
CaseReport case_i_report(const Trajectory& traj);
CaseReport case_ii_report(const Trajectory& traj);

// --- stand-in curve ----------------------------------------------------------
// C1 = 1 + max_t |c(T) - c(t)| / (T - t + Lambda)^{1/4}; needs the run's c series.
double calibrate_C1(const Trajectory& traj, double Lambda);
// Recomputes v_tilde (and m_tilde) of every stored state for the given curve.
void recompute_stand_ins(Trajectory& traj, const Kink& kink, const StandInCurve& curve);
// Times at which the shift jumps by more than `jump` between consecutive records.
std::vector<double> branch_switches(const Trajectory& traj, double jump = 0.25);

// --- suites ------------------------------------------------------------------
// Names: nash, equivalences, shift, l2, links, integral, identity, zero-motion,
// diff-D, V-lower, mass, case-i, case-ii, all. Suites that need per-record
// observables throw missing-observables when has_obs is false.
std::vector<RatioReport> run_suite(const Trajectory& traj, const std::string& suite, bool has_obs,
                                   const std::string& data_case = "i");

struct ExperimentResult {
  ExperimentConfig cfg;
  Trajectory traj;
  InitialReport initial;
  double C1 = 0.0;
  double c_T = 0.0;
  std::vector<double> branch_switch_times;
  std::vector<RatioReport> reports;
  bool pass() const;
};

// make_initial_data -> run -> C1 calibration -> suites; writes trajectory.csv,
// observables.csv, report.json and config.json when out_dir is non-empty.
// States are dropped after the stand-ins are recomputed unless keep_states.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir = "",
                                bool keep_states = false);

// --- I/O ---------------------------------------------------------------------
extern const char* const kTrajectoryHeader;
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
void write_observables_csv(const Trajectory& traj, const std::string& path);
// Reads records (and observables from a sibling observables.csv when present).
Trajectory read_trajectory_csv(const std::string& path, bool* has_obs = nullptr);

std::string reports_to_json(const std::vector<RatioReport>& reports);
std::string rate_fit_to_json(const RateFit& fit);
std::string kernel_rows_to_json(const KernelNormTable& rows);
std::string dual_rows_to_json(const DualEstimateReport& rep);
std::string case_report_to_json(const CaseReport& rep);
void write_text(const std::string& path, const std::string& text);

// Dual-lab config from JSON (same keys as DualConfig members; "case" = "M"|"V").
DualConfig parse_dual_config(const std::string& json_text, char dual_case);

// --- concurrency -------------------------------------------------------------
// KINKFLOW_THREADS caps the width; defaults to the hardware concurrency.
int thread_cap();

template <class T, class F>
auto parallel_map(const std::vector<T>& items, F f) -> std::vector<decltype(f(items.front()))> {
  using R = decltype(f(items.front()));
  std::vector<R> out(items.size());
  std::vector<std::exception_ptr> errs(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        out[i] = f(items[i]);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const std::size_t width = std::min<std::size_t>(std::size_t(thread_cap()), items.size());
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < width; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace kinkflow
