#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kinkflow/inequality.hpp"
#include "kinkflow/kink.hpp"

namespace kinkflow {

// Terminal data on the half-line, always extended oddly through x = 0.
//   "tanh-slope": tanh(s x)/s, |g_x| <= 1 with equality at 0 (M-case extremal member)
//   "plateau":    tanh(x / width), |g| <= 1 (V-case)
//   "odd-bump":   amplitude * x/width * e^{1/2 - x^2/(2 width^2)}, peak |g| = amplitude
//   "linear":     x (unbounded; short-time checks only)
//   "zero"
struct TerminalData {
  std::string family = "tanh-slope";
  double slope = 1.0;
  double width = 1.0;
  double amplitude = 1.0;

  double operator()(double x) const;
  void validate(char dual_case) const;
};

struct DualConfig {
  char dual_case = 'M';  // M: fixed half-line, V: moving boundary
  double T = 100.0;
  TerminalData g;
  double half_width = 150.0;
  double dx = 0.02;
  double kappa = 2.0;      // coefficient of the second-order term, G''(1) for the M-case
  double dt_frac = 0.02;   // dt = dt_frac * tau, clamped below
  double dt_min = 1e-5;
  double dt_max = 1.0;
  double dt_fixed = 0.0;   // > 0 overrides the adaptive step
  double tau_min = 1e-3;
  int per_decade = 40;
  // moving boundary gamma(t) = c_T - C1 (t + Lambda)^{1/4}
  double C1 = 1.0;
  double Lambda = 16.0;
  double c_T = 0.0;
  double blowup = 10.0;

  void validate() const;
};

struct DualSnapshot {
  double tau = 0.0;
  std::vector<double> zeta;
  std::vector<double> rhs;  // explicit right-hand side at tau (forcing + advection); empty when zero
};

// Solution on the odd-reflected grid x_i = (i - n) dx, i = 0..2n.
struct DualTrajectory {
  std::vector<double> x;
  double dx = 0.0;
  double kappa = 0.0;
  char dual_case = 'M';
  double max_odd_defect = 0.0;  // before each symmetrisation
  int steps = 0;
  std::vector<DualSnapshot> snaps;
  std::size_t origin() const { return x.size() / 2; }
};

// Right-hand side on x > 0 (extended oddly); null for none.
using HalfLineSource = std::function<double(double t, double x)>;

// Backward Euler for z_t = kappa z_xx - z_xxxx + a(t) z_x + f on the reflected grid,
// advection and forcing taken explicitly. Snapshot times are 0 plus `times`.
DualTrajectory solve_reflected(const DualConfig& cfg, const std::vector<double>& zeta0,
                               const std::vector<double>& times, const HalfLineSource& source,
                               const std::function<double(double)>& advection);

DualTrajectory solve_dual_fixed(const DualConfig& cfg);
DualTrajectory solve_dual_moving(const DualConfig& cfg);

// gamma'(t) of the moving curve in transformed time.
double moving_speed(const DualConfig& cfg, double t);

struct DualEstimateRow {
  std::string estimate_id;
  std::string weight;
  int order = 0;
  double scaled_sup = 0.0;
  double argmax_tau = 0.0;
  double tail_slope = 0.0;  // log-log slope of the weighted norm over the last decade of tau
};

struct DualEstimateReport {
  char dual_case = 'M';
  std::vector<DualEstimateRow> rows;
  bool all_finite() const;
  const DualEstimateRow& row(const std::string& id) const;
};

// Fixed case: w(tau) ||d^k zeta(tau)||, k = 1..5. Moving case: w(tau) sup_{t >= tau} ||d^k zeta||, k = 0..4.
// Each weight tau^a v tau^b (max, the sharp reading) also appears with min in a "-wedge" row.
DualEstimateReport dual_fixed_estimates(const DualTrajectory& traj);
DualEstimateReport dual_moving_estimates(const DualTrajectory& traj);

// |int_{x<0} zeta_t (v_c - v)| against min((c^2+|c|)/tau, (tau^{-1/2} + tau^{-3/4})|c|).
RatioReport dual_moment_pairing(const DualTrajectory& traj, const Kink& kink, double c);

// d^k zeta on the grid: k <= 4 by central differences, 5..8 by differencing the 4th.
std::vector<double> dual_derivative(const DualTrajectory& traj, const std::vector<double>& f, int k);

// tau^power sup_{t >= tau} ||q(t)||_inf over the snapshot grid. Quantities:
// "x0".."x8", "t", "txx", "txxxx", "tt"; time derivatives come from the equation,
// composite ones only for unforced runs.
struct WeightedSupRow {
  std::string quantity;
  double power = 0.0;
  bool low_precision = false;
  std::vector<double> values;
  double sup = 0.0;
  double argmax_tau = 0.0;
};
struct WeightedSupTable {
  std::vector<double> taus;
  std::vector<WeightedSupRow> rows;
  const WeightedSupRow& row(const std::string& quantity, double power) const;
};
WeightedSupTable weighted_sup_profile(const DualTrajectory& traj, const std::vector<std::string>& quantities,
                                      const std::vector<double>& powers);

// Homogeneous half-line problem from bounded data:
// sup_tau (tau^2 ||v_8x, v_6x, v_txxxx, v_xxxx, v_txx, v_tt|| + tau ||v_xxxx, v_xx, v_t|| + ||v||) / ||g||.
RatioReport verify_lemma_v(const DualConfig& cfg);
// Zero data, forcing g_x with g = (1+t)^{-2} x^2 e^{-x^2}; left over right side of the
// weighted bound with the (tau^{1/2} ^ tau^{3/4}) factor.
RatioReport verify_lemma_u(const DualConfig& cfg);

struct SchauderConfig {
  std::string forcing = "gaussian";  // gaussian | time-only | zero
  double alpha = 0.15;
  double t0 = 5.0;      // forcing centre in time
  double t_end = 10.0;
  double x_window = 6.0;
  double half_width = 40.0;
  double dx = 0.05;     // must divide x_window / nx
  double dt = 0.01;
  std::size_t nt = 60, nx = 60;
};
struct SchauderResult {
  RatioReport report;
  double semi_u4 = 0.0, semi_u2 = 0.0, semi_ut = 0.0, semi_f = 0.0;
};
SchauderResult verify_schauder(const SchauderConfig& cfg);

}  // namespace kinkflow
