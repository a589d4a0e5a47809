#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kinkflow/dynamics.hpp"

namespace kinkflow {

struct RatioReport {
  std::string id;
  std::string paper_ref;  // the inequality in words/formula
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double argmax_t = 0.0;
  int samples = 0;
  int excluded = 0;
  double drift_pct = std::numeric_limits<double>::quiet_NaN();
  double ceiling = std::numeric_limits<double>::infinity();
  bool degenerate = false;
  bool pass = false;
};

// Running max/min of num/den; records with den below the floor are excluded.
class RatioScan {
 public:
  explicit RatioScan(double floor = 1e-12) : floor_(floor) {}
  void add(double t, double num, double den);
  void add_ratio(double t, double ratio);  // already-normalised sample
  RatioReport finish(const std::string& id, const std::string& ref, double ceiling) const;

 private:
  double floor_;
  double max_ = -std::numeric_limits<double>::infinity();
  double min_ = std::numeric_limits<double>::infinity();
  double argmax_ = 0.0;
  int samples_ = 0, excluded_ = 0;
  bool nonfinite_ = false;
};

// Sets drift_pct of `coarse` from a refined companion and re-evaluates pass
// against the drift limit (percent).
void apply_drift(RatioReport& coarse, const RatioReport& fine, double limit_pct);

// Default ceilings; calibrated values are looked up by id, generous otherwise.
double default_ceiling(const std::string& id);
// Ceiling of the energy-identity defect per unit time step.
extern const double kIdentityPerDt;

// --- trajectory suites -----------------------------------------------------
std::vector<RatioReport> verify_equivalences(const Trajectory& traj, double e_star, double eps = 0.05);
RatioReport verify_nash_M(const Trajectory& traj);
RatioReport verify_nash_V(const Trajectory& traj);
RatioReport verify_l2_holder(const Trajectory& traj);  // int f^2 <= sup|f| int|f|
std::vector<RatioReport> verify_shift_bounds(const Trajectory& traj);
RatioReport verify_integral_dissipation(const Trajectory& traj, double beta, char which);
RatioReport verify_gradient_flow_identity(const Trajectory& traj);
RatioReport verify_zero_motion(const Trajectory& traj, int pairs = 50, std::uint64_t seed = 7);
std::vector<RatioReport> verify_stand_in_links(const Trajectory& traj);
RatioReport verify_diff_ineq_D(const Trajectory& traj, double floor = 1e-8);
RatioReport verify_V_lower_bound(const Trajectory& traj);  // 2|c| <= V

// Envelope sup of y(t) t^p / scale over [t0, t1], with the max/min spread.
struct Envelope {
  std::string id;
  double sup = 0.0;
  double inf = 0.0;
  double variation = 0.0;  // sup / inf
  int samples = 0;
};
Envelope envelope(const Trajectory& traj, const std::string& series, double power, double scale, double t0,
                  double t1);
double series_value(const TrajectoryPoint& p, const std::string& series);

// Nash chain int F_x^2 <= C (int F_xx^2)^{3/5} (int |F|)^{4/5} on synthetic profiles.
RatioReport verify_nash_chain(int members = 20, double L = 60.0, std::size_t N = 6001);

// --- Hoelder seminorm --------------------------------------------------------
// Samples f(t_i, x_j) on a uniform space-time grid, row-major in t.
struct SpaceTimeSamples {
  std::vector<double> t, x;
  std::vector<double> f;  // f[i * x.size() + j]
  double at(std::size_t i, std::size_t j) const { return f[i * x.size() + j]; }
};

// sup |f(t+s, x+z) - f(t, x)| / (|s| + min(z^2, z^4))^alpha with s >= 0 and z
// of either sign (base point x). Exhaustive when the pair count fits the
// budget, otherwise stratified over log-spaced offsets in s and z.
struct HolderResult {
  double value = 0.0;
  long long pairs = 0;
  bool exhaustive = false;
};
HolderResult holder_seminorm(const SpaceTimeSamples& s, double alpha, long long budget = 1000000);
HolderResult holder_exhaustive(const SpaceTimeSamples& s, double alpha);
HolderResult holder_stratified(const SpaceTimeSamples& s, double alpha, long long budget);

// --- interpolation family ----------------------------------------------------
// Space-time function with closed-form derivatives d^kt/dt d^kx/dx (kt <= 1, kx <= 4).
struct SpaceTimeFunction {
  std::string name;
  std::function<double(int kt, int kx, double t, double x)> eval;
};

SpaceTimeFunction decaying_sine();                                        // e^{-t} sin x
SpaceTimeFunction gaussian_packet(double width, double speed, double rate, double x0);
std::vector<SpaceTimeFunction> packet_family(int members = 20);

struct InterpolationParams {
  double alpha = 0.2;
  double delta = 0.5;
  double tau = 1.0;
  double t_span = 20.0;  // sup over t in [tau, tau + t_span]
  double x_max = 20.0;
  std::size_t nt = 48, nx = 96;
  long long budget = 1000000;
};

// Left/right ratios of the five interpolation inequalities for one function.
std::vector<double> interpolation_ratios(const SpaceTimeFunction& u, const InterpolationParams& p,
                                         bool* all_zero = nullptr);
std::vector<RatioReport> verify_interpolation(const std::vector<SpaceTimeFunction>& family,
                                              const std::vector<InterpolationParams>& params);
extern const char* const kInterpolationIds[5];

}  // namespace kinkflow
