#pragma once

#include <string>
#include <vector>

#include "kinkflow/inequality.hpp"

namespace kinkflow {

// Resolution knob: level 1 is the default, level 2 halves every spacing and
// doubles every node count (used for refinement drift).
struct KernelAccuracy {
  int level = 1;
};

// Second-order heat kernel (4 pi t)^{-1/2} exp(-x^2 / 4t) and its x-derivatives.
double heat_kernel(double t, double x, int k = 0);

// d^k/dx^k of the biharmonic heat kernel, (1/pi) int_0^inf xi^k cos(xi x + k pi/2) e^{-xi^4 t} dxi,
// by panel quadrature after rescaling to t = 1. k <= 5.
double biharmonic_kernel(double t, double x, int k = 0, KernelAccuracy acc = {});

// d^k/dx^k of H = H2 * H4 (the kernel of d_t - d_xx + d_xxxx), k <= 5.
double combined_kernel(double t, double x, int k = 0, KernelAccuracy acc = {});

// Independent Fourier-side value (1/pi) int_0^inf xi^k cos(xi x + k pi/2) e^{-(xi^2 + xi^4) t} dxi.
double combined_kernel_fourier(double t, double x, int k = 0);

// H_t = H_xx - H_xxxx.
double combined_kernel_t(double t, double x, KernelAccuracy acc = {});

// P(t, x) = -2 (H_x - H_xxx)(t, x) for x > 0, and its x-derivative.
double poisson_kernel(double t, double x, KernelAccuracy acc = {});
double poisson_kernel_x(double t, double x, KernelAccuracy acc = {});

// Closed-form remainder int_S^inf P(s, x) ds = (2/pi) int_0^inf sin(xi x)/xi e^{-xi^2 (1 + xi^2) S} dxi.
double poisson_tail(double S, double x);

struct PoissonMass {
  double integral = 0.0;  // int_0^inf P(s, x) ds
  double head = 0.0;      // quadrature part on (0, S]
  double tail = 0.0;      // Fourier remainder beyond S
  double S = 0.0;
};
PoissonMass poisson_mass(double x, KernelAccuracy acc = {});

// int_0^inf (|P| + x |P_x|) t^alpha dt / (x^4 ^ x^2)^alpha at a single x.
double poisson_weighted_ratio(double x, double alpha, KernelAccuracy acc = {});
RatioReport poisson_weighted_estimate(const std::vector<double>& xs, double alpha, KernelAccuracy acc = {});

// Profile of a kernel on a symmetric grid adapted to its natural length scale.
struct KernelSample {
  std::string kernel;  // H2 | H4 | H | P
  int k = 0;
  double t = 0.0;
  std::vector<double> x, values;
};
KernelSample kernel_profile(const std::string& kernel, double t, int k, KernelAccuracy acc = {});

struct KernelNormRow {
  std::string kernel;
  int k = 0;
  double t = 0.0;
  double l1 = 0.0;
  double scaled_small_t = 0.0;  // t^{k/4} l1 (t <= 1 rows)
  double scaled_large_t = 0.0;  // t^{k/2} l1 (t >= 1 rows)
  double beta = 0.0;
  double moment = 0.0;
};
using KernelNormTable = std::vector<KernelNormRow>;

// ||d^k kernel(t,.)||_1 over the t grid.
KernelNormTable kernel_norm_table(const std::string& kernel, int k_lo, int k_hi, const std::vector<double>& ts,
                                  KernelAccuracy acc = {});

// int |d^k H| |x|^beta dx, plus the composite moments
//   int |H_t| (x^4 ^ x^2)^alpha, int |H_tt| (...)^alpha, int |H_tx| (...)^alpha
// in rows with kernel ids "H", "H_t", "H_tt", "H_tx".
KernelNormTable weighted_moment_table(int k, double beta, double alpha, const std::vector<double>& ts,
                                      KernelAccuracy acc = {});

// Scaled-norm suprema per derivative order: sup over t <= 1 of t^{k/4}||d^k H||_1
// and over t >= 1 of t^{k/2}||d^k H||_1.
struct ScalingSup {
  int k = 0;
  double small_t = 0.0;
  double large_t = 0.0;
};
std::vector<ScalingSup> kernel_scaling_sups(const KernelNormTable& table);

// Semigroup defect max_x |H2(s)*H2(t) - H2(s+t)| by quadrature.
double heat_semigroup_defect(double s, double t);

}  // namespace kinkflow
