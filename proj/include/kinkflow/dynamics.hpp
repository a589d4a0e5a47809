#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kinkflow/banded.hpp"
#include "kinkflow/diagnostics.hpp"
#include "kinkflow/grid.hpp"
#include "kinkflow/kink.hpp"

namespace kinkflow {

struct SolverConfig {
  double dt = 0.05;
  double S = 2.0;  // linear stabilisation
  double T_final = 0.0;
  double output_stride = 1.0;
  int early_per_decade = 0;  // extra log-spaced records on [dt, output_stride)
  double truncation_tol = 1e-9;
  double blowup = 10.0;
  bool keep_states = true;

  void validate() const;
};

// Families: "bump" (mexican hat, mass zero by construction), "gaussian"
// (plain gaussian, projected to mass zero), "two-bump" (+/- gaussians at
// -R/2 and +R/2), "shifted-kink-plus-bump" (v_{c0} - v plus a gaussian of
// mass 2 c0), "random-bumps" (seeded superposition of mexican hats), "none".
struct InitialDataSpec {
  std::string family = "bump";
  double amplitude = 0.0;
  double width = 1.0;
  double center = 0.0;
  double separation = 0.0;
  double shift = 0.0;
  int count = 3;
  std::uint64_t seed = 1;
  double energy_margin = 0.05;  // required 2e* - E_0
};

struct InitialReport {
  double energy_gap = 0.0;
  double margin = 0.0;  // 2e* - E_0
  double mass = 0.0;
};

FieldState make_initial_data(const InitialDataSpec& spec, const Grid1D& grid, const Kink& kink,
                             InitialReport* report = nullptr);

// IMEX stepping for w = u - v:
//   (I + dt (A^2 - S A)) w^{n+1} = w^n + dt A (N(w^n) - S w^n),
// N(w) = G'(v + w) - G'(v), A the mirrored-ghost second difference.
class Stepper {
 public:
  Stepper(const Kink& k, const Grid1D& g, double dt, double S);

  // Advances in place; throws blow-up when max|w| exceeds the guard.
  void step(FieldState& s, double blowup = 10.0) const;
  double dt() const { return dt_; }
  const Penta& laplacian() const { return A_; }

 private:
  const Kink* kink_;
  Grid1D grid_;
  double dt_, S_;
  Penta A_;
  PentaLU lu_;
  std::vector<double> Gp_v_, v_;
};

FieldState step(const FieldState& s, const Kink& k, const SolverConfig& cfg);

struct TrajectoryPoint {
  DiagnosticsRecord rec;
  Observables obs;
  std::vector<double> w;  // empty unless keep_states
};

struct Trajectory {
  Grid1D grid;
  double T_final = 0.0;
  double dt = 0.0;
  double mass0 = 0.0;
  double max_mass_drift = 0.0;
  std::vector<TrajectoryPoint> points;
};

// Record times: 0, the early log grid, then every output_stride up to T_final.
std::vector<double> output_times(const SolverConfig& cfg);

using RecordSink = std::function<void(const TrajectoryPoint&)>;

// Integrates to T_final. Energies must be non-increasing up to a small
// relative slack; a violation is reported as energy-increase.
Trajectory run(const FieldState& s0, const Kink& kink, const SolverConfig& cfg, const StandInCurve& curve,
               const RecordSink& sink = {});

// Relative defect of the energy identity dE/dt = -D, sampled by single steps
// from a trajectory started at s0; returns max |(E(t+dt)-E(t))/dt + D(t)| / D(t)
// over the requested sample times.
struct IdentityDefect {
  double max_rel = 0.0;
  double argmax_t = 0.0;
  std::vector<double> t, rel;
};
IdentityDefect identity_defect(const FieldState& s0, const Kink& kink, double dt, double S,
                               const std::vector<double>& sample_times);

}  // namespace kinkflow
