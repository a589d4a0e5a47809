#include "kinkflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "kinkflow/error.hpp"
#include "kinkflow/numerics.hpp"

namespace kinkflow {

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw config_error("bad-dt", "dt must be positive");
  if (!(S >= 0.0)) throw config_error("bad-stabilisation", "S must be non-negative");
  if (T_final != 0.0 && !(T_final >= dt)) throw config_error("bad-horizon", "T_final must be 0 or >= dt");
  if (!(output_stride > 0.0)) throw config_error("bad-stride", "output_stride must be positive");
}

namespace {

double mexican_hat(double x, double x0, double w) {
  const double y = (x - x0) / w;
  return std::exp(-y * y) - 0.5 * std::exp(-0.25 * y * y);
}

double gaussian(double x, double x0, double w) {
  const double y = (x - x0) / w;
  return std::exp(-y * y);
}

// Removes the discrete mass with a multiple of a localised profile phi.
void project_mass(std::vector<double>& w, const std::vector<double>& phi, double dx) {
  const double m = trapezoid(w, dx);
  const double p = trapezoid(phi, dx);
  if (m == 0.0) return;
  if (std::abs(p) < 1e-300) throw config_error("mass-not-zero", "cannot project mass");
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= m / p * phi[i];
}

}  // namespace

FieldState make_initial_data(const InitialDataSpec& spec, const Grid1D& grid, const Kink& kink,
                             InitialReport* report) {
  const auto& x = grid.nodes();
  const std::size_t n = x.size();
  const double dx = grid.dx();
  std::vector<double> w(n, 0.0), phi(n, 0.0);
  if (!(spec.width > 0.0)) throw config_error("bad-width", "width must be positive");

  const std::string& fam = spec.family;
  if (fam == "none") {
  } else if (fam == "bump") {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = spec.amplitude * mexican_hat(x[i], spec.center, spec.width);
      phi[i] = gaussian(x[i], spec.center, spec.width);
    }
  } else if (fam == "gaussian") {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = spec.amplitude * gaussian(x[i], spec.center, spec.width);
      phi[i] = gaussian(x[i], spec.center, 2.0 * spec.width);
    }
  } else if (fam == "two-bump") {
    if (!(spec.separation > 0.0)) throw config_error("bad-separation", "two-bump needs separation > 0");
    const double a = spec.center - 0.5 * spec.separation, b = spec.center + 0.5 * spec.separation;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = spec.amplitude * (gaussian(x[i], a, spec.width) - gaussian(x[i], b, spec.width));
      phi[i] = gaussian(x[i], a, spec.width) + gaussian(x[i], b, spec.width);
    }
  } else if (fam == "shifted-kink-plus-bump") {
    // bump carries mass 2 c0, cancelling int (v_{c0} - v) = -2 c0
    const double amp = 2.0 * spec.shift / (spec.width * std::sqrt(M_PI));
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = kink.v(x[i] - spec.shift) - kink.v(x[i]) + amp * gaussian(x[i], spec.center, spec.width) +
             spec.amplitude * mexican_hat(x[i], spec.center, spec.width);
      phi[i] = gaussian(x[i], spec.center, spec.width);
    }
  } else if (fam == "random-bumps") {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> pos(spec.center - 0.5 * spec.separation, spec.center + 0.5 * spec.separation);
    std::uniform_real_distribution<double> amp(-spec.amplitude, spec.amplitude);
    for (int b = 0; b < spec.count; ++b) {
      const double x0 = pos(rng), a = amp(rng);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] += a * mexican_hat(x[i], x0, spec.width);
        phi[i] += gaussian(x[i], x0, spec.width);
      }
    }
  } else {
    throw config_error("unknown-family", "initial-data family '" + fam + "'");
  }
  if (fam != "none") project_mass(w, phi, dx);

  FieldState s(grid, 0.0, std::move(w));
  const double mass = trapezoid(s.w, dx);
  if (std::abs(mass) > 1e-10) throw config_error("mass-not-zero", "int w0 = " + num(mass));
  s.check_truncation();

  Diagnostics diag(kink, grid);
  const double E0 = diag.energy_gap(s);
  const double margin = 2.0 * kink.e_star() - E0;
  if (report) *report = {E0, margin, mass};
  if (margin < spec.energy_margin)
    throw config_error("energy-condition-violated",
                       "E0 = " + num(E0) + ", 2e* - E0 = " + num(margin));
  return s;
}

Stepper::Stepper(const Kink& k, const Grid1D& g, double dt, double S) : kink_(&k), grid_(g), dt_(dt), S_(S) {
  const std::size_t n = g.size();
  A_ = neumann_laplacian(n, g.dx());
  const Penta A2 = multiply(A_, A_);
  Penta op = linear_combination(dt, A2, -dt * S, A_);
  for (std::size_t i = 0; i < n; ++i) op.band[i][2] += 1.0;
  lu_ = PentaLU(std::move(op));
  v_.resize(n);
  Gp_v_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    v_[i] = k.v(g.x(i));
    Gp_v_[i] = k.potential().dG(v_[i]);
  }
}

void Stepper::step(FieldState& s, double blowup) const {
  const std::size_t n = s.w.size();
  const auto& G = kink_->potential();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = G.dG(v_[i] + s.w[i]) - Gp_v_[i] - S_ * s.w[i];
  r = A_.apply(r);
  for (std::size_t i = 0; i < n; ++i) r[i] = s.w[i] + dt_ * r[i];
  s.w = lu_.solve(std::move(r));
  s.t += dt_;
  double m = 0.0;
  for (double v : s.w) {
    if (!std::isfinite(v)) { m = INFINITY; break; }
    m = std::max(m, std::abs(v));
  }
  if (m > blowup) throw numerical_error("blow-up", "max|w| = " + num(m) + " at t = " + num(s.t));
}

FieldState step(const FieldState& s, const Kink& k, const SolverConfig& cfg) {
  cfg.validate();
  Stepper st(k, s.grid, cfg.dt, cfg.S);
  FieldState out = s;
  st.step(out, cfg.blowup);
  return out;
}

std::vector<double> output_times(const SolverConfig& cfg) {
  std::vector<double> t{0.0};
  if (cfg.T_final <= 0.0) return t;
  if (cfg.early_per_decade > 0 && cfg.output_stride > cfg.dt) {
    for (double s : log_grid(cfg.dt, cfg.output_stride, cfg.early_per_decade))
      if (s < cfg.output_stride && s <= cfg.T_final) t.push_back(s);
  }
  const long n = long(std::floor(cfg.T_final / cfg.output_stride + 1e-9));
  for (long k = 1; k <= n; ++k) t.push_back(k * cfg.output_stride);
  if (t.back() < cfg.T_final - 1e-9 * cfg.T_final) t.push_back(cfg.T_final);
  // snap to the step lattice and drop duplicates
  for (auto& s : t) s = std::round(s / cfg.dt) * cfg.dt;
  t.erase(std::unique(t.begin(), t.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), t.end());
  return t;
}

Trajectory run(const FieldState& s0, const Kink& kink, const SolverConfig& cfg, const StandInCurve& curve,
               const RecordSink& sink) {
  cfg.validate();
  const Grid1D& g = s0.grid;
  Diagnostics diag(kink, g);
  Stepper st(kink, g, cfg.dt, cfg.S);
  Trajectory traj;
  traj.grid = g;
  traj.T_final = cfg.T_final;
  traj.dt = cfg.dt;
  traj.mass0 = trapezoid(s0.w, g.dx());

  FieldState s = s0;
  long step_index = 0;
  double c_guess = 0.0;
  double last_energy = INFINITY;
  for (double target : output_times(cfg)) {
    const long target_step = long(std::llround(target / cfg.dt));
    try {
      while (step_index < target_step) {
        st.step(s, cfg.blowup);
        ++step_index;
      }
      s.t = step_index * cfg.dt;
      s.check_truncation(cfg.truncation_tol);
      TrajectoryPoint p;
      p.rec = diag.record(s, c_guess, curve, &p.obs);
      c_guess = p.rec.shift_c;
      traj.max_mass_drift = std::max(traj.max_mass_drift, std::abs(p.rec.mass_defect - traj.mass0));
      const double E = p.rec.energy_gap;
      if (E > last_energy + 1e-9 * std::max(1.0, std::abs(last_energy)) + 1e-13)
        throw numerical_error("energy-increase",
                              "E rose from " + num(last_energy) + " to " + num(E));
      last_energy = std::min(last_energy, E);
      if (cfg.keep_states) p.w = s.w;
      if (sink) sink(p);
      traj.points.push_back(std::move(p));
    } catch (const Error& e) {
      throw Error(e.kind(), e.code(), e.message() + " (t = " + num(s.t) + ")");
    }
  }
  return traj;
}

IdentityDefect identity_defect(const FieldState& s0, const Kink& kink, double dt, double S,
                               const std::vector<double>& sample_times) {
  Diagnostics diag(kink, s0.grid);
  Stepper st(kink, s0.grid, dt, S);
  IdentityDefect out;
  FieldState s = s0;
  long k = 0;
  for (double t : sample_times) {
    const long target = long(std::llround(t / dt));
    while (k < target) {
      st.step(s);
      ++k;
    }
    const double E0 = diag.energy_gap(s);
    const double D0 = diag.dissipation(s);
    FieldState next = s;
    st.step(next);
    const double E1 = diag.energy_gap(next);
    const double rel = std::abs((E1 - E0) / dt + D0) / D0;
    out.t.push_back(k * dt);
    out.rel.push_back(rel);
    if (rel > out.max_rel) {
      out.max_rel = rel;
      out.argmax_t = k * dt;
    }
  }
  return out;
}

}  // namespace kinkflow
