#pragma once

#include <cstddef>
#include <vector>

#include "kinkflow/grid.hpp"
#include "kinkflow/kink.hpp"

namespace kinkflow {

struct ShiftResult {
  double c = 0.0;
  double residual = 0.0;  // int (u - v_c) v_{c,x}
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// f_c = u - v_c with its slope, and the piecewise primitive F_c that jumps at c.
struct ExcessFields {
  double c = 0.0;
  double dx = 0.0;
  std::size_t cell = 0;  // x_cell <= c < x_{cell+1}
  double x_cell = 0.0;
  std::vector<double> f, fx, F;
  double f_at_c = 0.0, fx_at_c = 0.0;
  double F_left_at_c = 0.0;   // F_c(c-)
  double F_right_at_c = 0.0;  // F_c(c+)
};

struct StandIns {
  double m_tilde = 0.0;
  double v_tilde = 0.0;
};

// gamma_-(t) = c_ref - C1 (T - t + Lambda)^{1/4}, gamma_+ symmetric.
struct StandInCurve {
  double c_ref = 0.0;
  double C1 = 1.0;
  double Lambda = 16.0;
  double T = 0.0;
  double half_width(double t) const;
  double minus(double t) const { return c_ref - half_width(t); }
  double plus(double t) const { return c_ref + half_width(t); }
};

struct DiagnosticsRecord {
  double t = 0.0;
  double energy_gap = 0.0;
  double dissipation = 0.0;
  double shift_c = 0.0;
  double first_moment_M = 0.0;
  double excess_mass_V = 0.0;
  double m_tilde = 0.0;
  double v_tilde = 0.0;
  double sup_fc = 0.0;
  double mass_defect = 0.0;
  double hm1_sq = 0.0;  // NaN when the disturbance is not mean-zero
  // not part of the CSV row
  int shift_iterations = 0;
  double boundary_residual = 0.0;
  bool unreliable = false;  // energy above 2e* - eps
};

// Extra per-record quantities the inequality checks need.
struct Observables {
  double t = 0.0;
  double c = 0.0;
  double energy_norm = 0.0;       // int f_c^2 + f_cx^2
  double dissipation_norm = 0.0;  // int f_cx^2 + f_cxx^2 + f_cxxx^2
  double l2_sq = 0.0;             // int f_c^2
  double sup_fc = 0.0;
  double V = 0.0;
  double M = 0.0;
  double f_at_0 = 0.0;
  double f_at_c = 0.0;
  double sup_F = 0.0;
  double jump = 0.0;        // F_c(c-) - F_c(c+)
  double moment_xc = 0.0;   // int |x - c| |f_c|
};

// Node derivatives of w (cosine series).
struct Slopes {
  std::vector<double> wx, wxx, wxxx;
};

class Diagnostics {
 public:
  Diagnostics(const Kink& k, const Grid1D& g, double energy_margin = 0.05);

  const Grid1D& grid() const { return grid_; }
  const Kink& kink() const { return kink_; }

  Slopes slopes(const FieldState& s) const;

  double energy_gap(const FieldState& s) const { return energy_gap(s, slopes(s)); }
  double energy_gap(const FieldState& s, const Slopes& d) const;
  double dissipation(const FieldState& s) const { return dissipation(s, slopes(s)); }
  double dissipation(const FieldState& s, const Slopes& d) const;

  ShiftResult shift(const FieldState& s, double c_guess) const;
  // g(c) = int (u - v_c) v_{c,x} on a grid of c values (the no-root diagnostic)
  std::vector<std::pair<double, double>> shift_scan(const FieldState& s, int points = 401) const;

  ExcessFields excess_fields(const FieldState& s, double c) const { return excess_fields(s, slopes(s), c); }
  ExcessFields excess_fields(const FieldState& s, const Slopes& d, double c) const;
  double first_moment(const ExcessFields& e) const;
  double excess_mass(const ExcessFields& e) const;
  double sup_primitive(const ExcessFields& e) const;

  StandIns stand_ins(const FieldState& s, double gamma_minus, double gamma_plus) const {
    return stand_ins(s, slopes(s), gamma_minus, gamma_plus);
  }
  StandIns stand_ins(const FieldState& s, const Slopes& d, double gamma_minus, double gamma_plus) const;

  // int F^2 with F the primitive of f; throws not-mean-zero if |int f| > tol.
  double h_minus1_sq(const std::vector<double>& f, double tol = 1e-8) const;

  DiagnosticsRecord record(const FieldState& s, double c_guess, const StandInCurve& curve,
                           Observables* obs = nullptr) const;

  // Value of f_c at an arbitrary point (Hermite interpolation of w, exact kinks).
  double excess_at(const FieldState& s, const Slopes& d, double c, double x) const;

 private:
  double residual(const std::vector<double>& u, double c, double* slope) const;

  Kink kink_;
  Grid1D grid_;
  double margin_;
  std::vector<double> v_, vx_, G_v_, d2G_v_;
};

}  // namespace kinkflow
