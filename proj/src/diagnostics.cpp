#include "kinkflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kinkflow/error.hpp"
#include "kinkflow/numerics.hpp"
#include "kinkflow/spectral.hpp"

namespace kinkflow {

double StandInCurve::half_width(double t) const { return C1 * std::pow(std::max(T - t, 0.0) + Lambda, 0.25); }

Diagnostics::Diagnostics(const Kink& k, const Grid1D& g, double energy_margin)
    : kink_(k), grid_(g), margin_(energy_margin) {
  const auto& x = grid_.nodes();
  const std::size_t n = x.size();
  v_.resize(n);
  vx_.resize(n);
  G_v_.resize(n);
  d2G_v_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    v_[i] = kink_.v(x[i]);
    vx_[i] = kink_.vx(x[i]);
    G_v_[i] = kink_.potential().G(v_[i]);
    d2G_v_[i] = kink_.potential().d2G(v_[i]);
  }
}

Slopes Diagnostics::slopes(const FieldState& s) const {
  auto d = cosine_derivatives(s.w, grid_.dx(), {1, 2, 3});
  return {std::move(d[0]), std::move(d[1]), std::move(d[2])};
}

// E(u) - E(v): the kink's own share of the energy, including everything beyond
// +-L, equals e* in closed form and cancels, leaving an integrand that is
// supported where w is.
double Diagnostics::energy_gap(const FieldState& s, const Slopes& d) const {
  const auto& G = kink_.potential();
  std::vector<double> e(s.w.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double wx = d.wx[i];
    e[i] = vx_[i] * wx + 0.5 * wx * wx + (G.G(v_[i] + s.w[i]) - G_v_[i]);
  }
  return trapezoid(e, grid_.dx());
}

// mu_x = G''(u) u_x - u_xxx with v_xxx = G''(v) v_x.
double Diagnostics::dissipation(const FieldState& s, const Slopes& d) const {
  const auto& G = kink_.potential();
  std::vector<double> e(s.w.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double u = v_[i] + s.w[i];
    const double mux = G.d2G(u) * (vx_[i] + d.wx[i]) - d2G_v_[i] * vx_[i] - d.wxxx[i];
    e[i] = mux * mux;
  }
  return trapezoid(e, grid_.dx());
}

double Diagnostics::residual(const std::vector<double>& u, double c, double* slope) const {
  const auto& x = grid_.nodes();
  const auto& G = kink_.potential();
  const std::size_t n = x.size();
  std::vector<double> r(n), dr(slope ? n : 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double vc = kink_.v(x[i] - c);
    const double vcx = kink_.vx(x[i] - c);
    const double f = u[i] - vc;
    r[i] = f * vcx;
    if (slope) dr[i] = vcx * vcx - f * G.dG(vc);
  }
  if (slope) *slope = trapezoid(dr, grid_.dx());
  return trapezoid(r, grid_.dx());
}

std::vector<std::pair<double, double>> Diagnostics::shift_scan(const FieldState& s, int points) const {
  std::vector<double> u(s.w.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = v_[i] + s.w[i];
  std::vector<std::pair<double, double>> out;
  const double h = 0.5 * grid_.L();
  for (int k = 0; k < points; ++k) {
    const double c = -h + 2.0 * h * k / (points - 1);
    out.emplace_back(c, residual(u, c, nullptr));
  }
  return out;
}

ShiftResult Diagnostics::shift(const FieldState& s, double c_guess) const {
  std::vector<double> u(s.w.size());
  double f2 = 0.0, v2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = v_[i] + s.w[i];

  // nearest sign change from - to + (a local minimiser of |u - v_c|^2)
  const double step = 0.25;
  const double limit = 0.5 * grid_.L();
  double lo = 0.0, hi = 0.0;
  bool found = false;
  double r_right_prev = residual(u, c_guess, nullptr);
  double r_left_prev = r_right_prev;
  if (r_right_prev == 0.0) {
    lo = hi = c_guess;
    found = true;
  }
  for (int k = 1; !found && c_guess + (k - 1) * step <= limit + step; ++k) {
    const double cr = c_guess + k * step, cl = c_guess - k * step;
    const double rr = residual(u, cr, nullptr);
    const double rl = residual(u, cl, nullptr);
    const bool right = r_right_prev < 0.0 && rr >= 0.0;
    const bool left = rl <= 0.0 && r_left_prev > 0.0;
    if (right || left) {
      // prefer the side whose crossing is closer to the guess
      double dr = right ? (cr - step) + step * (-r_right_prev) / (rr - r_right_prev) - c_guess : 1e300;
      double dl = left ? c_guess - (cl + step * (-rl) / (r_left_prev - rl)) : 1e300;
      if (dr <= dl) {
        lo = cr - step;
        hi = cr;
      } else {
        lo = cl;
        hi = cl + step;
      }
      found = true;
    }
    r_right_prev = rr;
    r_left_prev = rl;
  }
  if (!found) {
    std::string scan;
    for (auto& [c, g] : shift_scan(s, 21)) scan += " (" + num(c) + "," + num(g) + ")";
    throw numerical_error("no-root-in-bracket", "no shift found near " + num(c_guess) + "; g(c):" + scan);
  }

  ShiftResult res;
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  double c = (lo == hi) ? lo : 0.5 * (lo + hi);
  if (lo != hi && std::abs(c_guess - lo) < std::abs(c - lo) && c_guess > lo && c_guess < hi) c = c_guess;
  double a = lo, b = hi;
  for (int it = 0; it < 100; ++it) {
    double slope = 0.0;
    const double r = residual(u, c, &slope);
    res.iterations = it + 1;
    res.c = c;
    res.residual = r;
    if (r < 0.0) a = c; else b = c;
    f2 = 0.0;
    v2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double f = u[i] - kink_.v(grid_.x(i) - c);
      f2 += f * f;
      v2 += vx_[i] * vx_[i];
    }
    const double tol = 1e-10 * std::sqrt(f2 * v2) * grid_.dx() + 1e-16;
    if (std::abs(r) <= tol || lo == hi) break;
    double next = (slope > 0.0) ? c - r / slope : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - c) < 1e-15 * (1.0 + std::abs(c))) {
      c = next;
      res.c = c;
      res.residual = residual(u, c, nullptr);
      break;
    }
    c = next;
  }
  return res;
}

double Diagnostics::excess_at(const FieldState& s, const Slopes& d, double c, double x) const {
  const std::size_t k = grid_.cell(x);
  const double h = grid_.dx();
  const double w = hermite_value(s.w[k], s.w[k + 1], d.wx[k], d.wx[k + 1], h, x - grid_.x(k));
  return w + kink_.v(x) - kink_.v(x - c);
}

ExcessFields Diagnostics::excess_fields(const FieldState& s, const Slopes& d, double c) const {
  const auto& x = grid_.nodes();
  const std::size_t n = x.size();
  const double h = grid_.dx();
  const double L = grid_.L();
  if (!(c > -L + h && c < L - h)) throw config_error("shift-outside-grid", "c=" + num(c));

  ExcessFields e;
  e.c = c;
  e.dx = h;
  e.f.resize(n);
  e.fx.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    e.f[i] = s.w[i] + v_[i] - kink_.v(x[i] - c);
    e.fx[i] = d.wx[i] + vx_[i] - kink_.vx(x[i] - c);
  }
  // kink tails of v - v_c beyond the grid
  const double left_anchor = kink_.tail_mass_minus(-L) - kink_.tail_mass_minus(-L - c);
  const double right_anchor = kink_.tail_mass_plus(L - c) - kink_.tail_mass_plus(L);
  std::vector<double> P = cumulative_integral(e.f, e.fx, h);
  for (auto& p : P) p += left_anchor;
  const double total = P.back() + right_anchor;

  e.cell = grid_.cell(c);
  e.x_cell = x[e.cell];
  const std::size_t k = e.cell;
  const double sc = c - x[k];
  e.f_at_c = hermite_value(s.w[k], s.w[k + 1], d.wx[k], d.wx[k + 1], h, sc) + kink_.v(c);
  e.fx_at_c = hermite_slope(s.w[k], s.w[k + 1], d.wx[k], d.wx[k + 1], h, sc) + kink_.vx(c) - kink_.vx(0.0);
  double partial = hermite_integral(s.w[k], s.w[k + 1], d.wx[k], d.wx[k + 1], h, 0.0, sc);
  const auto& gl = gauss_legendre(8);
  for (std::size_t j = 0; j < gl.x.size(); ++j) {
    const double y = x[k] + 0.5 * sc * (gl.x[j] + 1.0);
    partial += 0.5 * sc * gl.w[j] * (kink_.v(y) - kink_.v(y - c));
  }
  e.F_left_at_c = P[k] + partial;
  e.F_right_at_c = e.F_left_at_c - total;
  e.F.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.F[i] = (i <= k) ? P[i] : P[i] - total;
  return e;
}

double Diagnostics::first_moment(const ExcessFields& e) const {
  const std::size_t n = e.F.size();
  const double h = e.dx;
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (i == e.cell) continue;
    m += hermite_abs_integral(e.F[i], e.F[i + 1], e.f[i], e.f[i + 1], h, 0.0, h);
  }
  const std::size_t k = e.cell;
  const double a = e.c - e.x_cell;
  const double b = h - a;
  m += hermite_abs_integral(e.F[k], e.F_left_at_c, e.f[k], e.f_at_c, a, 0.0, a);
  m += hermite_abs_integral(e.F_right_at_c, e.F[k + 1], e.f_at_c, e.f[k + 1], b, 0.0, b);
  return m;
}

double Diagnostics::excess_mass(const ExcessFields& e) const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < e.f.size(); ++i)
    m += hermite_abs_integral(e.f[i], e.f[i + 1], e.fx[i], e.fx[i + 1], e.dx, 0.0, e.dx);
  return m;
}

double Diagnostics::sup_primitive(const ExcessFields& e) const {
  double s = std::max(std::abs(e.F_left_at_c), std::abs(e.F_right_at_c));
  for (double F : e.F) s = std::max(s, std::abs(F));
  return s;
}

StandIns Diagnostics::stand_ins(const FieldState& s, const Slopes& d, double gm, double gp) const {
  if (!(gm < gp)) throw config_error("bad-curves", "need gamma- < gamma+");
  const auto& x = grid_.nodes();
  const std::size_t n = x.size();
  const double h = grid_.dx();
  const double L = grid_.L();
  StandIns out;

  const std::vector<double> F = cumulative_integral(s.w, d.wx, h);
  for (std::size_t i = 0; i + 1 < n; ++i) out.m_tilde += hermite_abs_integral(F[i], F[i + 1], s.w[i], s.w[i + 1], h, 0.0, h);

  // |u + 1| left of gamma-, |u - 1| right of gamma+; beyond the grid only the kink tail remains
  auto side = [&](double sign, double gamma) {
    // sign = +1: int_{-inf}^{gamma} |u+1|; sign = -1: int_{gamma}^{inf} |u-1|
    double acc = 0.0;
    if (sign > 0) {
      if (gamma <= -L) return kink_.tail_mass_minus(gamma);
      acc = kink_.tail_mass_minus(-L);
      const double g = std::min(gamma, L);
      const std::size_t k = grid_.cell(g);
      for (std::size_t i = 0; i < k; ++i)
        acc += hermite_abs_integral(s.w[i] + v_[i] + 1.0, s.w[i + 1] + v_[i + 1] + 1.0, d.wx[i] + vx_[i],
                                    d.wx[i + 1] + vx_[i + 1], h, 0.0, h);
      acc += hermite_abs_integral(s.w[k] + v_[k] + 1.0, s.w[k + 1] + v_[k + 1] + 1.0, d.wx[k] + vx_[k],
                                  d.wx[k + 1] + vx_[k + 1], h, 0.0, g - x[k]);
      return acc;
    }
    if (gamma >= L) return kink_.tail_mass_plus(gamma);
    acc = kink_.tail_mass_plus(L);
    const double g = std::max(gamma, -L);
    const std::size_t k = grid_.cell(g);
    acc += hermite_abs_integral(s.w[k] + v_[k] - 1.0, s.w[k + 1] + v_[k + 1] - 1.0, d.wx[k] + vx_[k],
                                d.wx[k + 1] + vx_[k + 1], h, g - x[k], h);
    for (std::size_t i = k + 1; i + 1 < n; ++i)
      acc += hermite_abs_integral(s.w[i] + v_[i] - 1.0, s.w[i + 1] + v_[i + 1] - 1.0, d.wx[i] + vx_[i],
                                  d.wx[i + 1] + vx_[i + 1], h, 0.0, h);
    return acc;
  };
  out.v_tilde = side(+1.0, gm) + side(-1.0, gp);
  return out;
}

double Diagnostics::h_minus1_sq(const std::vector<double>& f, double tol) const {
  const double h = grid_.dx();
  const double mass = trapezoid(f, h);
  if (std::abs(mass) > tol) throw config_error("not-mean-zero", "int f = " + num(mass));
  auto fx = cosine_derivatives(f, h, {1});
  std::vector<double> F = cumulative_integral(f, fx[0], h);
  for (auto& v : F) v *= v;
  return trapezoid(F, h);
}

DiagnosticsRecord Diagnostics::record(const FieldState& s, double c_guess, const StandInCurve& curve,
                                      Observables* obs) const {
  const Slopes d = slopes(s);
  DiagnosticsRecord r;
  r.t = s.t;
  r.energy_gap = energy_gap(s, d);
  r.dissipation = dissipation(s, d);
  const ShiftResult sh = shift(s, c_guess);
  r.shift_c = sh.c;
  r.shift_iterations = sh.iterations;
  const ExcessFields e = excess_fields(s, d, sh.c);
  r.first_moment_M = first_moment(e);
  r.excess_mass_V = excess_mass(e);
  const double gm = std::min(curve.minus(s.t), sh.c - grid_.dx());
  const double gp = std::max(curve.plus(s.t), sh.c + grid_.dx());
  const StandIns si = stand_ins(s, d, gm, gp);
  r.m_tilde = si.m_tilde;
  r.v_tilde = si.v_tilde;
  double sup = 0.0;
  for (double f : e.f) sup = std::max(sup, std::abs(f));
  r.sup_fc = sup;
  r.mass_defect = trapezoid(s.w, grid_.dx());
  try {
    r.hm1_sq = h_minus1_sq(s.w);
  } catch (const Error&) {
    r.hm1_sq = std::numeric_limits<double>::quiet_NaN();
  }
  r.boundary_residual = s.boundary_residual();
  r.unreliable = r.energy_gap > 2.0 * kink_.e_star() - margin_;

  if (obs) {
    const auto& x = grid_.nodes();
    const auto& G = kink_.potential();
    const std::size_t n = x.size();
    std::vector<double> en(n), dn(n), l2(n), mom(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double y = x[i] - sh.c;
      const double vc = kink_.v(y), vcx = kink_.vx(y);
      const double fxx = d.wxx[i] + G.dG(v_[i]) - G.dG(vc);
      const double fxxx = d.wxxx[i] + d2G_v_[i] * vx_[i] - G.d2G(vc) * vcx;
      en[i] = e.f[i] * e.f[i] + e.fx[i] * e.fx[i];
      dn[i] = e.fx[i] * e.fx[i] + fxx * fxx + fxxx * fxxx;
      l2[i] = e.f[i] * e.f[i];
      mom[i] = std::abs(y) * std::abs(e.f[i]);
    }
    obs->t = s.t;
    obs->c = sh.c;
    obs->energy_norm = trapezoid(en, grid_.dx());
    obs->dissipation_norm = trapezoid(dn, grid_.dx());
    obs->l2_sq = trapezoid(l2, grid_.dx());
    obs->sup_fc = sup;
    obs->V = r.excess_mass_V;
    obs->M = r.first_moment_M;
    obs->f_at_0 = excess_at(s, d, sh.c, 0.0);
    obs->f_at_c = e.f_at_c;
    obs->sup_F = sup_primitive(e);
    obs->jump = e.F_left_at_c - e.F_right_at_c;
    obs->moment_xc = trapezoid(mom, grid_.dx());
  }
  return r;
}

}  // namespace kinkflow
