#include "kinkflow/dual.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "kinkflow/banded.hpp"
#include "kinkflow/error.hpp"
#include "kinkflow/numerics.hpp"

namespace kinkflow {

double TerminalData::operator()(double x) const {
  if (family == "tanh-slope") return std::tanh(slope * x) / slope;
  if (family == "plateau") return std::tanh(x / width);
  if (family == "odd-bump") return amplitude * x / width * std::exp(0.5 - 0.5 * x * x / (width * width));
  if (family == "linear") return x;
  if (family == "zero") return 0.0;
  throw config_error("unknown-terminal", "no terminal family '" + family + "'");
}

void TerminalData::validate(char dual_case) const {
  (void)(*this)(0.0);
  if (family == "tanh-slope" && !(slope > 0.0)) throw config_error("bad-terminal", "slope must be positive");
  if ((family == "plateau" || family == "odd-bump") && !(width > 0.0))
    throw config_error("bad-terminal", "width must be positive");
  // |g_x| <= 1 for the M-case, |g| <= 1 for the V-case
  if (dual_case == 'M' && family == "odd-bump" && std::abs(amplitude) * std::exp(0.5) / width > 1.0 + 1e-12)
    throw config_error("bad-terminal", "M-case data needs |g_x| <= 1");
  if (dual_case == 'V') {
    if (family == "odd-bump" && std::abs(amplitude) > 1.0 + 1e-12)
      throw config_error("bad-terminal", "V-case data needs |g| <= 1");
    if (family == "linear" || (family == "tanh-slope" && slope < 1.0))
      throw config_error("bad-terminal", "V-case data needs |g| <= 1");
  }
}

void DualConfig::validate() const {
  if (dual_case != 'M' && dual_case != 'V') throw config_error("bad-case", "dual case must be M or V");
  if (!(T > 0.0)) throw config_error("bad-horizon", "T must be positive");
  if (!(dx > 0.0) || !(half_width > 20.0 * dx)) throw config_error("bad-grid", "need half_width > 20 dx > 0");
  if (!(dt_min > 0.0) || !(dt_max >= dt_min) || dt_fixed < 0.0) throw config_error("bad-step", "inconsistent dt limits");
  if (!(tau_min > 0.0) || tau_min >= T) throw config_error("bad-tau-grid", "need 0 < tau_min < T");
  if (per_decade < 1) throw config_error("bad-tau-grid", "per_decade must be >= 1");
  if (dual_case == 'V' && !(Lambda >= 1.0)) throw config_error("bad-lambda", "Lambda must be >= 1");
  if (C1 < 0.0) throw config_error("bad-c1", "C1 must be non-negative");
  g.validate(dual_case);
}

double moving_speed(const DualConfig& cfg, double t) {
  return -0.25 * cfg.C1 * std::pow(t + cfg.Lambda, -0.75);
}

namespace {

std::vector<double> reflected_nodes(double X, double dx, double* dx_out) {
  const std::size_t n = std::size_t(std::llround(X / dx));
  std::vector<double> x(2 * n + 1);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (double(i) - double(n)) * dx;
  if (dx_out) *dx_out = dx;
  return x;
}

double odd_value(const HalfLineSource& f, double t, double x) {
  if (x > 0.0) return f(t, x);
  if (x < 0.0) return -f(t, -x);
  return 0.0;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

}  // namespace

DualTrajectory solve_reflected(const DualConfig& cfg, const std::vector<double>& zeta0,
                               const std::vector<double>& times, const HalfLineSource& source,
                               const std::function<double(double)>& advection) {
  DualTrajectory tr;
  tr.x = reflected_nodes(cfg.half_width, cfg.dx, &tr.dx);
  tr.kappa = cfg.kappa;
  tr.dual_case = cfg.dual_case;
  const std::size_t N = tr.x.size();
  if (zeta0.size() != N) throw config_error("bad-state", "initial profile does not match the reflected grid");

  const Penta A = neumann_laplacian(N, tr.dx);
  const Penta L = linear_combination(1.0, multiply(A, A), -cfg.kappa, A);
  const Penta I = identity_penta(N);
  const double guard = cfg.blowup * (1.0 + sup_abs(zeta0));

  auto explicit_rhs = [&](double t, const std::vector<double>& z, double t_force) {
    std::vector<double> r;
    const double a = advection ? advection(t) : 0.0;
    if (a != 0.0) {
      const auto zx = spatial_derivative(z, 1, tr.dx);
      r.resize(N);
      for (std::size_t i = 0; i < N; ++i) r[i] = a * (tr.x[i] > 0 ? 1.0 : tr.x[i] < 0 ? -1.0 : 0.0) * zx[i];
    }
    if (source) {
      r.resize(N, 0.0);
      for (std::size_t i = 0; i < N; ++i) r[i] += odd_value(source, t_force, tr.x[i]);
    }
    return r;
  };

  std::vector<double> z = zeta0;
  double t = 0.0;
  tr.snaps.push_back({0.0, z, explicit_rhs(0.0, z, 0.0)});

  PentaLU lu;
  double last_dt = -1.0;
  for (double target : times) {
    if (target <= t) continue;
    while (t < target * (1.0 - 1e-12)) {
      double dt = cfg.dt_fixed > 0.0 ? cfg.dt_fixed : std::clamp(cfg.dt_frac * t, cfg.dt_min, cfg.dt_max);
      if (advection) {
        const double a = std::abs(advection(t));
        if (a > 0.0) dt = std::min(dt, 0.5 * tr.dx / a);
      }
      if (t + dt * (1.0 + 1e-9) >= target) dt = target - t;
      if (std::abs(dt - last_dt) > 1e-12 * dt) {
        lu = PentaLU(linear_combination(1.0, I, dt, L));
        last_dt = dt;
      }
      // solve for the increment: round-off then scales with |dz|, not with |z|
      const std::vector<double> rhs = explicit_rhs(t, z, t + dt);
      std::vector<double> b = L.apply(z);
      for (std::size_t i = 0; i < N; ++i) b[i] = dt * ((rhs.empty() ? 0.0 : rhs[i]) - b[i]);
      const std::vector<double> dz = lu.solve(std::move(b));
      for (std::size_t i = 0; i < N; ++i) z[i] += dz[i];
      // the scheme commutes with the reflection; only round-off breaks oddness
      for (std::size_t i = 0; i < N / 2; ++i) {
        const double d = z[i] + z[N - 1 - i];
        tr.max_odd_defect = std::max(tr.max_odd_defect, std::abs(d));
        z[i] -= 0.5 * d;
        z[N - 1 - i] -= 0.5 * d;
      }
      tr.max_odd_defect = std::max(tr.max_odd_defect, std::abs(z[N / 2]));
      z[N / 2] = 0.0;
      if (!(sup_abs(z) <= guard)) throw numerical_error("blow-up", "|zeta| exceeded " + num(guard) + " at t = " + num(t + dt));
      t = (t + dt >= target * (1.0 - 1e-12)) ? target : t + dt;
      ++tr.steps;
    }
    tr.snaps.push_back({t, z, explicit_rhs(t, z, t)});
  }
  return tr;
}

namespace {

std::vector<double> snapshot_times(const DualConfig& cfg) { return log_grid(cfg.tau_min, cfg.T, cfg.per_decade); }

std::vector<double> terminal_profile(const DualConfig& cfg) {
  const auto x = reflected_nodes(cfg.half_width, cfg.dx, nullptr);
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] >= 0.0 ? cfg.g(x[i]) : -cfg.g(-x[i]);
  return z;
}

}  // namespace

DualTrajectory solve_dual_fixed(const DualConfig& cfg) {
  cfg.validate();
  return solve_reflected(cfg, terminal_profile(cfg), snapshot_times(cfg), nullptr, nullptr);
}

DualTrajectory solve_dual_moving(const DualConfig& cfg) {
  cfg.validate();
  if (cfg.dual_case != 'V') throw config_error("bad-case", "the moving-boundary problem is the V-case");
  std::function<double(double)> adv;
  // With x = gamma(t) - x' (distance to the boundary) the chain rule gives
  // z_t = kappa z_xx - z_xxxx - gamma'(t) z_x: fixed points drift toward x = 0.
  if (cfg.C1 > 0.0) adv = [cfg](double t) { return -moving_speed(cfg, t); };
  return solve_reflected(cfg, terminal_profile(cfg), snapshot_times(cfg), nullptr, adv);
}

std::vector<double> dual_derivative(const DualTrajectory& traj, const std::vector<double>& f, int k) {
  if (k < 0 || k > 8) throw config_error("bad-order", "derivative order must lie in 0..8");
  if (k == 0) return f;
  if (k <= 4) return spatial_derivative(f, k, traj.dx);
  return spatial_derivative(spatial_derivative(f, 4, traj.dx), k - 4, traj.dx);
}

namespace {

// sup over the physical half x >= 0, away from the far-end stencils
double half_sup(const DualTrajectory& tr, const std::vector<double>& f) {
  const double limit = 0.9 * tr.x.back();
  double m = 0.0;
  for (std::size_t i = tr.origin(); i < f.size() && tr.x[i] <= limit; ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

struct WeightRule {
  const char* id;
  const char* label;
  const char* wedge_label;
  int order;
  double p_large, p_small;  // weight tau^p_large v tau^p_small
};

DualEstimateReport estimates(const DualTrajectory& tr, const std::vector<WeightRule>& rules, bool tail_sup) {
  DualEstimateReport rep;
  rep.dual_case = tr.dual_case;
  const std::size_t ns = tr.snaps.size();
  const double T = tr.snaps.back().tau;
  for (const auto& rule : rules) {
    std::vector<double> norms(ns);
    for (std::size_t s = 0; s < ns; ++s) norms[s] = half_sup(tr, dual_derivative(tr, tr.snaps[s].zeta, rule.order));
    std::vector<double> held = norms;
    if (tail_sup)
      for (std::size_t s = ns - 1; s-- > 0;) held[s] = std::max(held[s], held[s + 1]);
    // both readings of the two-branch weight: the sharp one (max) and the weaker one (min)
    for (int sharp = 1; sharp >= 0; --sharp) {
      if (!sharp && rule.p_large == rule.p_small) continue;
      DualEstimateRow row{sharp ? rule.id : std::string(rule.id) + "-wedge", sharp ? rule.label : rule.wedge_label,
                          rule.order, 0.0, 0.0};
      std::vector<double> lt, lv;
      for (std::size_t s = 0; s < ns; ++s) {
        const double tau = tr.snaps[s].tau;
        if (tau <= 0.0 && (rule.p_large > 0.0 || rule.p_small > 0.0)) continue;
        const double a = std::pow(tau, rule.p_large), b = std::pow(tau, rule.p_small);
        const double w = sharp ? std::max(a, b) : std::min(a, b);
        const double v = w * held[s];
        if (!std::isfinite(v) || v > row.scaled_sup) {
          row.scaled_sup = v;
          row.argmax_tau = tau;
          if (!std::isfinite(v)) break;
        }
        if (tau >= 0.1 * T && w * norms[s] > 0.0) {
          lt.push_back(std::log(tau));
          lv.push_back(std::log(w * norms[s]));
        }
      }
      if (lt.size() >= 3) {
        double mt = 0, mv = 0;
        for (std::size_t i = 0; i < lt.size(); ++i) mt += lt[i], mv += lv[i];
        mt /= double(lt.size());
        mv /= double(lt.size());
        double num_ = 0, den = 0;
        for (std::size_t i = 0; i < lt.size(); ++i) num_ += (lt[i] - mt) * (lv[i] - mv), den += (lt[i] - mt) * (lt[i] - mt);
        row.tail_slope = num_ / den;
      }
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace

bool DualEstimateReport::all_finite() const {
  return std::all_of(rows.begin(), rows.end(), [](const DualEstimateRow& r) { return std::isfinite(r.scaled_sup); });
}

const DualEstimateRow& DualEstimateReport::row(const std::string& id) const {
  for (const auto& r : rows)
    if (r.estimate_id == id) return r;
  throw config_error("unknown-row", "no estimate row '" + id + "'");
}

DualEstimateReport dual_fixed_estimates(const DualTrajectory& traj) {
  static const std::vector<WeightRule> rules = {
      {"zetax", "1", "1", 1, 0.0, 0.0},
      {"zetaxx", "tau^1/2 v tau^1/4", "tau^1/2 ^ tau^1/4", 2, 0.5, 0.25},
      {"zetaxxx", "tau v tau^1/2", "tau ^ tau^1/2", 3, 1.0, 0.5},
      {"zetaxxxx", "tau^3/2 v tau^3/4", "tau^3/2 ^ tau^3/4", 4, 1.5, 0.75},
      {"zetaxxxxx", "tau^2 v tau", "tau^2 ^ tau", 5, 2.0, 1.0},
  };
  return estimates(traj, rules, false);
}

DualEstimateReport dual_moving_estimates(const DualTrajectory& traj) {
  static const std::vector<WeightRule> rules = {
      {"zeta", "1", "1", 0, 0.0, 0.0},
      {"zetax", "tau^1/2 v tau^1/4", "tau^1/2 ^ tau^1/4", 1, 0.5, 0.25},
      {"zetaxx", "tau v tau^1/2", "tau ^ tau^1/2", 2, 1.0, 0.5},
      {"zetaxxx", "tau^3/2 v tau^3/4", "tau^3/2 ^ tau^3/4", 3, 1.5, 0.75},
      {"zetaxxxx", "tau^2 v tau", "tau^2 ^ tau", 4, 2.0, 1.0},
  };
  return estimates(traj, rules, true);
}

RatioReport dual_moment_pairing(const DualTrajectory& traj, const Kink& kink, double c) {
  if (!(std::abs(c) < 0.25 * traj.x.back())) throw config_error("bad-shift", "|c| must be below a quarter of the domain");
  const std::size_t o = traj.origin();
  std::vector<double> dv(o + 1);
  for (std::size_t i = 0; i <= o; ++i) dv[i] = kink.v(traj.x[i] - c) - kink.v(traj.x[i]);
  RatioScan scan(1e-300);
  for (const auto& s : traj.snaps) {
    if (s.tau <= 0.0) continue;
    const auto z2 = dual_derivative(traj, s.zeta, 2);
    const auto z4 = dual_derivative(traj, s.zeta, 4);
    std::vector<double> integrand(o + 1);
    for (std::size_t i = 0; i <= o; ++i) {
      const double rhs = s.rhs.empty() ? 0.0 : s.rhs[i];
      integrand[i] = (traj.kappa * z2[i] - z4[i] + rhs) * dv[i];
    }
    const double I = std::abs(trapezoid(integrand, traj.dx));
    const double ac = std::abs(c);
    const double b1 = (c * c + ac) / s.tau;
    const double b2 = (std::pow(s.tau, -0.5) + std::pow(s.tau, -0.75)) * ac;
    scan.add(s.tau, I, std::min(b1, b2));
  }
  const std::string id = "pairing-c" + num(c);
  return scan.finish(id, "|int_{x<0} zeta_t (v_c - v)| <~ min((c^2+|c|)/tau, (tau^{-1/2}+tau^{-3/4})|c|)",
                     default_ceiling(id));
}

namespace {

struct QuantityPlan {
  int order = -1;          // plain x-derivative
  std::vector<std::pair<int, double>> combo;  // sum coef * d^k (time derivatives via the equation)
  bool uses_rhs = false;
  bool low_precision = false;
};

QuantityPlan plan_for(const std::string& q, double kappa) {
  QuantityPlan p;
  if (q.size() == 2 && q[0] == 'x' && q[1] >= '0' && q[1] <= '8') {
    p.order = q[1] - '0';
    p.low_precision = p.order > 4;
    return p;
  }
  if (q == "t") {
    p.combo = {{2, kappa}, {4, -1.0}};
    p.uses_rhs = true;
  } else if (q == "txx") {
    p.combo = {{4, kappa}, {6, -1.0}};
  } else if (q == "txxxx") {
    p.combo = {{6, kappa}, {8, -1.0}};
  } else if (q == "tt") {
    p.combo = {{4, kappa * kappa}, {6, -2.0 * kappa}, {8, 1.0}};
  } else {
    throw config_error("unknown-quantity", "no weighted quantity '" + q + "'");
  }
  for (auto& [k, a] : p.combo) p.low_precision = p.low_precision || k > 4;
  return p;
}

}  // namespace

const WeightedSupRow& WeightedSupTable::row(const std::string& quantity, double power) const {
  for (const auto& r : rows)
    if (r.quantity == quantity && r.power == power) return r;
  throw config_error("unknown-row", "no weighted row '" + quantity + "'");
}

WeightedSupTable weighted_sup_profile(const DualTrajectory& traj, const std::vector<std::string>& quantities,
                                      const std::vector<double>& powers) {
  if (quantities.size() != powers.size()) throw config_error("bad-table", "one power per quantity");
  std::vector<QuantityPlan> plans;
  for (const auto& q : quantities) plans.push_back(plan_for(q, traj.kappa));

  std::vector<std::size_t> idx;
  for (std::size_t s = 0; s < traj.snaps.size(); ++s)
    if (traj.snaps[s].tau > 0.0) idx.push_back(s);
  WeightedSupTable tab;
  for (std::size_t s : idx) tab.taus.push_back(traj.snaps[s].tau);

  std::vector<std::vector<double>> norms(quantities.size(), std::vector<double>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const DualSnapshot& snap = traj.snaps[idx[j]];
    bool forced = false;
    for (double r : snap.rhs) forced = forced || r != 0.0;
    std::map<int, std::vector<double>> d;
    auto deriv = [&](int k) -> const std::vector<double>& {
      auto it = d.find(k);
      if (it == d.end()) it = d.emplace(k, dual_derivative(traj, snap.zeta, k)).first;
      return it->second;
    };
    for (std::size_t q = 0; q < plans.size(); ++q) {
      const QuantityPlan& p = plans[q];
      if (p.order >= 0) {
        norms[q][j] = half_sup(traj, deriv(p.order));
        continue;
      }
      if (forced && !p.uses_rhs)
        throw config_error("forced-composite", "'" + quantities[q] + "' is only available for unforced runs");
      std::vector<double> f(snap.zeta.size(), 0.0);
      for (const auto& [k, a] : p.combo) {
        const auto& dk = deriv(k);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += a * dk[i];
      }
      if (p.uses_rhs && !snap.rhs.empty())
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += snap.rhs[i];
      norms[q][j] = half_sup(traj, f);
    }
  }

  for (std::size_t q = 0; q < plans.size(); ++q) {
    WeightedSupRow row;
    row.quantity = quantities[q];
    row.power = powers[q];
    row.low_precision = plans[q].low_precision;
    row.values.resize(idx.size());
    double tail = 0.0;
    for (std::size_t j = idx.size(); j-- > 0;) {
      tail = std::max(tail, norms[q][j]);
      row.values[j] = std::pow(tab.taus[j], powers[q]) * tail;
    }
    for (std::size_t j = 0; j < idx.size(); ++j)
      if (row.values[j] > row.sup) {
        row.sup = row.values[j];
        row.argmax_tau = tab.taus[j];
      }
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

namespace {

// Group max of rows evaluated at tau index j.
double group_max(const WeightedSupTable& tab, std::size_t first, std::size_t count, std::size_t j) {
  double m = 0.0;
  for (std::size_t r = first; r < first + count; ++r) m = std::max(m, tab.rows[r].values[j]);
  return m;
}

double phi_derivative(int k, double x) {
  // x^2 e^{-x^2} = (1/4) d^2/dx^2 e^{-x^2} + (1/2) e^{-x^2}
  return 0.25 * gauss_derivative(k + 2, x) + 0.5 * gauss_derivative(k, x);
}

}  // namespace

RatioReport verify_lemma_v(const DualConfig& cfg_in) {
  DualConfig cfg = cfg_in;
  cfg.kappa = 1.0;
  const DualTrajectory tr = solve_dual_fixed(cfg);
  const double gmax = half_sup(tr, tr.snaps.front().zeta);
  const WeightedSupTable tab = weighted_sup_profile(
      tr, {"x8", "x6", "txxxx", "x4", "txx", "tt", "x4", "x2", "t", "x0"}, {2, 2, 2, 2, 2, 2, 1, 1, 1, 0});
  RatioScan scan(1e-300);
  for (std::size_t j = 0; j < tab.taus.size(); ++j) {
    const double lhs = group_max(tab, 0, 6, j) + group_max(tab, 6, 3, j) + group_max(tab, 9, 1, j);
    scan.add(tab.taus[j], lhs, gmax);
  }
  return scan.finish("lemma-v", "tau^2 ||v_8x..v_tt|| + tau ||v_xxxx, v_xx, v_t|| + ||v|| <~ ||g||",
                     default_ceiling("lemma-v"));
}

RatioReport verify_lemma_u(const DualConfig& cfg_in) {
  DualConfig cfg = cfg_in;
  cfg.kappa = 1.0;
  cfg.g.family = "zero";
  cfg.validate();
  auto forcing = [](double t, double x) { return phi_derivative(1, x) / ((1.0 + t) * (1.0 + t)); };
  const auto x = reflected_nodes(cfg.half_width, cfg.dx, nullptr);
  const DualTrajectory tr =
      solve_reflected(cfg, std::vector<double>(x.size(), 0.0), snapshot_times(cfg), forcing, nullptr);
  const WeightedSupTable tab = weighted_sup_profile(tr, {"x4", "x2", "t", "x0"}, {1, 1, 1, 0});

  // right side in closed form: every norm of g is largest at t = tau
  double m[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i <= 4000; ++i) {
    const double y = 4.0 * i / 4000.0;
    for (int k : {0, 2, 4}) m[k] = std::max(m[k], std::abs(phi_derivative(k, y)));
  }
  double rhs = 0.0;
  for (double tau : log_grid(1e-4, 1e6, 200)) {
    const double a = 1.0 / ((1.0 + tau) * (1.0 + tau));
    const double inner = tau * std::max({a * m[4], a * m[2], 2.0 * a / (1.0 + tau) * m[0]}) + a * m[0];
    rhs = std::max(rhs, std::min(std::sqrt(tau), std::pow(tau, 0.75)) * inner);
  }
  RatioScan scan(1e-300);
  for (std::size_t j = 0; j < tab.taus.size(); ++j)
    scan.add(tab.taus[j], group_max(tab, 0, 3, j) + group_max(tab, 3, 1, j), rhs);
  return scan.finish("lemma-u",
                     "sup tau ||u_xxxx, u_xx, u_t|| + ||u|| <~ sup (tau^1/2 ^ tau^3/4)(tau ||g_xxxx, g_xx, g_t|| + ||g||)",
                     default_ceiling("lemma-u"));
}

SchauderResult verify_schauder(const SchauderConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 0.25)) throw config_error("bad-alpha", "alpha must lie in (0, 1/4)");
  if (cfg.nt < 2 || cfg.nx < 2) throw config_error("bad-samples", "need at least 2x2 samples");
  const double sx = cfg.x_window / double(cfg.nx);
  const long qx = std::lround(sx / cfg.dx);
  if (qx < 1 || std::abs(qx * cfg.dx - sx) > 1e-9 * sx)
    throw config_error("bad-grid", "dx must divide the sample spacing " + num(sx));
  const long qt = std::max(1L, std::lround(cfg.t_end / (double(cfg.nt - 1) * cfg.dt)));

  HalfLineSource f;
  if (cfg.forcing == "gaussian")
    f = [t0 = cfg.t0](double t, double x) { return x * std::exp(-x * x - (t - t0) * (t - t0)); };
  else if (cfg.forcing == "time-only")
    f = [t0 = cfg.t0](double t, double) { return std::exp(-(t - t0) * (t - t0)); };
  else if (cfg.forcing == "zero")
    f = [](double, double) { return 0.0; };
  else
    throw config_error("unknown-forcing", "no forcing '" + cfg.forcing + "'");

  DualConfig dc;
  dc.dual_case = 'M';
  dc.kappa = 1.0;
  dc.g.family = "zero";
  dc.half_width = cfg.half_width;
  dc.dx = cfg.dx;
  dc.dt_fixed = cfg.dt;
  dc.T = double(qt) * cfg.dt * double(cfg.nt - 1);
  std::vector<double> times;
  for (std::size_t i = 1; i < cfg.nt; ++i) times.push_back(double(i * qt) * cfg.dt);
  const auto x = reflected_nodes(cfg.half_width, cfg.dx, nullptr);
  const DualTrajectory tr = solve_reflected(dc, std::vector<double>(x.size(), 0.0), times, f, nullptr);

  // derivatives through the discrete operator, so u_t = f + A u - A^2 u holds exactly
  const Penta A = neumann_laplacian(x.size(), tr.dx);
  SpaceTimeSamples su4, su2, sut, sf;
  for (auto* s : {&su4, &su2, &sut, &sf}) {
    for (const auto& snap : tr.snaps) s->t.push_back(snap.tau);
    for (std::size_t j = 1; j <= cfg.nx; ++j) s->x.push_back(double(j) * sx);
  }
  for (const auto& snap : tr.snaps) {
    const auto u2 = A.apply(snap.zeta);
    const auto u4 = A.apply(u2);
    for (std::size_t j = 1; j <= cfg.nx; ++j) {
      const std::size_t i = tr.origin() + std::size_t(j * qx);
      const double fv = f(snap.tau, tr.x[i]);
      su2.f.push_back(u2[i]);
      su4.f.push_back(u4[i]);
      sut.f.push_back(fv + u2[i] - u4[i]);
      sf.f.push_back(fv);
    }
  }
  SchauderResult res;
  const long long budget = 1LL << 40;  // always exhaustive at these sizes
  res.semi_u4 = holder_seminorm(su4, cfg.alpha, budget).value;
  res.semi_u2 = holder_seminorm(su2, cfg.alpha, budget).value;
  res.semi_ut = holder_seminorm(sut, cfg.alpha, budget).value;
  res.semi_f = holder_seminorm(sf, cfg.alpha, budget).value;
  RatioScan scan(1e-300);
  scan.add(0.0, std::max({res.semi_u4, res.semi_u2, res.semi_ut}), res.semi_f);
  const std::string id = "schauder-" + cfg.forcing;
  res.report = scan.finish(id, "[u_xxxx, u_xx, u_t]_a <~ [f]_a", default_ceiling(id));
  return res;
}

}  // namespace kinkflow
