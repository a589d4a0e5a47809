#include "kinkflow/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "kinkflow/error.hpp"
#include "kinkflow/numerics.hpp"
#include "kinkflow/spectral.hpp"

namespace kinkflow {

void RatioScan::add(double t, double num, double den) {
  if (!(std::abs(den) >= floor_)) {
    ++excluded_;
    return;
  }
  add_ratio(t, num / den);
}

void RatioScan::add_ratio(double t, double r) {
  ++samples_;
  if (!std::isfinite(r)) nonfinite_ = true;
  if (r > max_) {
    max_ = r;
    argmax_ = t;
  }
  min_ = std::min(min_, r);
}

RatioReport RatioScan::finish(const std::string& id, const std::string& ref, double ceiling) const {
  RatioReport r;
  r.id = id;
  r.paper_ref = ref;
  r.samples = samples_;
  r.excluded = excluded_;
  r.ceiling = ceiling;
  r.degenerate = samples_ == 0;
  if (r.degenerate) {
    r.max_ratio = r.min_ratio = 0.0;
    r.pass = false;
    return r;
  }
  r.max_ratio = max_;
  r.min_ratio = min_;
  r.argmax_t = argmax_;
  r.pass = !nonfinite_ && std::isfinite(max_) && max_ <= ceiling;
  return r;
}

void apply_drift(RatioReport& coarse, const RatioReport& fine, double limit_pct) {
  if (coarse.degenerate || fine.degenerate) {
    coarse.pass = false;
    return;
  }
  const double scale = std::max(std::abs(fine.max_ratio), 1e-300);
  coarse.drift_pct = 100.0 * std::abs(coarse.max_ratio - fine.max_ratio) / scale;
  coarse.pass = coarse.pass && fine.pass && coarse.drift_pct < limit_pct;
}

const double kIdentityPerDt = 10.0;

double default_ceiling(const std::string& id) {
  // About three times the largest ratio seen over the shipped presets (see
  // README), rounded up; anything not listed keeps the generous default.
  static const std::map<std::string, double> calibrated = {
      {"equiv-energy", 3.0},
      {"equiv-dissipation", 12.0},
      {"nash-M", 0.5},
      {"nash-M-chain", 1.1},
      {"nash-V", 0.4},
      {"l2-holder", 1.0 + 1e-9},
      {"shift-c", 2.5},
      {"shift-f0", 0.5},
      {"shift-fc", 0.5},
      {"shift-sup-F", 1.0 + 1e-9},
      {"V-lower-bound", 1.0 + 1e-9},
      {"zero-motion", 2.0},
      {"link-Mt-M", 3.0},
      {"link-M-Mt", 3.0},
      {"link-Vt-V", 2.0},
      {"link-V-Vt", 2.0},
      {"dissipation-integral-M-0.7", 1.1},
      {"dissipation-integral-V-0.8", 1.7},
      {"diff-ineq-D", 1.0},
      {"slowdown-M", 2.0},
      {"slowdown-V", 2.0},
      {"envelope-E-M0", 0.02},
      {"envelope-c-M0", 0.04},
      {"envelope-E-V0", 0.2},
      {"bound-c-V0", 0.005},
      {"envelope-fc-t38", 0.12},
      {"envelope-fc-t14", 0.12},
      // lab-side estimates, calibrated on the default lab configurations
      {"interp-A1", 1.6},
      {"interp-A2", 0.6},
      {"interp-A3", 0.9},
      {"interp-A4", 1.2},
      {"interp-A5", 1.9},
      {"lemma-v", 5.0},
      {"lemma-u", 0.07},
      {"pairing-c0.25", 0.1},
      {"pairing-c0.5", 0.1},
      {"pairing-c1", 0.1},
      {"schauder-gaussian", 2.2},
      {"schauder-time-only", 3.6},
      {"poisson-weighted-0.2", 12.0},
  };
  auto it = calibrated.find(id);
  return it == calibrated.end() ? 1e3 : it->second;
}

namespace {

double D_of(const TrajectoryPoint& p) { return std::max(p.rec.dissipation, 0.0); }
double E_of(const TrajectoryPoint& p) { return std::max(p.rec.energy_gap, 0.0); }

}  // namespace

std::vector<RatioReport> verify_equivalences(const Trajectory& traj, double e_star, double eps) {
  RatioScan se, sd;
  for (const auto& p : traj.points) {
    if (p.rec.energy_gap > 2.0 * e_star - eps)
      throw config_error("energy-condition-violated", "E = " + num(p.rec.energy_gap) + " at t = " + num(p.rec.t));
    se.add(p.rec.t, p.rec.energy_gap, p.obs.energy_norm);
    sd.add(p.rec.t, p.rec.dissipation, p.obs.dissipation_norm);
  }
  return {se.finish("equiv-energy", "E ~ int f_c^2 + f_cx^2", default_ceiling("equiv-energy")),
          sd.finish("equiv-dissipation", "D ~ int f_cx^2 + f_cxx^2 + f_cxxx^2", default_ceiling("equiv-dissipation"))};
}

RatioReport verify_nash_M(const Trajectory& traj) {
  RatioScan s;
  for (const auto& p : traj.points) {
    const double den = std::pow(D_of(p), 0.6) * std::pow(p.rec.first_moment_M + 1.0, 0.8);
    if (E_of(p) < 1e-14) s.add(p.rec.t, 0.0, 0.0);
    else s.add(p.rec.t, E_of(p), den);
  }
  return s.finish("nash-M", "E <~ D^{3/5} (M+1)^{4/5}", default_ceiling("nash-M"));
}

RatioReport verify_nash_V(const Trajectory& traj) {
  RatioScan s;
  for (const auto& p : traj.points) {
    const double den = std::pow(D_of(p), 1.0 / 3.0) * std::pow(p.rec.excess_mass_V + 1.0, 4.0 / 3.0);
    if (E_of(p) < 1e-14) s.add(p.rec.t, 0.0, 0.0);
    else s.add(p.rec.t, E_of(p), den);
  }
  return s.finish("nash-V", "E <~ D^{1/3} (V+1)^{4/3}", default_ceiling("nash-V"));
}

RatioReport verify_l2_holder(const Trajectory& traj) {
  RatioScan s;
  for (const auto& p : traj.points) s.add(p.rec.t, p.obs.l2_sq, p.obs.sup_fc * p.obs.V);
  return s.finish("l2-holder", "int f_c^2 <= sup|f_c| int|f_c|", default_ceiling("l2-holder"));
}

std::vector<RatioReport> verify_shift_bounds(const Trajectory& traj) {
  RatioScan sc, s0, sfc, sF;
  for (const auto& p : traj.points) {
    const double t = p.rec.t;
    const double c = std::abs(p.rec.shift_c);
    sc.add(t, c, std::cbrt(E_of(p)) * std::cbrt(p.rec.first_moment_M));
    const double sD = std::sqrt(D_of(p));
    s0.add(t, std::abs(p.obs.f_at_0), std::pow(p.rec.first_moment_M + 1.0, 1.0 / 6.0) * sD);
    sfc.add(t, std::abs(p.obs.f_at_c), sD);
    sF.add(t, c, p.obs.sup_F);
  }
  return {sc.finish("shift-c", "|c| <~ E^{1/3} M^{1/3}", default_ceiling("shift-c")),
          s0.finish("shift-f0", "|f_c(0)| <~ (M+1)^{1/6} D^{1/2}", default_ceiling("shift-f0")),
          sfc.finish("shift-fc", "|f_c(c)| <~ D^{1/2}", default_ceiling("shift-fc")),
          sF.finish("shift-sup-F", "|c| <= sup|F_c|", default_ceiling("shift-sup-F"))};
}

namespace {

// trapezoid in time over the recorded samples
double time_integral(const Trajectory& traj, const std::function<double(const TrajectoryPoint&)>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < traj.points.size(); ++i)
    s += 0.5 * (traj.points[i].rec.t - traj.points[i - 1].rec.t) * (y(traj.points[i]) + y(traj.points[i - 1]));
  return s;
}

}  // namespace

RatioReport verify_integral_dissipation(const Trajectory& traj, double beta, char which) {
  if (which != 'M' && which != 'V') throw config_error("bad-case", "case must be M or V");
  const bool m = which == 'M';
  if (!(beta <= 1.0 && beta > (m ? 0.4 : 2.0 / 3.0)))
    throw config_error("beta-out-of-range", "beta = " + num(beta));
  double bar = 1.0;
  for (const auto& p : traj.points) bar = std::max(bar, m ? p.rec.first_moment_M : p.rec.excess_mass_V);
  const double lhs = time_integral(traj, [beta](const TrajectoryPoint& p) { return std::pow(D_of(p), beta); });
  const double rhs = m ? std::pow(bar, 4.0 * (1.0 - beta) / 3.0) : std::pow(bar, 4.0 * (1.0 - beta));
  RatioScan s;
  if (traj.points.size() >= 2 && lhs > 0.0) s.add(traj.T_final, lhs, rhs);
  else s.add(traj.T_final, 0.0, 0.0);
  const std::string id = std::string("dissipation-integral-") + which + "-" + num(beta);
  return s.finish(id, m ? "int D^b dt <~ Mbar^{4(1-b)/3}" : "int D^b dt <~ Vbar^{4(1-b)}", default_ceiling(id));
}

RatioReport verify_gradient_flow_identity(const Trajectory& traj) {
  RatioScan s;
  if (traj.points.size() >= 2) {
    const double lhs = time_integral(traj, D_of);
    const double drop = traj.points.front().rec.energy_gap - traj.points.back().rec.energy_gap;
    if (drop > 1e-12) s.add_ratio(traj.T_final, std::abs(lhs / drop - 1.0));
    else s.add(traj.T_final, 0.0, 0.0);
  }
  // the scheme satisfies the identity only up to O(dt); the constant is
  // calibrated at dt = 0.05 (largest seen: 8.9 dt)
  const double dt = traj.dt > 0.0 ? traj.dt : 0.05;
  return s.finish("dissipation-identity", "|int D dt / (E_0 - E_T) - 1| <~ dt", kIdentityPerDt * dt);
}

RatioReport verify_zero_motion(const Trajectory& traj, int pairs, std::uint64_t seed) {
  RatioScan s;
  const auto& pts = traj.points;
  if (pts.size() < 2) return s.finish("zero-motion", "", default_ceiling("zero-motion"));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (int k = 0; k < pairs; ++k) {
    std::size_t a = pick(rng), b = pick(rng);
    if (a > b) std::swap(a, b);
    const auto& p = pts[a];
    const auto& q = pts[b];
    const double num_ = std::abs(q.rec.shift_c - p.rec.shift_c);
    const double den = std::sqrt(E_of(p)) * std::pow(q.rec.t - p.rec.t + 1.0, 0.25);
    if (a == b) continue;
    s.add(p.rec.t, num_, den);
  }
  return s.finish("zero-motion", "|c(T)-c(t)| <~ E(t)^{1/2} (T-t+1)^{1/4}", default_ceiling("zero-motion"));
}

std::vector<RatioReport> verify_stand_in_links(const Trajectory& traj) {
  RatioScan a, b, c, d;
  for (const auto& p : traj.points) {
    const auto& r = p.rec;
    const bool zero = r.first_moment_M < 1e-14 && r.m_tilde < 1e-14;
    if (zero) {
      a.add(r.t, 0.0, 0.0);
      b.add(r.t, 0.0, 0.0);
    } else {
      a.add(r.t, r.m_tilde, r.first_moment_M + 1.0);
      b.add(r.t, r.first_moment_M, r.m_tilde + 1.0);
    }
    if (r.excess_mass_V < 1e-14) c.add(r.t, 0.0, 0.0);  // no disturbance, nothing to compare
    else c.add(r.t, r.v_tilde, r.excess_mass_V + 1.0);
  }
  if (!traj.points.empty()) {
    const auto& r = traj.points.back().rec;
    if (r.excess_mass_V < 1e-14) d.add(r.t, 0.0, 0.0);
    else d.add(r.t, r.excess_mass_V, r.v_tilde + 1.0);
  }
  return {a.finish("link-Mt-M", "Mt <~ M + 1", default_ceiling("link-Mt-M")),
          b.finish("link-M-Mt", "M <~ Mt + 1", default_ceiling("link-M-Mt")),
          c.finish("link-Vt-V", "Vt <~ V + 1", default_ceiling("link-Vt-V")),
          d.finish("link-V-Vt", "V(T) <~ Vt(T) + 1", default_ceiling("link-V-Vt"))};
}

RatioReport verify_diff_ineq_D(const Trajectory& traj, double floor) {
  RatioScan s;
  const auto& p = traj.points;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const double D = p[i].rec.dissipation;
    if (D < floor) {
      s.add(p[i].rec.t, 0.0, 0.0);
      continue;
    }
    // three-point derivative on a possibly uneven stencil
    const double h0 = p[i].rec.t - p[i - 1].rec.t, h1 = p[i + 1].rec.t - p[i].rec.t;
    const double d = (-h1 / (h0 * (h0 + h1))) * p[i - 1].rec.dissipation +
                     ((h1 - h0) / (h0 * h1)) * D + (h0 / (h1 * (h0 + h1))) * p[i + 1].rec.dissipation;
    s.add(p[i].rec.t, d, std::pow(D, 1.5));
  }
  return s.finish("diff-ineq-D", "dD/dt <~ D^{3/2}", default_ceiling("diff-ineq-D"));
}

RatioReport verify_V_lower_bound(const Trajectory& traj) {
  RatioScan s;
  for (const auto& p : traj.points) {
    if (std::abs(p.rec.shift_c) < 1e-14 && p.rec.excess_mass_V < 1e-14) s.add(p.rec.t, 0.0, 0.0);
    else s.add(p.rec.t, 2.0 * std::abs(p.rec.shift_c), p.rec.excess_mass_V);
  }
  return s.finish("V-lower-bound", "2|c| <= V", default_ceiling("V-lower-bound"));
}

double series_value(const TrajectoryPoint& p, const std::string& series) {
  const auto& r = p.rec;
  if (series == "energy_gap") return r.energy_gap;
  if (series == "dissipation") return r.dissipation;
  if (series == "shift_c" || series == "abs_shift_c") return std::abs(r.shift_c);
  if (series == "first_moment_M") return r.first_moment_M;
  if (series == "excess_mass_V") return r.excess_mass_V;
  if (series == "m_tilde") return r.m_tilde;
  if (series == "v_tilde") return r.v_tilde;
  if (series == "sup_fc") return r.sup_fc;
  if (series == "mass_defect") return r.mass_defect;
  if (series == "hm1_sq") return r.hm1_sq;
  throw config_error("unknown-series", series);
}

Envelope envelope(const Trajectory& traj, const std::string& series, double power, double scale, double t0,
                  double t1) {
  Envelope e;
  e.id = series + "*t^" + num(power);
  e.inf = INFINITY;
  for (const auto& p : traj.points) {
    const double t = p.rec.t;
    if (t < t0 || t > t1) continue;
    const double y = series_value(p, series) * std::pow(t, power) / scale;
    e.sup = std::max(e.sup, y);
    e.inf = std::min(e.inf, y);
    ++e.samples;
  }
  if (e.samples == 0) e.inf = 0.0;
  e.variation = e.inf > 0.0 ? e.sup / e.inf : INFINITY;
  return e;
}

RatioReport verify_nash_chain(int members, double L, std::size_t N) {
  RatioScan s;
  const double dx = 2.0 * L / double(N - 1);
  for (int m = 0; m < members; ++m) {
    const double w = 0.4 * std::pow(1.25, m % 10);
    const double a = (m < 10) ? 0.0 : 0.7;  // asymmetric half of the family
    const double b = (m % 3) * 0.3;
    std::vector<double> F(N);
    for (std::size_t i = 0; i < N; ++i) {
      const double x = -L + dx * double(i);
      const double y = x / w;
      F[i] = (1.0 + a * y + b * y * y) * std::exp(-y * y) + ((m % 4 == 3) ? 0.5 * std::exp(-(y - 3) * (y - 3)) : 0.0);
    }
    auto d = cosine_derivatives(F, dx, {1, 2});
    std::vector<double> f1(N), f2(N), f0(N);
    for (std::size_t i = 0; i < N; ++i) {
      f1[i] = d[0][i] * d[0][i];
      f2[i] = d[1][i] * d[1][i];
      f0[i] = std::abs(F[i]);
    }
    const double lhs = trapezoid(f1, dx);
    const double rhs = std::pow(trapezoid(f2, dx), 0.6) * std::pow(trapezoid(f0, dx), 0.8);
    s.add(m, lhs, rhs);
  }
  return s.finish("nash-M-chain", "int F_x^2 <~ (int F_xx^2)^{3/5} (int |F|)^{4/5}", default_ceiling("nash-M-chain"));
}

// --- Hoelder -----------------------------------------------------------------

namespace {

inline double cc_gauge(double s, double z) {
  const double z2 = z * z;
  return std::abs(s) + std::min(z2, z2 * z2);
}

}  // namespace

HolderResult holder_exhaustive(const SpaceTimeSamples& S, double alpha) {
  const std::size_t nt = S.t.size(), nx = S.x.size();
  HolderResult r;
  r.exhaustive = true;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nx; ++j) {
      const double f0 = S.at(i, j);
      for (std::size_t k = i; k < nt; ++k) {
        const double s = S.t[k] - S.t[i];
        for (std::size_t l = 0; l < nx; ++l) {
          if (k == i && l <= j) continue;
          const double g = cc_gauge(s, S.x[l] - S.x[j]);
          const double q = std::abs(S.at(k, l) - f0) / std::pow(g, alpha);
          r.value = std::max(r.value, q);
          ++r.pairs;
        }
      }
    }
  return r;
}

namespace {

std::vector<long> log_offsets(long n) {
  std::vector<long> o{0};
  for (double v = 1.0; v < double(n); v *= 1.5) {
    const long k = long(std::llround(v));
    if (k != o.back() && k < n) o.push_back(k);
  }
  if (n > 1 && o.back() != n - 1) o.push_back(n - 1);
  return o;
}

}  // namespace

HolderResult holder_stratified(const SpaceTimeSamples& S, double alpha, long long budget) {
  const long nt = long(S.t.size()), nx = long(S.x.size());
  const std::vector<long> os = log_offsets(nt);
  std::vector<long> oz;
  for (long k : log_offsets(nx)) {
    oz.push_back(k);
    if (k) oz.push_back(-k);
  }
  const long long per_base = (long long)(os.size() * oz.size());
  const long long bases = (long long)nt * nx;
  long stride = 1;
  while ((bases / ((long long)stride * stride)) * per_base > budget && stride < std::max(nt, nx)) ++stride;
  HolderResult r;
  for (long i = 0; i < nt; i += stride)
    for (long j = 0; j < nx; j += stride) {
      const double f0 = S.at(i, j);
      for (long ds : os) {
        const long k = i + ds;
        if (k >= nt) break;
        for (long dz : oz) {
          const long l = j + dz;
          if (l < 0 || l >= nx || (ds == 0 && dz == 0)) continue;
          const double g = cc_gauge(S.t[k] - S.t[i], S.x[l] - S.x[j]);
          r.value = std::max(r.value, std::abs(S.at(k, l) - f0) / std::pow(g, alpha));
          ++r.pairs;
        }
      }
    }
  return r;
}

HolderResult holder_seminorm(const SpaceTimeSamples& S, double alpha, long long budget) {
  if (!(alpha > 0.0 && alpha < 0.25)) throw config_error("bad-alpha", "alpha must lie in (0, 1/4)");
  const long long n = (long long)S.t.size() * (long long)S.x.size();
  const long long total = n * (n - 1) / 2;
  if (total <= budget) return holder_exhaustive(S, alpha);
  return holder_stratified(S, alpha, budget);
}

// --- interpolation family -----------------------------------------------------

SpaceTimeFunction decaying_sine() {
  return {"exp(-t) sin(x)", [](int kt, int kx, double t, double x) {
            const double e = std::exp(-t) * (kt ? -1.0 : 1.0);
            switch (kx % 4) {
              case 0: return e * std::sin(x);
              case 1: return e * std::cos(x);
              case 2: return -e * std::sin(x);
              default: return -e * std::cos(x);
            }
          }};
}

SpaceTimeFunction gaussian_packet(double width, double speed, double rate, double x0) {
  return {"packet(w=" + num(width) + ",v=" + num(speed) + ",r=" + num(rate) + ")",
          [=](int kt, int kx, double t, double x) {
            const double a = std::exp(-rate * t);
            const double y = (x - x0 - speed * t) / width;
            const double sc = std::pow(width, -kx);
            const double base = a * sc * gauss_derivative(kx, y);
            if (!kt) return base;
            return -rate * base - a * sc * gauss_derivative(kx + 1, y) * speed / width;
          }};
}

std::vector<SpaceTimeFunction> packet_family(int members) {
  std::vector<SpaceTimeFunction> out;
  const double widths[] = {0.5, 1.0, 1.5, 2.5, 4.0};
  const double speeds[] = {0.0, 0.5, 1.0, 2.0};
  for (int m = 0; m < members; ++m) {
    const double w = widths[m % 5];
    const double v = speeds[(m / 5) % 4];
    const double r = 0.05 + 0.1 * (m % 3);
    out.push_back(gaussian_packet(w, v, r, 4.0 + (m % 2)));
  }
  return out;
}

const char* const kInterpolationIds[5] = {"interp-A1", "interp-A2", "interp-A3", "interp-A4", "interp-A5"};

std::vector<double> interpolation_ratios(const SpaceTimeFunction& u, const InterpolationParams& p, bool* all_zero) {
  if (!(p.alpha > 0.0 && p.alpha < 0.25)) throw config_error("bad-alpha", "alpha must lie in (0, 1/4)");
  if (!(p.delta > 0.0 && p.delta <= 1.0)) throw config_error("bad-delta", "delta must lie in (0, 1]");
  if (!(p.tau > 0.0)) throw config_error("bad-tau", "tau must be positive");

  SpaceTimeSamples base;
  for (std::size_t i = 0; i < p.nt; ++i) base.t.push_back(p.tau + p.t_span * double(i) / double(p.nt - 1));
  for (std::size_t j = 0; j < p.nx; ++j) base.x.push_back(p.x_max * double(j) / double(p.nx - 1));
  auto sample = [&](int kt, int kx) {
    SpaceTimeSamples s = base;
    s.f.resize(p.nt * p.nx);
    for (std::size_t i = 0; i < p.nt; ++i)
      for (std::size_t j = 0; j < p.nx; ++j) s.f[i * p.nx + j] = u.eval(kt, kx, s.t[i], s.x[j]);
    return s;
  };
  auto sup = [](const SpaceTimeSamples& s) {
    double m = 0.0;
    for (double v : s.f) m = std::max(m, std::abs(v));
    return m;
  };
  const auto U = sample(0, 0), Ux = sample(0, 1), Uxx = sample(0, 2), Uxxxx = sample(0, 4), Ut = sample(1, 0);
  const double n0 = sup(U), n1 = sup(Ux), n2 = sup(Uxx), n4 = sup(Uxxxx), nt = sup(Ut);
  auto H = [&](const SpaceTimeSamples& s) { return holder_seminorm(s, p.alpha, p.budget).value; };
  const double h4 = H(Uxxxx), h2 = H(Uxx), ht = H(Ut), h0 = H(U), h1 = H(Ux);

  const double a = p.alpha, d = p.delta, T = p.tau;
  const double vee14 = std::max(std::sqrt(T), std::pow(T, 0.25));
  const double wedge = std::min(std::sqrt(T), std::pow(T, 0.75));
  const double inv = n0 / d;

  const double lhs[5] = {T * std::max({n4, n2, nt}), vee14 * n1, std::max(T, std::sqrt(T)) * n2,
                         std::pow(T, a) * h0, std::pow(T, a) * h1};
  const double rhs[5] = {std::pow(d, a) * std::pow(T, 1.0 + a) * std::max({h4, h2, ht}) + inv,
                         d * T * std::max(n4, n2) + inv, d * T * std::max(n4, n2) + inv,
                         d * T * nt + std::pow(d, (1.0 - 4.0 * a) / (4.0 * a)) * vee14 * n1 + inv,
                         wedge * nt + vee14 * n2 + n1};
  std::vector<double> r(5);
  bool zero = true;
  for (int k = 0; k < 5; ++k) {
    if (lhs[k] != 0.0) zero = false;
    r[k] = rhs[k] > 1e-12 ? lhs[k] / rhs[k] : (lhs[k] == 0.0 ? 0.0 : INFINITY);
  }
  if (all_zero) *all_zero = zero;
  return r;
}

std::vector<RatioReport> verify_interpolation(const std::vector<SpaceTimeFunction>& family,
                                              const std::vector<InterpolationParams>& params) {
  std::vector<RatioScan> scans(5);
  int sample = 0;
  for (const auto& u : family)
    for (const auto& p : params) {
      bool zero = false;
      const auto r = interpolation_ratios(u, p, &zero);
      for (int k = 0; k < 5; ++k) {
        if (zero) scans[k].add(sample, 0.0, 0.0);
        else scans[k].add_ratio(sample, r[k]);
      }
      ++sample;
    }
  static const char* refs[5] = {
      "tau |u_xxxx,u_xx,u_t| <~ delta^a tau^{1+a} [u_xxxx,u_xx,u_t]_a + |u|/delta",
      "(tau^{1/2} v tau^{1/4}) |u_x| <~ delta tau |u_xxxx,u_xx| + |u|/delta",
      "(tau v tau^{1/2}) |u_xx| <~ delta tau |u_xxxx,u_xx| + |u|/delta",
      "tau^a [u]_a <~ delta tau |u_t| + delta^{(1-4a)/4a} (tau^{1/2} v tau^{1/4}) |u_x| + |u|/delta",
      "tau^a [u_x]_a <~ (tau^{1/2} ^ tau^{3/4}) |u_t| + (tau^{1/2} v tau^{1/4}) |u_xx| + |u_x|"};
  std::vector<RatioReport> out;
  for (int k = 0; k < 5; ++k) out.push_back(scans[k].finish(kInterpolationIds[k], refs[k], default_ceiling(kInterpolationIds[k])));
  return out;
}

}  // namespace kinkflow
