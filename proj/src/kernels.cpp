#include "kinkflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <boost/math/special_functions/gamma.hpp>

#include "kinkflow/error.hpp"
#include "kinkflow/numerics.hpp"

namespace kinkflow {

namespace {

constexpr double kXiMax = 3.2;    // e^{-xi^4} xi^6 < 1e-40 beyond
constexpr double kYMax = 30.0;    // |H4(1, y)| < 1e-15 beyond
constexpr int kTableOrders = 7;   // orders 0..6 (6 only as the slope of 5)

void check_time(double t) {
  if (!(t > 0.0)) throw config_error("nonpositive-time", "kernel time must be positive, got " + num(t));
}

void check_order(int k) {
  if (k < 0 || k > 5) throw config_error("bad-order", "kernel derivative order must lie in 0..5");
}

// (1/pi) int_0^xmax xi^k cos(xi y + k pi/2) w(xi) dxi on GL panels sized to the oscillation
template <class Weight>
double fourier_panels(double y, int k, double xmax, int level, Weight w) {
  const auto& gl = gauss_legendre(16);
  const int panels = level * (8 + int(std::ceil(xmax * std::abs(y) / M_PI)));
  const double h = xmax / panels;
  const double phase = 0.5 * M_PI * k;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = p * h;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
      const double xi = a + 0.5 * h * (gl.x[j] + 1.0);
      s += gl.w[j] * std::pow(xi, k) * std::cos(xi * y + phase) * w(xi);
    }
  }
  return s * 0.5 * h / M_PI;
}

double biharmonic_unit(double y, int k, int level) {
  return fourier_panels(y, k, kXiMax, level, [](double xi) { return std::exp(-xi * xi * xi * xi); });
}

// Tabulated d^k H4(1, y) on [0, kYMax] for Hermite lookups (slope = order k+1).
struct UnitTable {
  double h = 0.0;
  std::vector<std::vector<double>> d;  // d[k][i]
};

const UnitTable& unit_table(int level) {
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<UnitTable>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[level];
  if (!slot) {
    auto tab = std::make_unique<UnitTable>();
    tab->h = 0.01 / level;
    const std::size_t n = std::size_t(std::llround(kYMax / tab->h)) + 1;
    tab->d.assign(kTableOrders, std::vector<double>(n));
    for (int k = 0; k < kTableOrders; ++k)
      for (std::size_t i = 0; i < n; ++i) tab->d[k][i] = biharmonic_unit(tab->h * double(i), k, level);
    slot = std::move(tab);
  }
  return *slot;
}

double unit_lookup(const UnitTable& tab, double y, int k) {
  const double ay = std::abs(y);
  const double sign = (y < 0.0 && (k % 2)) ? -1.0 : 1.0;
  const std::size_t n = tab.d[0].size();
  if (ay >= kYMax) return 0.0;
  const std::size_t i = std::min(std::size_t(ay / tab.h), n - 2);
  const double s = ay - tab.h * double(i);
  return sign * hermite_value(tab.d[k][i], tab.d[k][i + 1], tab.d[k + 1][i], tab.d[k + 1][i + 1], tab.h, s);
}

// GL nodes over [-kYMax, kYMax] with the H4(1, .) weights folded in (t > 1 branch).
struct EtaRule {
  std::vector<double> eta, w;
};

const EtaRule& eta_rule(int level) {
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<EtaRule>> cache;
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(level);
    if (it != cache.end()) return *it->second;
  }
  const UnitTable& tab = unit_table(level);
  auto r = std::make_unique<EtaRule>();
  const auto& gl = gauss_legendre(16);
  const int panels = 120 * level;
  const double h = 2.0 * kYMax / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = -kYMax + p * h;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
      const double eta = a + 0.5 * h * (gl.x[j] + 1.0);
      r->eta.push_back(eta);
      r->w.push_back(0.5 * h * gl.w[j] * unit_lookup(tab, eta, 0));
    }
  }
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[level];
  if (!slot) slot = std::move(r);
  return *slot;
}

}  // namespace

double heat_kernel(double t, double x, int k) {
  check_time(t);
  if (k < 0 || k > 8) throw config_error("bad-order", "heat kernel order must lie in 0..8");
  const double a = 2.0 * std::sqrt(t);
  return gauss_derivative(k, x / a) * std::pow(a, -k) / std::sqrt(4.0 * M_PI * t);
}

double biharmonic_kernel(double t, double x, int k, KernelAccuracy acc) {
  check_time(t);
  check_order(k);
  const double s = std::pow(t, 0.25);
  return biharmonic_unit(x / s, k, acc.level) / std::pow(s, k + 1);
}

namespace {

double biharmonic_tabulated(double t, double x, int k, int level) {
  const double s = std::pow(t, 0.25);
  return unit_lookup(unit_table(level), x / s, k) / std::pow(s, k + 1);
}

}  // namespace

double combined_kernel(double t, double x, int k, KernelAccuracy acc) {
  check_time(t);
  check_order(k);
  if (t <= 1.0) {
    // derivatives on H4, the smoother factor at short times
    const auto& gh = gauss_hermite(64 * acc.level);
    const double a = 2.0 * std::sqrt(t);
    double s = 0.0;
    for (std::size_t i = 0; i < gh.x.size(); ++i) s += gh.w[i] * biharmonic_tabulated(t, x - a * gh.x[i], k, acc.level);
    return s / std::sqrt(M_PI);
  }
  const EtaRule& r = eta_rule(acc.level);
  const double sc = std::pow(t, 0.25);
  double s = 0.0;
  for (std::size_t i = 0; i < r.eta.size(); ++i) s += r.w[i] * heat_kernel(t, x - sc * r.eta[i], k);
  return s;
}

double combined_kernel_fourier(double t, double x, int k) {
  check_time(t);
  check_order(k);
  // cut where xi^2 t or xi^4 t exceeds ~ 45
  const double xmax = std::min(std::sqrt(45.0 / t), std::pow(45.0 / t, 0.25)) * 1.05;
  return fourier_panels(x, k, xmax, 2, [t](double xi) { return std::exp(-(xi * xi + xi * xi * xi * xi) * t); });
}

double combined_kernel_t(double t, double x, KernelAccuracy acc) {
  return combined_kernel(t, x, 2, acc) - combined_kernel(t, x, 4, acc);
}

double poisson_kernel(double t, double x, KernelAccuracy acc) {
  return -2.0 * (combined_kernel(t, x, 1, acc) - combined_kernel(t, x, 3, acc));
}

double poisson_kernel_x(double t, double x, KernelAccuracy acc) {
  return -2.0 * (combined_kernel(t, x, 2, acc) - combined_kernel(t, x, 4, acc));
}

double poisson_tail(double S, double x) {
  if (!(S > 0.0)) return x > 0.0 ? 1.0 : 0.0;
  const double xmax = std::min(std::sqrt(45.0 / S), std::pow(45.0 / S, 0.25)) * 1.05;
  const auto& gl = gauss_legendre(16);
  const int panels = 16 + int(std::ceil(xmax * std::abs(x) / M_PI)) * 2;
  const double h = xmax / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p)
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
      const double xi = p * h + 0.5 * h * (gl.x[j] + 1.0);
      s += gl.w[j] * std::sin(xi * x) / xi * std::exp(-xi * xi * (1.0 + xi * xi) * S);
    }
  return s * 0.5 * h * 2.0 / M_PI;
}

namespace {

// int_0^S y(t) dt: sigma^4 substitution on (0, 1], log-spaced GL panels on [1, S]
// x sets the short-time scale x^4 where P concentrates; panels refine with 1/x.
template <class F>
double time_quadrature(double S, double x, int level, F y) {
  const auto& gl = gauss_legendre(16);
  double head = 0.0;
  const int np = 64 * level * std::max(1, int(std::ceil(0.5 / std::min(x, 1.0))));
  for (int p = 0; p < np; ++p) {
    const double a = double(p) / np, h = 1.0 / np;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
      const double sg = a + 0.5 * h * (gl.x[j] + 1.0);
      const double t = sg * sg * sg * sg;
      head += 0.5 * h * gl.w[j] * 4.0 * sg * sg * sg * y(t);
    }
  }
  double body = 0.0;
  if (S > 1.0) {
    const double L = std::log(S);
    const int nl = std::max(4, int(std::ceil(L / std::log(10.0) * 8 * level)));
    const double h = L / nl;
    for (int p = 0; p < nl; ++p)
      for (std::size_t j = 0; j < gl.x.size(); ++j) {
        const double t = std::exp(p * h + 0.5 * h * (gl.x[j] + 1.0));
        body += 0.5 * h * gl.w[j] * t * y(t);
      }
  }
  return head + body;
}

double poisson_horizon(double x) { return 1e3 * std::max(1.0, x * x); }

}  // namespace

PoissonMass poisson_mass(double x, KernelAccuracy acc) {
  if (!(x > 0.0)) throw config_error("bad-x", "the Poisson kernel is evaluated for x > 0");
  PoissonMass m;
  m.S = poisson_horizon(x);
  m.head = time_quadrature(m.S, x, acc.level, [&](double t) { return poisson_kernel(t, x, acc); });
  m.tail = poisson_tail(m.S, x);
  m.integral = m.head + m.tail;
  return m;
}

double poisson_weighted_ratio(double x, double alpha, KernelAccuracy acc) {
  if (!(x > 0.0)) throw config_error("bad-x", "the Poisson kernel is evaluated for x > 0");
  if (!(alpha >= 0.0 && alpha < 0.25)) throw config_error("bad-alpha", "alpha must lie in [0, 1/4)");
  const double S = poisson_horizon(x);
  const double head = time_quadrature(S, x, acc.level, [&](double t) {
    return (std::abs(poisson_kernel(t, x, acc)) + x * std::abs(poisson_kernel_x(t, x, acc))) * std::pow(t, alpha);
  });
  // beyond S the kernel is the heat part -2 d_x H2 up to O(1/S); S > x^2/2 keeps P_x of one sign
  using boost::math::tgamma_lower;
  const double u = x * x / (4.0 * S);
  const double q = x * x / 4.0;
  const double c = 1.0 / (2.0 * std::sqrt(M_PI));
  const double p_tail = c * x * std::pow(q, alpha - 0.5) * tgamma_lower(0.5 - alpha, u);
  const double px_tail = p_tail - 0.5 * c * x * x * x * std::pow(q, alpha - 1.5) * tgamma_lower(1.5 - alpha, u);
  const double w = std::pow(std::min(x * x * x * x, x * x), alpha);
  return (head + p_tail + px_tail) / w;
}

RatioReport poisson_weighted_estimate(const std::vector<double>& xs, double alpha, KernelAccuracy acc) {
  RatioScan s;
  for (double x : xs) s.add_ratio(x, poisson_weighted_ratio(x, alpha, acc));
  const std::string id = "poisson-weighted-" + num(alpha);
  RatioReport r = s.finish(id, "int (|P| + x|P_x|) t^a dt <~ (x^4 ^ x^2)^a", default_ceiling(id));
  return r;
}

KernelSample kernel_profile(const std::string& kernel, double t, int k, KernelAccuracy acc) {
  check_time(t);
  KernelSample out;
  out.kernel = kernel;
  out.k = k;
  out.t = t;
  double ell;
  if (kernel == "H2") ell = 2.0 * std::sqrt(t);
  else if (kernel == "H4") ell = std::pow(t, 0.25);
  else if (kernel == "H" || kernel == "P") ell = std::max(std::pow(t, 0.25), 2.0 * std::sqrt(t));
  else throw config_error("unknown-kernel", kernel);
  const double X = (kernel == "H2" ? 10.0 : 26.0) * ell;
  const std::size_t half = std::size_t(600 * acc.level);
  const double h = X / double(half);
  std::vector<double> pos(half + 1);
  for (std::size_t i = 0; i <= half; ++i) {
    const double x = h * double(i);
    if (kernel == "H2") pos[i] = heat_kernel(t, x, k);
    else if (kernel == "H4") pos[i] = biharmonic_tabulated(t, x, k, acc.level);
    else if (kernel == "H") pos[i] = combined_kernel(t, x, k, acc);
    else pos[i] = i == 0 ? 0.0 : (k == 0 ? poisson_kernel(t, x, acc) : poisson_kernel_x(t, x, acc));
  }
  if (kernel == "P") {
    out.x.resize(half + 1);
    for (std::size_t i = 0; i <= half; ++i) out.x[i] = h * double(i);
    out.values = pos;
    return out;
  }
  const double parity = (k % 2) ? -1.0 : 1.0;
  for (std::size_t i = half; i > 0; --i) {
    out.x.push_back(-h * double(i));
    out.values.push_back(parity * pos[i]);
  }
  for (std::size_t i = 0; i <= half; ++i) {
    out.x.push_back(h * double(i));
    out.values.push_back(pos[i]);
  }
  return out;
}

namespace {

// int |f| w(x) dx on the profile grid, with the crossing cells split linearly
double abs_integral(const KernelSample& s, const std::function<double(double)>& w) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
    const double a = s.values[i], b = s.values[i + 1];
    const double h = s.x[i + 1] - s.x[i];
    const double wa = w(s.x[i]), wb = w(s.x[i + 1]);
    if ((a < 0.0) != (b < 0.0) && a != 0.0 && b != 0.0) {
      const double th = a / (a - b);
      acc += 0.5 * th * h * std::abs(a) * wa + 0.5 * (1.0 - th) * h * std::abs(b) * wb;
    } else {
      acc += 0.5 * h * (std::abs(a) * wa + std::abs(b) * wb);
    }
  }
  return acc;
}

}  // namespace

KernelNormTable kernel_norm_table(const std::string& kernel, int k_lo, int k_hi, const std::vector<double>& ts,
                                  KernelAccuracy acc) {
  KernelNormTable rows;
  for (int k = k_lo; k <= k_hi; ++k) {
    check_order(k);
    for (double t : ts) {
      const KernelSample s = kernel_profile(kernel, t, k, acc);
      KernelNormRow r;
      r.kernel = kernel;
      r.k = k;
      r.t = t;
      r.l1 = abs_integral(s, [](double) { return 1.0; });
      if (t <= 1.0) r.scaled_small_t = std::pow(t, 0.25 * k) * r.l1;
      if (t >= 1.0) r.scaled_large_t = std::pow(t, 0.5 * k) * r.l1;
      rows.push_back(r);
    }
  }
  return rows;
}

KernelNormTable weighted_moment_table(int k, double beta, double alpha, const std::vector<double>& ts,
                                      KernelAccuracy acc) {
  check_order(k);
  if (!(alpha >= 0.0 && alpha <= 0.25)) throw config_error("bad-alpha", "alpha must lie in [0, 1/4]");
  if (!(beta >= 0.0)) throw config_error("bad-beta", "beta must be non-negative");
  KernelNormTable rows;
  auto cc = [alpha](double x) {
    const double x2 = x * x;
    return std::pow(std::min(x2 * x2, x2), alpha);
  };
  for (double t : ts) {
    const KernelSample s = kernel_profile("H", t, k, acc);
    KernelNormRow r;
    r.kernel = "H";
    r.k = k;
    r.t = t;
    r.beta = beta;
    r.l1 = abs_integral(s, [](double) { return 1.0; });
    r.moment = abs_integral(s, [beta](double x) { return std::pow(std::abs(x), beta); });
    rows.push_back(r);

    // composite moments with H_t = H_xx - H_xxxx, H_tx = H_xxx - H_5x,
    // and H_tt by a centred difference of H_t in time
    const KernelSample h2 = kernel_profile("H", t, 2, acc), h4 = kernel_profile("H", t, 4, acc);
    const KernelSample h3 = kernel_profile("H", t, 3, acc), h5 = kernel_profile("H", t, 5, acc);
    KernelSample ht = h2, htx = h3, htt = h2;
    for (std::size_t i = 0; i < ht.values.size(); ++i) {
      ht.values[i] = h2.values[i] - h4.values[i];
      htx.values[i] = h3.values[i] - h5.values[i];
    }
    const double eps = 1e-3;
    for (std::size_t i = 0; i < htt.x.size(); ++i) {
      const double x = htt.x[i];
      const double up = combined_kernel_t(t * (1.0 + eps), x, acc), dn = combined_kernel_t(t * (1.0 - eps), x, acc);
      htt.values[i] = (up - dn) / (2.0 * eps * t);
    }
    const double m1 = abs_integral(ht, cc), m2 = abs_integral(htt, cc), m3 = abs_integral(htx, cc);
    const double s3 = std::max(std::pow(t, 1.25 - alpha), std::pow(t, 1.5 - alpha));
    rows.push_back({"H_t", 2, t, 0.0, std::pow(t, 1.0 - alpha) * m1, std::pow(t, 1.0 - alpha) * m1, alpha, m1});
    rows.push_back({"H_tt", 4, t, 0.0, std::pow(t, 2.0 - alpha) * m2, std::pow(t, 2.0 - alpha) * m2, alpha, m2});
    rows.push_back({"H_tx", 3, t, 0.0, s3 * m3, s3 * m3, alpha, m3});
  }
  return rows;
}

std::vector<ScalingSup> kernel_scaling_sups(const KernelNormTable& table) {
  std::map<int, ScalingSup> m;
  for (const auto& r : table) {
    auto& s = m[r.k];
    s.k = r.k;
    if (r.t <= 1.0) s.small_t = std::max(s.small_t, r.scaled_small_t);
    if (r.t >= 1.0) s.large_t = std::max(s.large_t, r.scaled_large_t);
  }
  std::vector<ScalingSup> out;
  for (auto& [k, s] : m) out.push_back(s);
  return out;
}

double heat_semigroup_defect(double s, double t) {
  check_time(s);
  check_time(t);
  const auto& gh = gauss_hermite(80);
  const double a = 2.0 * std::sqrt(s);
  double worst = 0.0;
  const double X = 6.0 * std::sqrt(s + t);
  for (int i = -40; i <= 40; ++i) {
    const double x = X * i / 40.0;
    double conv = 0.0;
    for (std::size_t j = 0; j < gh.x.size(); ++j) conv += gh.w[j] * heat_kernel(t, x - a * gh.x[j]);
    conv /= std::sqrt(M_PI);
    worst = std::max(worst, std::abs(conv - heat_kernel(s + t, x)));
  }
  return worst;
}

}  // namespace kinkflow
