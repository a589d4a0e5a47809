#include "kinkflow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "kinkflow/error.hpp"

namespace kinkflow {

double trapezoid(const std::vector<double>& f, double dx) {
  if (f.empty()) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

namespace {

// one-sided stencils for the value at node 0 using nodes 0..n-1
constexpr double kS1[] = {-1.5, 2.0, -0.5};
constexpr double kS2[] = {2.0, -5.0, 4.0, -1.0};
constexpr double kS3[] = {-2.5, 9.0, -12.0, 7.0, -1.5};
constexpr double kS4[] = {3.0, -14.0, 26.0, -24.0, 11.0, -2.0};

double central(const std::vector<double>& f, std::size_t i, int order) {
  switch (order) {
    case 1: return 0.5 * (f[i + 1] - f[i - 1]);
    case 2: return f[i + 1] - 2.0 * f[i] + f[i - 1];
    case 3: return 0.5 * (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]);
    default: return f[i + 2] - 4.0 * f[i + 1] + 6.0 * f[i] - 4.0 * f[i - 1] + f[i - 2];
  }
}

}  // namespace

std::vector<double> spatial_derivative(const std::vector<double>& f, int order, double dx) {
  if (order < 1 || order > 4) throw config_error("bad-order", "spatial_derivative supports orders 1..4");
  const std::size_t n = f.size();
  const std::size_t reach = order <= 2 ? 1 : 2;
  const std::size_t width = std::size_t(order) + 2;
  if (n < width + reach) throw config_error("bad-grid", "too few nodes for the stencil");
  const double* s = order == 1 ? kS1 : order == 2 ? kS2 : order == 3 ? kS3 : kS4;
  const double scale = std::pow(dx, -order);
  const double mirror = (order % 2) ? -1.0 : 1.0;

  std::vector<double> d(n);
  for (std::size_t i = reach; i + reach < n; ++i) d[i] = central(f, i, order) * scale;
  for (std::size_t i = 0; i < reach; ++i) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      lo += s[j] * f[i + j];
      hi += s[j] * f[n - 1 - i - j];
    }
    d[i] = lo * scale;
    d[n - 1 - i] = mirror * hi * scale;
  }
  return d;
}

std::vector<double> cumulative_integral(const std::vector<double>& f, const std::vector<double>& fx, double dx) {
  std::vector<double> F(f.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    acc += 0.5 * dx * (f[i - 1] + f[i]);
    F[i] = acc - dx * dx / 12.0 * (fx[i] - fx[0]);
  }
  return F;
}

namespace {

struct Cubic {
  double c0, c1, c2, c3;
  double operator()(double s) const { return c0 + s * (c1 + s * (c2 + s * c3)); }
  double prim(double s) const { return s * (c0 + s * (c1 / 2 + s * (c2 / 3 + s * c3 / 4))); }
};

Cubic hermite_cubic(double p0, double p1, double d0, double d1, double h) {
  const double m = (p1 - p0) / h;
  return {p0, d0, (3.0 * m - 2.0 * d0 - d1) / h, (d0 + d1 - 2.0 * m) / (h * h)};
}

}  // namespace

double hermite_value(double p0, double p1, double d0, double d1, double h, double s) {
  return hermite_cubic(p0, p1, d0, d1, h)(s);
}

double hermite_slope(double p0, double p1, double d0, double d1, double h, double s) {
  const Cubic c = hermite_cubic(p0, p1, d0, d1, h);
  return c.c1 + s * (2.0 * c.c2 + 3.0 * s * c.c3);
}

double hermite_integral(double p0, double p1, double d0, double d1, double h, double a, double b) {
  const Cubic c = hermite_cubic(p0, p1, d0, d1, h);
  return c.prim(b) - c.prim(a);
}

double hermite_abs_integral(double p0, double p1, double d0, double d1, double h, double a, double b) {
  if (b <= a) return 0.0;
  const Cubic c = hermite_cubic(p0, p1, d0, d1, h);
  // split [a,b] at the critical points so each piece is monotone
  double cuts[4];
  int nc = 0;
  cuts[nc++] = a;
  const double A = 3.0 * c.c3, B = 2.0 * c.c2, C = c.c1;
  double r[2];
  int nr = 0;
  if (std::abs(A) > 1e-300) {
    const double disc = B * B - 4.0 * A * C;
    if (disc > 0.0) {
      const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
      r[nr++] = q / A;
      if (q != 0.0) r[nr++] = C / q;
    }
  } else if (std::abs(B) > 1e-300) {
    r[nr++] = -C / B;
  }
  std::sort(r, r + nr);
  for (int k = 0; k < nr; ++k)
    if (r[k] > a && r[k] < b) cuts[nc++] = r[k];
  cuts[nc++] = b;

  double total = 0.0;
  for (int k = 0; k + 1 < nc; ++k) {
    double lo = cuts[k], hi = cuts[k + 1];
    const double flo = c(lo), fhi = c(hi);
    if ((flo < 0.0) != (fhi < 0.0) && flo != 0.0 && fhi != 0.0) {
      double x0 = lo, x1 = hi, f0 = flo;
      for (int it = 0; it < 200 && x1 - x0 > 1e-16 * (1.0 + std::abs(x1)); ++it) {
        const double xm = 0.5 * (x0 + x1);
        const double fm = c(xm);
        if ((fm < 0.0) == (f0 < 0.0)) {
          x0 = xm;
          f0 = fm;
        } else {
          x1 = xm;
        }
      }
      const double root = 0.5 * (x0 + x1);
      total += std::abs(c.prim(root) - c.prim(lo)) + std::abs(c.prim(hi) - c.prim(root));
    } else {
      total += std::abs(c.prim(hi) - c.prim(lo));
    }
  }
  return total;
}

namespace {

// Golub-Welsch on the symmetric Jacobi matrix.
GaussRule golub_welsch(int n, bool hermite) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = hermite ? std::sqrt(0.5 * k) : k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = hermite ? std::sqrt(M_PI) : 2.0;
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    g.x[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    g.w[i] = mu0 * v0 * v0;
  }
  if (!hermite) {
    // polish nodes by Newton on P_n for full double accuracy
    for (int i = 0; i < n; ++i) {
      double x = g.x[i], dp = 0.0;
      for (int it = 0; it < 4; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        x -= p1 / dp;
      }
      g.x[i] = x;
      g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
  return g;
}

const GaussRule& cached_rule(int n, bool hermite) {
  static std::mutex mtx;
  static std::map<std::pair<int, bool>, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[{n, hermite}];
  if (!slot) slot = std::make_unique<GaussRule>(golub_welsch(n, hermite));
  return *slot;
}

}  // namespace

const GaussRule& gauss_legendre(int n) { return cached_rule(n, false); }
const GaussRule& gauss_hermite(int n) { return cached_rule(n, true); }

double gauss_derivative(int k, double y) {
  double h0 = 1.0, h1 = 2.0 * y;
  double hk = k == 0 ? h0 : h1;
  for (int n = 1; n < k; ++n) {
    const double h2 = 2.0 * y * h1 - 2.0 * n * h0;
    h0 = h1;
    h1 = h2;
    hk = h2;
  }
  return ((k % 2) ? -1.0 : 1.0) * hk * std::exp(-y * y);
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  const double decades = std::log10(hi / lo);
  const int n = std::max(1, int(std::ceil(decades * per_decade - 1e-9)));
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = lo * std::pow(10.0, decades * double(i) / n);
  t.back() = hi;
  return t;
}

}  // namespace kinkflow
