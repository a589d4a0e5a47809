#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "kinkflow/diagnostics.hpp"
#include "kinkflow/dynamics.hpp"
#include "kinkflow/error.hpp"
#include "kinkflow/numerics.hpp"

using namespace kinkflow;

namespace {

const Kink& kink() {
  static const Kink k(Potential::canonical());
  return k;
}

const Potential& pot() { return kink().potential(); }

FieldState state(const Grid1D& g, const std::function<double(double)>& w) {
  std::vector<double> s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s[i] = w(g.x(i));
  return FieldState(g, 0.0, s);
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// u = v + eps e^{-x^2} with every derivative in closed form
struct Perturbed {
  double eps = 0.1;
  double phi(double x, int k) const { return eps * gauss_derivative(k, x); }
  double u(double x) const { return kink().v(x) + phi(x, 0); }
  double ux(double x) const { return kink().vx(x) + phi(x, 1); }
  double mu_x(double x) const {
    // mu = -u_xx + G'(u) = -phi'' + G'(v + phi) - G'(v)
    return -phi(x, 3) + pot().d2G(u(x)) * ux(x) - pot().d2G(kink().v(x)) * kink().vx(x);
  }
};

const double kEstar = 2.0 * std::sqrt(2.0) / 3.0;
const StandInCurve kCurve{0.0, 1.0, 16.0, 1.0};

}  // namespace

TEST_CASE("energy gap") {
  const Grid1D g(40.0, 4096);
  const Diagnostics d(kink(), g);
  CHECK(std::abs(d.energy_gap(state(g, [](double) { return 0.0; }))) < 1e-10);
  CHECK(std::abs(d.energy_gap(state(g, [](double x) { return kink().v(x - 5.0) - kink().v(x); })))< 1e-9);

  const Perturbed p;
  const double oracle =
      simpson([&](double x) { return 0.5 * p.ux(x) * p.ux(x) + pot().G(p.u(x)); }, -40.0, 40.0, 4 * 4096) +
      kink().energy_outside(40.0) - kEstar;
  CHECK(std::abs(d.energy_gap(state(g, [&](double x) { return p.phi(x, 0); })) - oracle) < 1e-8);
}

TEST_CASE("dissipation") {
  const Grid1D g(40.0, 4096);
  const Diagnostics d(kink(), g);
  CHECK(std::abs(d.dissipation(state(g, [](double) { return 0.0; }))) < 1e-8);
  const Perturbed p;
  const double oracle = simpson([&](double x) { return p.mu_x(x) * p.mu_x(x); }, -40.0, 40.0, 4 * 4096);
  const double D = d.dissipation(state(g, [&](double x) { return p.phi(x, 0); }));
  CHECK(D >= 0.0);
  CHECK(std::abs(D - oracle) < 1e-6);
  CHECK(d.dissipation(state(g, [](double x) { return 0.05 * std::exp(-(x - 3) * (x - 3)); })) >= 0.0);
}

TEST_CASE("shift") {
  const Grid1D g(40.0, 4096);
  const Diagnostics d(kink(), g);
  CHECK(std::abs(d.shift(state(g, [](double) { return 0.0; }), 0.0).c) < 1e-12);
  const auto sh = d.shift(state(g, [](double x) { return kink().v(x - 0.3) - kink().v(x); }), 0.0);
  CHECK(std::abs(sh.c - 0.3) < 1e-10);

  // asymmetric bump against a brute-force scan of int (u - v_c)^2
  auto w = [](double x) { return 0.4 * std::exp(-(x - 1.0) * (x - 1.0)) - 0.1 * std::exp(-(x + 2.0) * (x + 2.0) / 4); };
  const FieldState s = state(g, w);
  const double c = d.shift(s, 0.0).c;
  double best = 0.0, best_val = INFINITY;
  for (double cc = -1.0; cc <= 1.0; cc += 1e-4) {
    const double val = simpson(
        [&](double x) {
          const double r = kink().v(x) + w(x) - kink().v(x - cc);
          return r * r;
        },
        -30.0, 30.0, 6000);
    if (val < best_val) best_val = val, best = cc;
  }
  CHECK(std::abs(c - best) < 2e-4);
}

TEST_CASE("excess fields and the primitive jump") {
  const Grid1D g(40.0, 4096);
  const Diagnostics d(kink(), g);
  const auto e0 = d.excess_fields(state(g, [](double) { return 0.0; }), 0.0);
  for (double f : e0.f) CHECK(std::abs(f) < 1e-14);
  for (double F : e0.F) CHECK(std::abs(F) < 1e-14);

  // mean zero: a shifted kink with its mass returned as a gaussian
  auto w = [](double x) { return kink().v(x - 0.4) - kink().v(x) + 0.8 / std::sqrt(M_PI) * std::exp(-x * x); };
  const FieldState s = state(g, w);
  CHECK(std::abs(trapezoid(s.w, g.dx())) < 1e-10);
  const double c = d.shift(s, 0.0).c;
  const auto e = d.excess_fields(s, c);
  CHECK(e.F_left_at_c - e.F_right_at_c == doctest::Approx(2.0 * c).epsilon(1e-9));
  CHECK(std::abs(e.F.front()) < 1e-9);
  CHECK(std::abs(e.F.back()) < 1e-9);
  CHECK(d.excess_mass(e) >= 2.0 * std::abs(c));
  CHECK(d.sup_primitive(e) >= std::abs(c));
}

TEST_CASE("first moment of a mean-zero hat") {
  const Grid1D g(40.0, 4096);
  const Diagnostics d(kink(), g);
  const double wd = 2.0, a = 0.3;
  auto hat = [&](double x) {
    const double y = x / wd;
    return a * (std::exp(-y * y) - 0.5 * std::exp(-0.25 * y * y));
  };
  // primitive a w sqrt(pi)/2 (erf(y) - erf(y/2))
  auto F = [&](double x) { return a * wd * std::sqrt(M_PI) / 2 * (std::erf(x / wd) - std::erf(x / (2 * wd))); };
  const FieldState s = state(g, hat);
  const auto e = d.excess_fields(s, 0.0);
  const double oracle = simpson([&](double x) { return std::abs(F(x)); }, -40.0, 0.0, 40000) * 2.0;
  CHECK(std::abs(d.first_moment(e) - oracle) < 1e-6);
  CHECK(d.first_moment(e) <= simpson([&](double x) { return std::abs(x * hat(x)); }, -40.0, 40.0, 40000));
}

TEST_CASE("excess mass") {
  auto w = [](double x) { return 0.2 * std::exp(-x * x / 2) - 0.2 * std::exp(-(x - 4) * (x - 4) / 2); };
  const Grid1D g(40.0, 4096), fine(40.0, 4 * 4095 + 1);
  const Diagnostics d(kink(), g), df(kink(), fine);
  const FieldState s = state(g, w), sf = state(fine, w);
  const double c = d.shift(s, 0.0).c;
  const double V = d.excess_mass(d.excess_fields(s, c));
  CHECK(V == doctest::Approx(df.excess_mass(df.excess_fields(sf, c))).epsilon(1e-8));
  CHECK(V >= 2.0 * std::abs(c));
  CHECK(d.excess_mass(d.excess_fields(state(g, [](double) { return 0.0; }), 0.0)) < 1e-14);
}

TEST_CASE("stand-ins of the kink are its tails") {
  const Grid1D g(40.0, 4096);
  const Diagnostics d(kink(), g);
  const double r2 = std::sqrt(2.0);
  for (auto [gm, gp] : {std::pair{-3.0, 2.5}, std::pair{-50.0, 50.0}, std::pair{-0.5, 0.5}}) {
    const StandIns si = d.stand_ins(state(g, [](double) { return 0.0; }), gm, gp);
    CHECK(si.m_tilde == doctest::Approx(0.0));
    const double oracle = r2 * std::log1p(std::exp(r2 * gm)) + r2 * std::log1p(std::exp(-r2 * gp));
    CHECK(si.v_tilde == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("H^-1 norm") {
  const Grid1D g(40.0, 4096);
  const Diagnostics d(kink(), g);
  CHECK(d.h_minus1_sq(std::vector<double>(g.size(), 0.0)) == 0.0);
  // f = (e^{-x^2/w^2})', so F is the gaussian and int F^2 = w sqrt(pi/2)
  const double wd = 1.5;
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = -2 * g.x(i) / (wd * wd) * std::exp(-g.x(i) * g.x(i) / (wd * wd));
  CHECK(std::abs(d.h_minus1_sq(f) - wd * std::sqrt(M_PI / 2)) < 1e-8);
  std::vector<double> lump(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) lump[i] = std::exp(-g.x(i) * g.x(i));
  CHECK_THROWS_AS(d.h_minus1_sq(lump), Error);
}

TEST_CASE("two-bump data: H^-1 grows with the separation, V does not") {
  const Grid1D g(200.0, 8192);
  const Diagnostics d(kink(), g);
  InitialDataSpec two;
  two.family = "two-bump";
  two.amplitude = 0.3;
  two.width = 2.0;
  std::vector<double> H, V;
  for (double R : {25.0, 50.0}) {
    two.separation = R;
    const FieldState s = make_initial_data(two, g, kink());
    const auto r = d.record(s, 0.0, kCurve);
    H.push_back(r.hm1_sq);
    V.push_back(r.excess_mass_V);
  }
  CHECK(H[1] / H[0] > 1.5);
  CHECK(V[1] == doctest::Approx(V[0]).epsilon(1e-6));
}

TEST_CASE("record of the kink is zero") {
  const Grid1D g(40.0, 4096);
  const Diagnostics d(kink(), g);
  Observables obs;
  const auto r = d.record(state(g, [](double) { return 0.0; }), 0.0, kCurve, &obs);
  CHECK(r.energy_gap < 1e-10);
  CHECK(r.dissipation < 1e-10);
  CHECK(r.first_moment_M < 1e-12);
  CHECK(r.excess_mass_V < 1e-12);
  CHECK(r.sup_fc < 1e-12);
  CHECK(obs.jump == doctest::Approx(0.0));
}
