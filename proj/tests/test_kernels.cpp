#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "kinkflow/error.hpp"
#include "kinkflow/kernels.hpp"
#include "kinkflow/numerics.hpp"

using namespace kinkflow;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// d^k/dx^k of (1/pi) int_0^inf cos(kx) e^{-t(k^2 + k^4)} dk, by brute-force Simpson
double fourier_oracle(double t, double x, int k) {
  auto f = [&](double q) {
    const double damp = std::exp(-t * (q * q + q * q * q * q));
    // d^k cos(qx)/dx^k = q^k cos(qx + k pi/2)
    return std::pow(q, k) * std::cos(q * x + 0.5 * M_PI * k) * damp;
  };
  const double Q = std::max(8.0, std::pow(40.0 / t, 0.25) * 1.5);
  return simpson(f, 0.0, Q, 200000) / M_PI;
}

double profile_integral(const KernelSample& s, const std::function<double(double)>& w) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < s.x.size(); ++i)
    acc += 0.5 * (s.x[i + 1] - s.x[i]) * (s.values[i] * w(s.x[i]) + s.values[i + 1] * w(s.x[i + 1]));
  return acc;
}

}  // namespace

TEST_CASE("heat kernel") {
  CHECK(heat_kernel(1.0, 0.0) == doctest::Approx(1.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-15));
  CHECK(simpson([](double x) { return heat_kernel(0.7, x); }, -30.0, 30.0, 6000) == doctest::Approx(1.0).epsilon(1e-10));
  for (double t : {0.01, 3.0, 250.0})
    for (double x : {-2.0, 0.3, 7.0})
      CHECK(heat_kernel(t, x) == doctest::Approx(heat_kernel(1.0, x / std::sqrt(t)) / std::sqrt(t)).epsilon(1e-14));
  // x-derivatives against centred differences
  const double h = 1e-4;
  for (int k = 1; k <= 4; ++k)
    CHECK(heat_kernel(1.3, 0.8, k) ==
          doctest::Approx((heat_kernel(1.3, 0.8 + h, k - 1) - heat_kernel(1.3, 0.8 - h, k - 1)) / (2 * h)).epsilon(1e-6));
  CHECK(heat_semigroup_defect(0.5, 1.5) < 1e-12);
}

TEST_CASE("biharmonic kernel") {
  CHECK(biharmonic_kernel(1.0, 0.0) == doctest::Approx(std::tgamma(1.25) / M_PI).epsilon(1e-10));
  CHECK(simpson([](double x) { return biharmonic_kernel(1.0, x); }, -25.0, 25.0, 5000) ==
        doctest::Approx(1.0).epsilon(1e-8));
  double lowest = 0.0;
  for (double x = 0.0; x < 10.0; x += 0.05) lowest = std::min(lowest, biharmonic_kernel(1.0, x));
  CHECK(lowest < -1e-3);
  for (double t : {0.02, 5.0})
    for (double x : {0.4, 2.5})
      CHECK(biharmonic_kernel(t, x) ==
            doctest::Approx(biharmonic_kernel(1.0, x * std::pow(t, -0.25)) * std::pow(t, -0.25)).epsilon(1e-9));
  for (int k = 0; k <= 5; ++k)
    CHECK(biharmonic_kernel(1.0, -1.7, k) == doctest::Approx((k % 2 ? -1.0 : 1.0) * biharmonic_kernel(1.0, 1.7, k)));
  CHECK_THROWS_AS(biharmonic_kernel(1.0, 0.0, 9), Error);
}

TEST_CASE("combined kernel against a Fourier oracle") {
  CHECK(std::abs(combined_kernel(1.0, 0.0) - fourier_oracle(1.0, 0.0, 0)) < 1e-6);
  for (double t : {0.05, 0.5, 2.0})
    for (double x : {0.0, 0.9, 3.0})
      for (int k = 0; k <= 5; ++k) {
        const double ref = fourier_oracle(t, x, k);
        const double scale = std::max(1.0, std::abs(fourier_oracle(t, 0.0, k - k % 2)));
        CHECK(std::abs(combined_kernel(t, x, k) - ref) < 1e-8 * scale);
        CHECK(std::abs(combined_kernel_fourier(t, x, k) - ref) < 1e-8 * scale);
      }
}

TEST_CASE("combined kernel mass, parity and moments") {
  for (double t : {0.01, 1.0, 100.0}) {
    const KernelSample s = kernel_profile("H", t, 0);
    CHECK(profile_integral(s, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(profile_integral(s, [](double x) { return x; })) < 1e-8);
    // the biharmonic factor has zero second moment, so int x^2 H = 2t (signed)
    CHECK(profile_integral(s, [](double x) { return x * x; }) == doctest::Approx(2.0 * t).epsilon(1e-5));
  }
  for (int k = 0; k <= 5; ++k)
    CHECK(combined_kernel(0.3, -2.2, k) == doctest::Approx((k % 2 ? -1.0 : 1.0) * combined_kernel(0.3, 2.2, k)));
  // H(1, .) dips below zero, so |H| moments exceed the signed ones
  CHECK(weighted_moment_table(0, 2.0, 0.2, {1.0})[0].moment > 2.0);
}

TEST_CASE("combined semigroup") {
  const double s = 0.4, t = 0.9;
  for (double x : {0.0, 1.1, 2.7}) {
    const double conv = simpson([&](double y) { return combined_kernel(s, x - y) * combined_kernel(t, y); }, -25.0, 25.0, 4000);
    CHECK(std::abs(conv - combined_kernel(s + t, x)) < 1e-9);
  }
}

TEST_CASE("time derivative of the combined kernel") {
  const double t = 0.6, x = 1.2, e = 1e-5;
  const double fd = (combined_kernel(t + e, x) - combined_kernel(t - e, x)) / (2 * e);
  CHECK(combined_kernel_t(t, x) == doctest::Approx(fd).epsilon(1e-6));
  CHECK(combined_kernel_t(t, x) == doctest::Approx(combined_kernel(t, x, 2) - combined_kernel(t, x, 4)));
}

TEST_CASE("norm tables") {
  const std::vector<double> ts = {1e-3, 0.1, 1.0, 10.0, 1e3};
  const auto coarse = kernel_norm_table("H2", 0, 1, ts), fine = kernel_norm_table("H2", 0, 1, ts, KernelAccuracy{2});
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const auto& r = coarse[i];
    if (r.k == 0) CHECK(r.l1 == doctest::Approx(1.0).epsilon(1e-6));
    if (r.k == 1) {
      // ||H2_x||_1 = 2 H2(t, 0); trapezoid error is second order in the profile spacing
      const double exact = 1.0 / std::sqrt(M_PI * r.t);
      const double e1 = std::abs(r.l1 / exact - 1.0), e2 = std::abs(fine[i].l1 / exact - 1.0);
      CHECK(e1 < 1e-4);
      CHECK(e2 < e1 / 3.0);
    }
  }
  for (const auto& r : weighted_moment_table(0, 0.0, 0.2, {100.0}))
    if (r.kernel == "H") CHECK(r.l1 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(kernel_norm_table("H7", 1, 1, ts), Error);
}

TEST_CASE("scaled norms are bounded and converge under refinement") {
  const std::vector<double> ts = log_grid(1e-3, 1e3, 2);
  const auto a = kernel_scaling_sups(kernel_norm_table("H", 1, 4, ts));
  const auto b = kernel_scaling_sups(kernel_norm_table("H", 1, 4, ts, KernelAccuracy{2}));
  REQUIRE(a.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::isfinite(a[i].small_t));
    CHECK(std::isfinite(a[i].large_t));
    CHECK(std::abs(a[i].small_t / b[i].small_t - 1.0) < 0.05);
    CHECK(std::abs(a[i].large_t / b[i].large_t - 1.0) < 0.05);
  }
  // at large t the combined kernel behaves like the heat kernel: t^{1/2} ||H_x|| -> pi^{-1/2}
  CHECK(a[0].large_t == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(0.02));
}

TEST_CASE("poisson kernel") {
  for (double t : {0.05, 1.0, 20.0})
    for (double x : {0.1, 1.0, 4.0}) {
      CHECK(std::abs(poisson_kernel(t, x) + 2.0 * (combined_kernel(t, x, 1) - combined_kernel(t, x, 3))) < 1e-8);
      const double h = 1e-4;
      CHECK(poisson_kernel_x(t, x) ==
            doctest::Approx((poisson_kernel(t, x + h) - poisson_kernel(t, x - h)) / (2 * h)).epsilon(1e-5));
    }
  const PoissonMass m = poisson_mass(1.0);
  CHECK(std::abs(m.integral - 1.0) <= 1e-4);
  CHECK(m.integral == doctest::Approx(m.head + m.tail));
}

TEST_CASE("poisson weighted ratio") {
  // alpha = 0: int |P| dt >= |int P dt| = 1
  CHECK(poisson_weighted_ratio(1.0, 0.0) >= 1.0 - 1e-4);
  const double r1 = poisson_weighted_ratio(1.0, 0.2), r10 = poisson_weighted_ratio(10.0, 0.2);
  CHECK(std::isfinite(r1));
  CHECK(r10 == doctest::Approx(r1).epsilon(0.1));
  CHECK_THROWS_AS(poisson_weighted_ratio(1.0, 0.3), Error);
}
