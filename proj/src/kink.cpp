#include "kinkflow/kink.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "kinkflow/error.hpp"
#include "kinkflow/numerics.hpp"

namespace kinkflow {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSwitch = 1e-6;  // below this 1-v is continued exponentially
}  // namespace

Kink::Kink(Potential p) : pot_(std::move(p)) {
  kappa_ = std::sqrt(pot_.well_curvature());
  if (pot_.is_canonical()) {
    e_star_ = 2.0 * kSqrt2 / 3.0;
    return;
  }
  auto slope = [this](double s) { return std::sqrt(std::max(0.0, 2.0 * pot_.G(s))); };
  e_star_ = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(slope, -1.0, 1.0, 15, 1e-14);

  // q = 1 - v solves q' = -sqrt(2 G(1-q)), q(0) = 1.
  using namespace boost::numeric::odeint;
  using state = std::array<double, 1>;
  auto rhs = [this](const state& q, state& dq, double) {
    const double s = std::clamp(1.0 - q[0], -1.0, 1.0);
    dq[0] = -std::sqrt(std::max(0.0, 2.0 * pot_.G(s)));
  };
  h_ = 1.0 / 256.0;
  state q{1.0};
  tab_.push_back(1.0);
  auto stepper = make_dense_output(1e-15, 1e-13, runge_kutta_dopri5<state>());
  stepper.initialize(q, 0.0, h_);
  double y = 0.0;
  while (tab_.back() > kSwitch && y < 200.0) {
    const double target = y + h_;
    while (stepper.current_time() < target) stepper.do_step(rhs);
    stepper.calc_state(target, q);
    y = target;
    tab_.push_back(std::max(q[0], 0.0));
  }
  xmax_ = y;
}

double Kink::one_minus_v(double y) const {
  if (pot_.is_canonical()) {
    const double e = std::exp(-2.0 * y / kSqrt2);
    return 2.0 * e / (1.0 + e);
  }
  if (y >= xmax_) return tab_.back() * std::exp(-kappa_ * (y - xmax_));
  const std::size_t i = std::min<std::size_t>(std::size_t(y / h_), tab_.size() - 2);
  const double y0 = double(i) * h_;
  auto dq = [this](double q) { return -std::sqrt(std::max(0.0, 2.0 * pot_.G(1.0 - q))); };
  return hermite_value(tab_[i], tab_[i + 1], dq(tab_[i]), dq(tab_[i + 1]), h_, y - y0);
}

double Kink::v(double x) const {
  if (pot_.is_canonical()) return std::tanh(x / kSqrt2);
  const double q = one_minus_v(std::abs(x));
  return x >= 0 ? 1.0 - q : q - 1.0;
}

double Kink::vx(double x) const {
  if (pot_.is_canonical()) {
    const double c = std::cosh(x / kSqrt2);
    return 1.0 / (kSqrt2 * c * c);
  }
  const double ax = std::abs(x);
  if (ax >= xmax_) return kappa_ * one_minus_v(ax);
  return std::sqrt(std::max(0.0, 2.0 * pot_.G(v(ax))));
}

double Kink::tail_mass_minus(double a) const {
  if (pot_.is_canonical()) return kSqrt2 * std::log1p(std::exp(kSqrt2 * a));
  // int_{-inf}^{a} (1+v) = int_{-a}^{inf} (1-v)
  const double b = -a;
  auto q = [this](double y) { return y >= 0 ? one_minus_v(y) : 2.0 - one_minus_v(-y); };
  const double far = std::max(b, xmax_);
  double acc = one_minus_v(far) / kappa_;
  if (b < xmax_) {
    acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(q, b, xmax_, 20, 1e-13);
  }
  return acc;
}

double Kink::energy_outside(double L) const {
  const double q = one_minus_v(L);
  if (pot_.is_canonical()) return 2.0 * (q * q - q * q * q / 3.0) / kSqrt2;
  if (q < kSwitch) return kappa_ * q * q;
  auto slope = [this](double r) { return std::sqrt(std::max(0.0, 2.0 * pot_.G(1.0 - r))); };
  return 2.0 * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(slope, 0.0, q, 10, 1e-14);
}

KinkEnergy kink_energy(const Kink& k, const Grid1D& g) {
  const auto& x = g.nodes();
  std::vector<double> grad(x.size()), pot(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double vx = k.vx(x[i]);
    grad[i] = 0.5 * vx * vx;
    pot[i] = k.potential().G(k.v(x[i]));
  }
  const double tail = k.energy_outside(g.L());
  if (tail > 1e-10)
    throw config_error("grid-too-small", "kink energy outside [-L,L] is " + num(tail));
  KinkEnergy e{};
  e.tail = tail;
  e.gradient_half = trapezoid(grad, g.dx()) + 0.5 * tail;
  e.potential_half = trapezoid(pot, g.dx()) + 0.5 * tail;
  e.e_star = e.gradient_half + e.potential_half;
  return e;
}

}  // namespace kinkflow
