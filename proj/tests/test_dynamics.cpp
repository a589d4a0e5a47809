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

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

const Kink& kink() {
  static const Kink k(Potential::canonical());
  return k;
}

InitialDataSpec bump(double amplitude = 0.3, double width = 2.0) {
  InitialDataSpec s;
  s.family = "bump";
  s.amplitude = amplitude;
  s.width = width;
  return s;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

FieldState advance(FieldState s, double dt, double T) {
  const Stepper st(kink(), s.grid, dt, 2.0);
  const int n = int(std::lround(T / dt));
  for (int i = 0; i < n; ++i) st.step(s);
  return s;
}

}  // namespace

TEST_CASE("initial data families") {
  const Grid1D g(100.0, 4096);
  InitialReport rep;
  const FieldState zero = make_initial_data(bump(0.0), g, kink(), &rep);
  for (double w : zero.w) CHECK(w == 0.0);
  CHECK(rep.energy_gap == doctest::Approx(0.0));
  CHECK(rep.margin > 0.9);

  const FieldState b = make_initial_data(bump(), g, kink(), &rep);
  CHECK(std::abs(trapezoid(b.w, g.dx())) < 1e-10);
  CHECK(rep.energy_gap > 0.0);
  CHECK(rep.margin >= 0.05);

  InitialDataSpec two;
  two.family = "two-bump";
  two.amplitude = 0.3;
  two.width = 2.0;
  two.separation = 50.0;
  const FieldState tb = make_initial_data(two, g, kink());
  CHECK(std::abs(trapezoid(tb.w, g.dx())) < 1e-10);
  // each gaussian carries amplitude * width * sqrt(pi) of L1 mass
  const Diagnostics d(kink(), g);
  const auto rec = d.record(tb, 0.0, StandInCurve{0.0, 1.0, 16.0, 1.0});
  CHECK(rec.excess_mass_V == doctest::Approx(2.0 * 0.3 * 2.0 * std::sqrt(M_PI)).epsilon(0.01));

  InitialDataSpec huge = bump(3.0, 4.0);
  CHECK(error_code([&] { make_initial_data(huge, g, kink()); }) == "energy-condition-violated");
  InitialDataSpec bad = bump();
  bad.family = "square";
  CHECK(error_code([&] { make_initial_data(bad, g, kink()); }) == "unknown-family");
}

TEST_CASE("random bumps are seeded") {
  const Grid1D g(100.0, 2048);
  InitialDataSpec r;
  r.family = "random-bumps";
  r.amplitude = 0.2;
  r.width = 1.5;
  r.count = 3;
  r.seed = 11;
  const auto a = make_initial_data(r, g, kink());
  const auto b = make_initial_data(r, g, kink());
  CHECK(a.w == b.w);
  r.seed = 12;
  CHECK(max_abs_diff(make_initial_data(r, g, kink()).w, a.w) > 1e-3);
}

TEST_CASE("the kink is a fixed point of the scheme") {
  const Grid1D g(60.0, 1024);
  FieldState s(g, 0.0, std::vector<double>(g.size(), 0.0));
  s = advance(s, 0.05, 5.0);
  for (double w : s.w) CHECK(w == 0.0);
}

TEST_CASE("steps decrease the energy and keep the mass") {
  const Grid1D g(80.0, 2048);
  const Diagnostics d(kink(), g);
  FieldState s = make_initial_data(bump(), g, kink());
  const Stepper st(kink(), g, 0.05, 2.0);
  double E = d.energy_gap(s);
  for (int n = 0; n < 200; ++n) {
    st.step(s);
    const double En = d.energy_gap(s);
    CHECK(En <= E + 1e-13);
    E = En;
    CHECK(std::abs(trapezoid(s.w, g.dx())) < 1e-12);
  }
}

TEST_CASE("time stepping is first order") {
  const Grid1D g(60.0, 1024);
  const FieldState s0 = make_initial_data(bump(), g, kink());
  const auto ref = advance(s0, 0.0025, 1.0).w;
  const double e1 = max_abs_diff(advance(s0, 0.02, 1.0).w, ref);
  const double e2 = max_abs_diff(advance(s0, 0.01, 1.0).w, ref);
  // with a dt/8 reference the observed ratio of a first-order error is (1 - 1/8)/(1/2 - 1/8) = 7/3
  CHECK(e1 / e2 == doctest::Approx(7.0 / 3.0).epsilon(0.15));
}

TEST_CASE("output times") {
  SolverConfig c;
  c.dt = 0.05;
  c.T_final = 10.0;
  c.output_stride = 2.0;
  c.early_per_decade = 4;
  const auto t = output_times(c);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == doctest::Approx(10.0));
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
  CHECK(std::count_if(t.begin(), t.end(), [](double x) { return x > 0.0 && x < 2.0; }) >= 4);
}

TEST_CASE("runs") {
  const Grid1D g(150.0, 4096);
  SolverConfig c;
  c.dt = 0.05;
  c.output_stride = 1.0;
  const StandInCurve curve{0.0, 1.0, 16.0, 0.0};

  c.T_final = 0.0;
  const FieldState s0 = make_initial_data(bump(), g, kink());
  const Trajectory only = run(s0, kink(), c, curve);
  REQUIRE(only.points.size() == 1);
  CHECK(only.points[0].rec.t == 0.0);

  c.T_final = 10.0;
  const Trajectory idle = run(FieldState(g, 0.0, std::vector<double>(g.size(), 0.0)), kink(), c, curve);
  for (const auto& p : idle.points) {
    CHECK(p.rec.energy_gap <= 1e-10);
    CHECK(p.rec.dissipation <= 1e-10);
  }

  c.T_final = 50.0;
  int seen = 0;
  const Trajectory tr = run(s0, kink(), c, curve, [&](const TrajectoryPoint&) { ++seen; });
  CHECK(seen == int(tr.points.size()));
  CHECK(tr.points.back().rec.energy_gap < tr.points.front().rec.energy_gap);
  for (std::size_t i = 1; i < tr.points.size(); ++i)
    CHECK(tr.points[i].rec.energy_gap <= tr.points[i - 1].rec.energy_gap * (1 + 1e-12));
  CHECK(tr.max_mass_drift < 1e-10);

  // byte-identical on a second run
  const Trajectory again = run(s0, kink(), c, curve);
  REQUIRE(again.points.size() == tr.points.size());
  for (std::size_t i = 0; i < tr.points.size(); ++i) {
    CHECK(again.points[i].rec.energy_gap == tr.points[i].rec.energy_gap);
    CHECK(again.points[i].rec.shift_c == tr.points[i].rec.shift_c);
  }
}

TEST_CASE("a disturbance reaching the ends is reported") {
  const Grid1D g(12.0, 512);
  SolverConfig c;
  c.dt = 0.05;
  c.T_final = 200.0;
  CHECK(error_code([&] { run(make_initial_data(bump(), g, kink()), kink(), c, StandInCurve{}); }) ==
        "domain-too-small");
}

TEST_CASE("energy identity defect halves with dt") {
  const Grid1D g(80.0, 2048);
  const FieldState s0 = make_initial_data(bump(), g, kink());
  const std::vector<double> ts = {1.0, 5.0, 20.0};
  const auto a = identity_defect(s0, kink(), 0.01, 2.0, ts);
  const auto b = identity_defect(s0, kink(), 0.005, 2.0, ts);
  CHECK(a.max_rel < 0.1);
  CHECK(b.max_rel / a.max_rel == doctest::Approx(0.5).epsilon(0.25));
}
