#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace kinkflow {

// Composite trapezoid rule on a uniform grid.
double trapezoid(const std::vector<double>& f, double dx);

// Second-order central differences in the interior, second-order one-sided
// stencils near both ends. order in 1..4.
std::vector<double> spatial_derivative(const std::vector<double>& f, int order, double dx);

// Running integral int_{x_0}^{x_i} f with the Euler-Maclaurin end correction
// -dx^2/12 (f'(x_i) - f'(x_0)), i.e. fourth-order accurate when fx is exact.
std::vector<double> cumulative_integral(const std::vector<double>& f, const std::vector<double>& fx, double dx);

// Cubic Hermite interpolant on [0,h] through (p0,d0), (p1,d1), evaluated at s.
double hermite_value(double p0, double p1, double d0, double d1, double h, double s);
double hermite_slope(double p0, double p1, double d0, double d1, double h, double s);

// Exact int_a^b |p(s)| ds for the cubic Hermite interpolant on [0,h],
// 0 <= a <= b <= h. Sign changes are located by bisection.
double hermite_abs_integral(double p0, double p1, double d0, double d1, double h, double a, double b);
double hermite_integral(double p0, double p1, double d0, double d1, double h, double a, double b);

// Gauss-Legendre nodes and weights on [-1,1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);
const GaussRule& gauss_hermite(int n);  // weight exp(-x^2)

// d^k/dy^k exp(-y^2) = (-1)^k H_k(y) exp(-y^2) with H_k the physicists' Hermite polynomial.
double gauss_derivative(int k, double y);

// Log-spaced grid with the given number of points per decade, both ends included.
std::vector<double> log_grid(double lo, double hi, int per_decade);

}  // namespace kinkflow
