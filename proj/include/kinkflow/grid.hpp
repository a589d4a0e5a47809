#pragma once

#include <cstddef>
#include <vector>

namespace kinkflow {

// Uniform grid on [-L, L] with N nodes.
class Grid1D {
 public:
  Grid1D() = default;
  Grid1D(double L, std::size_t N);

  double L() const { return L_; }
  std::size_t size() const { return N_; }
  double dx() const { return dx_; }
  double x(std::size_t i) const { return -L_ + dx_ * double(i); }
  const std::vector<double>& nodes() const { return x_; }

  // Index k with x_k <= y < x_{k+1}, clamped to [0, N-2].
  std::size_t cell(double y) const;

 private:
  double L_ = 0.0;
  std::size_t N_ = 0;
  double dx_ = 0.0;
  std::vector<double> x_;
};

// Samples of w = u - v at the grid nodes together with the time stamp.
struct FieldState {
  Grid1D grid;
  double t = 0.0;
  std::vector<double> w;

  FieldState() = default;
  FieldState(Grid1D g, double time, std::vector<double> samples);

  double boundary_residual() const;
  // Throws domain-too-small if |w| at either end node exceeds tol.
  void check_truncation(double tol = 1e-9) const;
};

}  // namespace kinkflow
