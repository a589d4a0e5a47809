#include "kinkflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kinkflow/error.hpp"

namespace kinkflow {

Grid1D::Grid1D(double L, std::size_t N) : L_(L), N_(N) {
  if (N < 16) throw config_error("bad-grid", "need N >= 16, got " + num(N));
  if (!(L > 0.0)) throw config_error("bad-grid", "half-width must be positive");
  dx_ = 2.0 * L / double(N - 1);
  x_.resize(N);
  for (std::size_t i = 0; i < N; ++i) x_[i] = -L + dx_ * double(i);
  x_.back() = L;
}

std::size_t Grid1D::cell(double y) const {
  const double s = std::floor((y + L_) / dx_);
  if (s <= 0.0) return 0;
  return std::min<std::size_t>(std::size_t(s), N_ - 2);
}

FieldState::FieldState(Grid1D g, double time, std::vector<double> samples)
    : grid(std::move(g)), t(time), w(std::move(samples)) {
  if (w.size() != grid.size()) throw config_error("bad-state", "sample count does not match grid");
}

double FieldState::boundary_residual() const { return std::max(std::abs(w.front()), std::abs(w.back())); }

void FieldState::check_truncation(double tol) const {
  const double r = boundary_residual();
  if (r > tol)
    throw config_error("domain-too-small",
                       "|w| at the domain ends is " + num(r) + " > " + num(tol));
}

}  // namespace kinkflow
