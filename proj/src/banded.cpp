#include "kinkflow/banded.hpp"

#include <cmath>
#include <string>

#include "kinkflow/error.hpp"

namespace kinkflow {

std::vector<double> Penta::apply(const std::vector<double>& x) const {
  const std::size_t n = size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int d = 0; d < 5; ++d) {
      const long j = long(i) + d - 2;
      if (j >= 0 && j < long(n)) s += band[i][d] * x[j];
    }
    y[i] = s;
  }
  return y;
}

Penta neumann_laplacian(std::size_t n, double dx) {
  Penta a(n);
  const double s = 1.0 / (dx * dx);
  for (std::size_t i = 0; i < n; ++i) {
    a.at(i, i) = -2.0 * s;
    if (i > 0) a.at(i, i - 1) = s;
    if (i + 1 < n) a.at(i, i + 1) = s;
  }
  // ghost node mirrored: f_{-1} = f_1, f_N = f_{N-2}
  a.at(0, 1) = 2.0 * s;
  a.at(n - 1, n - 2) = 2.0 * s;
  return a;
}

Penta multiply(const Penta& a, const Penta& b) {
  const std::size_t n = a.size();
  Penta c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int da = 0; da < 5; ++da) {
      const long k = long(i) + da - 2;
      if (k < 0 || k >= long(n) || a.band[i][da] == 0.0) continue;
      for (int db = 0; db < 5; ++db) {
        const long j = k + db - 2;
        if (j < 0 || j >= long(n) || b.band[k][db] == 0.0) continue;
        const long d = j - long(i) + 2;
        if (d < 0 || d > 4) throw numerical_error("band-overflow", "product leaves the pentadiagonal band");
        c.band[i][d] += a.band[i][da] * b.band[k][db];
      }
    }
  return c;
}

Penta linear_combination(double a, const Penta& A, double b, const Penta& B) {
  Penta c(A.size());
  for (std::size_t i = 0; i < A.size(); ++i)
    for (int d = 0; d < 5; ++d) c.band[i][d] = a * A.band[i][d] + b * B.band[i][d];
  return c;
}

Penta identity_penta(std::size_t n) {
  Penta c(n);
  for (std::size_t i = 0; i < n; ++i) c.band[i][2] = 1.0;
  return c;
}

PentaLU::PentaLU(Penta a) : a_(std::move(a)) {
  const std::size_t n = a_.size();
  auto& m = a_.band;
  for (std::size_t k = 0; k < n; ++k) {
    const double piv = m[k][2];
    if (!(std::abs(piv) > 1e-300) || !std::isfinite(piv))
      throw numerical_error("linear-solve-failure", "vanishing pivot at row " + num(k));
    for (std::size_t r = k + 1; r <= k + 2 && r < n; ++r) {
      const int dk = int(k) - int(r) + 2;  // column k in row r
      const double l = m[r][dk] / piv;
      m[r][dk] = l;
      for (std::size_t j = k + 1; j <= k + 2 && j < n; ++j) m[r][int(j) - int(r) + 2] -= l * m[k][int(j) - int(k) + 2];
    }
  }
}

std::vector<double> PentaLU::solve(std::vector<double> b) const {
  const std::size_t n = a_.size();
  const auto& m = a_.band;
  for (std::size_t r = 1; r < n; ++r) {
    double s = b[r];
    for (std::size_t k = (r >= 2 ? r - 2 : 0); k < r; ++k) s -= m[r][int(k) - int(r) + 2] * b[k];
    b[r] = s;
  }
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t j = r + 1; j <= r + 2 && j < n; ++j) s -= m[r][int(j) - int(r) + 2] * b[j];
    b[r] = s / m[r][2];
  }
  return b;
}

}  // namespace kinkflow
