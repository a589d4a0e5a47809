#pragma once

#include <array>
#include <vector>

namespace kinkflow {

// Pentadiagonal matrix stored by diagonals: band[d][i] = A(i, i + d - 2).
struct Penta {
  std::vector<std::array<double, 5>> band;

  explicit Penta(std::size_t n = 0) : band(n, std::array<double, 5>{0, 0, 0, 0, 0}) {}
  std::size_t size() const { return band.size(); }
  double& at(std::size_t i, std::size_t j) { return band[i][j + 2 - i]; }
  std::vector<double> apply(const std::vector<double>& x) const;
};

// Tridiagonal second difference with mirror (no-flux) ends.
Penta neumann_laplacian(std::size_t n, double dx);
Penta multiply(const Penta& a, const Penta& b);  // valid while the product stays pentadiagonal
Penta linear_combination(double a, const Penta& A, double b, const Penta& B);
Penta identity_penta(std::size_t n);

// LU factorisation without pivoting. Works for the operators used here, which
// are similar (by the diagonal trapezoid weights) to symmetric positive
// definite matrices. Throws linear-solve-failure on a vanishing pivot.
class PentaLU {
 public:
  PentaLU() = default;
  explicit PentaLU(Penta a);
  std::vector<double> solve(std::vector<double> rhs) const;
  bool empty() const { return a_.size() == 0; }

 private:
  Penta a_;
};

}  // namespace kinkflow
