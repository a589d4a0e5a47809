#pragma once

#include <vector>

namespace kinkflow {

struct PotentialValue {
  double G;
  double dG;
  double d2G;
};

// Even double-well potential with minima at u = +-1.
// Either the canonical quartic 1/4 (1-u^2)^2 or a polynomial in u^2,
// G(u) = sum_k a_k u^{2k}.
class Potential {
 public:
  static Potential canonical();
  static Potential even_polynomial(std::vector<double> a);

  double G(double u) const;
  double dG(double u) const;
  double d2G(double u) const;
  PotentialValue eval(double u) const { return {G(u), dG(u), d2G(u)}; }

  bool is_canonical() const { return canonical_; }
  const std::vector<double>& coefficients() const { return a_; }
  double well_curvature() const { return d2G(1.0); }

 private:
  Potential(std::vector<double> a, bool canonical);
  void validate() const;

  std::vector<double> a_;
  bool canonical_;
};

}  // namespace kinkflow
