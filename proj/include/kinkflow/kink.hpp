#pragma once

#include <vector>

#include "kinkflow/grid.hpp"
#include "kinkflow/potential.hpp"

namespace kinkflow {

// Heteroclinic profile v connecting -1 to +1 with v(0) = 0.
// Canonical potential: v = tanh(x/sqrt2). Otherwise v_x = sqrt(2G(v)) is
// integrated once on a fine table and read back by cubic Hermite
// interpolation (the slope at every table node is exact).
class Kink {
 public:
  explicit Kink(Potential p);

  const Potential& potential() const { return pot_; }

  double v(double x) const;
  double vx(double x) const;
  // v_xx = G'(v) and v_xxx = G''(v) v_x hold exactly for the minimizer.
  double vxx(double x) const { return pot_.dG(v(x)); }
  double vxxx(double x) const { return pot_.d2G(v(x)) * vx(x); }

  // e* = int sqrt(2G(s)) ds over (-1,1).
  double e_star() const { return e_star_; }

  // int_{-inf}^{a} (1 + v) dx and int_{a}^{inf} (1 - v) dx.
  double tail_mass_minus(double a) const;
  double tail_mass_plus(double a) const { return tail_mass_minus(-a); }

  // Energy carried by |x| > L (both sides).
  double energy_outside(double L) const;

 private:
  double one_minus_v(double y) const;  // 1 - v(y) for y >= 0, accurate when tiny

  Potential pot_;
  double e_star_ = 0.0;
  double kappa_ = 0.0;  // sqrt(G''(1)), the tail decay rate
  double h_ = 0.0;
  double xmax_ = 0.0;
  std::vector<double> tab_;  // 1 - v on [0, xmax]
};

struct KinkEnergy {
  double e_star;
  double gradient_half;   // int 1/2 v_x^2
  double potential_half;  // int G(v)
  double tail;            // part of e_star lying outside the grid
};

// Grid quadrature of the kink energy with the outside tail added back.
// Throws grid-too-small if the tail exceeds 1e-10.
KinkEnergy kink_energy(const Kink& k, const Grid1D& g);

}  // namespace kinkflow
