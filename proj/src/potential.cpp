#include "kinkflow/potential.hpp"

#include <cmath>
#include <string>

#include "kinkflow/error.hpp"

namespace kinkflow {

Potential::Potential(std::vector<double> a, bool canonical) : a_(std::move(a)), canonical_(canonical) {}

Potential Potential::canonical() { return Potential({0.25, -0.5, 0.25}, true); }

Potential Potential::even_polynomial(std::vector<double> a) {
  if (a.size() < 2) throw config_error("bad-potential", "need at least two coefficients");
  Potential p(std::move(a), false);
  p.validate();
  return p;
}

void Potential::validate() const {
  if (std::abs(G(1.0)) > 1e-12 || std::abs(G(-1.0)) > 1e-12)
    throw config_error("bad-potential", "G(+-1) must vanish, got G(1)=" + num(G(1.0)));
  if (!(d2G(1.0) > 0.0)) throw config_error("bad-potential", "G''(1) must be positive");
  for (int i = 0; i <= 400; ++i) {
    const double u = -2.0 + 0.01 * i;
    if (std::abs(std::abs(u) - 1.0) < 1e-9) continue;
    if (!(G(u) > 0.0)) throw config_error("bad-potential", "G not positive at u=" + num(u));
  }
}

double Potential::G(double u) const {
  if (canonical_) {
    const double s = 1.0 - u * u;
    return 0.25 * s * s;
  }
  const double u2 = u * u;
  double acc = 0.0;
  for (auto it = a_.rbegin(); it != a_.rend(); ++it) acc = acc * u2 + *it;
  return acc;
}

double Potential::dG(double u) const {
  if (canonical_) return u * u * u - u;
  // d/du sum a_k u^{2k} = sum 2k a_k u^{2k-1}
  const double u2 = u * u;
  double acc = 0.0;
  for (std::size_t k = a_.size() - 1; k >= 1; --k) acc = acc * u2 + 2.0 * double(k) * a_[k];
  return acc * u;
}

double Potential::d2G(double u) const {
  if (canonical_) return 3.0 * u * u - 1.0;
  const double u2 = u * u;
  double acc = 0.0;
  for (std::size_t k = a_.size() - 1; k >= 1; --k) acc = acc * u2 + 2.0 * double(k) * (2.0 * double(k) - 1.0) * a_[k];
  return acc;
}

}  // namespace kinkflow
