#pragma once

#include <initializer_list>
#include <vector>

namespace kinkflow {

// Derivatives of node samples through the cosine series of the even
// extension across both ends (period 4L). Exact for fields with vanishing odd
// derivatives at the ends, which is what no-flux states and decaying
// perturbations satisfy; used by the diagnostics where the second-order
// stencils would put an O(dx^2) bias on integrals that must resolve 1e-9.
// Returns one vector per requested order, in request order.
std::vector<std::vector<double>> cosine_derivatives(const std::vector<double>& f, double dx,
                                                    std::initializer_list<int> orders);

}  // namespace kinkflow
