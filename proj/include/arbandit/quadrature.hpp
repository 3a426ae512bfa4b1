#pragma once

#include <cstddef>
#include <vector>

namespace arb {

// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton iteration on the Legendre three-term recurrence; nodes ascending.
// Throws std::invalid_argument for n == 0.
GaussLegendre gauss_legendre(std::size_t n);

}  // namespace arb
