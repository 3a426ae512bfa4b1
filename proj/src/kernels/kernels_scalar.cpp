#include <cmath>
#include <cstddef>

#include "arbandit/kernels.hpp"

namespace arb::simd::scalar {

double gauss_weighted_sum(std::span<const double> u, std::span<const double> w, double shift,
                          double width, double rate) {
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double y = shift + width * u[j];
    sum += w[j] * std::exp(-rate * y * y);
  }
  return sum;
}

void gauss_eval(std::span<const double> x, double rate, double scale, std::span<double> out) {
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = scale * std::exp(-rate * x[j] * x[j]);
}

}  // namespace arb::simd::scalar
