#pragma once

// Numerical evaluation of the dynamic-regret lower bound and the orders of the
// naive and AR2 upper bounds. The hidden constants of the asymptotic bounds
// are exposed as a single scale C per curve.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "arbandit/env.hpp"

namespace arb {

struct QuadratureSpec {
  std::size_t outer_nodes = 256;  // per panel in x
  std::size_t inner_nodes = 256;  // in z
};

// Probability that the two largest of k i.i.d. stationary rewards lie within
// alpha*sigma of each other:
//   g = k(k-1) int_0^{as} int_{-R}^{R} F(x)^{k-2} f(x) f(x+z) dx dz.
// Evaluated as a tensor-product Gauss-Legendre rule with x outer and z inner.
// The x-range is split at R - alpha*sigma, where the inner upper limit
// min(alpha*sigma, R - x) changes form, so both panels are smooth, and
// clipped to |x| <= 6.5 / lambda so narrow densities stay resolved.
// Throws std::domain_error for k < 2.
double lower_bound_g(std::size_t k, const ArParams& params, const QuadratureSpec& quad = {});

// C * g * alpha * sigma
double lower_bound(std::size_t k, const ArParams& params, double scale,
                   const QuadratureSpec& quad = {});

// C * sqrt(ln(1/(alpha sigma)) + ln k) * alpha sigma / sqrt(1 - alpha^2)
double naive_upper_order(std::size_t k, const ArParams& params, double scale);

// C * c0^2 (alpha sigma)^2 k^3 |ln(c0 alpha sigma sqrt(k))|, c0 = ar2_c0(...)
double ar2_upper_order(std::size_t k, const ArParams& params, std::size_t epoch_len,
                       double scale);

// Largest arm count covered by the AR2 guarantee:
// floor((ln(1/8) / ln(alpha) + 1) / 2).
std::size_t k_threshold(double alpha);

struct BoundCurvePoint {
  double alpha;
  double sigma;
  std::size_t k;
  double lower;
  double naive_upper;
  double ar2_upper;
  double scale;
};

// Uses the default epoch length for the AR2 order.
BoundCurvePoint bound_point(std::size_t k, const ArParams& params, double scale,
                            const QuadratureSpec& quad = {});

// Grid lo, lo + step, ... up to hi (inclusive, with 1e-9 slack).
std::vector<double> make_grid(double lo, double hi, double step);

// CSV: alpha,sigma,k,lower,naive_upper,ar2_upper
void write_bound_curve_csv(std::ostream& os, std::span<const BoundCurvePoint> points);

}  // namespace arb
