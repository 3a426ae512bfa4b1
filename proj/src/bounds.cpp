#include "arbandit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "arbandit/kernels.hpp"
#include "arbandit/policies.hpp"
#include "arbandit/quadrature.hpp"

namespace arb {

double lower_bound_g(std::size_t k, const ArParams& params, const QuadratureSpec& quad) {
  if (k < 2) throw std::domain_error("lower_bound_g: need k >= 2");
  const double r = params.boundary();
  const double gap = params.alpha() * params.sigma();
  const double lam = params.lambda();
  const double rate = lam * lam;
  const double norm = stationary_normalizer(params);
  const GaussLegendre outer = gauss_legendre(quad.outer_nodes);
  const GaussLegendre inner = gauss_legendre(quad.inner_nodes);

  // x is confined to the effective support |x| <= 6.5 / lambda, outside of
  // which f / f(0) < 1e-18. The inner width alpha*sigma is always below
  // 1 / lambda, so z needs no such clipping.
  const double reach = std::min(r, 6.5 / lam);
  // Panel A: x in [-reach, R - gap], z in [0, gap].
  // Panel B: x in [R - gap, reach], z in [0, R - x].
  const double split = std::clamp(r - gap, -reach, reach);
  const double panels[2][2] = {{-reach, split}, {split, reach}};

  double total = 0.0;
  for (const auto& panel : panels) {
    const double half = 0.5 * (panel[1] - panel[0]);
    if (half <= 0.0) continue;
    const double mid = 0.5 * (panel[1] + panel[0]);
    double panel_sum = 0.0;
    for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
      const double x = mid + half * outer.nodes[i];
      const double zmax = std::min(gap, r - x);
      if (zmax <= 0.0) continue;
      // int_0^zmax f(x + z) dz with z = zmax/2 (u + 1)
      const double zh = 0.5 * zmax;
      const double inner_int =
          norm * zh * simd::gauss_weighted_sum(inner.nodes, inner.weights, x + zh, zh, rate);
      const double cdf = stationary_cdf(x, params);
      const double power = k == 2 ? 1.0 : std::pow(cdf, static_cast<double>(k - 2));
      panel_sum += outer.weights[i] * power * stationary_pdf(x, params) * inner_int;
    }
    total += half * panel_sum;
  }
  const double kk = static_cast<double>(k);
  return std::clamp(kk * (kk - 1.0) * total, 0.0, 1.0);
}

double lower_bound(std::size_t k, const ArParams& params, double scale,
                   const QuadratureSpec& quad) {
  return scale * lower_bound_g(k, params, quad) * params.alpha() * params.sigma();
}

double naive_upper_order(std::size_t k, const ArParams& params, double scale) {
  const double as = params.alpha() * params.sigma();
  const double a = params.alpha();
  return scale * std::sqrt(std::log(1.0 / as) + std::log(static_cast<double>(k))) * as /
         std::sqrt(1.0 - a * a);
}

double ar2_upper_order(std::size_t k, const ArParams& params, std::size_t epoch_len,
                       double scale) {
  const double as = params.alpha() * params.sigma();
  const double c0 = ar2_c0(params.alpha(), params.sigma(), epoch_len, k);
  const double kk = static_cast<double>(k);
  return scale * c0 * c0 * as * as * kk * kk * kk * std::abs(std::log(c0 * as * std::sqrt(kk)));
}

std::size_t k_threshold(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("k_threshold: alpha in (0, 1)");
  const double v = 0.5 * (std::log(1.0 / 8.0) / std::log(alpha) + 1.0);
  // log(1/8)/log(1/2) is 3 only up to rounding; snap near-integers before flooring.
  const double snapped = std::abs(v - std::round(v)) < 1e-12 ? std::round(v) : v;
  return static_cast<std::size_t>(std::floor(snapped));
}

BoundCurvePoint bound_point(std::size_t k, const ArParams& params, double scale,
                            const QuadratureSpec& quad) {
  const std::size_t epoch = default_epoch_len(k, params.alpha(), params.sigma());
  return {params.alpha(),
          params.sigma(),
          k,
          lower_bound(k, params, scale, quad),
          naive_upper_order(k, params, scale),
          ar2_upper_order(k, params, epoch, scale),
          scale};
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("grid: need step > 0, hi >= lo");
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (v > hi + 1e-9) break;
    grid.push_back(std::min(v, hi));
  }
  return grid;
}

void write_bound_curve_csv(std::ostream& os, std::span<const BoundCurvePoint> points) {
  os << "alpha,sigma,k,lower,naive_upper,ar2_upper\n";
  char buf[192];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,%.17g,%.17g,%.17g\n", p.alpha, p.sigma, p.k,
                  p.lower, p.naive_upper, p.ar2_upper);
    os << buf;
  }
}

}  // namespace arb
