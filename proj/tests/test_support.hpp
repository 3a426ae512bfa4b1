#pragma once
// Independent oracles shared by the unit and acceptance tests. Nothing here
// calls into the library under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace testsupport {

// Mirror about +-R one fold at a time until inside the band.
inline double fold_oracle(double y, double r) {
  while (y > r || y < -r) y = y > r ? 2.0 * r - y : -2.0 * r - y;
  return y;
}

// Exact draw from the density proportional to exp(-lambda^2 x^2) on [-R, R]:
// a N(0, 1 / (2 lambda^2)) proposal, rejected outside the band.
class TruncatedGauss {
 public:
  TruncatedGauss(double alpha, double sigma, double r)
      : r_(r), normal_(0.0, alpha * sigma / std::sqrt(2.0 * (1.0 - alpha))) {}
  template <typename Rng>
  double operator()(Rng& rng) {
    for (;;) {
      const double x = normal_(rng);
      if (x >= -r_ && x <= r_) return x;
    }
  }

 private:
  double r_;
  std::normal_distribution<double> normal_;
};

// sup |F_n - F| for a sample against a continuous CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

// Upper-tail p-value of Pearson's statistic against expected counts.
inline double chi_square_p(const std::vector<double>& observed, const std::vector<double>& expected,
                           std::size_t constraints = 1) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - constraints));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace testsupport
