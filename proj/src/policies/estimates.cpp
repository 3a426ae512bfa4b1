#include <cmath>
#include <numeric>

#include "arbandit/policies.hpp"

namespace arb {

double ar2_c0(double alpha, double sigma, std::size_t epoch_len, std::size_t k) {
  const double as = alpha * sigma;
  if (!(as > 0.0 && as < 1.0)) throw std::domain_error("ar2_c0: need 0 < alpha*sigma < 1");
  if (epoch_len < 1 || k < 1) throw std::domain_error("ar2_c0: epoch_len and k must be >= 1");
  return std::sqrt(4.0 * std::log(1.0 / as) + 4.0 * std::log(static_cast<double>(epoch_len)) +
                   2.0 * std::log(4.0 * static_cast<double>(k)));
}

std::size_t default_epoch_len(std::size_t k, double alpha, double sigma) {
  if (!(alpha > 0.0 && alpha <= 1.0 && sigma > 0.0 && sigma <= 1.0))
    throw std::domain_error("default_epoch_len: alpha and sigma must lie in (0, 1]");
  const double cube = alpha * alpha * alpha * sigma * sigma * sigma;
  return static_cast<std::size_t>(std::ceil(static_cast<double>(k) / cube));
}

double confidence_width(double alpha, double sigma, std::size_t gap, double scale) {
  if (gap <= 1) return 0.0;
  // alpha^2 - alpha^(2 gap) = alpha^2 * (1 - alpha^(2 (gap - 1)))
  const double tail = -std::expm1(2.0 * static_cast<double>(gap - 1) * std::log(alpha));
  return scale * sigma * std::sqrt(alpha * alpha * tail / (1.0 - alpha * alpha));
}

double trigger_width(double alpha, double sigma, std::size_t gap, double scale) {
  return confidence_width(alpha, sigma, gap + 1, scale);
}

ArEstimates::ArEstimates(std::span<const ArParams> params)
    : params_(params.begin(), params.end()),
      estimates_(params.size(), 0.0),
      last_pull_(params.size(), never) {}

void ArEstimates::clear() {
  std::fill(estimates_.begin(), estimates_.end(), 0.0);
  std::fill(last_pull_.begin(), last_pull_.end(), never);
}

void ArEstimates::observe(std::size_t t, std::size_t arm, double reward) {
  for (std::size_t i = 0; i < estimates_.size(); ++i) {
    if (i != arm) estimates_[i] *= params_[i].alpha();
  }
  const ArParams& p = params_[arm];
  estimates_[arm] = reflect(p.alpha() * reward, p.boundary());
  last_pull_[arm] = t;
}

}  // namespace arb
