#include "arbandit/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "arbandit/kernels.hpp"

namespace arb {

ArParams::ArParams(double alpha, double sigma, double boundary)
    : alpha_(alpha), sigma_(sigma), boundary_(boundary) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(alpha));
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("sigma must lie in (0, 1), got " + std::to_string(sigma));
  if (!(boundary > 0.0) || !std::isfinite(boundary))
    throw std::invalid_argument("boundary must be positive, got " + std::to_string(boundary));
}

double ArParams::lambda() const { return std::sqrt(1.0 - alpha_) / (alpha_ * sigma_); }

double reflect(double y, double boundary) {
  if (!std::isfinite(y)) throw std::invalid_argument("reflect: non-finite input");
  if (std::abs(y) <= boundary) return y;
  // The fold is odd, so reduce |y| and restore the sign; this keeps
  // reflect(-y) == -reflect(y) bit-exact. For positive arguments fmod is the
  // mathematical modulus, so y' lies in [0, 4R).
  const double period = 4.0 * boundary;
  double folded = std::fmod(std::abs(y) + boundary, period);
  if (folded < 0.0) folded += period;
  double out = folded < 2.0 * boundary ? folded - boundary : 3.0 * boundary - folded;
  out = std::clamp(out, -boundary, boundary);
  return y < 0.0 ? -out : out;
}

StepResult step(const ArmProcess& process, double noise) {
  const ArParams& p = process.params;
  const double realized = process.expected_reward + p.sigma() * noise;
  return {ArmProcess{p, reflect(p.alpha() * realized, p.boundary())}, realized};
}

double stationary_normalizer(const ArParams& params) {
  const double a = params.alpha();
  const double s = params.sigma();
  return std::sqrt(1.0 - a) /
         (std::sqrt(std::numbers::pi) * a * s * std::erf(params.boundary() * params.lambda()));
}

double stationary_pdf(double x, const ArParams& params) {
  if (std::abs(x) > params.boundary()) return 0.0;
  const double lam = params.lambda();
  return stationary_normalizer(params) * std::exp(-lam * lam * x * x);
}

double stationary_cdf(double x, const ArParams& params) {
  const double r = params.boundary();
  if (x <= -r) return 0.0;
  if (x >= r) return 1.0;
  const double lam = params.lambda();
  const double edge = std::erf(lam * r);
  return std::clamp((std::erf(lam * x) + edge) / (2.0 * edge), 0.0, 1.0);
}

double stationary_quantile(double u, const ArParams& params) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("quantile: u outside [0, 1]");
  double lo = -params.boundary();
  double hi = params.boundary();
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (stationary_cdf(mid, params) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double sample_stationary(const ArParams& params, Engine& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return stationary_quantile(unit(rng), params);
}

void stationary_pdf_grid(std::span<const double> xs, const ArParams& params,
                         std::span<double> out) {
  if (out.size() != xs.size()) throw std::invalid_argument("pdf grid: size mismatch");
  const double lam = params.lambda();
  simd::gauss_eval(xs, lam * lam, stationary_normalizer(params), out);
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (std::abs(xs[j]) > params.boundary()) out[j] = 0.0;
}

Trajectory::Trajectory(std::size_t arms, std::size_t horizon, std::vector<double> expected,
                       std::vector<double> realized)
    : arms_(arms), horizon_(horizon), expected_(std::move(expected)),
      realized_(std::move(realized)) {
  if (arms == 0 || horizon == 0) throw std::invalid_argument("trajectory needs arms and rounds");
  if (expected_.size() != arms * horizon || realized_.size() != arms * horizon)
    throw std::invalid_argument("trajectory matrix size mismatch");
}

double Trajectory::best_expected(std::size_t t) const {
  const auto row = expected_at(t);
  return *std::max_element(row.begin(), row.end());
}

std::size_t Trajectory::best_arm(std::size_t t) const {
  const auto row = expected_at(t);
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

Trajectory trajectory_from_noise(std::span<const ArParams> arm_params,
                                 std::span<const double> initial,
                                 std::span<const double> noise, std::size_t horizon) {
  const std::size_t k = arm_params.size();
  if (k == 0 || horizon == 0) throw std::invalid_argument("trajectory needs arms and rounds");
  if (initial.size() != k) throw std::invalid_argument("one initial state per arm required");
  if (noise.size() != k * horizon) throw std::invalid_argument("noise matrix size mismatch");

  std::vector<double> expected(k * horizon);
  std::vector<double> realized(k * horizon);
  for (std::size_t i = 0; i < k; ++i) {
    const double r = arm_params[i].boundary();
    if (!(std::abs(initial[i]) <= r)) throw std::invalid_argument("initial state outside [-R, R]");
    ArmProcess process{arm_params[i], initial[i]};
    for (std::size_t t = 0; t < horizon; ++t) {
      expected[t * k + i] = process.expected_reward;
      StepResult next = step(process, noise[t * k + i]);
      realized[t * k + i] = next.realized_reward;
      process = next.next;
    }
  }
  return Trajectory(k, horizon, std::move(expected), std::move(realized));
}

Trajectory generate_trajectory(std::span<const ArParams> arm_params, std::size_t horizon,
                               std::uint64_t seed, const TrajectoryOptions& options) {
  const std::size_t k = arm_params.size();
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  std::vector<double> initial(k);
  if (options.initial) {
    if (options.initial->size() != k) throw std::invalid_argument("initial override size");
    initial = *options.initial;
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      Engine rng = make_engine(derive_seed(seed, Stream::arm_initial, {i}));
      initial[i] = sample_stationary(arm_params[i], rng);
    }
  }
  std::vector<double> noise(k * horizon);
  for (std::size_t i = 0; i < k; ++i) {
    Engine rng = make_engine(derive_seed(seed, Stream::arm_noise, {i}));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t t = 0; t < horizon; ++t) noise[t * k + i] = gauss(rng);
  }
  return trajectory_from_noise(arm_params, initial, noise, horizon);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  os << "t,arm,expected,realized\n";
  char buf[64];
  for (std::size_t t = 0; t < trajectory.horizon(); ++t) {
    for (std::size_t i = 0; i < trajectory.arms(); ++i) {
      os << t << ',' << i << ',';
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", trajectory.expected(i, t),
                    trajectory.realized(i, t));
      os << buf;
    }
  }
}

}  // namespace arb
