#pragma once

// Reflected AR-1 reward environment.
//
// Each arm's expected reward r(t) lives in [-R, R] and evolves as
//   R(t)   = r(t) + sigma * eps(t),          eps ~ N(0, 1)
//   r(t+1) = reflect(alpha * R(t))
// independently of which arm is pulled.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "arbandit/rng.hpp"

namespace arb {

class ArParams {
 public:
  // Throws std::invalid_argument unless 0 < alpha < 1, 0 < sigma < 1, boundary > 0.
  ArParams(double alpha, double sigma, double boundary = 1.0);

  double alpha() const { return alpha_; }
  double sigma() const { return sigma_; }
  double boundary() const { return boundary_; }

  // Gaussian rate of the stationary density: sqrt(1 - alpha) / (alpha * sigma).
  double lambda() const;

  friend bool operator==(const ArParams&, const ArParams&) = default;

 private:
  double alpha_;
  double sigma_;
  double boundary_;
};

struct ArmProcess {
  ArParams params;
  double expected_reward;
};

struct StepResult {
  ArmProcess next;
  double realized_reward;
};

// Fold y into [-R, R] by mirroring about the endpoints. Non-finite input
// throws std::invalid_argument.
double reflect(double y, double boundary);

// One round of the recursion. The realized reward is not clipped.
StepResult step(const ArmProcess& process, double noise);

// Normalizer C(alpha, sigma) of the stationary density on [-R, R].
double stationary_normalizer(const ArParams& params);
double stationary_pdf(double x, const ArParams& params);
double stationary_cdf(double x, const ArParams& params);

// Inverse CDF by bisection to absolute tolerance 1e-12; u in [0, 1].
double stationary_quantile(double u, const ArParams& params);
double sample_stationary(const ArParams& params, Engine& rng);

// Fills out[j] = stationary_pdf(xs[j]) using the active SIMD kernel.
void stationary_pdf_grid(std::span<const double> xs, const ArParams& params,
                         std::span<double> out);

// Immutable realization {r_i(t), R_i(t)} for t = 0 .. horizon-1, stored
// round-major so that one round's arms are contiguous.
class Trajectory {
 public:
  Trajectory(std::size_t arms, std::size_t horizon, std::vector<double> expected,
             std::vector<double> realized);

  std::size_t arms() const { return arms_; }
  std::size_t horizon() const { return horizon_; }

  double expected(std::size_t arm, std::size_t t) const { return expected_[t * arms_ + arm]; }
  double realized(std::size_t arm, std::size_t t) const { return realized_[t * arms_ + arm]; }
  std::span<const double> expected_at(std::size_t t) const {
    return {expected_.data() + t * arms_, arms_};
  }

  // r*(t) and its lowest-index argmax.
  double best_expected(std::size_t t) const;
  std::size_t best_arm(std::size_t t) const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::size_t arms_;
  std::size_t horizon_;
  std::vector<double> expected_;
  std::vector<double> realized_;
};

struct TrajectoryOptions {
  // Fixed r_i(0) for every arm instead of a stationary draw.
  std::optional<std::vector<double>> initial;
};

// Core recursion from explicit initial states and a standard-normal noise
// matrix (round-major, horizon x arms).
Trajectory trajectory_from_noise(std::span<const ArParams> arm_params,
                                 std::span<const double> initial,
                                 std::span<const double> noise, std::size_t horizon);

// Draws one substream per arm from `seed` (Stream::arm_initial, Stream::arm_noise),
// so arm i's draws do not depend on the number of arms.
Trajectory generate_trajectory(std::span<const ArParams> arm_params, std::size_t horizon,
                               std::uint64_t seed, const TrajectoryOptions& options = {});

// CSV: t,arm,expected,realized
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace arb
