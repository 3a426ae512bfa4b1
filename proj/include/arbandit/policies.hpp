#pragma once

// Bandit policies for reflected AR-1 arms.
//
// Every policy follows the same round protocol: reset() once, then for each
// round t = 0, 1, ..., horizon-1 exactly one select_arm(t) followed by
// observe(t, arm, reward) with the arm that select_arm returned. Policies see
// only the per-arm parameters handed to reset() and the rewards they observe.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "arbandit/env.hpp"
#include "arbandit/rng.hpp"

namespace arb {

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  virtual void reset(std::size_t arm_count, std::size_t horizon,
                     std::span<const ArParams> params, std::uint64_t seed) = 0;
  virtual std::size_t select_arm(std::size_t t) = 0;
  virtual void observe(std::size_t t, std::size_t arm, double reward) = 0;
};

// ---------------------------------------------------------------------------
// AR-structure formulas

// c0 = sqrt(4 ln(1/(alpha sigma)) + 4 ln(epoch_len) + 2 ln(4k)).
// Throws std::domain_error when alpha * sigma >= 1, epoch_len < 1 or k < 1.
double ar2_c0(double alpha, double sigma, std::size_t epoch_len, std::size_t k);

// ceil(k / (alpha sigma)^3)
std::size_t default_epoch_len(std::size_t k, double alpha, double sigma);

// c * sigma * sqrt((alpha^2 - alpha^(2 gap)) / (1 - alpha^2)): the spread of
// the accumulated noise after `gap` rounds without an observation. Zero at
// gap <= 1.
double confidence_width(double alpha, double sigma, std::size_t gap, double scale);

// Triggering threshold after `gap` rounds since the last pull; equals
// confidence_width(alpha, sigma, gap + 1, scale).
double trigger_width(double alpha, double sigma, std::size_t gap, double scale);

// ---------------------------------------------------------------------------
// AR-aware reward estimates shared by AR2, eps-greedy and mod-UCB.
//
// After observing arm a at round t: est[a] = reflect(alpha_a * reward) and
// every other estimate is multiplied by its alpha.
class ArEstimates {
 public:
  static constexpr std::size_t never = std::numeric_limits<std::size_t>::max();

  ArEstimates() = default;
  explicit ArEstimates(std::span<const ArParams> params);

  void clear();  // estimates to 0, no pulls recorded
  void observe(std::size_t t, std::size_t arm, double reward);

  std::size_t arms() const { return estimates_.size(); }
  double estimate(std::size_t arm) const { return estimates_[arm]; }
  std::span<const double> estimates() const { return estimates_; }
  std::size_t last_pull(std::size_t arm) const { return last_pull_[arm]; }
  const ArParams& params(std::size_t arm) const { return params_[arm]; }

 private:
  std::vector<ArParams> params_;
  std::vector<double> estimates_;
  std::vector<std::size_t> last_pull_;
};

// ---------------------------------------------------------------------------
// AR2: alternating exploration of triggered arms and exploitation of the
// superior arm, restarted every epoch.

enum class ExploreRule {
  earliest_trigger,  // argmin trigger time over the triggered set
  highest_ucb,       // argmax estimate + c1-scaled confidence width
};

struct Ar2Config {
  // 0 selects epoch_scale * default_epoch_len(k, mean alpha, mean sigma).
  std::size_t epoch_len = 0;
  double epoch_scale = 1.0;
  // NaN selects ar2_c0(mean alpha, mean sigma, epoch_len, k).
  double c0 = std::numeric_limits<double>::quiet_NaN();
  // NaN selects 24 * c0.
  double c1 = std::numeric_limits<double>::quiet_NaN();
  // Number of most recent pulls the superior arm is chosen from; 0 means all arms.
  std::size_t superior_window = 2;
  ExploreRule explore_rule = ExploreRule::earliest_trigger;
};

struct Ar2State {
  std::size_t epoch_index = 0;
  std::size_t epoch_start = 0;
  ArEstimates estimates;
  std::vector<bool> triggered;
  std::vector<std::size_t> trigger_time;
  std::size_t superior = 0;
  double superior_estimate = 0.0;
  std::vector<std::size_t> recent_pulls;  // most recent first, at most window long
  bool exploring = false;                 // last selection came from the triggered set

  std::size_t triggered_count() const;
};

class Ar2Policy final : public Policy {
 public:
  explicit Ar2Policy(Ar2Config config = {});

  std::string name() const override { return "AR2"; }
  void reset(std::size_t arm_count, std::size_t horizon, std::span<const ArParams> params,
             std::uint64_t seed) override;
  std::size_t select_arm(std::size_t t) override;
  void observe(std::size_t t, std::size_t arm, double reward) override;

  const Ar2State& state() const { return state_; }
  const Ar2Config& config() const { return config_; }
  // Resolved values after reset().
  std::size_t epoch_len() const { return epoch_len_; }
  double c0() const { return c0_; }
  double c1() const { return c1_; }

 private:
  void restart(std::size_t t);
  void update_superior(std::size_t t);

  Ar2Config config_;
  std::size_t arms_ = 0;
  std::size_t epoch_len_ = 0;
  double c0_ = 0.0;
  double c1_ = 0.0;
  Ar2State state_;
  std::size_t pending_ = ArEstimates::never;
  std::size_t pending_round_ = ArEstimates::never;
};

// ---------------------------------------------------------------------------
// Benchmarks

// Picks one arm uniformly at random at reset and plays it forever.
class NaivePolicy final : public Policy {
 public:
  std::string name() const override { return "naive"; }
  void reset(std::size_t arm_count, std::size_t horizon, std::span<const ArParams> params,
             std::uint64_t seed) override;
  std::size_t select_arm(std::size_t t) override;
  void observe(std::size_t t, std::size_t arm, double reward) override;

  std::size_t chosen() const { return arm_; }

 private:
  std::size_t arm_ = 0;
};

// Explore-then-commit: m round-robin passes, then the empirical-mean argmax.
class EtcPolicy final : public Policy {
 public:
  explicit EtcPolicy(std::size_t pulls_per_arm = 25);

  std::string name() const override { return "ETC"; }
  void reset(std::size_t arm_count, std::size_t horizon, std::span<const ArParams> params,
             std::uint64_t seed) override;
  std::size_t select_arm(std::size_t t) override;
  void observe(std::size_t t, std::size_t arm, double reward) override;

  bool committed() const { return committed_; }

 private:
  std::size_t m_;
  std::size_t arms_ = 0;
  std::vector<double> sums_;
  std::vector<std::size_t> counts_;
  bool committed_ = false;
  std::size_t commit_arm_ = 0;
};

// Greedy on AR-aware estimates with uniform exploration probability epsilon.
class EpsGreedyPolicy final : public Policy {
 public:
  explicit EpsGreedyPolicy(double epsilon = 0.1);

  std::string name() const override { return "eps-greedy"; }
  void reset(std::size_t arm_count, std::size_t horizon, std::span<const ArParams> params,
             std::uint64_t seed) override;
  std::size_t select_arm(std::size_t t) override;
  void observe(std::size_t t, std::size_t arm, double reward) override;

  std::size_t exploration_rounds() const { return explorations_; }
  const ArEstimates& estimates() const { return estimates_; }

 private:
  double epsilon_;
  Engine rng_;
  ArEstimates estimates_;
  std::size_t explorations_ = 0;
};

// UCB1 on raw empirical means: mean + sqrt(2 ln n / n_i).
class Ucb1Policy final : public Policy {
 public:
  std::string name() const override { return "UCB"; }
  void reset(std::size_t arm_count, std::size_t horizon, std::span<const ArParams> params,
             std::uint64_t seed) override;
  std::size_t select_arm(std::size_t t) override;
  void observe(std::size_t t, std::size_t arm, double reward) override;

  double bonus(std::size_t arm, std::size_t plays) const;

 private:
  std::size_t arms_ = 0;
  std::size_t plays_ = 0;
  std::vector<double> sums_;
  std::vector<std::size_t> counts_;
};

// Exp3 restarted in batches sized for a variation budget V_T. Rewards are
// mapped affinely from [-R - 4 sigma_max, R + 4 sigma_max] to [0, 1] and clipped.
class Rexp3Policy final : public Policy {
 public:
  // variation_budget <= 0 selects T * mean(alpha) * mean(sigma).
  explicit Rexp3Policy(double variation_budget = 0.0);

  std::string name() const override { return "Rexp3"; }
  void reset(std::size_t arm_count, std::size_t horizon, std::span<const ArParams> params,
             std::uint64_t seed) override;
  std::size_t select_arm(std::size_t t) override;
  void observe(std::size_t t, std::size_t arm, double reward) override;

  std::size_t batch_len() const { return batch_len_; }
  double gamma() const { return gamma_; }
  // Current sampling distribution.
  std::span<const double> probabilities() const { return probs_; }

 static std::size_t batch_length(std::size_t k, std::size_t horizon, double variation_budget);

 private:
  void refresh_probabilities();

  double budget_;
  Engine rng_;
  std::size_t arms_ = 0;
  std::size_t batch_len_ = 1;
  double gamma_ = 1.0;
  double low_ = -1.0;
  double span_ = 2.0;
  std::vector<double> log_weights_;
  std::vector<double> probs_;
};

// UCB on AR-aware estimates with a delta-level confidence width.
class ModUcbPolicy final : public Policy {
 public:
  explicit ModUcbPolicy(double delta = 0.1);

  std::string name() const override { return "mod-UCB"; }
  void reset(std::size_t arm_count, std::size_t horizon, std::span<const ArParams> params,
             std::uint64_t seed) override;
  std::size_t select_arm(std::size_t t) override;
  void observe(std::size_t t, std::size_t arm, double reward) override;

  double bonus(std::size_t arm, std::size_t t) const;
  const ArEstimates& estimates() const { return estimates_; }

 private:
  double delta_;
  double scale_;
  std::size_t arms_ = 0;
  ArEstimates estimates_;
};

// Plays the true best arm of a fixed trajectory. Test and calibration only:
// it reads the environment directly.
class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const Trajectory& trajectory) : trajectory_(&trajectory) {}

  std::string name() const override { return "oracle"; }
  void reset(std::size_t, std::size_t, std::span<const ArParams>, std::uint64_t) override {}
  std::size_t select_arm(std::size_t t) override { return trajectory_->best_arm(t); }
  void observe(std::size_t, std::size_t, double) override {}

 private:
  const Trajectory* trajectory_;
};

}  // namespace arb
