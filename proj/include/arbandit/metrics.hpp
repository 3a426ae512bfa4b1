#pragma once

// Dynamic-regret accounting against the round-by-round best arm.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "arbandit/env.hpp"

namespace arb {

// max_i r_i - r_chosen
double instantaneous_regret(std::span<const double> expected_rewards, std::size_t chosen);

// Append-only per-round record of one (instance, policy) run.
class RegretLedger {
 public:
  RegretLedger() = default;
  explicit RegretLedger(std::size_t horizon_hint);

  void record(std::size_t chosen_arm, double oracle_reward, double regret);

  std::size_t rounds() const { return chosen_.size(); }
  std::size_t chosen(std::size_t t) const { return chosen_[t]; }
  double oracle_reward(std::size_t t) const { return oracle_[t]; }
  double regret(std::size_t t) const { return regret_[t]; }
  std::span<const std::size_t> chosen_arms() const { return chosen_; }
  std::span<const double> regrets() const { return regret_; }

  double cumulative_regret() const { return cumulative_regret_; }
  double cumulative_oracle_reward() const { return cumulative_oracle_; }

 private:
  std::vector<std::size_t> chosen_;
  std::vector<double> oracle_;
  std::vector<double> regret_;
  double cumulative_regret_ = 0.0;
  double cumulative_oracle_ = 0.0;
};

// Finite-horizon estimate of the per-round steady-state regret.
double per_round_average(const RegretLedger& ledger);

// sum reg / sum r*. May exceed 1 because expected rewards can be negative.
double normalized_regret(const RegretLedger& ledger);

// True when sum r* <= threshold * T * mean_sigma; such instances are excluded
// from aggregation because the ratio is unstable.
bool is_degenerate(const RegretLedger& ledger, double mean_sigma, double threshold = 0.01);

// Distributed regret D_i(t) of `arm` at round t: the regret of its last pull
// tau <= t spread geometrically (ratio alpha^2) over the rounds before its
// next pull. Throws std::invalid_argument if the arm has no pull at or before
// t or no pull after t.
double distributed_regret(const RegretLedger& ledger, const Trajectory& trajectory,
                          std::size_t arm, std::size_t t, double alpha);

// One between-pull window of an arm: pulls at `start` and `next`.
struct PullWindow {
  std::size_t arm;
  std::size_t start;
  std::size_t next;
};

// All windows in the ledger, plus each arm's final pull (which has no window).
struct PullDecomposition {
  std::vector<PullWindow> windows;
  std::vector<std::size_t> final_pulls;  // round index of each pulled arm's last pull
};
PullDecomposition decompose_pulls(const RegretLedger& ledger, std::size_t arms);

struct SummaryStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation; 0 for n < 2
  std::size_t count = 0;
};

// Two-pass mean and sample standard deviation.
SummaryStats summarize(std::span<const double> values);

// Linear-interpolation quantile (type 7) of unsorted values; q in [0, 1].
double quantile(std::vector<double> values, double q);

// CSV: t,chosen_arm,oracle_reward,regret
void write_ledger_csv(std::ostream& os, const RegretLedger& ledger);

}  // namespace arb
