#include "arbandit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace arb {

double instantaneous_regret(std::span<const double> expected_rewards, std::size_t chosen) {
  if (chosen >= expected_rewards.size())
    throw std::out_of_range("instantaneous_regret: arm index out of range");
  const double best = *std::max_element(expected_rewards.begin(), expected_rewards.end());
  return best - expected_rewards[chosen];
}

RegretLedger::RegretLedger(std::size_t horizon_hint) {
  chosen_.reserve(horizon_hint);
  oracle_.reserve(horizon_hint);
  regret_.reserve(horizon_hint);
}

void RegretLedger::record(std::size_t chosen_arm, double oracle_reward, double regret) {
  if (regret < 0.0) throw std::invalid_argument("ledger: negative regret");
  chosen_.push_back(chosen_arm);
  oracle_.push_back(oracle_reward);
  regret_.push_back(regret);
  cumulative_regret_ += regret;
  cumulative_oracle_ += oracle_reward;
}

double per_round_average(const RegretLedger& ledger) {
  if (ledger.rounds() == 0) return 0.0;
  return ledger.cumulative_regret() / static_cast<double>(ledger.rounds());
}

double normalized_regret(const RegretLedger& ledger) {
  return ledger.cumulative_regret() / ledger.cumulative_oracle_reward();
}

bool is_degenerate(const RegretLedger& ledger, double mean_sigma, double threshold) {
  return ledger.cumulative_oracle_reward() <=
         threshold * static_cast<double>(ledger.rounds()) * mean_sigma;
}

double distributed_regret(const RegretLedger& ledger, const Trajectory& trajectory,
                          std::size_t arm, std::size_t t, double alpha) {
  const auto pulls = ledger.chosen_arms();
  if (t >= pulls.size()) throw std::invalid_argument("distributed_regret: round beyond ledger");
  std::size_t tau = t + 1;
  for (std::size_t s = t + 1; s-- > 0;) {
    if (pulls[s] == arm) {
      tau = s;
      break;
    }
  }
  if (tau > t) throw std::invalid_argument("distributed_regret: arm not pulled at or before t");
  std::size_t next = pulls.size();
  for (std::size_t s = t + 1; s < pulls.size(); ++s) {
    if (pulls[s] == arm) {
      next = s;
      break;
    }
  }
  if (next == pulls.size())
    throw std::invalid_argument("distributed_regret: arm not pulled after t");

  const double gap_regret = trajectory.best_expected(tau) - trajectory.expected(arm, tau);
  const double a2 = alpha * alpha;
  double denom = 0.0;
  double power = 1.0;
  for (std::size_t j = 0; j < next - tau; ++j) {
    denom += power;
    power *= a2;
  }
  return gap_regret * std::pow(a2, static_cast<double>(t - tau)) / denom;
}

PullDecomposition decompose_pulls(const RegretLedger& ledger, std::size_t arms) {
  PullDecomposition out;
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> last(arms, none);
  for (std::size_t t = 0; t < ledger.rounds(); ++t) {
    const std::size_t a = ledger.chosen(t);
    if (last[a] != none) out.windows.push_back({a, last[a], t});
    last[a] = t;
  }
  for (std::size_t a = 0; a < arms; ++a)
    if (last[a] != none) out.final_pulls.push_back(last[a]);
  return out;
}

SummaryStats summarize(std::span<const double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

void write_ledger_csv(std::ostream& os, const RegretLedger& ledger) {
  os << "t,chosen_arm,oracle_reward,regret\n";
  char buf[96];
  for (std::size_t t = 0; t < ledger.rounds(); ++t) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", t, ledger.chosen(t),
                  ledger.oracle_reward(t), ledger.regret(t));
    os << buf;
  }
}

}  // namespace arb
