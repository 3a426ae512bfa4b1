#include <algorithm>
#include <cmath>
#include <numbers>

#include "arbandit/policies.hpp"

namespace arb {
namespace {

void check_params(std::size_t arm_count, std::span<const ArParams> params, const char* who) {
  if (arm_count == 0 || params.size() != arm_count)
    throw std::invalid_argument(std::string(who) + ": one ArParams per arm required");
}

// Lowest index wins ties.
template <typename Score>
std::size_t argmax(std::size_t n, Score score) {
  std::size_t best = 0;
  double best_score = score(0);
  for (std::size_t i = 1; i < n; ++i) {
    const double s = score(i);
    if (s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

}  // namespace

// --- naive -----------------------------------------------------------------

void NaivePolicy::reset(std::size_t arm_count, std::size_t, std::span<const ArParams> params,
                        std::uint64_t seed) {
  check_params(arm_count, params, "naive");
  Engine rng = make_engine(seed);
  arm_ = std::uniform_int_distribution<std::size_t>(0, arm_count - 1)(rng);
}

std::size_t NaivePolicy::select_arm(std::size_t) { return arm_; }

void NaivePolicy::observe(std::size_t, std::size_t, double) {}

// --- explore-then-commit ---------------------------------------------------

EtcPolicy::EtcPolicy(std::size_t pulls_per_arm) : m_(pulls_per_arm) {
  if (m_ < 1) throw std::invalid_argument("ETC: pulls per arm must be >= 1");
}

void EtcPolicy::reset(std::size_t arm_count, std::size_t, std::span<const ArParams> params,
                      std::uint64_t) {
  check_params(arm_count, params, "ETC");
  arms_ = arm_count;
  sums_.assign(arm_count, 0.0);
  counts_.assign(arm_count, 0);
  committed_ = false;
  commit_arm_ = 0;
}

std::size_t EtcPolicy::select_arm(std::size_t t) {
  if (t < m_ * arms_) return t % arms_;
  if (!committed_) {
    commit_arm_ = argmax(arms_, [&](std::size_t i) {
      return counts_[i] ? sums_[i] / static_cast<double>(counts_[i]) : -INFINITY;
    });
    committed_ = true;
  }
  return commit_arm_;
}

void EtcPolicy::observe(std::size_t, std::size_t arm, double reward) {
  if (committed_) return;
  sums_[arm] += reward;
  ++counts_[arm];
}

// --- epsilon-greedy --------------------------------------------------------

EpsGreedyPolicy::EpsGreedyPolicy(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("eps-greedy: epsilon must lie in [0, 1]");
}

void EpsGreedyPolicy::reset(std::size_t arm_count, std::size_t, std::span<const ArParams> params,
                            std::uint64_t seed) {
  check_params(arm_count, params, "eps-greedy");
  rng_ = make_engine(seed);
  estimates_ = ArEstimates(params);
  explorations_ = 0;
}

std::size_t EpsGreedyPolicy::select_arm(std::size_t) {
  const std::size_t k = estimates_.arms();
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
  if (u < epsilon_) {
    ++explorations_;
    return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng_);
  }
  return argmax(k, [&](std::size_t i) { return estimates_.estimate(i); });
}

void EpsGreedyPolicy::observe(std::size_t t, std::size_t arm, double reward) {
  estimates_.observe(t, arm, reward);
}

// --- UCB1 ------------------------------------------------------------------

void Ucb1Policy::reset(std::size_t arm_count, std::size_t, std::span<const ArParams> params,
                       std::uint64_t) {
  check_params(arm_count, params, "UCB");
  arms_ = arm_count;
  plays_ = 0;
  sums_.assign(arm_count, 0.0);
  counts_.assign(arm_count, 0);
}

double Ucb1Policy::bonus(std::size_t arm, std::size_t plays) const {
  return std::sqrt(2.0 * std::log(static_cast<double>(plays)) /
                   static_cast<double>(counts_[arm]));
}

std::size_t Ucb1Policy::select_arm(std::size_t) {
  for (std::size_t i = 0; i < arms_; ++i)
    if (counts_[i] == 0) return i;
  return argmax(arms_, [&](std::size_t i) {
    return sums_[i] / static_cast<double>(counts_[i]) + bonus(i, plays_);
  });
}

void Ucb1Policy::observe(std::size_t, std::size_t arm, double reward) {
  sums_[arm] += reward;
  ++counts_[arm];
  ++plays_;
}

// --- Rexp3 -----------------------------------------------------------------

Rexp3Policy::Rexp3Policy(double variation_budget) : budget_(variation_budget) {}

std::size_t Rexp3Policy::batch_length(std::size_t k, std::size_t horizon,
                                      double variation_budget) {
  if (k <= 1) return std::max<std::size_t>(horizon, 1);
  const double kk = static_cast<double>(k);
  const double len = std::cbrt(kk * std::log(kk)) *
                     std::pow(static_cast<double>(horizon) / variation_budget, 2.0 / 3.0);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(len)), 1,
                                 std::max<std::size_t>(horizon, 1));
}

void Rexp3Policy::reset(std::size_t arm_count, std::size_t horizon,
                        std::span<const ArParams> params, std::uint64_t seed) {
  check_params(arm_count, params, "Rexp3");
  arms_ = arm_count;
  rng_ = make_engine(seed);
  double mean_a = 0.0;
  double mean_s = 0.0;
  double max_s = 0.0;
  double bound = 0.0;
  for (const auto& p : params) {
    mean_a += p.alpha();
    mean_s += p.sigma();
    max_s = std::max(max_s, p.sigma());
    bound = std::max(bound, p.boundary());
  }
  mean_a /= static_cast<double>(arm_count);
  mean_s /= static_cast<double>(arm_count);
  const double budget =
      budget_ > 0.0 ? budget_ : static_cast<double>(horizon) * mean_a * mean_s;
  batch_len_ = batch_length(arm_count, horizon, budget);
  const double kk = static_cast<double>(arm_count);
  gamma_ = arm_count <= 1
               ? 1.0
               : std::min(1.0, std::sqrt(kk * std::log(kk) /
                                         ((std::numbers::e - 1.0) *
                                          static_cast<double>(batch_len_))));
  low_ = -bound - 4.0 * max_s;
  span_ = 2.0 * bound + 8.0 * max_s;
  log_weights_.assign(arm_count, 0.0);
  probs_.assign(arm_count, 1.0 / kk);
}

void Rexp3Policy::refresh_probabilities() {
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  double total = 0.0;
  for (std::size_t i = 0; i < arms_; ++i) {
    probs_[i] = std::exp(log_weights_[i] - top);
    total += probs_[i];
  }
  const double kk = static_cast<double>(arms_);
  for (auto& p : probs_) p = (1.0 - gamma_) * p / total + gamma_ / kk;
}

std::size_t Rexp3Policy::select_arm(std::size_t t) {
  if (t % batch_len_ == 0) std::fill(log_weights_.begin(), log_weights_.end(), 0.0);
  refresh_probabilities();
  std::discrete_distribution<std::size_t> pick(probs_.begin(), probs_.end());
  return pick(rng_);
}

void Rexp3Policy::observe(std::size_t, std::size_t arm, double reward) {
  const double x = std::clamp((reward - low_) / span_, 0.0, 1.0);
  log_weights_[arm] += gamma_ * (x / probs_[arm]) / static_cast<double>(arms_);
}

// --- mod-UCB ---------------------------------------------------------------

ModUcbPolicy::ModUcbPolicy(double delta) : delta_(delta) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("mod-UCB: delta must lie in (0, 1]");
  scale_ = std::sqrt(2.0 * std::log(2.0 / delta));
}

void ModUcbPolicy::reset(std::size_t arm_count, std::size_t, std::span<const ArParams> params,
                         std::uint64_t) {
  check_params(arm_count, params, "mod-UCB");
  arms_ = arm_count;
  estimates_ = ArEstimates(params);
}

double ModUcbPolicy::bonus(std::size_t arm, std::size_t t) const {
  const ArParams& p = estimates_.params(arm);
  return confidence_width(p.alpha(), p.sigma(), t - estimates_.last_pull(arm), scale_);
}

std::size_t ModUcbPolicy::select_arm(std::size_t t) {
  if (t < arms_) return t;
  return argmax(arms_, [&](std::size_t i) { return estimates_.estimate(i) + bonus(i, t); });
}

void ModUcbPolicy::observe(std::size_t t, std::size_t arm, double reward) {
  estimates_.observe(t, arm, reward);
}

}  // namespace arb
