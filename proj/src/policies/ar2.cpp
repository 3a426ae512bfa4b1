#include <algorithm>
#include <cmath>

#include "arbandit/policies.hpp"

namespace arb {
namespace {

double mean_alpha(std::span<const ArParams> params) {
  double s = 0.0;
  for (const auto& p : params) s += p.alpha();
  return s / static_cast<double>(params.size());
}

double mean_sigma(std::span<const ArParams> params) {
  double s = 0.0;
  for (const auto& p : params) s += p.sigma();
  return s / static_cast<double>(params.size());
}

}  // namespace

std::size_t Ar2State::triggered_count() const {
  return static_cast<std::size_t>(std::count(triggered.begin(), triggered.end(), true));
}

Ar2Policy::Ar2Policy(Ar2Config config) : config_(config) {
  if (config_.superior_window == 1)
    throw std::invalid_argument("AR2: superior window must be 0 (all arms) or >= 2");
  if (!(config_.epoch_scale > 0.0)) throw std::invalid_argument("AR2: epoch_scale must be positive");
  if (!std::isnan(config_.c1) && !(config_.c1 > 0.0))
    throw std::invalid_argument("AR2: c1 must be positive");
}

void Ar2Policy::reset(std::size_t arm_count, std::size_t /*horizon*/,
                      std::span<const ArParams> params, std::uint64_t /*seed*/) {
  if (arm_count == 0 || params.size() != arm_count)
    throw std::invalid_argument("AR2: one ArParams per arm required");
  arms_ = arm_count;
  const double a = mean_alpha(params);
  const double s = mean_sigma(params);
  if (config_.epoch_len == 0) {
    const double scaled =
        std::ceil(config_.epoch_scale * static_cast<double>(default_epoch_len(arm_count, a, s)));
    epoch_len_ = std::max(static_cast<std::size_t>(scaled), arm_count + 1);
  } else {
    if (config_.epoch_len < arm_count + 1)
      throw std::invalid_argument("AR2: epoch length must be at least k + 1");
    epoch_len_ = config_.epoch_len;
  }
  c0_ = std::isnan(config_.c0) ? ar2_c0(a, s, epoch_len_, arm_count) : config_.c0;
  c1_ = std::isnan(config_.c1) ? 24.0 * c0_ : config_.c1;
  if (!(c1_ > 0.0)) throw std::invalid_argument("AR2: c1 must be positive");

  state_ = Ar2State{};
  state_.estimates = ArEstimates(params);
  state_.triggered.assign(arm_count, false);
  state_.trigger_time.assign(arm_count, ArEstimates::never);
  state_.epoch_index = ArEstimates::never;
  pending_ = ArEstimates::never;
  pending_round_ = ArEstimates::never;
}

void Ar2Policy::restart(std::size_t t) {
  state_.epoch_index = t / epoch_len_;
  state_.epoch_start = state_.epoch_index * epoch_len_;
  state_.estimates.clear();
  std::fill(state_.triggered.begin(), state_.triggered.end(), false);
  std::fill(state_.trigger_time.begin(), state_.trigger_time.end(), ArEstimates::never);
  state_.recent_pulls.clear();
  state_.superior = 0;
  state_.superior_estimate = 0.0;
}

void Ar2Policy::update_superior(std::size_t /*t*/) {
  const ArEstimates& est = state_.estimates;
  std::size_t best = 0;
  if (config_.superior_window == 0) {
    for (std::size_t i = 1; i < arms_; ++i) {
      const bool higher = est.estimate(i) > est.estimate(best);
      const bool tie_more_recent =
          est.estimate(i) == est.estimate(best) && est.last_pull(i) > est.last_pull(best);
      if (higher || tie_more_recent) best = i;
    }
  } else {
    // recent_pulls is most-recent-first; strict comparison keeps the more
    // recent pull on ties.
    best = state_.recent_pulls.front();
    for (std::size_t j = 1; j < state_.recent_pulls.size(); ++j) {
      const std::size_t cand = state_.recent_pulls[j];
      if (est.estimate(cand) > est.estimate(best)) best = cand;
    }
  }
  state_.superior = best;
  state_.superior_estimate = est.estimate(best);
}

std::size_t Ar2Policy::select_arm(std::size_t t) {
  if (arms_ == 0) throw ContractViolation("AR2: select_arm before reset");
  if (pending_ != ArEstimates::never)
    throw ContractViolation("AR2: select_arm called again before observe");
  if (pending_round_ != ArEstimates::never && t != pending_round_ + 1)
    throw ContractViolation("AR2: rounds must be consecutive");

  if (state_.epoch_index == ArEstimates::never || t / epoch_len_ != state_.epoch_index)
    restart(t);

  const std::size_t pos = t - state_.epoch_start;
  std::size_t arm = 0;
  state_.exploring = false;
  if (arms_ == 1) {
    arm = 0;
  } else if (pos < arms_) {
    arm = pos;  // round-robin initialization
  } else {
    update_superior(t);
    const ArEstimates& est = state_.estimates;
    const std::size_t sup = state_.superior;
    state_.triggered[sup] = false;
    state_.trigger_time[sup] = ArEstimates::never;

    for (std::size_t i = 0; i < arms_; ++i) {
      if (i == sup || state_.triggered[i]) continue;
      const ArParams& p = est.params(i);
      const double width = trigger_width(p.alpha(), p.sigma(), t - est.last_pull(i), c1_);
      if (state_.superior_estimate - est.estimate(i) <= width) {
        state_.triggered[i] = true;
        state_.trigger_time[i] = t;
      }
    }

    // In-epoch round numbers start at 1, so pos + 1 odd marks an exploration round.
    const bool explore_round = (pos + 1) % 2 == 1;
    arm = sup;
    if (explore_round && state_.triggered_count() > 0) {
      std::size_t pick = ArEstimates::never;
      double best = 0.0;
      for (std::size_t i = 0; i < arms_; ++i) {
        if (!state_.triggered[i]) continue;
        double score = 0.0;
        if (config_.explore_rule == ExploreRule::earliest_trigger) {
          score = -static_cast<double>(state_.trigger_time[i]);
        } else {
          const ArParams& p = est.params(i);
          score = est.estimate(i) +
                  confidence_width(p.alpha(), p.sigma(), t - est.last_pull(i), c1_);
        }
        if (pick == ArEstimates::never || score > best) {
          pick = i;
          best = score;
        }
      }
      arm = pick;
      state_.exploring = true;
    }
  }
  pending_ = arm;
  pending_round_ = t;
  return arm;
}

void Ar2Policy::observe(std::size_t t, std::size_t arm, double reward) {
  if (pending_ == ArEstimates::never || arm != pending_ || t != pending_round_)
    throw ContractViolation("AR2: observe must report the arm just selected");
  state_.estimates.observe(t, arm, reward);
  state_.triggered[arm] = false;
  state_.trigger_time[arm] = ArEstimates::never;
  if (config_.superior_window > 0) {
    state_.recent_pulls.insert(state_.recent_pulls.begin(), arm);
    if (state_.recent_pulls.size() > config_.superior_window) state_.recent_pulls.pop_back();
  }
  pending_ = ArEstimates::never;
}

}  // namespace arb
