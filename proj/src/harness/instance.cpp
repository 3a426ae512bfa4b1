#include <algorithm>

#include "arbandit/harness.hpp"

namespace arb {

InstanceSpec gen_instance(const ExperimentConfig& config, std::uint64_t seed) {
  const std::size_t k = config.arms;
  const AlphaLaw& law = config.alpha_law;
  Engine rng = make_engine(derive_seed(seed, Stream::instance_params));

  std::gamma_distribution<double> gamma(law.concentration, 1.0);
  std::vector<double> d(k);
  double total = 0.0;
  for (auto& v : d) {
    v = gamma(rng);
    total += v;
  }
  std::uniform_real_distribution<double> sigma_draw(config.sigma_law.low, config.sigma_law.high);

  InstanceSpec spec;
  spec.boundary = config.boundary;
  spec.seed = seed;
  spec.true_params.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double alpha = std::clamp(d[i] / total * static_cast<double>(k) * law.target_mean,
                                    law.clip_lo, law.clip_hi);
    double sigma = 0.0;
    while (!(sigma > 0.0)) sigma = sigma_draw(rng);
    spec.true_params.emplace_back(alpha, sigma, config.boundary);
  }
  spec.policy_params = spec.true_params;
  return spec;
}

InstanceSpec perturb_alphas(const InstanceSpec& spec, double pct, const AlphaLaw& law,
                            Engine& rng) {
  InstanceSpec out = spec;
  if (pct == 0.0) return out;
  std::normal_distribution<double> noise(0.0, pct / 100.0 * law.target_mean);
  for (std::size_t i = 0; i < out.true_params.size(); ++i) {
    const ArParams& given = spec.policy_params[i];
    const double alpha_hat =
        std::clamp(spec.true_params[i].alpha() + noise(rng), law.clip_lo, law.clip_hi);
    out.policy_params[i] = ArParams(alpha_hat, given.sigma(), given.boundary());
  }
  return out;
}

InstanceSpec build_instance(const ExperimentConfig& config, std::uint64_t seed) {
  InstanceSpec spec = gen_instance(config, seed);
  if (config.sigma_upper_bound) {
    for (auto& p : spec.policy_params)
      p = ArParams(p.alpha(), *config.sigma_upper_bound, p.boundary());
  }
  if (config.alpha_noise_pct > 0.0) {
    Engine rng = make_engine(derive_seed(seed, Stream::alpha_noise));
    spec = perturb_alphas(spec, config.alpha_noise_pct, config.alpha_law, rng);
  }
  return spec;
}

std::uint64_t policy_seed(const InstanceSpec& instance, const std::string& policy_name) {
  return derive_seed(instance.seed, Stream::policy, {fnv1a(policy_name)});
}

RegretLedger run_single(const InstanceSpec& instance, const Trajectory& trajectory,
                        Policy& policy, std::uint64_t seed) {
  const std::size_t k = trajectory.arms();
  const std::size_t horizon = trajectory.horizon();
  if (instance.policy_params.size() != k)
    throw std::invalid_argument("run_single: instance and trajectory disagree on arm count");
  RegretLedger ledger(horizon);
  std::size_t t = 0;
  try {
    policy.reset(k, horizon, instance.policy_params, seed);
    for (; t < horizon; ++t) {
      const std::size_t arm = policy.select_arm(t);
      if (arm >= k) throw ContractViolation("selected arm index out of range");
      policy.observe(t, arm, trajectory.realized(arm, t));
      const auto row = trajectory.expected_at(t);
      ledger.record(arm, trajectory.best_expected(t), instantaneous_regret(row, arm));
    }
  } catch (const std::exception& e) {
    throw std::runtime_error("policy '" + policy.name() + "' failed at round " +
                             std::to_string(t) + ": " + e.what());
  }
  return ledger;
}

}  // namespace arb
