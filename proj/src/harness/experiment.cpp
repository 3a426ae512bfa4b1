#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "arbandit/harness.hpp"
#include "arbandit/policy_factory.hpp"

namespace arb {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_sigma(const InstanceSpec& spec) {
  double s = 0.0;
  for (const auto& p : spec.true_params) s += p.sigma();
  return s / static_cast<double>(spec.true_params.size());
}

std::vector<std::uint64_t> seeds_for(const ExperimentConfig& config, bool tuning) {
  const std::size_t n = tuning ? config.tuning_instances : config.instances;
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t i = 0; i < n; ++i) seeds[i] = instance_seed(config, i, tuning);
  return seeds;
}

// Normalized regret of one run, NaN when the instance is degenerate.
double score_run(const ExperimentConfig& config, const InstanceSpec& instance,
                 const Trajectory& trajectory, const RosterEntry& entry,
                 const nlohmann::json& params) {
  auto policy = make_policy(entry.kind, params, &trajectory);
  const RegretLedger ledger =
      run_single(instance, trajectory, *policy, policy_seed(instance, entry.name));
  if (is_degenerate(ledger, mean_sigma(instance), config.degenerate_threshold)) return kNaN;
  return normalized_regret(ledger);
}

nlohmann::json merged(const RosterEntry& e, const nlohmann::json& point) {
  nlohmann::json p = e.params;
  p.update(point);
  return p;
}

}  // namespace

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n || failed.load()) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed.store(true);
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<TuningOutcome> tune_roster(const ExperimentConfig& config) {
  const bool separate = config.tuning_instances > 0;
  const std::vector<std::uint64_t> seeds = seeds_for(config, separate);

  // scores[instance][entry][candidate]
  std::vector<std::vector<std::vector<double>>> scores(seeds.size());
  const bool any_grid = std::any_of(config.roster.begin(), config.roster.end(),
                                    [](const RosterEntry& e) { return e.grid.size() > 1; });
  if (any_grid) {
    parallel_for(seeds.size(), config.threads, [&](std::size_t n) {
      const InstanceSpec instance = build_instance(config, seeds[n]);
      const Trajectory trajectory =
          generate_trajectory(instance.true_params, config.horizon, instance.seed);
      auto& row = scores[n];
      row.resize(config.roster.size());
      for (std::size_t e = 0; e < config.roster.size(); ++e) {
        const RosterEntry& entry = config.roster[e];
        if (entry.grid.size() <= 1) continue;
        for (const auto& point : entry.grid)
          row[e].push_back(score_run(config, instance, trajectory, entry, merged(entry, point)));
      }
    });
  }

  std::vector<TuningOutcome> out;
  for (std::size_t e = 0; e < config.roster.size(); ++e) {
    const RosterEntry& entry = config.roster[e];
    TuningOutcome t{entry.name, entry.params, {}};
    if (entry.grid.size() == 1) t.chosen = merged(entry, entry.grid.front());
    if (entry.grid.size() > 1) {
      std::size_t best = 0;
      for (std::size_t c = 0; c < entry.grid.size(); ++c) {
        double sum = 0.0;
        std::size_t used = 0;
        for (const auto& row : scores) {
          const double v = row[e][c];
          if (!std::isnan(v)) {
            sum += v;
            ++used;
          }
        }
        t.candidate_means.push_back(used ? sum / static_cast<double>(used) : kNaN);
        if (!std::isnan(t.candidate_means[c]) &&
            (std::isnan(t.candidate_means[best]) || t.candidate_means[c] < t.candidate_means[best]))
          best = c;
      }
      t.chosen = merged(entry, entry.grid[best]);
    }
    out.push_back(std::move(t));
  }
  return out;
}

ExperimentResult evaluate_roster(const ExperimentConfig& config,
                                 const std::vector<TuningOutcome>& tuned) {
  if (tuned.size() != config.roster.size())
    throw std::invalid_argument("evaluate_roster: tuning outcome does not match roster");
  const std::vector<std::uint64_t> seeds = seeds_for(config, false);
  std::vector<std::vector<double>> scores(seeds.size());

  parallel_for(seeds.size(), config.threads, [&](std::size_t n) {
    const InstanceSpec instance = build_instance(config, seeds[n]);
    const Trajectory trajectory =
        generate_trajectory(instance.true_params, config.horizon, instance.seed);
    scores[n].resize(config.roster.size());
    for (std::size_t e = 0; e < config.roster.size(); ++e)
      scores[n][e] = score_run(config, instance, trajectory, config.roster[e], tuned[e].chosen);
  });

  ExperimentResult result;
  result.regime = config.alpha_law.target_mean;
  result.arms = config.arms;
  result.tuning = tuned;
  result.instance_seeds = seeds;
  for (std::size_t n = 0; n < seeds.size(); ++n) {
    // Degeneracy depends only on the instance, so every policy agrees.
    if (!scores[n].empty() && std::isnan(scores[n][0])) result.excluded_instances.push_back(n);
  }
  for (std::size_t e = 0; e < config.roster.size(); ++e) {
    PolicyResult p;
    p.name = config.roster[e].name;
    p.params = tuned[e].chosen;
    for (const auto& row : scores) {
      if (std::isnan(row[e])) {
        ++p.excluded;
      } else {
        p.normalized.push_back(row[e]);
      }
    }
    p.used = p.normalized.size();
    p.stats = summarize(p.normalized);
    result.policies.push_back(std::move(p));
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return evaluate_roster(config, tune_roster(config));
}

}  // namespace arb
