#pragma once

// Experiment harness: instance generation, common-random-number evaluation of
// a policy roster, per-cell tuning, and aggregation of normalized regret.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "arbandit/env.hpp"
#include "arbandit/metrics.hpp"
#include "arbandit/policies.hpp"

namespace arb {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AlphaLaw {
  double target_mean = 0.9;
  double concentration = 5.0;
  double clip_lo = 0.02;
  double clip_hi = 0.995;
};

struct SigmaLaw {
  double low = 0.0;
  double high = 0.5;
};

struct RosterEntry {
  std::string name;  // column label; also keys the policy's RNG substream
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  // Candidate overrides merged into params; the best on the tuning
  // instances is used for evaluation. Empty means no tuning.
  std::vector<nlohmann::json> grid;
};

struct ExperimentConfig {
  std::size_t arms = 2;
  std::size_t horizon = 10000;
  std::size_t instances = 100;
  // Separate instances used only for grid tuning; 0 tunes on the evaluation set.
  std::size_t tuning_instances = 100;
  AlphaLaw alpha_law;
  SigmaLaw sigma_law;
  double boundary = 1.0;
  double alpha_noise_pct = 0.0;
  // When set, policies receive this sigma for every arm instead of the truth.
  std::optional<double> sigma_upper_bound;
  double degenerate_threshold = 0.01;
  std::uint64_t master_seed = 20240501;
  std::size_t threads = 1;
  std::vector<RosterEntry> roster;
  std::string output_dir = "out";
};

// Validates every field and every roster entry (each grid point is built once).
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

// Reads a config file, or the "config" member of a manifest written by this tool.
ExperimentConfig load_config(const std::filesystem::path& path);

// The seven-policy roster with the tuning grids used for the Table-1 protocol.
std::vector<RosterEntry> canonical_roster();
ExperimentConfig canonical_config(double target_mean, std::size_t arms);

struct InstanceSpec {
  std::vector<ArParams> true_params;
  std::vector<ArParams> policy_params;  // alpha-hat and the sigma policies are told
  double boundary = 1.0;
  std::uint64_t seed = 0;
};

// Seed of evaluation (or tuning) instance `index`; a function of the master
// seed, the alpha regime and k only.
std::uint64_t instance_seed(const ExperimentConfig& config, std::size_t index, bool tuning);

// alpha_i = clip(d_i * k * E[alpha]) with d ~ Dirichlet(concentration),
// sigma_i ~ U(sigma_law). Policy inputs start equal to the truth.
InstanceSpec gen_instance(const ExperimentConfig& config, std::uint64_t seed);

// alpha-hat_i = clip(alpha_i + N(0, (p/100) * target_mean)); p = 0 is the identity.
InstanceSpec perturb_alphas(const InstanceSpec& spec, double pct, const AlphaLaw& law,
                            Engine& rng);

// Full instance as used by the runner: gen_instance, then sigma override and
// alpha perturbation from their own substreams.
InstanceSpec build_instance(const ExperimentConfig& config, std::uint64_t seed);

// Drives one policy over a shared trajectory. Policy errors are rethrown as
// std::runtime_error naming the policy.
RegretLedger run_single(const InstanceSpec& instance, const Trajectory& trajectory,
                        Policy& policy, std::uint64_t seed);

std::uint64_t policy_seed(const InstanceSpec& instance, const std::string& policy_name);

struct TuningOutcome {
  std::string name;
  nlohmann::json chosen;              // merged params used for evaluation
  std::vector<double> candidate_means;  // one per grid point
};

struct PolicyResult {
  std::string name;
  nlohmann::json params;
  std::vector<double> normalized;  // per used instance, in instance order
  SummaryStats stats;
  std::size_t used = 0;
  std::size_t excluded = 0;
};

struct ExperimentResult {
  double regime = 0.0;
  std::size_t arms = 0;
  std::vector<TuningOutcome> tuning;
  std::vector<PolicyResult> policies;
  std::vector<std::uint64_t> instance_seeds;
  std::vector<std::size_t> excluded_instances;
};

std::vector<TuningOutcome> tune_roster(const ExperimentConfig& config);
ExperimentResult evaluate_roster(const ExperimentConfig& config,
                                 const std::vector<TuningOutcome>& tuned);
ExperimentResult run_experiment(const ExperimentConfig& config);

// Calls fn(i) for i in [0, n) on `threads` workers. The first exception is
// rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------------------
// Output

// regime,k,policy,mean_normalized_regret,std_normalized_regret,instances_used,instances_excluded
void write_results_csv(std::ostream& os, const std::vector<ExperimentResult>& results);
// Wide layout: regime,k,<policy>... one row per cell; `field` is "mean" or "std".
void write_table_csv(std::ostream& os, const std::vector<ExperimentResult>& results,
                     const std::string& field);

struct RobustnessRow {
  std::string policy;
  double pct;
  std::vector<double> normalized;
  SummaryStats stats;
};
// policy,p,mean,min,q1,median,q3,max,instances_used
void write_robustness_csv(std::ostream& os, const std::vector<RobustnessRow>& rows);

std::string format_double(double v);

nlohmann::json manifest_base(const std::string& command);
// Writes `content` atomically enough for our purposes (truncate + write).
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace arb
