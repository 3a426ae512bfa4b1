// Config parsing, instance generation, common-random-number evaluation.
#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <sstream>

#include "arbandit/harness.hpp"
#include "arbandit/policy_factory.hpp"

using namespace arb;
using nlohmann::json;

namespace {

ExperimentConfig small_config(std::size_t k = 3) {
  ExperimentConfig c = canonical_config(0.9, k);
  c.instances = 6;
  c.tuning_instances = 3;
  c.horizon = 400;
  return c;
}

const PolicyResult& find(const ExperimentResult& r, const std::string& name) {
  for (const auto& p : r.policies)
    if (p.name == name) return p;
  throw std::runtime_error("missing " + name);
}

}  // namespace

// =============================================================================
// Config
// =============================================================================

TEST(Config, RoundTripsThroughJson) {
  const ExperimentConfig c = small_config();
  const ExperimentConfig back = parse_config(to_json(c));
  EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
  EXPECT_EQ(back.roster.size(), 7u);
}

TEST(Config, CanonicalRosterColumns) {
  std::vector<std::string> names;
  for (const auto& e : canonical_roster()) names.push_back(e.name);
  EXPECT_EQ(names, (std::vector<std::string>{"AR2", "ETC", "Rexp3", "eps-greedy", "UCB",
                                             "mod-UCB", "naive"}));
}

TEST(Config, RejectsBadInput) {
  const json good = to_json(small_config());
  auto expect_bad = [&](auto mutate) {
    json j = good;
    mutate(j);
    EXPECT_THROW(parse_config(j), ConfigError) << j.dump().substr(0, 200);
  };
  expect_bad([](json& j) { j["surprise"] = 1; });
  expect_bad([](json& j) { j["arms"] = 0; });
  expect_bad([](json& j) { j["arms"] = -2; });
  expect_bad([](json& j) { j["horizon"] = 2; });
  expect_bad([](json& j) { j["alpha_law"]["clip"] = {0.5, 0.4}; });
  expect_bad([](json& j) { j["alpha_law"]["target_mean"] = 1.2; });
  expect_bad([](json& j) { j["sigma_law"]["high"] = 1.5; });
  expect_bad([](json& j) { j["roster"] = json::array(); });
  expect_bad([](json& j) { j["roster"][0]["kind"] = "nope"; });
  expect_bad([](json& j) { j["roster"][0]["params"]["c1"] = -1.0; });
  expect_bad([](json& j) { j["roster"][1]["grid"] = {{{"m", 0}}}; });
  expect_bad([](json& j) { j["roster"][1]["name"] = "AR2"; });
  expect_bad([](json& j) { j["alpha_noise_pct"] = -1; });
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

// =============================================================================
// Instances
// =============================================================================

TEST(Instances, AlphaMeanMatchesTarget) {
  ExperimentConfig c = canonical_config(0.4, 6);
  const std::size_t n = 10000;
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const InstanceSpec s = gen_instance(c, instance_seed(c, i, false));
    const double a = s.true_params[0].alpha();
    sum += a;
    sq += a * a;
    for (const auto& p : s.true_params) {
      EXPECT_GT(p.sigma(), 0.0);
      EXPECT_LT(p.sigma(), 0.5);
      EXPECT_GE(p.alpha(), 0.02);
      EXPECT_LE(p.alpha(), 0.995);
    }
    EXPECT_EQ(s.policy_params, s.true_params);
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(mean, 0.4, 3.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST(Instances, AlphaPerturbation) {
  InstanceSpec s;
  s.true_params = {ArParams(0.5, 0.2)};
  s.policy_params = s.true_params;
  AlphaLaw law;
  law.target_mean = 0.4;
  Engine rng = make_engine(1);
  EXPECT_EQ(perturb_alphas(s, 0.0, law, rng).policy_params, s.true_params);
  const std::size_t n = 100000;
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const InstanceSpec p = perturb_alphas(s, 20.0, law, rng);
    const double d = p.policy_params[0].alpha() - 0.5;
    EXPECT_EQ(p.true_params, s.true_params);
    sum += d;
    sq += d * d;
  }
  const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
  EXPECT_NEAR(sd, 0.2 * 0.4, 0.05 * 0.2 * 0.4);
  // Extreme draws are clipped into the valid range.
  s.true_params = {ArParams(0.99, 0.2)};
  s.policy_params = s.true_params;
  for (int i = 0; i < 1000; ++i) {
    const double a = perturb_alphas(s, 300.0, law, rng).policy_params[0].alpha();
    EXPECT_GE(a, law.clip_lo);
    EXPECT_LE(a, law.clip_hi);
  }
}

TEST(Instances, SeedsDependOnlyOnRegimeArmsAndIndex) {
  ExperimentConfig a = small_config();
  ExperimentConfig b = small_config();
  b.roster.pop_back();
  b.horizon = 999;
  EXPECT_EQ(instance_seed(a, 4, false), instance_seed(b, 4, false));
  EXPECT_NE(instance_seed(a, 4, false), instance_seed(a, 4, true));
  EXPECT_NE(instance_seed(a, 4, false), instance_seed(small_config(4), 4, false));
}

// =============================================================================
// Evaluation
// =============================================================================

TEST(Experiment, OracleRosterHasZeroRegret) {
  ExperimentConfig c = small_config();
  c.roster = {{"oracle", "oracle", json::object(), {}}};
  const ExperimentResult r = run_experiment(c);
  for (double v : find(r, "oracle").normalized) EXPECT_EQ(v, 0.0);
}

TEST(Experiment, RosterOrderAndMembershipDoNotLeak) {
  const ExperimentConfig base = small_config();
  const ExperimentResult full = run_experiment(base);

  ExperimentConfig reversed = base;
  std::reverse(reversed.roster.begin(), reversed.roster.end());
  const ExperimentResult rev = run_experiment(reversed);

  ExperimentConfig reduced = base;
  reduced.roster.erase(reduced.roster.begin() + 1, reduced.roster.begin() + 3);
  const ExperimentResult red = run_experiment(reduced);

  for (const auto& p : full.policies) {
    EXPECT_EQ(find(rev, p.name).normalized, p.normalized) << p.name;
    bool present = false;
    for (const auto& e : reduced.roster) present |= e.name == p.name;
    if (present) EXPECT_EQ(find(red, p.name).normalized, p.normalized) << p.name;
  }
}

TEST(Experiment, DeterministicAcrossRunsAndThreads) {
  ExperimentConfig c = small_config(4);
  const ExperimentResult a = run_experiment(c);
  c.threads = 3;
  const ExperimentResult b = run_experiment(c);
  std::ostringstream sa, sb;
  write_results_csv(sa, {a});
  write_results_csv(sb, {b});
  EXPECT_EQ(sa.str(), sb.str());
  for (std::size_t i = 0; i < a.tuning.size(); ++i)
    EXPECT_EQ(a.tuning[i].chosen.dump(), b.tuning[i].chosen.dump());
}

TEST(Experiment, TuningPicksGridArgmin) {
  const ExperimentResult r = run_experiment(small_config());
  for (const auto& t : r.tuning) {
    if (t.candidate_means.size() < 2) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < t.candidate_means.size(); ++i)
      if (t.candidate_means[i] < t.candidate_means[best]) best = i;
    for (const auto& e : small_config().roster) {
      if (e.name != t.name) continue;
      for (const auto& [key, value] : e.grid[best].items()) EXPECT_EQ(t.chosen.at(key), value);
    }
  }
}

namespace {
class Exploding final : public Policy {
 public:
  std::string name() const override { return "boom"; }
  void reset(std::size_t, std::size_t, std::span<const ArParams>, std::uint64_t) override {}
  std::size_t select_arm(std::size_t t) override {
    if (t == 7) throw std::runtime_error("kaput");
    return 0;
  }
  void observe(std::size_t, std::size_t, double) override {}
};
}  // namespace

TEST(Experiment, PolicyFailuresNameThePolicy) {
  const ExperimentConfig c = small_config();
  const InstanceSpec spec = build_instance(c, instance_seed(c, 0, false));
  const Trajectory tr = generate_trajectory(spec.true_params, 20, spec.seed);
  Exploding boom;
  try {
    run_single(spec, tr, boom, 1);
    FAIL() << "expected a throw";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("policy 'boom' failed at round 7"), std::string::npos);
  }
}

TEST(Experiment, ParallelForRethrows) {
  std::atomic<int> seen{0};
  EXPECT_THROW(parallel_for(50, 4,
                            [&](std::size_t i) {
                              ++seen;
                              if (i == 13) throw std::logic_error("x");
                            }),
               std::logic_error);
  std::atomic<int> count{0};
  parallel_for(100, 3, [&](std::size_t) { ++count; });
  EXPECT_EQ(count.load(), 100);
}

TEST(Output, TableShape) {
  std::vector<ExperimentResult> rs;
  for (double regime : {0.4, 0.9}) {
    for (std::size_t k : {2u, 4u, 6u}) {
      ExperimentConfig c = canonical_config(regime, k);
      c.instances = 2;
      c.tuning_instances = 0;
      c.horizon = 50;
      for (auto& e : c.roster) e.grid.clear();
      rs.push_back(run_experiment(c));
    }
  }
  std::ostringstream os;
  write_table_csv(os, rs, "mean");
  std::istringstream in(os.str());
  std::string line;
  std::size_t rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "regime,k,AR2,ETC,Rexp3,eps-greedy,UCB,mod-UCB,naive");
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
  }
  EXPECT_EQ(rows, 6u);
  std::ostringstream res;
  write_results_csv(res, {rs.front()});
  EXPECT_EQ(res.str().substr(0, res.str().find('\n')),
            "regime,k,policy,mean_normalized_regret,std_normalized_regret,instances_used,"
            "instances_excluded");
}

TEST(Output, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 123456789.125}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}
