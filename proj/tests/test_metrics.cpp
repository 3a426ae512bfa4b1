// Regret ledger, normalization, distributed regret, summary statistics.
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "arbandit/env.hpp"
#include "arbandit/metrics.hpp"
#include "arbandit/policies.hpp"

using namespace arb;

namespace {

RegretLedger run_ledger(Policy& policy, const Trajectory& tr, std::span<const ArParams> ps) {
  policy.reset(tr.arms(), tr.horizon(), ps, 1);
  RegretLedger ledger(tr.horizon());
  for (std::size_t t = 0; t < tr.horizon(); ++t) {
    const std::size_t a = policy.select_arm(t);
    ledger.record(a, tr.best_expected(t), instantaneous_regret(tr.expected_at(t), a));
    policy.observe(t, a, tr.realized(a, t));
  }
  return ledger;
}

}  // namespace

TEST(Regret, InstantaneousAndLedger) {
  const std::vector<double> r{0.2, -0.4, 0.7};
  EXPECT_DOUBLE_EQ(instantaneous_regret(r, 2), 0.0);
  EXPECT_DOUBLE_EQ(instantaneous_regret(r, 1), 1.1);
  RegretLedger ledger;
  ledger.record(0, 0.5, 0.25);
  ledger.record(1, 0.5, 0.0);
  EXPECT_EQ(ledger.rounds(), 2u);
  EXPECT_DOUBLE_EQ(ledger.cumulative_regret(), 0.25);
  EXPECT_DOUBLE_EQ(per_round_average(ledger), 0.125);
  EXPECT_THROW(ledger.record(0, 0.5, -0.1), std::invalid_argument);
  EXPECT_EQ(ledger.rounds(), 2u);
}

TEST(Regret, NormalizationEdgeCases) {
  RegretLedger perfect, worst;
  for (std::size_t t = 0; t < 100; ++t) {
    const double rs = 0.3 + 0.001 * static_cast<double>(t);
    perfect.record(0, rs, 0.0);
    worst.record(1, rs, rs);
  }
  EXPECT_EQ(normalized_regret(perfect), 0.0);
  EXPECT_EQ(normalized_regret(worst), 1.0);

  RegretLedger negative;
  negative.record(0, -0.2, 0.3);
  negative.record(0, 0.25, 0.1);
  EXPECT_GT(normalized_regret(negative), 1.0);  // small positive denominator
  EXPECT_FALSE(is_degenerate(negative, 0.25));  // 0.05 > 0.01 * 2 * 0.25
}

TEST(Regret, DegeneracyThreshold) {
  RegretLedger l;
  for (int t = 0; t < 10; ++t) l.record(0, 0.001, 0.0);  // sum r* = 0.01
  EXPECT_TRUE(is_degenerate(l, 0.2));    // 0.01 <= 0.01 * 10 * 0.2 = 0.02
  EXPECT_FALSE(is_degenerate(l, 0.05));  // 0.01 >  0.005
  EXPECT_FALSE(is_degenerate(l, 0.2, 0.001));
}

TEST(DistributedRegret, SingleRoundWindowAndZeroGap) {
  const std::vector<ArParams> ps{ArParams(0.9, 0.3), ArParams(0.9, 0.3)};
  std::vector<double> noise(2 * 6, 0.0);
  const std::vector<double> init{0.5, 0.1};
  const Trajectory tr = trajectory_from_noise(ps, init, noise, 6);
  RegretLedger ledger;
  const std::size_t pulls[6] = {1, 1, 0, 0, 1, 0};
  for (std::size_t t = 0; t < 6; ++t)
    ledger.record(pulls[t], tr.best_expected(t), instantaneous_regret(tr.expected_at(t), pulls[t]));
  EXPECT_DOUBLE_EQ(distributed_regret(ledger, tr, 1, 0, 0.9), ledger.regret(0));
  EXPECT_EQ(distributed_regret(ledger, tr, 0, 2, 0.9), 0.0);  // arm 0 optimal at its pull
  EXPECT_THROW(distributed_regret(ledger, tr, 0, 0, 0.9), std::invalid_argument);
  EXPECT_THROW(distributed_regret(ledger, tr, 0, 5, 0.9), std::invalid_argument);
}

TEST(DistributedRegret, WindowsTelescopeAndDecomposeTotal) {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 4; ++rep) {
    std::vector<ArParams> ps;
    std::uniform_real_distribution<double> a(0.3, 0.98), s(0.05, 0.5);
    for (int i = 0; i < 4; ++i) ps.emplace_back(a(rng), s(rng));
    const Trajectory tr = generate_trajectory(ps, 2000, rng());
    Ar2Config cfg;
    cfg.c1 = 1.0;
    Ar2Policy ar2(cfg);
    const RegretLedger ledger = run_ledger(ar2, tr, ps);
    const PullDecomposition dec = decompose_pulls(ledger, 4);
    double distributed_total = 0.0;
    for (const auto& w : dec.windows) {
      double sum = 0.0;
      for (std::size_t t = w.start; t < w.next; ++t)
        sum += distributed_regret(ledger, tr, w.arm, t, ps[w.arm].alpha());
      EXPECT_NEAR(sum, ledger.regret(w.start), 1e-12);
      distributed_total += sum;
    }
    double boundary = 0.0;
    for (std::size_t t : dec.final_pulls) boundary += ledger.regret(t);
    EXPECT_NEAR(distributed_total + boundary, ledger.cumulative_regret(), 1e-9);
    EXPECT_EQ(dec.windows.size() + dec.final_pulls.size(), ledger.rounds());
  }
}

TEST(Summary, MatchesReferenceComputation) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.4, 0.07);
  std::vector<double> v(100);
  for (auto& x : v) x = n(rng);
  long double sum = 0.0L;
  for (double x : v) sum += x;
  const long double mean = sum / 100.0L;
  long double sq = 0.0L;
  for (double x : v) sq += (x - mean) * (x - mean);
  const SummaryStats s = summarize(v);
  EXPECT_NEAR(s.mean, static_cast<double>(mean), 1e-12);
  EXPECT_NEAR(s.stddev, static_cast<double>(std::sqrt(sq / 99.0L)), 1e-12);
  EXPECT_EQ(s.count, 100u);
  EXPECT_EQ(summarize(std::vector<double>{3.0}).stddev, 0.0);
}

TEST(Summary, QuantileType7) {
  const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
}

TEST(Ledger, CsvLayout) {
  RegretLedger l;
  l.record(2, 0.5, 0.125);
  std::ostringstream os;
  write_ledger_csv(os, l);
  EXPECT_EQ(os.str(), "t,chosen_arm,oracle_reward,regret\n0,2,0.5,0.125\n");
}
