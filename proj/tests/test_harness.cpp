#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "bap/gen.hpp"
#include "bap/harness.hpp"
#include "fixtures.hpp"

using namespace bap;

namespace {

Instance tight_instance(std::uint64_t seed) {
  gen::RandomInstanceParams prm;
  prm.bins = 6;
  prm.items = 12;
  prm.target_k = 2.0;
  return gen::random_instance(prm, seed);
}

}  // namespace

TEST(Harness, SingleTrialIsReproducible) {
  Instance inst = fixtures::reference_2x2();
  auto a = simulate(inst, Algorithm::Alg1, 0.25, 1, 17);
  auto b = simulate(inst, Algorithm::Alg1, 0.25, 1, 17);
  ASSERT_EQ(a.records.size(), 1u);
  EXPECT_EQ(a.records, b.records);
}

TEST(Harness, ZeroTrialsRejected) {
  EXPECT_THROW(simulate(fixtures::reference_2x2(), Algorithm::Alg1, 0.25, 0, 1), Error);
}

TEST(Harness, MagicianNeedsKAboveOne) {
  EXPECT_THROW(simulate(fixtures::reference_2x2(1.0), Algorithm::Alg1, 0.25, 10, 1), Error);
}

TEST(Harness, BaselineDiscardsSomeTrialsOnATightBudget) {
  auto s = simulate(tight_instance(3), Algorithm::Baseline, 0.1, 2000, 5);
  EXPECT_GE(s.discard_rate, 0.0);
  EXPECT_LE(s.discard_rate, 1.0);
  RecordProperty("discard_rate", std::to_string(s.discard_rate));
}

TEST(Harness, AggregatesMatchARecomputationFromCsv) {
  auto s = simulate(tight_instance(4), Algorithm::Baseline, 0.1, 500, 9);
  auto rows = parse_trials_csv(trials_csv(s));
  ASSERT_EQ(rows, s.records);
  double sum = 0.0, kept_sum = 0.0;
  std::size_t kept = 0;
  for (const auto& r : rows) {
    sum += r.objective;
    if (r.feasible) {
      kept_sum += r.objective;
      ++kept;
    }
  }
  const double n = static_cast<double>(rows.size());
  const double mean_all = sum / n;
  double ss = 0.0;
  for (const auto& r : rows) ss += (r.objective - mean_all) * (r.objective - mean_all);
  EXPECT_NEAR(s.mean_all, mean_all, 1e-12);
  EXPECT_NEAR(s.mean, kept ? kept_sum / static_cast<double>(kept) : 0.0, 1e-12);
  EXPECT_NEAR(s.discard_rate, 1.0 - static_cast<double>(kept) / n, 1e-12);
  EXPECT_NEAR(s.std_error, std::sqrt(ss / (n - 1.0) / n), 1e-12);
}

TEST(Harness, BestSoFarIsNondecreasing) {
  for (Algorithm alg : {Algorithm::Alg1, Algorithm::Alg2, Algorithm::Baseline, Algorithm::Alg6}) {
    auto s = simulate(tight_instance(6), alg, 0.1, 300, 2);
    ASSERT_EQ(s.best_so_far.size(), 300u);
    for (std::size_t t = 1; t < s.best_so_far.size(); ++t)
      EXPECT_GE(s.best_so_far[t], s.best_so_far[t - 1]);
  }
}

TEST(Harness, ThreadCountDoesNotChangeResults) {
  Instance inst = tight_instance(7);
  RunOptions one, four;
  four.threads = 4;
  for (Algorithm alg : {Algorithm::Alg1, Algorithm::Alg6, Algorithm::Alg3}) {
    auto a = simulate(inst, alg, 0.2, 400, 11, one);
    auto b = simulate(inst, alg, 0.2, 400, 11, four);
    EXPECT_EQ(trials_csv(a), trials_csv(b));
  }
}

TEST(Harness, CompareSharedCountsDominance) {
  auto cmp = compare(tight_instance(8), {Algorithm::Baseline, Algorithm::Alg6}, 0.1, 1000, 3, true);
  ASSERT_EQ(cmp.dominance.size(), 1u);
  EXPECT_EQ(cmp.dominance[0].holds, 1000u);
  EXPECT_TRUE(cmp.dominance[0].always());
}

TEST(Harness, CompareAlg1Alg2AllFeasible) {
  auto cmp = compare(tight_instance(9), {Algorithm::Alg1, Algorithm::Alg2}, 0.2, 1000, 4, true);
  for (const auto& s : cmp.stats) {
    EXPECT_EQ(s.discard_rate, 0.0);
    for (const auto& r : s.records) EXPECT_TRUE(r.feasible);
  }
}

TEST(Harness, CompareUnsharedHasNoDominanceReport) {
  auto cmp = compare(tight_instance(8), {Algorithm::Baseline, Algorithm::Alg6}, 0.1, 200, 3, false);
  EXPECT_TRUE(cmp.dominance.empty());
  EXPECT_EQ(cmp.stats.size(), 2u);
}

TEST(Csv, EmptyStatsGiveHeaderOnlyFiles) {
  TrialStats s;
  s.summarize();
  EXPECT_EQ(trials_csv(s), "trial,objective,feasible,path\n");
  EXPECT_EQ(best_so_far_csv(s), "trial,best_objective\n");
}

TEST(Csv, ThreeTrials) {
  auto s = simulate(fixtures::reference_2x2(), Algorithm::Alg2, 0.1, 3, 1);
  auto text = best_so_far_csv(s);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_EQ(parse_trials_csv(trials_csv(s)).size(), 3u);
}

TEST(Csv, SkipDropsLeadingRowsButKeepsTheirMaximum) {
  TrialStats s;
  s.records = {{0, 5.0, true, Path::Direct}, {1, 1.0, true, Path::Direct}, {2, 7.0, true, Path::Direct}};
  s.summarize();
  EXPECT_EQ(best_so_far_csv(s, 1), "trial,best_objective\n1,5\n2,7\n");
}

TEST(Csv, ExportWritesBothFiles) {
  auto s = simulate(fixtures::reference_2x2(), Algorithm::Alg2, 0.1, 5, 1);
  auto prefix = (std::filesystem::temp_directory_path() / "bap_export").string();
  export_stats(s, prefix);
  EXPECT_TRUE(std::filesystem::exists(prefix + "_trials.csv"));
  EXPECT_TRUE(std::filesystem::exists(prefix + "_best.csv"));
  std::filesystem::remove(prefix + "_trials.csv");
  std::filesystem::remove(prefix + "_best.csv");
}

TEST(Csv, MalformedCsvRejected) {
  EXPECT_THROW(parse_trials_csv("bad header\n"), Error);
  EXPECT_THROW(parse_trials_csv("trial,objective,feasible,path\n1,2\n"), Error);
}
