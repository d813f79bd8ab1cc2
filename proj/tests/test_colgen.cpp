#include <gtest/gtest.h>

#include "bap/colgen.hpp"
#include "bap/exact.hpp"
#include "bap/gen.hpp"
#include "fixtures.hpp"

using namespace bap;

namespace {

ScaledInstance unscaled(Instance inst, double k = 1.0) { return ScaledInstance{std::move(inst), 1.0, k}; }

DualPrices duals(const Instance& inst, double q, double alpha = 0.0) {
  DualPrices d = DualPrices::zero(inst);
  std::fill(d.bin.begin(), d.bin.end(), q);
  d.budget = alpha;
  return d;
}

gen::RandomInstanceParams tiny_params(std::uint64_t seed) {
  gen::RandomInstanceParams prm;
  prm.bins = 2 + seed % 2;
  prm.items = 2 + seed % 5;
  prm.max_dims = 3;
  prm.max_assign_cost = (seed % 3 == 0) ? 0.0 : 1.0;
  prm.target_k = 1.0 + static_cast<double>(seed % 4);
  return prm;
}

}  // namespace

TEST(PriceBin, NoPositiveColumn) {
  auto si = unscaled(fixtures::one_bin_two_items(1, 0.0, 0.0));
  EXPECT_FALSE(price_bin(si, 0, duals(si.base, 0.0)));
}

TEST(PriceBin, CapacityOneKeepsTheBetterItem) {
  auto si = unscaled(fixtures::one_bin_two_items(1, 2.0, 1.0));
  auto c = price_bin(si, 0, duals(si.base, 0.5));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->config.items, std::vector<std::size_t>{0});
  EXPECT_DOUBLE_EQ(c->reduced_value, 1.5);
}

TEST(PriceBin, CapacityTwoTakesBoth) {
  auto si = unscaled(fixtures::one_bin_two_items(2, 2.0, 1.0));
  auto c = price_bin(si, 0, duals(si.base, 2.9));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->config.items, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(c->reduced_value, 0.1, 1e-12);
}

TEST(PriceBin, BudgetDualChargesCosts) {
  // reduced reward 2 - 1 * 0.5 per item, threshold 0 + 1 * c_l = 1
  auto si = unscaled(fixtures::one_bin_two_items(2, 2.0, 2.0, 0.5));
  auto c = price_bin(si, 0, duals(si.base, 0.0, 1.0));
  ASSERT_TRUE(c);
  EXPECT_NEAR(c->reduced_value, 2.0, 1e-12);
}

TEST(PriceBin, RejectsNegativeDuals) {
  auto si = unscaled(fixtures::one_bin_two_items(1));
  EXPECT_THROW(price_bin(si, 0, duals(si.base, -1.0)), Error);
  EXPECT_THROW(price_bin(si, 0, duals(si.base, 0.0, -1.0)), Error);
}

TEST(Separation, HugeBinDualsLeaveNothing) {
  auto si = unscaled(fixtures::reference_2x2());
  EXPECT_FALSE(separation(si, duals(si.base, 1e9)));
}

TEST(Separation, ZeroDualsFindBestSingleBinPacking) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Instance inst = gen::random_instance(tiny_params(seed), seed);
    auto si = unscaled(inst);
    auto c = separation(si, DualPrices::zero(inst));
    // oracle: first bin (lowest index) with a positive best packing
    std::optional<double> expect;
    for (std::size_t l = 0; l < inst.num_bins() && !expect; ++l) {
      double best = 0.0;
      for (const auto& cfg : exact::enumerate_configs(inst, l))
        best = std::max(best, configuration_reward(inst, l, cfg.items));
      if (best > kPricingThreshold) expect = best;
    }
    ASSERT_EQ(c.has_value(), expect.has_value());
    if (c) {
      EXPECT_NEAR(c->reduced_value, *expect, 1e-9);
    }
  }
}

TEST(Separation, NothingViolatedAtMasterOptimum) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Instance inst = gen::random_instance(tiny_params(seed), seed);
    auto si = scale_budget(inst);
    auto sol = solve_relaxation(si, RelaxationMode::exact());
    ASSERT_TRUE(sol.converged);
    EXPECT_FALSE(separation(si, sol.duals));
  }
}

TEST(SolveRelaxation, ZeroBudget) {
  auto si = scale_budget(fixtures::reference_2x2(0.0));
  auto sol = solve_relaxation(si, RelaxationMode::exact());
  EXPECT_EQ(sol.lp_value, 0.0);
  for (double x : sol.values) EXPECT_EQ(x, 0.0);
}

TEST(SolveRelaxation, ReferenceInstance) {
  auto si = scale_budget(fixtures::reference_2x2());
  auto sol = solve_relaxation(si, RelaxationMode::exact());
  EXPECT_NEAR(sol.lp_value, 4.0, 1e-9);
  EXPECT_NEAR(sol.lp_value, exact::full_lp(si.base).lp_value, 1e-9);
  EXPECT_TRUE(satisfies_relaxation(si.base, sol));
}

TEST(SolveRelaxation, ScaledReferenceInstance) {
  auto si = scale_budget(fixtures::reference_2x2());
  auto sol = solve_relaxation(si, RelaxationMode::scaled(0.5));
  EXPECT_GE(sol.lp_value, 0.5 * 4.0 - 1e-9);
  EXPECT_NEAR(sol.lp_value, exact::full_lp(si.base, 0.5).lp_value, 1e-9);
  EXPECT_NEAR(sol.budget_side, 1.0, 1e-12);
  EXPECT_LE(sol.budget_used, sol.budget_side + 1e-9);
}

TEST(SolveRelaxation, InvalidEpsilon) {
  EXPECT_THROW(RelaxationMode::scaled(0.0), Error);
  EXPECT_THROW(RelaxationMode::scaled(1.0), Error);
}

TEST(SolveRelaxation, IterationLimitFlagsNonConvergence) {
  gen::RandomInstanceParams prm;
  prm.bins = 6;
  prm.items = 12;
  prm.target_k = 3.0;
  Instance inst = gen::random_instance(prm, 17);
  auto si = scale_budget(inst);
  ColgenLimits lim;
  lim.max_iterations = 1;
  auto cut = solve_relaxation(si, RelaxationMode::exact(), lim);
  auto full = solve_relaxation(si, RelaxationMode::exact());
  ASSERT_GT(full.iterations, 1u);
  EXPECT_FALSE(cut.converged);
  EXPECT_EQ(cut.iterations, 1u);
  EXPECT_TRUE(satisfies_relaxation(inst, cut));
  EXPECT_LE(cut.lp_value, full.lp_value + 1e-9);
  lim.max_iterations = 1000;
  lim.timeout_seconds = 0.0;
  EXPECT_FALSE(solve_relaxation(si, RelaxationMode::exact(), lim).converged);
}

TEST(SolveRelaxation, OracleEquivalenceAndInvariants) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Instance inst = gen::random_instance(tiny_params(seed), 1000 + seed);
    auto si = scale_budget(inst);
    for (RelaxationMode mode : {RelaxationMode::exact(), RelaxationMode::scaled(0.25)}) {
      auto sol = solve_relaxation(si, mode);
      ASSERT_TRUE(sol.converged);
      auto full = exact::full_lp(inst, mode.budget_factor());
      EXPECT_NEAR(sol.lp_value, full.lp_value, 1e-6) << "seed " << seed;
      EXPECT_TRUE(satisfies_relaxation(inst, sol));
      for (std::size_t i = 1; i < sol.history.size(); ++i)
        EXPECT_GE(sol.history[i], sol.history[i - 1] - 1e-9);
    }
  }
}

TEST(RoundUp, ExponentAndGrid) {
  // smallest t with L^t >= 2 / eps, plus one
  EXPECT_EQ(rounding_exponent(2, 0.5), 3);
  EXPECT_EQ(grid_resolution(2, 2), 16);
  EXPECT_EQ(grid_resolution(2, 3), 64);
  EXPECT_EQ(rounding_exponent(2, 0.25), 4);
  EXPECT_EQ(rounding_exponent(10, 0.05), 3);
  EXPECT_THROW(rounding_exponent(1, 0.5), Error);
  EXPECT_THROW(grid_resolution(1000, 4), Error);
}

TEST(RoundUp, SpecificValues) {
  EXPECT_EQ(round_up_units(1.0, 16), 16);
  EXPECT_EQ(round_up_units(0.30, 16), 5);
  EXPECT_EQ(round_up_units(0.0, 16), 0);
  EXPECT_EQ(round_up_units(0.25, 16), 4);
}

TEST(RoundUp, GridOnAHandBuiltSolution) {
  Instance inst = fixtures::reference_2x2(4.0);
  ScaledInstance si{inst, 1.0, 4.0};
  FractionalSolution sol;
  sol.mode = RelaxationMode::scaled(0.5);
  sol.columns = {make_configuration(inst, 0, {0}), make_configuration(inst, 1, {1})};
  sol.columns[0].cost = 0.30;
  sol.values = {1.0, 1.0};
  auto g = round_up_costs(si, sol, 0.5);
  EXPECT_EQ(g.m, 3);
  EXPECT_EQ(g.resolution, 64);
  EXPECT_DOUBLE_EQ(g.rounded[0], 0.3125);
  EXPECT_DOUBLE_EQ(g.rounded[1], 1.0);
}

TEST(RoundUp, BudgetCheckCatchesUnscaledSolutions) {
  Instance inst = fixtures::reference_2x2(2.0);
  ScaledInstance si{inst, 1.0, 1.0};
  FractionalSolution sol;
  sol.columns = {make_configuration(inst, 0, {0}), make_configuration(inst, 1, {1})};
  sol.values = {1.0, 1.0};
  EXPECT_THROW(round_up_costs(si, sol, 0.5), Error);
}

TEST(RoundUp, RoundedCostsStayWithinK) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Instance inst = gen::random_instance(tiny_params(seed), 5000 + seed);
    auto si = scale_budget(inst);
    for (double eps : {0.1, 0.3, 0.7}) {
      auto sol = solve_relaxation(si, RelaxationMode::scaled(eps));
      EXPECT_LE(sol.budget_used, si.k * (1.0 - eps) + 1e-9);
      auto g = round_up_costs(si, sol, eps);
      double rounded = 0.0;
      for (std::size_t j = 0; j < sol.size(); ++j) {
        double c = sol.scaled_cost(j);
        EXPECT_GE(g.rounded[j], c - 1e-12);
        EXPECT_LT(g.rounded[j] - c, g.step());
        EXPECT_LE(g.rounded[j], 1.0);
        rounded += g.rounded[j] * sol.values[j];
      }
      EXPECT_LE(rounded, si.k + 1e-9);
    }
  }
}
