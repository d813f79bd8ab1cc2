#include <gtest/gtest.h>

#include <random>

#include "bap/exact.hpp"
#include "bap/gen.hpp"
#include "bap/rounding.hpp"

using namespace bap;

namespace {

gen::RlppInstance path_graph(int nodes, std::vector<int> stops, gen::Trip trip) {
  gen::RlppInstance r;
  r.graph.num_nodes = nodes;
  for (int u = 0; u + 1 < nodes; ++u) r.graph.edges.push_back({u, u + 1, 1.0});
  r.lines.push_back({std::move(stops), 1, 1.0});
  r.trips.push_back(trip);
  r.welfare = gen::Welfare::CarMilesSaved;
  r.budget = 1.0;
  return r;
}

gen::MaxKCoverInstance random_cover(std::mt19937_64& rng) {
  gen::MaxKCoverInstance mkc;
  mkc.n = 1 + static_cast<int>(rng() % 6);
  const std::size_t sets = 1 + rng() % 4;
  for (std::size_t s = 0; s < sets; ++s) {
    std::vector<int> members;
    while (members.empty())
      for (int e = 0; e < mkc.n; ++e)
        if (rng() % 2) members.push_back(e);
    mkc.sets.push_back(members);
  }
  mkc.k = static_cast<int>(rng() % (sets + 1));
  return mkc;
}

}  // namespace

TEST(RandomInstance, SameSeedSameInstance) {
  gen::RandomInstanceParams prm;
  prm.max_assign_cost = 1.0;
  EXPECT_EQ(gen::random_instance(prm, 5), gen::random_instance(prm, 5));
  EXPECT_NE(gen::random_instance(prm, 5), gen::random_instance(prm, 6));
}

TEST(RandomInstance, GeneratedInstancesValidate) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    gen::RandomInstanceParams prm;
    prm.bins = 2 + seed % 9;
    prm.items = 1 + seed % 30;
    prm.max_assign_cost = static_cast<double>(seed % 3);
    prm.max_rho = 1 + static_cast<int>(seed % 4);
    EXPECT_TRUE(validate(gen::random_instance(prm, seed)).empty()) << "seed " << seed;
  }
}

TEST(RandomInstance, ZeroAssignCostsAcceptedByGreedy) {
  gen::RandomInstanceParams prm;
  prm.target_k = 3.0;
  Instance inst = gen::random_instance(prm, 3);
  EXPECT_FALSE(inst.has_assignment_costs());
  auto si = scale_budget(inst);
  EXPECT_NO_THROW(Rounder(si, solve_relaxation(si, RelaxationMode::exact()), Algorithm::Alg2));
}

TEST(RandomInstance, TargetKIsHit) {
  gen::RandomInstanceParams prm;
  prm.max_assign_cost = 1.0;
  prm.target_k = 2.5;
  EXPECT_NEAR(scale_budget(gen::random_instance(prm, 11)).k, 2.5, 1e-12);
}

TEST(MaxKCover, PickTheOuterSets) {
  gen::MaxKCoverInstance mkc{4, {{0, 1}, {1, 2}, {2, 3}}, 2};
  EXPECT_EQ(gen::cover_optimum(mkc), 4);
  EXPECT_EQ(exact::brute_force_value(gen::from_max_k_cover(mkc)), 4.0);
}

TEST(MaxKCover, KEqualsLCoversTheUnion) {
  gen::MaxKCoverInstance mkc{5, {{0, 1}, {1}, {3}}, 3};
  EXPECT_EQ(exact::brute_force_value(gen::from_max_k_cover(mkc)), 3.0);
}

TEST(MaxKCover, KZero) {
  gen::MaxKCoverInstance mkc{4, {{0, 1}, {1, 2}, {2, 3}}, 0};
  EXPECT_EQ(exact::brute_force_value(gen::from_max_k_cover(mkc)), 0.0);
}

TEST(MaxKCover, Validation) {
  EXPECT_THROW(gen::from_max_k_cover({3, {{}}, 1}), Error);
  EXPECT_THROW(gen::from_max_k_cover({3, {{3}}, 1}), Error);
}

TEST(RlppFromCover, SingleSet) {
  auto r = gen::rlpp_from_max_k_cover({1, {{0}}, 1});
  ASSERT_EQ(r.lines.size(), 1u);
  EXPECT_EQ(r.lines[0].stops, (std::vector<int>{0, 1}));
  Instance inst = gen::rlpp_build(r);
  ASSERT_TRUE(inst.compatible(0, 0));
  EXPECT_EQ(inst.link(0, 0)->span, (Interval{0, 1}));
}

TEST(RlppFromCover, NestedSets) {
  gen::MaxKCoverInstance mkc{2, {{0, 1}, {1}}, 1};
  EXPECT_EQ(exact::brute_force_value(gen::rlpp_build(gen::rlpp_from_max_k_cover(mkc))), 2.0);
}

TEST(RlppFromCover, IntervalsAreTheTripEdges) {
  auto r = gen::rlpp_from_max_k_cover({4, {{0, 2, 3}}, 1});
  Instance inst = gen::rlpp_build(r);
  EXPECT_EQ(inst.bins[0].dims(), 5);
  EXPECT_EQ(inst.link(0, 0)->span, (Interval{0, 1}));
  EXPECT_FALSE(inst.compatible(0, 1));
  EXPECT_EQ(inst.link(0, 2)->span, (Interval{2, 3}));
  EXPECT_EQ(inst.link(0, 3)->span, (Interval{4, 5}));
}

TEST(RlppFromCover, BothReductionsMatchTheCoverOptimum) {
  std::mt19937_64 rng(31);
  for (int run = 0; run < 150; ++run) {
    auto mkc = random_cover(rng);
    const double opt = gen::cover_optimum(mkc);
    EXPECT_EQ(exact::brute_force_value(gen::from_max_k_cover(mkc)), opt) << "run " << run;
    EXPECT_EQ(exact::brute_force_value(gen::rlpp_build(gen::rlpp_from_max_k_cover(mkc))), opt)
        << "run " << run;
  }
}

TEST(RlppBuild, TripOnTheLineSavesTheWholeDistance) {
  Instance inst = gen::rlpp_build(path_graph(4, {0, 1, 2, 3}, {1, 3}));
  ASSERT_TRUE(inst.compatible(0, 0));
  EXPECT_EQ(inst.link(0, 0)->span, (Interval{1, 3}));
  EXPECT_DOUBLE_EQ(inst.link(0, 0)->reward, 2.0);
  EXPECT_EQ(inst.bins[0].capacity, (std::vector<int>{1, 1, 1}));
}

TEST(RlppBuild, NoSavingsNoLink) {
  Instance inst = gen::rlpp_build(path_graph(4, {2, 3}, {0, 1}));
  EXPECT_FALSE(inst.compatible(0, 0));
}

TEST(RlppBuild, ReversedTravelUsesTheSameEdges) {
  Instance inst = gen::rlpp_build(path_graph(4, {0, 1, 2, 3}, {3, 1}));
  EXPECT_EQ(inst.link(0, 0)->span, (Interval{1, 3}));
}

TEST(RlppBuild, CapacityScalesWithFrequency) {
  auto r = path_graph(3, {0, 1, 2}, {0, 2});
  r.capacity = 3;
  r.lines[0].frequency = 2;
  EXPECT_EQ(gen::rlpp_build(r).bins[0].capacity, (std::vector<int>{6, 6}));
}

TEST(RlppBuild, DisconnectedGraphThrows) {
  auto r = path_graph(4, {0, 1}, {0, 3});
  r.graph.edges.pop_back();
  EXPECT_THROW(gen::rlpp_build(r), Error);
}

TEST(RlppBuild, BinaryWalkRadius) {
  auto r = path_graph(5, {1, 2, 3}, {0, 4});
  r.welfare = gen::Welfare::Binary;
  EXPECT_FALSE(gen::rlpp_build(r).compatible(0, 0));
  r.walk_radius = 1.0;
  Instance inst = gen::rlpp_build(r);
  ASSERT_TRUE(inst.compatible(0, 0));
  EXPECT_EQ(inst.link(0, 0)->reward, 1.0);
  EXPECT_EQ(inst.link(0, 0)->span, (Interval{0, 2}));
}

TEST(RlppGrid, DeterministicAndWellFormed) {
  gen::GridRlppParams prm;
  auto a = gen::rlpp_grid(prm, 9);
  EXPECT_EQ(a, gen::rlpp_grid(prm, 9));
  EXPECT_EQ(a.lines.size(), 20u);
  EXPECT_EQ(a.trips.size(), 200u);
  Instance inst = gen::rlpp_build(a);
  EXPECT_TRUE(validate(inst).empty());
  EXPECT_NEAR(scale_budget(inst).k, prm.target_k, 1e-12);
  for (const auto& line : a.lines) {
    EXPECT_GE(line.stops.size(), 5u);
    EXPECT_LE(line.stops.size(), 13u);
  }
}
