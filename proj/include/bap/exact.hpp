#pragma once

// Exhaustive oracles for tiny instances. Slow and obviously correct.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "bap/colgen.hpp"
#include "bap/error.hpp"
#include "bap/lp.hpp"
#include "bap/model.hpp"

namespace bap::exact {

inline constexpr std::size_t kMaxCompatibleItems = 20;
inline constexpr std::size_t kMaxPairs = 24;  // L * P for brute_force
inline constexpr std::size_t kMaxColumns = 10000;

/// Every nonempty capacity-feasible subset of the bin's compatible items,
/// in increasing subset-bitmask order over those items.
inline std::vector<Configuration> enumerate_configs(const Instance& inst, std::size_t l) {
  std::vector<std::size_t> cand;
  for (std::size_t p = 0; p < inst.num_items(); ++p)
    if (inst.compatible(l, p)) cand.push_back(p);
  if (cand.size() > kMaxCompatibleItems)
    throw Error("enumerate_configs: more than 20 compatible items in one bin");
  std::vector<Configuration> out;
  std::vector<std::size_t> items;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << cand.size()); ++mask) {
    items.clear();
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (mask & (std::uint32_t{1} << i)) items.push_back(cand[i]);
    if (fits(inst, l, items)) out.push_back(make_configuration(inst, l, items));
  }
  return out;
}

namespace detail {

struct Search {
  const Instance& inst;
  std::vector<std::vector<Configuration>> configs;
  std::vector<double> best_reward_from;  // optimistic reward of bins l..L-1
  std::vector<int> uses;
  std::vector<int> pick, best_pick;
  double best = -1.0;

  void run(std::size_t l, double cost, double reward) {
    if (reward + best_reward_from[l] <= best) return;
    if (l == inst.num_bins()) {
      best = reward;
      best_pick = pick;
      return;
    }
    for (std::size_t j = 0; j < configs[l].size(); ++j) {
      const Configuration& c = configs[l][j];
      if (!within_budget(cost + c.cost, inst.budget)) continue;
      bool ok = true;
      for (std::size_t p : c.items) ok = ok && uses[p] < inst.rho[p];
      if (!ok) continue;
      for (std::size_t p : c.items) ++uses[p];
      pick[l] = static_cast<int>(j);
      run(l + 1, cost + c.cost, reward + configuration_reward(inst, l, c.items));
      for (std::size_t p : c.items) --uses[p];
    }
    pick[l] = -1;
    run(l + 1, cost, reward);
  }
};

}  // namespace detail

/// Optimal integral solution by depth-first search over one configuration
/// (or none) per bin, pruned by budget, rho and a reward bound.
inline AssignmentSolution brute_force(const Instance& inst) {
  if (inst.num_bins() * inst.num_items() > kMaxPairs)
    throw Error("brute_force: instance too large (L * P must be <= 24)");
  detail::Search s{inst, {}, {}, std::vector<int>(inst.num_items(), 0),
                   std::vector<int>(inst.num_bins(), -1), {}, -1.0};
  for (std::size_t l = 0; l < inst.num_bins(); ++l) s.configs.push_back(enumerate_configs(inst, l));
  s.best_reward_from.assign(inst.num_bins() + 1, 0.0);
  for (std::size_t b = inst.num_bins(); b-- > 0;) {
    double m = 0.0;
    for (const auto& c : s.configs[b]) m = std::max(m, configuration_reward(inst, b, c.items));
    s.best_reward_from[b] = s.best_reward_from[b + 1] + m;
  }
  s.run(0, 0.0, 0.0);

  AssignmentSolution sol = AssignmentSolution::empty_for(inst);
  for (std::size_t l = 0; l < inst.num_bins(); ++l) {
    if (s.best_pick[l] < 0) continue;
    for (std::size_t p : s.configs[l][static_cast<std::size_t>(s.best_pick[l])].items)
      sol.assign(l, p);
  }
  sol.open_used_bins();
  if (!check_feasible(inst, sol).feasible()) throw Error("brute_force produced an infeasible solution");
  return sol;
}

inline double brute_force_value(const Instance& inst) { return objective(inst, brute_force(inst)); }

/// Configuration LP over every enumerated column, in original cost units
/// with budget B * budget_factor.
inline FractionalSolution full_lp(const Instance& inst, double budget_factor = 1.0) {
  FractionalSolution sol;
  sol.mode = budget_factor == 1.0 ? RelaxationMode::exact() : RelaxationMode::scaled(1.0 - budget_factor);
  for (std::size_t l = 0; l < inst.num_bins(); ++l) {
    auto cs = enumerate_configs(inst, l);
    sol.columns.insert(sol.columns.end(), cs.begin(), cs.end());
    if (sol.columns.size() > kMaxColumns) throw Error("full_lp: more than 10^4 columns");
  }
  double max_cost = 0.0;
  for (const auto& c : sol.columns) max_cost = std::max(max_cost, c.cost);
  sol.max_config_cost = max_cost > 0.0 ? max_cost : 1.0;
  const double budget = inst.budget * budget_factor;
  sol.budget_side = budget / sol.max_config_cost;
  sol.duals = DualPrices::zero(inst);
  sol.values.assign(sol.columns.size(), 0.0);
  if (sol.columns.empty()) return sol;

  const std::size_t L = inst.num_bins(), P = inst.num_items();
  lp::LinearProgram prog(L + P + 1, sol.columns.size());
  for (std::size_t l = 0; l < L; ++l) prog.rhs[l] = 1.0;
  for (std::size_t p = 0; p < P; ++p) prog.rhs[L + p] = inst.rho[p];
  prog.rhs[L + P] = budget;
  for (std::size_t j = 0; j < sol.columns.size(); ++j) {
    const Configuration& c = sol.columns[j];
    prog.objective[j] = configuration_reward(inst, c.bin, c.items);
    prog.at(c.bin, j) = 1.0;
    for (std::size_t p : c.items) prog.at(L + p, j) = 1.0;
    prog.at(L + P, j) = c.cost;
  }
  lp::Result r = lp::solve(prog);
  if (r.status != lp::Status::Optimal) throw Error("full_lp: LP not optimal");
  sol.lp_value = r.objective;
  sol.iterations = 1;
  sol.history = {r.objective};
  for (std::size_t j = 0; j < sol.columns.size(); ++j) {
    sol.values[j] = std::clamp(r.primal[j], 0.0, 1.0);
    sol.budget_used += sol.scaled_cost(j) * sol.values[j];
  }
  return sol;
}

}  // namespace bap::exact
