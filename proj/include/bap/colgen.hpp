#pragma once

// Configuration LP relaxation solved by column generation.
//
// Master (scaled costs, budget side k or k(1 - eps)):
//   max  sum_j value_j X_j
//   s.t. sum_{j in bin l} X_j <= 1          (one row per bin,   dual q_l)
//        sum_{j : p in S_j} X_j <= rho_p   (one row per item,  dual lambda_p)
//        sum_j cost_j X_j <= budget side   (budget row,         dual alpha)
//        X >= 0
// Pricing for bin l is an interval-packing LP over reduced rewards
// v_lp - lambda_p - alpha c_lp; a column enters when its value beats
// q_l + alpha c_l.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "bap/error.hpp"
#include "bap/lp.hpp"
#include "bap/model.hpp"
#include "bap/packing.hpp"
#include "bap/scaling.hpp"

namespace bap {

enum class RelaxationKind { Exact, Scaled };

struct RelaxationMode {
  RelaxationKind kind = RelaxationKind::Exact;
  double epsilon = 0.0;

  static RelaxationMode exact() { return {RelaxationKind::Exact, 0.0}; }
  static RelaxationMode scaled(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw Error("epsilon must lie in (0, 1)");
    return {RelaxationKind::Scaled, eps};
  }
  double budget_factor() const { return kind == RelaxationKind::Exact ? 1.0 : 1.0 - epsilon; }
};

struct DualPrices {
  std::vector<double> bin;   // q_l
  std::vector<double> item;  // lambda_p
  double budget = 0.0;       // alpha

  static DualPrices zero(const Instance& inst) {
    return {std::vector<double>(inst.num_bins(), 0.0), std::vector<double>(inst.num_items(), 0.0),
            0.0};
  }
};

struct FractionalSolution {
  std::vector<Configuration> columns;  // costs in original units
  std::vector<double> values;
  double lp_value = 0.0;
  double budget_used = 0.0;  // scaled units
  double budget_side = 0.0;  // k or k(1 - eps)
  double max_config_cost = 1.0;
  RelaxationMode mode;
  bool converged = true;
  std::size_t iterations = 0;
  std::vector<double> history;  // master value after each solve
  DualPrices duals;

  double scaled_cost(std::size_t j) const { return columns[j].cost / max_config_cost; }
  std::size_t size() const { return columns.size(); }
};

struct ColgenLimits {
  std::size_t max_iterations = 100000;
  double timeout_seconds = std::numeric_limits<double>::infinity();
};

struct PricedColumn {
  Configuration config;
  double reduced_value = 0.0;
};

inline constexpr double kPricingThreshold = 1e-7;

/// Best column for bin `l` under the given duals, if its reduced value is
/// positive beyond the pricing threshold.
inline std::optional<PricedColumn> price_bin(const ScaledInstance& si, std::size_t l,
                                             const DualPrices& duals) {
  const Instance& inst = si.base;
  if (duals.budget < 0.0 || duals.bin.size() != inst.num_bins() ||
      duals.item.size() != inst.num_items())
    throw Error("dual prices must be nonnegative and sized to the instance");
  std::vector<double> w(inst.num_items(), 0.0);
  for (std::size_t p = 0; p < inst.num_items(); ++p) {
    if (duals.item[p] < 0.0) throw Error("dual prices must be nonnegative");
    if (inst.compatible(l, p))
      w[p] = inst.reward(l, p) - duals.item[p] - duals.budget * si.assign_cost(l, p);
  }
  if (duals.bin[l] < 0.0) throw Error("dual prices must be nonnegative");
  PackingResult best = pack_bin(inst, l, w);
  double threshold = duals.bin[l] + duals.budget * si.open_cost(l);
  double reduced = best.value - threshold;
  if (best.items.empty() || reduced <= kPricingThreshold) return std::nullopt;
  return PricedColumn{make_configuration(inst, l, std::move(best.items)), reduced};
}

/// First violated dual constraint by bin index, if any.
inline std::optional<PricedColumn> separation(const ScaledInstance& si, const DualPrices& duals) {
  for (std::size_t l = 0; l < si.base.num_bins(); ++l)
    if (auto c = price_bin(si, l, duals)) return c;
  return std::nullopt;
}

namespace detail {

inline lp::LinearProgram build_master(const ScaledInstance& si,
                                      const std::vector<Configuration>& pool, double budget_side) {
  const Instance& inst = si.base;
  const std::size_t L = inst.num_bins(), P = inst.num_items();
  lp::LinearProgram prog(L + P + 1, pool.size());
  for (std::size_t l = 0; l < L; ++l) prog.rhs[l] = 1.0;
  for (std::size_t p = 0; p < P; ++p) prog.rhs[L + p] = inst.rho[p];
  prog.rhs[L + P] = budget_side;
  for (std::size_t j = 0; j < pool.size(); ++j) {
    const Configuration& c = pool[j];
    prog.objective[j] = configuration_reward(inst, c.bin, c.items);
    prog.at(c.bin, j) = 1.0;
    for (std::size_t p : c.items) prog.at(L + p, j) = 1.0;
    prog.at(L + P, j) = si.scale(c.cost);
  }
  return prog;
}

inline std::vector<Configuration> seed_columns(const Instance& inst) {
  std::vector<Configuration> pool;
  for (std::size_t l = 0; l < inst.num_bins(); ++l) {
    std::optional<std::size_t> best;
    for (std::size_t p = 0; p < inst.num_items(); ++p) {
      std::size_t single[] = {p};
      if (!inst.compatible(l, p) || !fits(inst, l, single)) continue;
      if (!best || inst.reward(l, p) > inst.reward(l, *best)) best = p;
    }
    if (best) pool.push_back(make_configuration(inst, l, {*best}));
  }
  return pool;
}

}  // namespace detail

/// Column generation on the configuration LP. Stops when no column prices
/// out (converged) or when an iteration/time limit is hit, in which case the
/// last restricted-master optimum is returned with converged = false.
inline FractionalSolution solve_relaxation(const ScaledInstance& si, RelaxationMode mode,
                                           const ColgenLimits& limits = {}) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const Instance& inst = si.base;
  const std::size_t L = inst.num_bins(), P = inst.num_items();

  FractionalSolution sol;
  sol.mode = mode;
  sol.max_config_cost = si.max_config_cost;
  sol.budget_side = si.k * mode.budget_factor();
  sol.duals = DualPrices::zero(inst);
  sol.columns = detail::seed_columns(inst);

  std::set<std::pair<std::size_t, std::vector<std::size_t>>> seen;
  for (const auto& c : sol.columns) seen.insert({c.bin, c.items});

  std::vector<lp::BasisKey> basis;
  lp::Result master;
  for (;;) {
    if (!sol.columns.empty()) {
      lp::LinearProgram prog = detail::build_master(si, sol.columns, sol.budget_side);
      lp::Options opt;
      opt.warm_basis = basis;
      master = lp::solve(prog, opt);
      if (master.status != lp::Status::Optimal) throw Error("restricted master LP not optimal");
      basis = master.basis;
      ++sol.iterations;
      sol.values = master.primal;
      sol.lp_value = master.objective;
      sol.history.push_back(master.objective);
      for (std::size_t l = 0; l < L; ++l) sol.duals.bin[l] = std::max(0.0, master.duals[l]);
      for (std::size_t p = 0; p < P; ++p) sol.duals.item[p] = std::max(0.0, master.duals[L + p]);
      sol.duals.budget = std::max(0.0, master.duals[L + P]);
    }

    std::vector<PricedColumn> fresh;
    for (std::size_t l = 0; l < L; ++l)
      if (auto c = price_bin(si, l, sol.duals))
        if (seen.insert({c->config.bin, c->config.items}).second) fresh.push_back(std::move(*c));
    if (fresh.empty()) {
      sol.converged = true;
      break;
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (sol.iterations >= limits.max_iterations || elapsed >= limits.timeout_seconds) {
      sol.converged = false;
      break;
    }
    for (auto& c : fresh) sol.columns.push_back(std::move(c.config));
  }

  sol.values.resize(sol.columns.size(), 0.0);
  sol.budget_used = 0.0;
  for (std::size_t j = 0; j < sol.columns.size(); ++j) {
    sol.values[j] = std::clamp(sol.values[j], 0.0, 1.0);
    sol.budget_used += sol.scaled_cost(j) * sol.values[j];
  }
  return sol;
}

/// Checks the packing, rho and budget rows of a fractional solution.
inline bool satisfies_relaxation(const Instance& inst, const FractionalSolution& sol,
                                 double tol = 1e-9) {
  std::vector<double> per_bin(inst.num_bins(), 0.0), per_item(inst.num_items(), 0.0);
  double budget = 0.0;
  for (std::size_t j = 0; j < sol.columns.size(); ++j) {
    double x = sol.values[j];
    if (x < -tol || x > 1.0 + tol) return false;
    per_bin[sol.columns[j].bin] += x;
    for (std::size_t p : sol.columns[j].items) per_item[p] += x;
    budget += sol.scaled_cost(j) * x;
  }
  for (double s : per_bin)
    if (s > 1.0 + tol) return false;
  for (std::size_t p = 0; p < inst.num_items(); ++p)
    if (per_item[p] > inst.rho[p] + tol) return false;
  return budget <= sol.budget_side + tol;
}

// --- cost round-up onto the 1 / L^{2m} grid -------------------------------

struct RoundedCostGrid {
  int m = 1;
  std::int64_t resolution = 1;       // L^{2m}; rounded costs are multiples of 1/resolution
  std::vector<std::int64_t> units;   // ceil(c * resolution) per column
  std::vector<double> rounded;       // units / resolution

  double step() const { return 1.0 / static_cast<double>(resolution); }
};

/// m = 1 + ceil(log_L(2 / eps)), computed with integer powers.
inline int rounding_exponent(std::size_t num_bins, double eps) {
  if (num_bins < 2) throw Error("cost round-up needs at least two bins");
  if (!(eps > 0.0 && eps < 1.0)) throw Error("epsilon must lie in (0, 1)");
  const double target = 2.0 / eps;
  int t = 0;
  double pw = 1.0;
  while (pw < target * (1.0 - 1e-12)) {
    pw *= static_cast<double>(num_bins);
    ++t;
  }
  return 1 + t;
}

inline std::int64_t grid_resolution(std::size_t num_bins, int m) {
  std::int64_t g = 1;
  const auto base = static_cast<std::int64_t>(num_bins);
  for (int i = 0; i < 2 * m; ++i) {
    if (g > (std::int64_t{1} << 62) / base) throw Error("cost grid resolution overflows");
    g *= base;
  }
  return g;
}

/// Smallest grid multiple >= cost (scaled). Products within 1e-9 of an
/// integer count as on the grid.
inline std::int64_t round_up_units(double scaled_cost, std::int64_t resolution) {
  double x = scaled_cost * static_cast<double>(resolution);
  double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

inline RoundedCostGrid round_up_costs(const ScaledInstance& si, const FractionalSolution& sol,
                                      double eps) {
  RoundedCostGrid g;
  g.m = rounding_exponent(si.base.num_bins(), eps);
  g.resolution = grid_resolution(si.base.num_bins(), g.m);
  double rounded_budget = 0.0;
  for (std::size_t j = 0; j < sol.columns.size(); ++j) {
    std::int64_t u = round_up_units(sol.scaled_cost(j), g.resolution);
    g.units.push_back(u);
    g.rounded.push_back(static_cast<double>(u) / static_cast<double>(g.resolution));
    rounded_budget += g.rounded.back() * sol.values[j];
  }
  if (rounded_budget > si.k + 1e-9)
    throw Error("rounded costs exceed the budget; the fractional solution does not come from "
                "the eps-scaled LP");
  return g;
}

}  // namespace bap
