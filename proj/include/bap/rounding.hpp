#pragma once

// Randomized rounding of a fractional configuration solution.
//
//   alg1      sample configurations, keep them if affordable, otherwise keep
//             the bins a type-0 magician opened
//   alg2      zero assignment costs; affordable sample or a budget-prefix
//             greedy over bins sorted by reward/cost ratio (exact LP)
//   alg6      alg2 driven by the eps-scaled LP
//   baseline  affordable sample or nothing
//   alg3      alg1's magician path with per-item magicians instead of pruning
//   alg4      uniform rewards; per-item cut by later occurrences
//
// A trial is a pure function of (seed, trial index). Draws are keyed by the
// original bin and item indices, so algorithms that share a fractional
// solution also share every configuration draw and magician coin.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bap/colgen.hpp"
#include "bap/error.hpp"
#include "bap/magician.hpp"
#include "bap/model.hpp"
#include "bap/random.hpp"
#include "bap/scaling.hpp"

namespace bap {

enum class Algorithm { Alg1, Alg2, Baseline, Alg6, Alg3, Alg4 };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Alg1: return "alg1";
    case Algorithm::Alg2: return "alg2";
    case Algorithm::Baseline: return "baseline";
    case Algorithm::Alg6: return "alg6";
    case Algorithm::Alg3: return "alg3";
    case Algorithm::Alg4: return "alg4";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (Algorithm a : {Algorithm::Alg1, Algorithm::Alg2, Algorithm::Baseline, Algorithm::Alg6,
                      Algorithm::Alg3, Algorithm::Alg4})
    if (s == to_string(a)) return a;
  throw Error("unknown algorithm '" + std::string(s) + "'");
}

/// The LP each algorithm rounds from.
inline bool uses_scaled_lp(Algorithm a) { return a != Algorithm::Alg2; }
inline bool uses_magician(Algorithm a) {
  return a == Algorithm::Alg1 || a == Algorithm::Alg3 || a == Algorithm::Alg4;
}

enum class Path { Direct, MagicianFallback, GreedyFallback, Discarded };

inline const char* to_string(Path p) {
  switch (p) {
    case Path::Direct: return "direct";
    case Path::MagicianFallback: return "magician-fallback";
    case Path::GreedyFallback: return "greedy-fallback";
    case Path::Discarded: return "discarded";
  }
  return "?";
}

inline Path parse_path(std::string_view s) {
  for (Path p : {Path::Direct, Path::MagicianFallback, Path::GreedyFallback, Path::Discarded})
    if (s == to_string(p)) return p;
  throw Error("unknown path '" + std::string(s) + "'");
}

/// Per-bin draw: the chosen column of the fractional solution, or none.
struct SampledConfigs {
  std::vector<std::optional<std::size_t>> chosen;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

struct RoundingOutcome {
  AssignmentSolution solution;
  Path path = Path::Direct;
  std::vector<std::uint8_t> magician_open;  // Z_l; empty when no type-0 magician ran
  double fallback_objective = std::numeric_limits<double>::quiet_NaN();  // alg1 only

  bool discarded() const { return path == Path::Discarded; }
};

/// Columns of each bin with their sampling probabilities. A bin whose values
/// sum past 1 through round-off is renormalised.
struct BinColumns {
  std::vector<std::vector<std::size_t>> cols;
  std::vector<std::vector<double>> probs;

  BinColumns(const Instance& inst, const FractionalSolution& sol)
      : cols(inst.num_bins()), probs(inst.num_bins()) {
    for (std::size_t j = 0; j < sol.columns.size(); ++j) {
      double x = std::clamp(sol.values[j], 0.0, 1.0);
      if (x <= 0.0) continue;
      cols[sol.columns[j].bin].push_back(j);
      probs[sol.columns[j].bin].push_back(x);
    }
    for (auto& pr : probs) {
      double s = std::accumulate(pr.begin(), pr.end(), 0.0);
      if (s > 1.0)
        for (double& x : pr) x /= s;
    }
  }

  double total(std::size_t l) const {
    return std::accumulate(probs[l].begin(), probs[l].end(), 0.0);
  }
};

inline SampledConfigs sample_configurations(const BinColumns& bc, std::uint64_t seed,
                                            std::uint64_t trial) {
  SampledConfigs s;
  s.seed = seed;
  s.trial = trial;
  s.chosen.resize(bc.cols.size());
  for (std::size_t l = 0; l < bc.cols.size(); ++l) {
    double u = uniform01(seed, Stream::Sampling, trial, l);
    double cum = 0.0;
    for (std::size_t i = 0; i < bc.cols[l].size(); ++i) {
      cum += bc.probs[l][i];
      if (u < cum) {
        s.chosen[l] = bc.cols[l][i];
        break;
      }
    }
  }
  return s;
}

inline SampledConfigs sample_configurations(const Instance& inst, const FractionalSolution& sol,
                                            std::uint64_t seed, std::uint64_t trial) {
  return sample_configurations(BinColumns(inst, sol), seed, trial);
}

/// Keeps, for each item, the rho_p assigned bins with the highest reward
/// (ties to the lower bin index).
inline void prune_rho(const Instance& inst, AssignmentSolution& sol) {
  require_matching(inst, sol);
  std::vector<std::size_t> bins;
  for (std::size_t p = 0; p < inst.num_items(); ++p) {
    bins.clear();
    for (std::size_t l = 0; l < inst.num_bins(); ++l)
      if (sol.x(l, p)) bins.push_back(l);
    const auto limit = static_cast<std::size_t>(inst.rho[p]);
    if (bins.size() <= limit) continue;
    std::stable_sort(bins.begin(), bins.end(), [&](std::size_t a, std::size_t b) {
      return inst.reward(a, p) > inst.reward(b, p);
    });
    for (std::size_t i = limit; i < bins.size(); ++i) sol.assign(bins[i], p, false);
  }
}

/// Per-bin ratio (sum_S X_S v(S)) / (c_l sum_S X_S) with 0/0 := 0.
inline std::vector<std::size_t> ratio_order(const Instance& inst, const FractionalSolution& sol) {
  const std::size_t L = inst.num_bins();
  std::vector<double> num(L, 0.0), den(L, 0.0);
  for (std::size_t j = 0; j < sol.columns.size(); ++j) {
    const Configuration& c = sol.columns[j];
    num[c.bin] += sol.values[j] * configuration_reward(inst, c.bin, c.items);
    den[c.bin] += sol.values[j];
  }
  std::vector<double> ratio(L, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    double d = inst.bins[l].open_cost * den[l];
    if (d > 0.0)
      ratio[l] = num[l] / d;
    else if (num[l] > 0.0)
      ratio[l] = std::numeric_limits<double>::infinity();
  }
  std::vector<std::size_t> order(L);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ratio[a] > ratio[b]; });
  return order;
}

/// Precomputes everything that does not depend on the random draws (column
/// tables, cost grid, magician thresholds), then runs independent trials.
class Rounder {
 public:
  Rounder(const ScaledInstance& si, const FractionalSolution& sol, Algorithm alg)
      : si_(&si), sol_(&sol), alg_(alg), bins_(si.base, sol) {
    const Instance& inst = si.base;
    if (sol.values.size() != sol.columns.size())
      throw Error("fractional solution has mismatched columns and values");
    if (alg == Algorithm::Alg2 || alg == Algorithm::Alg6) {
      if (inst.has_assignment_costs())
        throw Error("Algorithm 2 requires zero assignment costs");
      order_ = ratio_order(inst, sol);
    }
    if (alg == Algorithm::Alg4) {
      for (std::size_t p = 0; p < inst.num_items(); ++p) {
        std::optional<double> v;
        for (std::size_t l = 0; l < inst.num_bins(); ++l) {
          if (!inst.compatible(l, p)) continue;
          if (v && *v != inst.reward(l, p))
            throw Error("alg4 requires uniform rewards per item");
          v = inst.reward(l, p);
        }
      }
    }
    if (uses_magician(alg)) {
      if (sol.mode.kind != RelaxationKind::Scaled)
        throw Error("magician rounding needs the eps-scaled LP solution");
      if (!(si.k > 1.0)) throw Error("k <= 1: use exact or greedy algorithm");
      build_type0();
    }
    if (alg == Algorithm::Alg3) build_typep();
  }

  Algorithm algorithm() const { return alg_; }
  const RoundedCostGrid& grid() const { return grid_; }
  const std::vector<ThresholdRule>& type0_rules() const { return type0_rules_; }
  const BinColumns& bin_columns() const { return bins_; }

  RoundingOutcome run(std::uint64_t seed, std::uint64_t trial) const {
    SampledConfigs s = sample_configurations(bins_, seed, trial);
    switch (alg_) {
      case Algorithm::Alg1: return run_alg1(s);
      case Algorithm::Alg2:
      case Algorithm::Alg6: return run_greedy(s);
      case Algorithm::Baseline: return run_baseline(s);
      case Algorithm::Alg3: return run_alg3(s);
      case Algorithm::Alg4: return run_alg4(s);
    }
    throw Error("unknown algorithm");
  }

 private:
  const Instance& inst() const { return si_->base; }

  bool in_sample(const SampledConfigs& s, std::size_t l, std::size_t p) const {
    if (!s.chosen[l]) return false;
    const auto& items = sol_->columns[*s.chosen[l]].items;
    return std::binary_search(items.begin(), items.end(), p);
  }

  void assign_config(AssignmentSolution& a, const SampledConfigs& s, std::size_t l) const {
    if (!s.chosen[l]) return;
    for (std::size_t p : sol_->columns[*s.chosen[l]].items) a.assign(l, p);
  }

  /// Tentative assignment of every sampled set, pruned, used bins opened.
  AssignmentSolution direct(const SampledConfigs& s) const {
    AssignmentSolution a = AssignmentSolution::empty_for(inst());
    for (std::size_t l = 0; l < inst().num_bins(); ++l) assign_config(a, s, l);
    prune_rho(inst(), a);
    a.open_used_bins();
    return a;
  }

  bool affordable(const AssignmentSolution& a) const {
    return within_budget(total_cost(inst(), a), inst().budget);
  }

  void require_feasible(const AssignmentSolution& a, const char* what) const {
    if (!check_feasible(inst(), a).feasible())
      throw Error(std::string(what) + " produced an infeasible solution");
  }

  void build_type0() {
    const double eps = sol_->mode.epsilon;
    grid_ = round_up_costs(*si_, *sol_, eps);
    const double gamma = 1.0 - 1.0 / std::sqrt(si_->k);
    Magician mag(gamma, si_->k, grid_.resolution);
    for (std::size_t l = 0; l < inst().num_bins(); ++l) {
      std::vector<std::pair<GridUnits, double>> pts;
      for (std::size_t i = 0; i < bins_.cols[l].size(); ++i)
        pts.emplace_back(grid_.units[bins_.cols[l][i]], bins_.probs[l][i]);
      pts.emplace_back(0, 1.0 - bins_.total(l));
      mag.present_box(BoxDistribution::from_units(std::move(pts), grid_.resolution));
    }
    type0_rules_ = mag.rules();
  }

  /// One magician per item, boxes from the last bin to the first.
  void build_typep() {
    const std::size_t L = inst().num_bins();
    typep_rules_.assign(inst().num_items(), {});
    for (std::size_t p = 0; p < inst().num_items(); ++p) {
      const double rho = inst().rho[p];
      Magician mag(1.0 - 1.0 / std::sqrt(rho + 3.0), rho, 1);
      for (std::size_t b = 0; b < L; ++b) {
        const std::size_t l = L - 1 - b;
        double q = 0.0;
        for (std::size_t i = 0; i < bins_.cols[l].size(); ++i) {
          const auto& items = sol_->columns[bins_.cols[l][i]].items;
          if (std::binary_search(items.begin(), items.end(), p)) q += bins_.probs[l][i];
        }
        mag.present_box(BoxDistribution::bernoulli(std::min(q, 1.0)));
      }
      typep_rules_[p] = mag.rules();
    }
  }

  std::vector<std::uint8_t> type0_decisions(const SampledConfigs& s) const {
    MagicianWalker walk(type0_rules_, si_->k, grid_.resolution);
    std::vector<std::uint8_t> z(inst().num_bins(), 0);
    for (std::size_t l = 0; l < inst().num_bins(); ++l) {
      if (walk.decide(uniform01(s.seed, Stream::Type0Coins, s.trial, l))) {
        z[l] = 1;
        walk.record_loss(s.chosen[l] ? grid_.units[*s.chosen[l]] : 0);
      }
    }
    return z;
  }

  /// Sampled sets of the bins the type-0 magician opened.
  AssignmentSolution magician_assignment(const SampledConfigs& s,
                                         const std::vector<std::uint8_t>& z) const {
    AssignmentSolution a = AssignmentSolution::empty_for(inst());
    for (std::size_t l = 0; l < inst().num_bins(); ++l)
      if (z[l]) assign_config(a, s, l);
    prune_rho(inst(), a);
    a.open_used_bins();
    return a;
  }

  RoundingOutcome run_alg1(const SampledConfigs& s) const {
    RoundingOutcome out;
    out.magician_open = type0_decisions(s);
    AssignmentSolution fallback = magician_assignment(s, out.magician_open);
    require_feasible(fallback, "magician fallback");
    out.fallback_objective = objective(inst(), fallback);
    AssignmentSolution first = direct(s);
    if (affordable(first)) {
      out.solution = std::move(first);
      out.path = Path::Direct;
    } else {
      out.solution = std::move(fallback);
      out.path = Path::MagicianFallback;
    }
    return out;
  }

  RoundingOutcome run_greedy(const SampledConfigs& s) const {
    RoundingOutcome out;
    out.solution = direct(s);
    if (affordable(out.solution)) return out;
    AssignmentSolution a = AssignmentSolution::empty_for(inst());
    double remaining = si_->k;
    const double slack = 1e-9 * std::max(1.0, si_->k);
    for (std::size_t l : order_) {
      if (!s.chosen[l]) continue;
      remaining -= si_->open_cost(l);
      if (remaining >= -slack) assign_config(a, s, l);
    }
    prune_rho(inst(), a);
    a.open_used_bins();
    require_feasible(a, "greedy fallback");
    out.solution = std::move(a);
    out.path = Path::GreedyFallback;
    return out;
  }

  RoundingOutcome run_baseline(const SampledConfigs& s) const {
    RoundingOutcome out;
    out.solution = direct(s);
    if (!affordable(out.solution)) {
      out.solution = AssignmentSolution::empty_for(inst());
      out.path = Path::Discarded;
    }
    return out;
  }

  RoundingOutcome run_alg3(const SampledConfigs& s) const {
    const std::size_t L = inst().num_bins(), P = inst().num_items();
    RoundingOutcome out;
    out.path = Path::MagicianFallback;
    out.magician_open = type0_decisions(s);
    out.solution = AssignmentSolution::empty_for(inst());
    for (std::size_t p = 0; p < P; ++p) {
      MagicianWalker walk(typep_rules_[p], inst().rho[p], 1);
      for (std::size_t b = 0; b < L; ++b) {
        const std::size_t l = L - 1 - b;
        const bool sampled = in_sample(s, l, p);
        if (!walk.decide(uniform01(s.seed, Stream::TypePCoins, s.trial, p * L + l))) continue;
        walk.record_loss(sampled ? 1 : 0);
        if (sampled && out.magician_open[l]) out.solution.assign(l, p);
      }
    }
    out.solution.open_used_bins();
    require_feasible(out.solution, "alg3");
    return out;
  }

  RoundingOutcome run_alg4(const SampledConfigs& s) const {
    const std::size_t L = inst().num_bins(), P = inst().num_items();
    RoundingOutcome out;
    out.path = Path::MagicianFallback;
    out.magician_open = type0_decisions(s);
    out.solution = AssignmentSolution::empty_for(inst());
    for (std::size_t p = 0; p < P; ++p) {
      int later = 0;  // occurrences of p in sampled sets of bins after l
      for (std::size_t b = 0; b < L; ++b) {
        const std::size_t l = L - 1 - b;
        if (!in_sample(s, l, p)) continue;
        if (later < inst().rho[p] && out.magician_open[l]) out.solution.assign(l, p);
        ++later;
      }
    }
    out.solution.open_used_bins();
    require_feasible(out.solution, "alg4");
    return out;
  }

  const ScaledInstance* si_;
  const FractionalSolution* sol_;
  Algorithm alg_;
  BinColumns bins_;
  std::vector<std::size_t> order_;
  RoundedCostGrid grid_;
  std::vector<ThresholdRule> type0_rules_;
  std::vector<std::vector<ThresholdRule>> typep_rules_;
};

inline RoundingOutcome alg1_magician_round(const ScaledInstance& si, const FractionalSolution& x,
                                           std::uint64_t seed, std::uint64_t trial = 0) {
  return Rounder(si, x, Algorithm::Alg1).run(seed, trial);
}
inline RoundingOutcome alg2_greedy_round(const ScaledInstance& si, const FractionalSolution& x,
                                         std::uint64_t seed, std::uint64_t trial = 0) {
  return Rounder(si, x, Algorithm::Alg2).run(seed, trial);
}
inline RoundingOutcome alg_baseline_round(const ScaledInstance& si, const FractionalSolution& x,
                                          std::uint64_t seed, std::uint64_t trial = 0) {
  return Rounder(si, x, Algorithm::Baseline).run(seed, trial);
}
inline RoundingOutcome alg6_modified_round(const ScaledInstance& si, const FractionalSolution& x,
                                           std::uint64_t seed, std::uint64_t trial = 0) {
  return Rounder(si, x, Algorithm::Alg6).run(seed, trial);
}
inline RoundingOutcome analysis_alg3(const ScaledInstance& si, const FractionalSolution& x,
                                     std::uint64_t seed, std::uint64_t trial = 0) {
  return Rounder(si, x, Algorithm::Alg3).run(seed, trial);
}
inline RoundingOutcome analysis_alg4_uniform(const ScaledInstance& si, const FractionalSolution& x,
                                             std::uint64_t seed, std::uint64_t trial = 0) {
  return Rounder(si, x, Algorithm::Alg4).run(seed, trial);
}

}  // namespace bap
