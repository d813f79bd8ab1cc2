#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "bap/error.hpp"
#include "bap/model.hpp"
#include "bap/packing.hpp"

namespace bap {

/// An instance together with its budget normalisation: every configuration
/// cost is divided by the most expensive feasible configuration, so scaled
/// costs lie in [0, 1] and the budget becomes k = B / max c_lS.
struct ScaledInstance {
  Instance base;
  double max_config_cost = 1.0;
  double k = 0.0;

  double scale(double cost) const { return cost / max_config_cost; }
  double unscale(double scaled) const { return scaled * max_config_cost; }
  double open_cost(std::size_t l) const { return scale(base.bins[l].open_cost); }
  double assign_cost(std::size_t l, std::size_t p) const { return scale(base.assign_cost(l, p)); }
};

/// Most expensive nonempty feasible configuration of bin `l`, or a negative
/// value when the bin admits none. Solved exactly as an interval-packing LP
/// with the assignment costs as weights.
inline double max_configuration_cost(const Instance& inst, std::size_t l) {
  bool any = false;
  for (std::size_t p = 0; p < inst.num_items() && !any; ++p) {
    std::size_t single[] = {p};
    any = inst.compatible(l, p) && fits(inst, l, single);
  }
  if (!any) return -1.0;
  std::vector<double> w(inst.num_items(), 0.0);
  for (std::size_t p = 0; p < inst.num_items(); ++p) w[p] = inst.assign_cost(l, p);
  return inst.bins[l].open_cost + pack_bin(inst, l, w).value;
}

inline ScaledInstance scale_budget(const Instance& inst) {
  double best = -1.0;
  for (std::size_t l = 0; l < inst.num_bins(); ++l)
    best = std::max(best, max_configuration_cost(inst, l));
  if (best < 0.0) throw Error("trivial instance: no feasible configuration");
  if (best == 0.0) throw Error("k undefined: every configuration is free");
  return ScaledInstance{inst, best, inst.budget / best};
}

}  // namespace bap
