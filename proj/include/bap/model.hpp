#pragma once

// Core data model for budgeted rho-assignment with consecutive unit weights:
// bins with per-dimension capacities and opening costs, items whose weight in
// a bin is a single run of ones (stored as a half-open interval), one global
// budget and a per-item limit on the number of bins an item may occupy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bap/error.hpp"

namespace bap {

/// Half-open range [lo, hi) of capacity dimensions touched by an item.
struct Interval {
  int lo = 0;
  int hi = 0;

  int length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// A compatible (bin, item) pair. Incompatible pairs are represented by an
/// empty optional and carry neither reward nor cost.
struct Link {
  Interval span;
  double reward = 0.0;
  double cost = 0.0;

  bool operator==(const Link&) const = default;
};

struct Bin {
  std::vector<int> capacity;  // one entry per dimension
  double open_cost = 0.0;

  int dims() const { return static_cast<int>(capacity.size()); }
  bool operator==(const Bin&) const = default;
};

struct Instance {
  std::vector<Bin> bins;
  std::vector<int> rho;                   // per item
  std::vector<std::optional<Link>> links;  // row-major, bins x items
  double budget = 0.0;

  /// All pairs start out incompatible.
  static Instance with_shape(std::vector<Bin> bins, std::vector<int> rho, double budget) {
    Instance inst;
    inst.links.resize(bins.size() * rho.size());
    inst.bins = std::move(bins);
    inst.rho = std::move(rho);
    inst.budget = budget;
    return inst;
  }

  std::size_t num_bins() const { return bins.size(); }
  std::size_t num_items() const { return rho.size(); }

  const std::optional<Link>& link(std::size_t l, std::size_t p) const {
    return links[l * num_items() + p];
  }
  std::optional<Link>& link(std::size_t l, std::size_t p) { return links[l * num_items() + p]; }

  bool compatible(std::size_t l, std::size_t p) const { return link(l, p).has_value(); }
  double reward(std::size_t l, std::size_t p) const {
    const auto& k = link(l, p);
    return k ? k->reward : 0.0;
  }
  double assign_cost(std::size_t l, std::size_t p) const {
    const auto& k = link(l, p);
    return k ? k->cost : 0.0;
  }

  int min_rho() const {
    if (rho.empty()) return 0;
    return *std::min_element(rho.begin(), rho.end());
  }

  bool has_assignment_costs() const {
    return std::any_of(links.begin(), links.end(),
                       [](const auto& k) { return k && k->cost != 0.0; });
  }

  bool operator==(const Instance&) const = default;
};

/// A column of the configuration LP: a nonempty item set packed into one bin.
struct Configuration {
  std::size_t bin = 0;
  std::vector<std::size_t> items;  // sorted, unique
  double cost = 0.0;               // c_l + sum of assignment costs, original units

  bool operator==(const Configuration&) const = default;
};

/// True when the items fit into bin `l` on every capacity dimension and are
/// all compatible with it. Uses a difference array over the bin's dimensions.
inline bool fits(const Instance& inst, std::size_t l, std::span<const std::size_t> items) {
  const Bin& bin = inst.bins[l];
  std::vector<int> delta(static_cast<std::size_t>(bin.dims()) + 1, 0);
  for (std::size_t p : items) {
    const auto& k = inst.link(l, p);
    if (!k) return false;
    delta[static_cast<std::size_t>(k->span.lo)] += 1;
    delta[static_cast<std::size_t>(k->span.hi)] -= 1;
  }
  int load = 0;
  for (int i = 0; i < bin.dims(); ++i) {
    load += delta[static_cast<std::size_t>(i)];
    if (load > bin.capacity[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

inline double configuration_cost(const Instance& inst, std::size_t l,
                                 std::span<const std::size_t> items) {
  double c = inst.bins[l].open_cost;
  for (std::size_t p : items) c += inst.assign_cost(l, p);
  return c;
}

inline double configuration_reward(const Instance& inst, std::size_t l,
                                   std::span<const std::size_t> items) {
  double v = 0.0;
  for (std::size_t p : items) v += inst.reward(l, p);
  return v;
}

/// Builds a configuration after checking its invariants (nonempty, sorted,
/// compatible, capacity-feasible).
inline Configuration make_configuration(const Instance& inst, std::size_t l,
                                        std::vector<std::size_t> items) {
  if (l >= inst.num_bins()) throw Error("configuration bin index out of range");
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  if (items.empty()) throw Error("configuration must be nonempty");
  for (std::size_t p : items)
    if (p >= inst.num_items()) throw Error("configuration item index out of range");
  if (!fits(inst, l, items)) throw Error("configuration violates bin capacity");
  Configuration c{l, std::move(items), 0.0};
  c.cost = configuration_cost(inst, l, c.items);
  return c;
}

struct AssignmentSolution {
  std::size_t num_bins = 0;
  std::size_t num_items = 0;
  std::vector<std::uint8_t> open;      // y, one per bin
  std::vector<std::uint8_t> assigned;  // x, row-major bins x items

  static AssignmentSolution empty(std::size_t bins, std::size_t items) {
    return {bins, items, std::vector<std::uint8_t>(bins, 0),
            std::vector<std::uint8_t>(bins * items, 0)};
  }
  static AssignmentSolution empty_for(const Instance& inst) {
    return empty(inst.num_bins(), inst.num_items());
  }

  bool x(std::size_t l, std::size_t p) const { return assigned[l * num_items + p] != 0; }
  bool y(std::size_t l) const { return open[l] != 0; }
  void assign(std::size_t l, std::size_t p, bool on = true) {
    assigned[l * num_items + p] = on ? 1 : 0;
  }

  /// Opens exactly the bins that hold at least one item.
  void open_used_bins() {
    for (std::size_t l = 0; l < num_bins; ++l) {
      bool used = false;
      for (std::size_t p = 0; p < num_items && !used; ++p) used = x(l, p);
      open[l] = used ? 1 : 0;
    }
  }

  bool operator==(const AssignmentSolution&) const = default;
};

struct FeasibilityReport {
  bool budget = true;
  bool capacity = true;
  bool rho = true;
  bool linkage = true;  // x <= y and only compatible pairs assigned

  bool feasible() const { return budget && capacity && rho && linkage; }
};

inline void require_matching(const Instance& inst, const AssignmentSolution& sol) {
  if (sol.num_bins != inst.num_bins() || sol.num_items != inst.num_items() ||
      sol.open.size() != inst.num_bins() ||
      sol.assigned.size() != inst.num_bins() * inst.num_items())
    throw Error("solution dimensions do not match instance");
}

/// Sum of rewards over assigned pairs.
inline double objective(const Instance& inst, const AssignmentSolution& sol) {
  require_matching(inst, sol);
  double v = 0.0;
  for (std::size_t l = 0; l < inst.num_bins(); ++l)
    for (std::size_t p = 0; p < inst.num_items(); ++p)
      if (sol.x(l, p)) v += inst.reward(l, p);
  return v;
}

/// Opening costs of open bins plus assignment costs of assigned pairs.
inline double total_cost(const Instance& inst, const AssignmentSolution& sol) {
  require_matching(inst, sol);
  double c = 0.0;
  for (std::size_t l = 0; l < inst.num_bins(); ++l) {
    if (sol.y(l)) c += inst.bins[l].open_cost;
    for (std::size_t p = 0; p < inst.num_items(); ++p)
      if (sol.x(l, p)) c += inst.assign_cost(l, p);
  }
  return c;
}

/// Relative slack used for every budget comparison in the library.
inline bool within_budget(double cost, double budget) {
  return cost <= budget + 1e-9 * std::max(1.0, std::abs(budget));
}

inline FeasibilityReport check_feasible(const Instance& inst, const AssignmentSolution& sol) {
  require_matching(inst, sol);
  FeasibilityReport r;
  r.budget = within_budget(total_cost(inst, sol), inst.budget);

  std::vector<int> uses(inst.num_items(), 0);
  for (std::size_t l = 0; l < inst.num_bins(); ++l) {
    std::vector<std::size_t> items;
    for (std::size_t p = 0; p < inst.num_items(); ++p) {
      if (!sol.x(l, p)) continue;
      ++uses[p];
      if (!sol.y(l) || !inst.compatible(l, p)) r.linkage = false;
      if (inst.compatible(l, p)) items.push_back(p);
    }
    if (!fits(inst, l, items)) r.capacity = false;
  }
  for (std::size_t p = 0; p < inst.num_items(); ++p)
    if (uses[p] > inst.rho[p]) r.rho = false;
  return r;
}

struct Violation {
  std::string field;
  std::optional<std::size_t> bin;
  std::optional<std::size_t> item;
  std::string message;
};

inline std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };

  if (inst.num_bins() < 2) out.push_back({"L", {}, {}, "L >= 2 required"});
  if (!finite_nonneg(inst.budget)) out.push_back({"B", {}, {}, "budget must be finite and >= 0"});
  if (inst.links.size() != inst.num_bins() * inst.num_items()) {
    out.push_back({"links", {}, {}, "link table size must equal L * P"});
    return out;
  }
  for (std::size_t p = 0; p < inst.num_items(); ++p)
    if (inst.rho[p] < 1) out.push_back({"rho", {}, p, "rho must be a positive integer"});

  for (std::size_t l = 0; l < inst.num_bins(); ++l) {
    const Bin& b = inst.bins[l];
    if (b.dims() < 1) out.push_back({"n", l, {}, "bin needs at least one capacity dimension"});
    for (int f : b.capacity)
      if (f < 0) {
        out.push_back({"f", l, {}, "capacities must be >= 0"});
        break;
      }
    if (!finite_nonneg(b.open_cost)) out.push_back({"c", l, {}, "opening cost must be >= 0"});
    for (std::size_t p = 0; p < inst.num_items(); ++p) {
      const auto& k = inst.link(l, p);
      if (!k) continue;
      if (k->span.lo < 0 || k->span.lo >= k->span.hi || k->span.hi > b.dims())
        out.push_back({"interval", l, p, "weight interval must satisfy 0 <= lo < hi <= n_l"});
      if (!finite_nonneg(k->reward)) out.push_back({"v", l, p, "reward must be >= 0"});
      if (!finite_nonneg(k->cost)) out.push_back({"c_lp", l, p, "assignment cost must be >= 0"});
    }
  }
  return out;
}

}  // namespace bap
