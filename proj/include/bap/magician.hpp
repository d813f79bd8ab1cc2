#pragma once

// Generalized gamma-conservative magician.
//
// Losses live on a grid of step 1/G and are stored as integer grid units.
// The ex-ante distribution of lost mana is kept as a sparse, sorted list of
// (units, mass) pairs: type-0 grids reach L^{2m} points, but only the sums
// reachable from the box supports ever carry mass.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "bap/error.hpp"

namespace bap {

using GridUnits = std::int64_t;

struct BoxDistribution {
  std::vector<std::pair<GridUnits, double>> support;  // sorted by loss, unique
  GridUnits grid = 1;

  /// Validates and merges a list of (loss in grid units, probability).
  static BoxDistribution from_units(std::vector<std::pair<GridUnits, double>> pts, GridUnits grid) {
    if (grid < 1) throw Error("grid size must be >= 1");
    std::sort(pts.begin(), pts.end());
    BoxDistribution d;
    d.grid = grid;
    double total = 0.0;
    for (const auto& [x, p] : pts) {
      if (x < 0 || x > grid) throw Error("box loss outside [0, 1]");
      if (!(p >= 0.0)) throw Error("box probabilities must be >= 0");
      total += p;
      if (!d.support.empty() && d.support.back().first == x)
        d.support.back().second += p;
      else
        d.support.emplace_back(x, p);
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error("box probabilities must sum to 1");
    return d;
  }

  /// Losses given as reals; each must sit on the 1/grid lattice.
  static BoxDistribution from_values(const std::vector<std::pair<double, double>>& pts,
                                     GridUnits grid) {
    std::vector<std::pair<GridUnits, double>> units;
    for (const auto& [x, p] : pts) {
      double scaled = x * static_cast<double>(grid);
      double r = std::round(scaled);
      if (std::abs(scaled - r) > 1e-9 * std::max(1.0, std::abs(scaled)))
        throw Error("box loss is off the grid");
      units.emplace_back(static_cast<GridUnits>(r), p);
    }
    return from_units(std::move(units), grid);
  }

  static BoxDistribution bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("Bernoulli probability outside [0, 1]");
    return from_units({{0, 1.0 - p}, {1, p}}, 1);
  }

  double mean() const {
    double m = 0.0;
    for (const auto& [x, p] : support) m += static_cast<double>(x) * p;
    return m / static_cast<double>(grid);
  }
};

/// Threshold decision for one box, fixed ex ante.
struct ThresholdRule {
  GridUnits theta = 0;           // grid units
  double r = 0.0;                // tie-break probability at theta
  double open_probability = 0.0;  // ex-ante P(open)
  double sand_distance = 0.0;     // mean distance of the mass from theta + 1

  bool opens(GridUnits w, double coin) const { return w < theta || (w == theta && coin < r); }
};

/// Ex-ante dynamic program: feeds boxes in order and records each threshold.
class Magician {
 public:
  Magician(double gamma, double mana, GridUnits grid) : gamma_(gamma), mana_(mana), grid_(grid) {
    if (!(gamma >= 0.0) || gamma >= 1.0) throw Error("gamma must lie in [0, 1)");
    if (!(mana > 0.0)) throw Error("mana must be positive");
    if (grid < 1) throw Error("grid size must be >= 1");
    mass_.emplace_back(0, 1.0);
  }

  double gamma() const { return gamma_; }
  double mana() const { return mana_; }
  GridUnits grid() const { return grid_; }
  const std::vector<ThresholdRule>& rules() const { return rules_; }

  /// Current distribution of lost mana, (grid units, mass), sorted.
  const std::vector<std::pair<GridUnits, double>>& distribution() const { return mass_; }

  /// P[W <= w] for the box about to be presented.
  double cdf(GridUnits w) const {
    double f = 0.0;
    for (const auto& [x, m] : mass_) {
      if (x > w) break;
      f += m;
    }
    return f;
  }

  /// Threshold and tie-break for the next box if it were presented now.
  ThresholdRule peek() const {
    ThresholdRule rule;
    double below = 0.0;  // F^-(theta)
    std::size_t at = mass_.size() - 1;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
      if (below + mass_[i].second >= gamma_ - 1e-12) {
        at = i;
        break;
      }
      below += mass_[i].second;
    }
    if (at == mass_.size() - 1) {
      below = 0.0;
      for (std::size_t i = 0; i + 1 < mass_.size(); ++i) below += mass_[i].second;
    }
    rule.theta = mass_[at].first;
    double here = mass_[at].second;
    rule.r = here > 0.0 ? std::clamp((gamma_ - below) / here, 0.0, 1.0) : 1.0;
    rule.open_probability = below + rule.r * here;

    const double top = static_cast<double>(rule.theta + grid_);
    for (const auto& [x, m] : mass_) {
      if (x > rule.theta + grid_) break;
      rule.sand_distance += (top - static_cast<double>(x)) * m;
    }
    rule.sand_distance /= static_cast<double>(grid_);
    return rule;
  }

  /// Decides the threshold for this box, then moves the opened mass by the
  /// box's loss distribution.
  ThresholdRule present_box(const BoxDistribution& box) {
    if (box.grid != grid_) throw Error("box grid does not match magician grid");
    ThresholdRule rule = peek();
    if (std::abs(rule.open_probability - gamma_) > 1e-9)
      throw Error("ex-ante open probability differs from gamma");

    std::vector<std::pair<GridUnits, double>> next;
    next.reserve(mass_.size() * box.support.size());
    for (const auto& [w, m] : mass_) {
      double f = w < rule.theta ? 1.0 : (w == rule.theta ? rule.r : 0.0);
      double moved = m * f;
      if (m - moved > 0.0 || moved == 0.0) next.emplace_back(w, m - moved);
      if (moved > 0.0)
        for (const auto& [x, p] : box.support)
          if (p > 0.0) next.emplace_back(w + x, moved * p);
    }
    std::sort(next.begin(), next.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    mass_.clear();
    for (const auto& e : next) {
      if (!mass_.empty() && mass_.back().first == e.first)
        mass_.back().second += e.second;
      else
        mass_.push_back(e);
    }
    rules_.push_back(rule);
    return rule;
  }

 private:
  double gamma_;
  double mana_;
  GridUnits grid_;
  std::vector<std::pair<GridUnits, double>> mass_;
  std::vector<ThresholdRule> rules_;
};

/// Live decision path over a fixed rule sequence.
class MagicianWalker {
 public:
  MagicianWalker(const std::vector<ThresholdRule>& rules, double mana, GridUnits grid)
      : rules_(&rules), mana_(mana), grid_(grid) {}

  /// Decision for the next box given a uniform coin in [0, 1). Depends only
  /// on the mana lost so far, never on this box's loss.
  bool decide(double coin) {
    if (pending_) throw Error("record_loss must follow an opened box");
    if (next_ >= rules_->size()) throw Error("decide called before present_box");
    bool open = (*rules_)[next_].opens(lost_, coin);
    if (open)
      pending_ = true;
    else
      ++next_;
    return open;
  }

  void record_loss(GridUnits x) {
    if (!pending_) throw Error("record_loss called without an opened box");
    if (x < 0 || x > grid_) throw Error("loss outside [0, 1]");
    lost_ += x;
    pending_ = false;
    ++next_;
    if (static_cast<double>(lost_) > mana_ * static_cast<double>(grid_) * (1.0 + 1e-12) + 1e-9)
      throw Error("Theorem 1 violated: lost mana exceeds k");
  }

  GridUnits lost() const { return lost_; }
  double lost_mana() const { return static_cast<double>(lost_) / static_cast<double>(grid_); }
  std::size_t box() const { return next_; }

 private:
  const std::vector<ThresholdRule>* rules_;
  double mana_;
  GridUnits grid_;
  GridUnits lost_ = 0;
  std::size_t next_ = 0;
  bool pending_ = false;
};

}  // namespace bap
