#pragma once

// Dense bounded-variable primal simplex.
//
//   maximize    c'x
//   subject to  A x <= b,   0 <= x_j <= u_j   (u_j may be +inf)
//
// Revised form with an explicit dense basis inverse, refactored periodically.
// Entering variables are chosen by largest reduced cost; after a run of
// degenerate pivots the solver switches to Bland's rule (lowest eligible
// index enters, lowest basic index leaves among ratio ties) until the
// objective moves again, which rules out cycling. Rows with negative
// right-hand side get an artificial variable and a phase-one pass.
//
// Optimal results are always basic (vertex) solutions, which is what makes
// interval-structured pricing problems come back integral.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "bap/error.hpp"

namespace bap::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinearProgram {
  std::size_t num_rows = 0;
  std::size_t num_cols = 0;
  std::vector<double> objective;  // maximized
  std::vector<double> matrix;     // row-major, num_rows x num_cols
  std::vector<double> rhs;
  std::vector<double> upper;      // per column, lower bounds are all zero
  // Snap primal values within 1e-6 of an integer (for TU constraint matrices).
  bool totally_unimodular = false;

  LinearProgram() = default;
  LinearProgram(std::size_t rows, std::size_t cols)
      : num_rows(rows),
        num_cols(cols),
        objective(cols, 0.0),
        matrix(rows * cols, 0.0),
        rhs(rows, 0.0),
        upper(cols, kInf) {}

  double& at(std::size_t i, std::size_t j) { return matrix[i * num_cols + j]; }
  double at(std::size_t i, std::size_t j) const { return matrix[i * num_cols + j]; }

  void check() const {
    if (objective.size() != num_cols || upper.size() != num_cols || rhs.size() != num_rows ||
        matrix.size() != num_rows * num_cols)
      throw Error("linear program dimensions are inconsistent");
    auto finite = [](double x) { return std::isfinite(x); };
    if (!std::all_of(objective.begin(), objective.end(), finite) ||
        !std::all_of(matrix.begin(), matrix.end(), finite) ||
        !std::all_of(rhs.begin(), rhs.end(), finite))
      throw Error("linear program has non-finite entries");
    for (double u : upper)
      if (!(u >= 0.0)) throw Error("variable upper bounds must be >= 0");
  }
};

enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

/// Basis keys: a structural column j is encoded as j, the slack of row i as -(i+1).
using BasisKey = long;

struct Result {
  Status status = Status::Optimal;
  std::vector<double> primal;         // per column
  std::vector<double> duals;          // per row, >= 0 at optimality
  std::vector<double> reduced_costs;  // c_j - y'A_j per column
  double objective = 0.0;
  std::size_t iterations = 0;
  std::vector<BasisKey> basis;
};

struct Options {
  std::size_t max_iterations = 200000;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  std::size_t degenerate_run_before_bland = 30;
  std::size_t refactor_interval = 100;
  bool bland_only = false;
  // Optional starting basis (num_rows keys). Ignored when singular, primal
  // infeasible, or when the program needs a phase-one pass.
  std::span<const BasisKey> warm_basis = {};
};

namespace detail {

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const Options& opt) : lp_(lp), opt_(opt) {
    m_ = lp.num_rows;
    n_ = lp.num_cols;
    cols_.resize(n_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        double a = lp.at(i, j);
        if (a != 0.0) cols_[j].push_back({i, a});
      }
    for (std::size_t i = 0; i < m_; ++i)
      if (lp.rhs[i] < 0.0) art_row_.push_back(i);
    total_ = n_ + m_ + art_row_.size();
    upper_.assign(total_, kInf);
    for (std::size_t j = 0; j < n_; ++j) upper_[j] = lp.upper[j];
    cost_.assign(total_, 0.0);
    state_.assign(total_, kLower);
    head_.assign(m_, 0);
    xb_.assign(m_, 0.0);
  }

  Result run() {
    Result res;
    bool warmed = !art_row_.empty() ? false : try_warm_start();
    if (!warmed) cold_start();

    if (!art_row_.empty()) {
      std::fill(cost_.begin(), cost_.end(), 0.0);
      for (std::size_t k = 0; k < art_row_.size(); ++k) cost_[n_ + m_ + k] = -1.0;
      Status s = optimize();
      (void)s;  // phase one is bounded by construction
      double infeas = 0.0;
      for (std::size_t i = 0; i < m_; ++i)
        if (head_[i] >= n_ + m_) infeas += std::max(0.0, xb_[i]);
      for (std::size_t k = 0; k < art_row_.size(); ++k)
        if (state_[n_ + m_ + k] == kUpper) infeas += upper_[n_ + m_ + k];
      if (infeas > opt_.feasibility_tol * (1.0 + max_abs_rhs())) {
        res.status = Status::Infeasible;
        res.iterations = iterations_;
        return res;
      }
      for (std::size_t k = 0; k < art_row_.size(); ++k) {
        upper_[n_ + m_ + k] = 0.0;
        if (state_[n_ + m_ + k] == kUpper) state_[n_ + m_ + k] = kLower;
      }
      refactor();
    }

    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = lp_.objective[j];
    Status s = optimize();
    res.status = s;
    res.iterations = iterations_;
    if (s != Status::Optimal) return res;

    refactor();
    std::vector<double> y = duals();
    res.primal.assign(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j)
      if (state_[j] == kUpper) res.primal[j] = upper_[j];
    for (std::size_t i = 0; i < m_; ++i)
      if (head_[i] < n_) res.primal[head_[i]] = xb_[i];
    for (std::size_t j = 0; j < n_; ++j) {
      double& x = res.primal[j];
      if (std::abs(x) <= opt_.feasibility_tol) x = 0.0;
      if (std::isfinite(upper_[j]) && std::abs(x - upper_[j]) <= opt_.feasibility_tol)
        x = upper_[j];
      if (lp_.totally_unimodular) {
        double r = std::round(x);
        if (std::abs(x - r) <= 1e-6) x = r;
      }
    }
    res.duals.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) res.duals[i] = std::abs(y[i]) < 1e-13 ? 0.0 : y[i];
    res.reduced_costs.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) res.reduced_costs[j] = lp_.objective[j] - dot_column(y, j);
    res.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) res.objective += lp_.objective[j] * res.primal[j];
    res.basis.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      std::size_t v = head_[i];
      if (v < n_)
        res.basis[i] = static_cast<BasisKey>(v);
      else if (v < n_ + m_)
        res.basis[i] = -static_cast<BasisKey>(v - n_) - 1;
      else
        res.basis[i] = -static_cast<BasisKey>(art_row_[v - n_ - m_]) - 1;
    }
    return res;
  }

 private:
  enum VarState : unsigned char { kLower, kUpper, kBasic };
  struct Entry {
    std::size_t row;
    double value;
  };

  double max_abs_rhs() const {
    double r = 0.0;
    for (double b : lp_.rhs) r = std::max(r, std::abs(b));
    return r;
  }

  // Sparse column of the extended system [A | I | -I_art].
  template <class F>
  void for_column(std::size_t j, F&& f) const {
    if (j < n_) {
      for (const Entry& e : cols_[j]) f(e.row, e.value);
    } else if (j < n_ + m_) {
      f(j - n_, 1.0);
    } else {
      f(art_row_[j - n_ - m_], -1.0);
    }
  }

  double dot_column(const std::vector<double>& y, std::size_t j) const {
    double s = 0.0;
    for_column(j, [&](std::size_t i, double a) { s += y[i] * a; });
    return s;
  }

  void cold_start() {
    for (std::size_t i = 0; i < m_; ++i) head_[i] = n_ + i;
    for (std::size_t k = 0; k < art_row_.size(); ++k) head_[art_row_[k]] = n_ + m_ + k;
    std::fill(state_.begin(), state_.end(), kLower);
    for (std::size_t i = 0; i < m_; ++i) state_[head_[i]] = kBasic;
    refactor();
  }

  bool try_warm_start() {
    if (opt_.warm_basis.size() != m_) return false;
    std::vector<char> used(n_ + m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      BasisKey key = opt_.warm_basis[i];
      std::size_t v;
      if (key >= 0) {
        if (static_cast<std::size_t>(key) >= n_) return false;
        v = static_cast<std::size_t>(key);
      } else {
        std::size_t row = static_cast<std::size_t>(-key - 1);
        if (row >= m_) return false;
        v = n_ + row;
      }
      if (used[v]) return false;
      used[v] = 1;
      head_[i] = v;
    }
    std::fill(state_.begin(), state_.end(), kLower);
    for (std::size_t i = 0; i < m_; ++i) state_[head_[i]] = kBasic;
    if (!refactor()) return false;
    for (std::size_t i = 0; i < m_; ++i) {
      double ub = upper_[head_[i]];
      if (xb_[i] < -opt_.feasibility_tol || xb_[i] > ub + opt_.feasibility_tol) return false;
    }
    return true;
  }

  // Recomputes the basis inverse by Gauss-Jordan elimination and the basic
  // values from scratch. Returns false on a singular basis.
  bool refactor() {
    std::vector<double> b(m_ * m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k)
      for_column(head_[k], [&](std::size_t i, double a) { b[i * m_ + k] = a; });
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      double best = std::abs(b[c * m_ + c]);
      for (std::size_t r = c + 1; r < m_; ++r)
        if (std::abs(b[r * m_ + c]) > best) {
          best = std::abs(b[r * m_ + c]);
          piv = r;
        }
      if (best < 1e-12) return false;
      if (piv != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(b[piv * m_ + k], b[c * m_ + k]);
          std::swap(binv_[piv * m_ + k], binv_[c * m_ + k]);
        }
      }
      double inv = 1.0 / b[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        b[c * m_ + k] *= inv;
        binv_[c * m_ + k] *= inv;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        double f = b[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          b[r * m_ + k] -= f * b[c * m_ + k];
          binv_[r * m_ + k] -= f * binv_[c * m_ + k];
        }
      }
    }
    recompute_basic_values();
    since_refactor_ = 0;
    return true;
  }

  void recompute_basic_values() {
    std::vector<double> r(lp_.rhs.begin(), lp_.rhs.end());
    for (std::size_t j = 0; j < total_; ++j)
      if (state_[j] == kUpper)
        for_column(j, [&](std::size_t i, double a) { r[i] -= a * upper_[j]; });
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      const double* row = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) s += row[k] * r[k];
      xb_[i] = s;
    }
  }

  std::vector<double> duals() const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double cb = cost_[head_[i]];
      if (cb == 0.0) continue;
      const double* row = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) y[k] += cb * row[k];
    }
    return y;
  }

  // Returns the entering variable or total_ when the basis is optimal.
  std::size_t choose_entering(const std::vector<double>& y, bool bland) const {
    std::size_t best = total_;
    double best_score = 0.0;
    for (std::size_t j = 0; j < total_; ++j) {
      if (state_[j] == kBasic || upper_[j] == 0.0) continue;
      double d = cost_[j] - dot_column(y, j);
      double score = state_[j] == kLower ? d : -d;
      if (score <= opt_.optimality_tol) continue;
      if (bland) return j;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  Status optimize() {
    std::size_t degenerate_run = 0;
    bool bland = opt_.bland_only;
    bool verified = false;
    std::vector<double> alpha(m_);
    for (;;) {
      if (iterations_ >= opt_.max_iterations) throw Error("degeneracy limit");
      std::vector<double> y = duals();
      std::size_t q = choose_entering(y, bland);
      if (q == total_) {
        if (verified || since_refactor_ == 0) return Status::Optimal;
        refactor();
        verified = true;
        continue;
      }
      verified = false;
      ++iterations_;

      std::fill(alpha.begin(), alpha.end(), 0.0);
      for_column(q, [&](std::size_t k, double a) {
        for (std::size_t i = 0; i < m_; ++i) alpha[i] += binv_[i * m_ + k] * a;
      });
      const double dir = state_[q] == kLower ? 1.0 : -1.0;

      double step = upper_[q];  // bound flip distance
      std::size_t leave = m_;
      bool leave_to_upper = false;
      constexpr double kPivotTol = 1e-10;
      constexpr double kTieTol = 1e-12;
      for (std::size_t i = 0; i < m_; ++i) {
        double a = dir * alpha[i];
        double room;
        bool to_upper;
        if (a > kPivotTol) {
          room = xb_[i] / a;
          to_upper = false;
        } else if (a < -kPivotTol && std::isfinite(upper_[head_[i]])) {
          room = (upper_[head_[i]] - xb_[i]) / (-a);
          to_upper = true;
        } else {
          continue;
        }
        room = std::max(room, 0.0);
        bool take = false;
        if (room < step - kTieTol) {
          take = true;
        } else if (room <= step + kTieTol && leave < m_) {
          if (bland)
            take = head_[i] < head_[leave];
          else
            take = std::abs(alpha[i]) > std::abs(alpha[leave]);
        } else if (room <= step + kTieTol && leave == m_ && !std::isfinite(step)) {
          take = true;
        }
        if (take) {
          step = room;
          leave = i;
          leave_to_upper = to_upper;
        }
      }
      if (leave == m_ && !std::isfinite(step)) return Status::Unbounded;

      for (std::size_t i = 0; i < m_; ++i) xb_[i] -= dir * step * alpha[i];

      if (step <= opt_.feasibility_tol) {
        if (++degenerate_run >= opt_.degenerate_run_before_bland) bland = true;
      } else {
        degenerate_run = 0;
        bland = opt_.bland_only;
      }

      if (leave == m_) {
        state_[q] = state_[q] == kLower ? kUpper : kLower;
        continue;
      }

      std::size_t out = head_[leave];
      double entering_value = (state_[q] == kLower ? 0.0 : upper_[q]) + dir * step;
      state_[out] = leave_to_upper ? kUpper : kLower;
      state_[q] = kBasic;
      head_[leave] = q;
      xb_[leave] = entering_value;

      double piv = alpha[leave];
      double* prow = &binv_[leave * m_];
      for (std::size_t k = 0; k < m_; ++k) prow[k] /= piv;
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == leave || alpha[i] == 0.0) continue;
        double f = alpha[i];
        double* row = &binv_[i * m_];
        for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
      }
      if (++since_refactor_ >= opt_.refactor_interval) refactor();
    }
  }

  const LinearProgram& lp_;
  const Options& opt_;
  std::size_t m_ = 0, n_ = 0, total_ = 0;
  std::vector<std::vector<Entry>> cols_;
  std::vector<std::size_t> art_row_;
  std::vector<double> upper_, cost_;
  std::vector<VarState> state_;
  std::vector<std::size_t> head_;
  std::vector<double> xb_;
  std::vector<double> binv_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
};

}  // namespace detail

inline Result solve(const LinearProgram& lp, const Options& opt = {}) {
  lp.check();
  if (lp.num_rows == 0) {
    // Pure box constraints: each variable sits at whichever bound helps.
    Result r;
    r.primal.assign(lp.num_cols, 0.0);
    r.reduced_costs = lp.objective;
    for (std::size_t j = 0; j < lp.num_cols; ++j) {
      if (lp.objective[j] <= 0.0) continue;
      if (!std::isfinite(lp.upper[j])) {
        r.status = Status::Unbounded;
        return r;
      }
      r.primal[j] = lp.upper[j];
      r.objective += lp.objective[j] * lp.upper[j];
    }
    return r;
  }
  return detail::Simplex(lp, opt).run();
}

}  // namespace bap::lp
