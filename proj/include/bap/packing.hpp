#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bap/error.hpp"
#include "bap/lp.hpp"
#include "bap/model.hpp"

namespace bap {

struct PackingResult {
  std::vector<std::size_t> items;  // sorted
  double value = 0.0;
};

/// Builds the single-bin packing LP
///   max sum_p w_p x_p  s.t.  sum_{p covers i} x_p <= f_i  for each dimension i,
///   0 <= x_p <= 1,
/// over the compatible items with positive weight. Each column is an interval
/// of ones, so the matrix is totally unimodular.
inline lp::LinearProgram packing_program(const Instance& inst, std::size_t l,
                                         std::span<const double> weight,
                                         std::vector<std::size_t>& columns) {
  columns.clear();
  for (std::size_t p = 0; p < inst.num_items(); ++p)
    if (inst.compatible(l, p) && weight[p] > 0.0) columns.push_back(p);
  const Bin& bin = inst.bins[l];
  lp::LinearProgram prog(static_cast<std::size_t>(bin.dims()), columns.size());
  prog.totally_unimodular = true;
  for (std::size_t i = 0; i < prog.num_rows; ++i) prog.rhs[i] = bin.capacity[i];
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const Link& k = *inst.link(l, columns[j]);
    prog.objective[j] = weight[columns[j]];
    prog.upper[j] = 1.0;
    for (int i = k.span.lo; i < k.span.hi; ++i) prog.at(static_cast<std::size_t>(i), j) = 1.0;
  }
  return prog;
}

/// Maximum-weight capacity-feasible item set for bin `l`. Throws if the LP
/// vertex is not 0/1, which would mean a broken interval structure.
inline PackingResult pack_bin(const Instance& inst, std::size_t l, std::span<const double> weight) {
  if (weight.size() != inst.num_items()) throw Error("packing weights must have one entry per item");
  std::vector<std::size_t> columns;
  lp::LinearProgram prog = packing_program(inst, l, weight, columns);
  PackingResult out;
  if (columns.empty()) return out;
  lp::Result r = lp::solve(prog);
  if (r.status != lp::Status::Optimal) throw Error("packing LP not optimal");
  for (std::size_t j = 0; j < columns.size(); ++j) {
    double x = r.primal[j];
    if (x == 1.0) {
      out.items.push_back(columns[j]);
      out.value += weight[columns[j]];
    } else if (x != 0.0) {
      throw Error("packing LP returned a fractional vertex");
    }
  }
  return out;
}

}  // namespace bap
