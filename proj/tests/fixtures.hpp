#pragma once

#include <cstddef>
#include <vector>

#include "bap/model.hpp"

namespace fixtures {

/// Two one-dimensional unit bins, two unit items, v = 2 on the diagonal and
/// 1 off it, unit opening costs, B = 2.
inline bap::Instance reference_2x2(double budget = 2.0) {
  std::vector<bap::Bin> bins(2, bap::Bin{{1}, 1.0});
  bap::Instance inst = bap::Instance::with_shape(bins, {1, 1}, budget);
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t p = 0; p < 2; ++p) inst.link(l, p) = bap::Link{{0, 1}, l == p ? 2.0 : 1.0, 0.0};
  return inst;
}

/// Same rewards for an item in every bin.
inline bap::Instance uniform_2x2(double budget = 2.0) {
  std::vector<bap::Bin> bins(2, bap::Bin{{1}, 1.0});
  bap::Instance inst = bap::Instance::with_shape(bins, {1, 1}, budget);
  for (std::size_t l = 0; l < 2; ++l)
    for (std::size_t p = 0; p < 2; ++p) inst.link(l, p) = bap::Link{{0, 1}, p == 0 ? 2.0 : 1.0, 0.0};
  return inst;
}

/// Single one-dimensional bin of capacity f with two overlapping unit items.
inline bap::Instance one_bin_two_items(int f, double v0 = 1.0, double v1 = 1.0,
                                       double item_cost = 0.0, double budget = 1.0) {
  bap::Instance inst = bap::Instance::with_shape({bap::Bin{{f}, 1.0}}, {1, 1}, budget);
  inst.link(0, 0) = bap::Link{{0, 1}, v0, item_cost};
  inst.link(0, 1) = bap::Link{{0, 1}, v1, item_cost};
  return inst;
}

}  // namespace fixtures
