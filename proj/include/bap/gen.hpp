#pragma once

// Instance generators: random desk-scale instances, the two max-k-cover
// reductions and the line-planning (RLPP) mapping onto the core model.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bap/error.hpp"
#include "bap/model.hpp"
#include "bap/scaling.hpp"

namespace bap::gen {

struct RandomInstanceParams {
  std::size_t bins = 4;
  std::size_t items = 8;
  int min_dims = 1, max_dims = 4;
  int min_capacity = 1, max_capacity = 2;
  double min_open_cost = 1.0, max_open_cost = 3.0;
  double min_assign_cost = 0.0, max_assign_cost = 0.0;
  double min_reward = 0.5, max_reward = 2.0;
  int min_rho = 1, max_rho = 2;
  double incompatible_probability = 0.2;
  bool uniform_rewards = false;  // v_lp independent of l
  double budget = 0.0;
  std::optional<double> target_k;  // overrides budget: B = target_k * max configuration cost
};

inline Instance random_instance(const RandomInstanceParams& prm, std::uint64_t seed) {
  if (prm.bins == 0 || prm.min_dims < 1 || prm.max_dims < prm.min_dims || prm.min_rho < 1 ||
      prm.max_rho < prm.min_rho || prm.min_capacity < 0 || prm.max_capacity < prm.min_capacity)
    throw Error("random_instance: invalid parameters");
  std::mt19937_64 rng(seed);
  auto uni_int = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  auto uni_real = [&](double a, double b) {
    return a == b ? a : std::uniform_real_distribution<double>(a, b)(rng);
  };

  std::vector<Bin> bins(prm.bins);
  for (Bin& b : bins) {
    b.capacity.resize(static_cast<std::size_t>(uni_int(prm.min_dims, prm.max_dims)));
    for (int& f : b.capacity) f = uni_int(prm.min_capacity, prm.max_capacity);
    b.open_cost = uni_real(prm.min_open_cost, prm.max_open_cost);
  }
  std::vector<int> rho(prm.items);
  for (int& r : rho) r = uni_int(prm.min_rho, prm.max_rho);
  std::vector<double> item_reward(prm.items);
  for (double& v : item_reward) v = uni_real(prm.min_reward, prm.max_reward);

  Instance inst = Instance::with_shape(std::move(bins), std::move(rho), prm.budget);
  for (std::size_t l = 0; l < inst.num_bins(); ++l) {
    const int n = inst.bins[l].dims();
    for (std::size_t p = 0; p < inst.num_items(); ++p) {
      if (uni_real(0.0, 1.0) < prm.incompatible_probability) continue;
      // uniform over the n(n+1)/2 subintervals of [0, n)
      int idx = uni_int(0, n * (n + 1) / 2 - 1), lo = 0;
      while (idx >= n - lo) idx -= n - lo++;
      Link k;
      k.span = {lo, lo + idx + 1};
      k.reward = prm.uniform_rewards ? item_reward[p] : uni_real(prm.min_reward, prm.max_reward);
      k.cost = uni_real(prm.min_assign_cost, prm.max_assign_cost);
      inst.link(l, p) = k;
    }
  }
  if (prm.target_k) {
    double best = 0.0;
    for (std::size_t l = 0; l < inst.num_bins(); ++l)
      best = std::max(best, max_configuration_cost(inst, l));
    inst.budget = *prm.target_k * best;
  }
  return inst;
}

// --- max-k-cover --------------------------------------------------------

struct MaxKCoverInstance {
  int n = 0;                           // elements 0..n-1
  std::vector<std::vector<int>> sets;  // nonempty subsets of [n]
  int k = 0;

  void check() const {
    if (n < 1 || k < 0) throw Error("max-k-cover: need n >= 1 and k >= 0");
    for (const auto& s : sets) {
      if (s.empty()) throw Error("max-k-cover: sets must be nonempty");
      for (int e : s)
        if (e < 0 || e >= n) throw Error("max-k-cover: element out of range");
    }
  }
};

/// Best coverage over all choices of at most k sets.
inline int cover_optimum(const MaxKCoverInstance& mkc) {
  mkc.check();
  if (mkc.sets.size() > 24) throw Error("cover_optimum: too many sets");
  std::vector<std::uint64_t> masks;
  for (const auto& s : mkc.sets) {
    std::uint64_t m = 0;
    for (int e : s) m |= std::uint64_t{1} << e;
    masks.push_back(m);
  }
  int best = 0;
  for (std::uint32_t pick = 0; pick < (std::uint32_t{1} << masks.size()); ++pick) {
    if (std::popcount(pick) > mkc.k) continue;
    std::uint64_t u = 0;
    for (std::size_t j = 0; j < masks.size(); ++j)
      if (pick & (std::uint32_t{1} << j)) u |= masks[j];
    best = std::max(best, std::popcount(u));
  }
  return best;
}

/// One bin per set with a unit capacity on each covered element, one
/// unit-width item per element; unit opening costs and budget k.
inline Instance from_max_k_cover(const MaxKCoverInstance& mkc) {
  mkc.check();
  std::vector<Bin> bins;
  for (const auto& s : mkc.sets) {
    Bin b;
    b.capacity.assign(static_cast<std::size_t>(mkc.n), 0);
    for (int e : s) b.capacity[static_cast<std::size_t>(e)] = 1;
    b.open_cost = 1.0;
    bins.push_back(std::move(b));
  }
  Instance inst = Instance::with_shape(std::move(bins), std::vector<int>(static_cast<std::size_t>(mkc.n), 1),
                                       static_cast<double>(mkc.k));
  for (std::size_t l = 0; l < mkc.sets.size(); ++l)
    for (int e : mkc.sets[l]) inst.link(l, static_cast<std::size_t>(e)) = Link{{e, e + 1}, 1.0, 0.0};
  return inst;
}

// --- line planning --------------------------------------------------------

struct Edge {
  int u = 0, v = 0;
  double length = 1.0;
  bool operator==(const Edge&) const = default;
};

struct Graph {
  int num_nodes = 0;
  std::vector<Edge> edges;
  bool operator==(const Graph&) const = default;
};

struct Line {
  std::vector<int> stops;  // consecutive stops are joined by an edge
  int frequency = 1;
  double cost = 1.0;
  bool operator==(const Line&) const = default;
};

struct Trip {
  int origin = 0, destination = 0;
  bool operator==(const Trip&) const = default;
};

enum class Welfare { Binary, CarMilesSaved };

inline const char* to_string(Welfare w) {
  return w == Welfare::Binary ? "binary" : "car-miles-saved";
}

inline Welfare parse_welfare(const std::string& s) {
  if (s == "binary") return Welfare::Binary;
  if (s == "car-miles-saved") return Welfare::CarMilesSaved;
  throw Error("unknown welfare rule '" + s + "'");
}

struct RlppInstance {
  Graph graph;
  std::vector<Line> lines;
  int capacity = 1;  // bus capacity C
  std::vector<Trip> trips;
  Welfare welfare = Welfare::Binary;
  double budget = 0.0;
  double walk_radius = 0.0;  // Binary rule only

  bool operator==(const RlppInstance&) const = default;
};

inline void check_rlpp(const RlppInstance& r) {
  if (r.capacity < 1) throw Error("rlpp: bus capacity must be >= 1");
  std::set<std::pair<int, int>> adj;
  for (const Edge& e : r.graph.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= r.graph.num_nodes || e.v >= r.graph.num_nodes)
      throw Error("rlpp: edge endpoint out of range");
    if (!(e.length >= 0.0)) throw Error("rlpp: edge lengths must be >= 0");
    adj.insert({e.u, e.v});
    adj.insert({e.v, e.u});
  }
  for (const Line& line : r.lines) {
    if (line.frequency < 1) throw Error("rlpp: line frequency must be >= 1");
    if (line.stops.size() < 2) throw Error("rlpp: a line needs at least one edge");
    for (std::size_t i = 0; i + 1 < line.stops.size(); ++i)
      if (!adj.count({line.stops[i], line.stops[i + 1]}))
        throw Error("rlpp: line stops are not joined by an edge");
  }
  for (const Trip& t : r.trips)
    if (t.origin < 0 || t.destination < 0 || t.origin >= r.graph.num_nodes ||
        t.destination >= r.graph.num_nodes)
      throw Error("rlpp: trip endpoint out of range");
}

inline std::vector<double> shortest_paths(const Graph& g, int source) {
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(g.num_nodes));
  for (const Edge& e : g.edges) {
    adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.length);
    adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.length);
  }
  std::vector<double> dist(static_cast<std::size_t>(g.num_nodes),
                           std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(source)] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (auto [v, w] : adj[static_cast<std::size_t>(u)]) {
      if (d + w < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = d + w;
        pq.emplace(d + w, v);
      }
    }
  }
  return dist;
}

/// Lines become bins (one dimension per edge, capacity C * f_l), trips
/// become items with rho = 1 and no assignment cost. A trip boards at stop a
/// and alights at stop b != a, chosen to minimise first plus last mile (ties
/// to the earliest boarding stop, then the earliest alighting stop); it uses
/// the edges between them.
inline Instance rlpp_build(const RlppInstance& r) {
  check_rlpp(r);
  std::vector<std::vector<double>> from(r.trips.size()), to(r.trips.size());
  for (std::size_t p = 0; p < r.trips.size(); ++p) {
    from[p] = shortest_paths(r.graph, r.trips[p].origin);
    to[p] = shortest_paths(r.graph, r.trips[p].destination);
  }
  std::vector<Bin> bins;
  for (const Line& line : r.lines) {
    Bin b;
    b.capacity.assign(line.stops.size() - 1, r.capacity * line.frequency);
    b.open_cost = line.cost;
    bins.push_back(std::move(b));
  }
  Instance inst = Instance::with_shape(std::move(bins), std::vector<int>(r.trips.size(), 1), r.budget);
  const double tol = 1e-12;
  for (std::size_t l = 0; l < r.lines.size(); ++l) {
    const auto& stops = r.lines[l].stops;
    for (std::size_t p = 0; p < r.trips.size(); ++p) {
      const double direct = from[p][static_cast<std::size_t>(r.trips[p].destination)];
      std::optional<std::pair<std::size_t, std::size_t>> best;
      double best_miles = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < stops.size(); ++a) {
        const double first = from[p][static_cast<std::size_t>(stops[a])];
        for (std::size_t b = 0; b < stops.size(); ++b) {
          if (a == b) continue;
          const double last = to[p][static_cast<std::size_t>(stops[b])];
          if (r.welfare == Welfare::Binary &&
              (first > r.walk_radius + tol || last > r.walk_radius + tol))
            continue;
          if (r.welfare == Welfare::CarMilesSaved &&
              (!std::isfinite(first) || !std::isfinite(last) || !std::isfinite(direct)))
            throw Error("rlpp: graph disconnected on a required shortest path");
          if (first + last < best_miles) {
            best_miles = first + last;
            best = {a, b};
          }
        }
      }
      if (!best) continue;
      double v = 1.0;
      if (r.welfare == Welfare::CarMilesSaved) {
        v = direct - best_miles;
        if (v <= tol) continue;
      }
      auto [a, b] = *best;
      inst.link(l, p) = Link{{static_cast<int>(std::min(a, b)), static_cast<int>(std::max(a, b))}, v, 0.0};
    }
  }
  return inst;
}

/// Complete graph on 2n nodes with unit lengths; trip i runs 2i -> 2i+1 and
/// line j visits the trips of set j in order. C = 1, unit line costs, B = k.
inline RlppInstance rlpp_from_max_k_cover(const MaxKCoverInstance& mkc) {
  mkc.check();
  RlppInstance r;
  r.graph.num_nodes = 2 * mkc.n;
  for (int u = 0; u < r.graph.num_nodes; ++u)
    for (int v = u + 1; v < r.graph.num_nodes; ++v) r.graph.edges.push_back({u, v, 1.0});
  for (int i = 0; i < mkc.n; ++i) r.trips.push_back({2 * i, 2 * i + 1});
  for (const auto& s : mkc.sets) {
    Line line;
    std::vector<int> elems = s;
    std::sort(elems.begin(), elems.end());
    for (int e : elems) {
      line.stops.push_back(2 * e);
      line.stops.push_back(2 * e + 1);
    }
    r.lines.push_back(std::move(line));
  }
  r.capacity = 1;
  r.welfare = Welfare::Binary;
  r.budget = static_cast<double>(mkc.k);
  return r;
}

struct GridRlppParams {
  int width = 8, height = 8;
  std::size_t lines = 20;
  int min_line_edges = 4, max_line_edges = 12;
  std::size_t trips = 200;
  int capacity = 3;
  double cost_per_edge = 1.0;
  double target_k = 3.0;  // B = target_k * max line cost
};

/// Grid graph with unit edges; lines are random self-avoiding walks, trips
/// are random distinct origin/destination pairs, welfare is car miles saved.
inline RlppInstance rlpp_grid(const GridRlppParams& prm, std::uint64_t seed) {
  if (prm.width < 2 || prm.height < 2 || prm.min_line_edges < 1 ||
      prm.max_line_edges < prm.min_line_edges)
    throw Error("rlpp_grid: invalid parameters");
  std::mt19937_64 rng(seed);
  auto uni_int = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  RlppInstance r;
  r.graph.num_nodes = prm.width * prm.height;
  auto node = [&](int x, int y) { return y * prm.width + x; };
  for (int y = 0; y < prm.height; ++y)
    for (int x = 0; x < prm.width; ++x) {
      if (x + 1 < prm.width) r.graph.edges.push_back({node(x, y), node(x + 1, y), 1.0});
      if (y + 1 < prm.height) r.graph.edges.push_back({node(x, y), node(x, y + 1), 1.0});
    }
  const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
  double max_cost = 0.0;
  while (r.lines.size() < prm.lines) {
    const int want = uni_int(prm.min_line_edges, prm.max_line_edges);
    int x = uni_int(0, prm.width - 1), y = uni_int(0, prm.height - 1);
    Line line;
    line.stops.push_back(node(x, y));
    std::set<int> seen{node(x, y)};
    while (static_cast<int>(line.stops.size()) - 1 < want) {
      std::vector<int> moves;
      for (int d = 0; d < 4; ++d) {
        int nx = x + dx[d], ny = y + dy[d];
        if (nx >= 0 && ny >= 0 && nx < prm.width && ny < prm.height && !seen.count(node(nx, ny)))
          moves.push_back(d);
      }
      if (moves.empty()) break;
      int d = moves[static_cast<std::size_t>(uni_int(0, static_cast<int>(moves.size()) - 1))];
      x += dx[d];
      y += dy[d];
      seen.insert(node(x, y));
      line.stops.push_back(node(x, y));
    }
    if (static_cast<int>(line.stops.size()) - 1 < prm.min_line_edges) continue;
    line.cost = prm.cost_per_edge * static_cast<double>(line.stops.size() - 1);
    max_cost = std::max(max_cost, line.cost);
    r.lines.push_back(std::move(line));
  }
  while (r.trips.size() < prm.trips) {
    int o = uni_int(0, r.graph.num_nodes - 1), d = uni_int(0, r.graph.num_nodes - 1);
    if (o != d) r.trips.push_back({o, d});
  }
  r.capacity = prm.capacity;
  r.welfare = Welfare::CarMilesSaved;
  r.budget = prm.target_k * max_cost;
  return r;
}

}  // namespace bap::gen
