#pragma once

// JSON serialisation of instances, fractional solutions and line-planning
// instances. Uses nlohmann/json; doubles are written in shortest round-trip
// form, so write -> read -> write is byte-identical.

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "bap/colgen.hpp"
#include "bap/error.hpp"
#include "bap/gen.hpp"
#include "bap/model.hpp"

namespace bap::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Instance& inst) {
  Json j;
  j["L"] = inst.num_bins();
  j["P"] = inst.num_items();
  j["B"] = inst.budget;
  Json bins = Json::array();
  for (const Bin& b : inst.bins) bins.push_back({{"n", b.dims()}, {"f", b.capacity}, {"c", b.open_cost}});
  j["bins"] = std::move(bins);
  Json items = Json::array();
  for (int r : inst.rho) items.push_back({{"rho", r}});
  j["items"] = std::move(items);
  Json links = Json::array();
  for (std::size_t l = 0; l < inst.num_bins(); ++l)
    for (std::size_t p = 0; p < inst.num_items(); ++p)
      if (const auto& k = inst.link(l, p))
        links.push_back({{"l", l},
                         {"p", p},
                         {"lo", k->span.lo},
                         {"hi", k->span.hi},
                         {"v", k->reward},
                         {"c", k->cost}});
  j["links"] = std::move(links);
  return j;
}

inline Instance instance_from_json(const Json& j) {
  try {
    std::vector<Bin> bins;
    for (const auto& b : j.at("bins")) {
      Bin bin{b.at("f").get<std::vector<int>>(), b.at("c").get<double>()};
      if (b.contains("n") && b.at("n").get<int>() != bin.dims())
        throw Error("bin dimension count n does not match capacity vector");
      bins.push_back(std::move(bin));
    }
    std::vector<int> rho;
    for (const auto& it : j.at("items")) rho.push_back(it.at("rho").get<int>());
    if (j.contains("L") && j.at("L").get<std::size_t>() != bins.size())
      throw Error("L does not match the number of bins");
    if (j.contains("P") && j.at("P").get<std::size_t>() != rho.size())
      throw Error("P does not match the number of items");
    Instance inst = Instance::with_shape(std::move(bins), std::move(rho), j.at("B").get<double>());
    for (const auto& k : j.at("links")) {
      auto l = k.at("l").get<std::size_t>(), p = k.at("p").get<std::size_t>();
      if (l >= inst.num_bins() || p >= inst.num_items()) throw Error("link index out of range");
      if (inst.link(l, p)) throw Error("duplicate link entry");
      inst.link(l, p) = Link{{k.at("lo").get<int>(), k.at("hi").get<int>()},
                             k.at("v").get<double>(),
                             k.value("c", 0.0)};
    }
    return inst;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed instance JSON: ") + e.what());
  }
}

inline Json to_json(const FractionalSolution& s) {
  Json j;
  j["mode"] = s.mode.kind == RelaxationKind::Exact ? "exact" : "scaled";
  j["epsilon"] = s.mode.epsilon;
  j["lp_value"] = s.lp_value;
  j["budget_used"] = s.budget_used;
  j["budget_side"] = s.budget_side;
  j["max_config_cost"] = s.max_config_cost;
  j["converged"] = s.converged;
  j["iterations"] = s.iterations;
  Json cols = Json::array();
  for (std::size_t i = 0; i < s.columns.size(); ++i)
    cols.push_back({{"bin", s.columns[i].bin},
                    {"items", s.columns[i].items},
                    {"cost", s.columns[i].cost},
                    {"value", s.values[i]}});
  j["columns"] = std::move(cols);
  return j;
}

inline FractionalSolution fractional_from_json(const Json& j, const Instance& inst) {
  try {
    FractionalSolution s;
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "exact")
      s.mode = RelaxationMode::exact();
    else if (mode == "scaled")
      s.mode = RelaxationMode::scaled(j.at("epsilon").get<double>());
    else
      throw Error("unknown relaxation mode '" + mode + "'");
    s.lp_value = j.at("lp_value").get<double>();
    s.budget_used = j.at("budget_used").get<double>();
    s.budget_side = j.at("budget_side").get<double>();
    s.max_config_cost = j.at("max_config_cost").get<double>();
    s.converged = j.at("converged").get<bool>();
    s.iterations = j.at("iterations").get<std::size_t>();
    s.duals = DualPrices::zero(inst);
    for (const auto& c : j.at("columns")) {
      s.columns.push_back(make_configuration(inst, c.at("bin").get<std::size_t>(),
                                             c.at("items").get<std::vector<std::size_t>>()));
      s.values.push_back(c.at("value").get<double>());
    }
    return s;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed solution JSON: ") + e.what());
  }
}

inline Json to_json(const gen::RlppInstance& r) {
  Json j;
  Json edges = Json::array();
  for (const auto& e : r.graph.edges) edges.push_back({e.u, e.v, e.length});
  j["graph"] = {{"nodes", r.graph.num_nodes}, {"edges", std::move(edges)}};
  Json lines = Json::array();
  for (const auto& l : r.lines)
    lines.push_back({{"stops", l.stops}, {"frequency", l.frequency}, {"cost", l.cost}});
  j["lines"] = std::move(lines);
  j["C"] = r.capacity;
  Json trips = Json::array();
  for (const auto& t : r.trips) trips.push_back({t.origin, t.destination});
  j["trips"] = std::move(trips);
  j["welfare"] = gen::to_string(r.welfare);
  j["walk_radius"] = r.walk_radius;
  j["B"] = r.budget;
  return j;
}

inline gen::RlppInstance rlpp_from_json(const Json& j) {
  try {
    gen::RlppInstance r;
    r.graph.num_nodes = j.at("graph").at("nodes").get<int>();
    for (const auto& e : j.at("graph").at("edges"))
      r.graph.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    for (const auto& l : j.at("lines"))
      r.lines.push_back({l.at("stops").get<std::vector<int>>(), l.value("frequency", 1),
                         l.value("cost", 1.0)});
    r.capacity = j.at("C").get<int>();
    for (const auto& t : j.at("trips")) r.trips.push_back({t.at(0).get<int>(), t.at(1).get<int>()});
    r.welfare = gen::parse_welfare(j.value("welfare", std::string("binary")));
    r.walk_radius = j.value("walk_radius", 0.0);
    r.budget = j.at("B").get<double>();
    gen::check_rlpp(r);
    return r;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed RLPP JSON: ") + e.what());
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error("invalid JSON in '" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

/// Reads either a core instance or an RLPP instance (detected by its
/// "graph" key, then mapped onto the core model).
inline Instance read_instance_file(const std::string& path) {
  Json j = read_json_file(path);
  if (j.contains("graph")) return gen::rlpp_build(rlpp_from_json(j));
  return instance_from_json(j);
}

}  // namespace bap::io
