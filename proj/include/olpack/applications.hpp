#pragma once

// Reductions of specific online problems to PackingInstance form.

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "olpack/core.hpp"

namespace olpack {

struct KnapsackItem {
  double value = 0.0;
  double weight = 0.0;
};

struct KnapsackSpec {
  std::vector<KnapsackItem> items;
  double capacity = 0.0;
  bool include_box = true;
};

/// x_j is the value taken from item j. Row 0 is the knapsack
/// (coefficient w_j / v_j, capacity C); with the box on, row j+1 bounds
/// x_j / v_j <= 1.
inline PackingInstance build_knapsack(const KnapsackSpec& spec) {
  if (!(spec.capacity > 0.0)) throw std::invalid_argument("knapsack: capacity must be > 0");
  for (const auto& it : spec.items)
    if (!(it.value > 0.0) || !(it.weight > 0.0)) throw std::invalid_argument("knapsack: value and weight must be > 0");

  PackingInstance inst;
  const std::size_t n = spec.items.size();
  inst.m = spec.include_box ? n + 1 : 1;
  inst.b.assign(inst.m, 1.0);
  inst.b[0] = spec.capacity;
  inst.columns.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& it = spec.items[j];
    Column col;
    col.piece = Linear{1.0};
    col.coeffs.push_back({0, it.weight / it.value});
    if (spec.include_box) col.coeffs.push_back({j + 1, 1.0 / it.value});
    inst.columns.push_back(std::move(col));
  }
  return inst;
}

struct Edge {
  std::string id;
  std::string from;
  std::string to;
  double capacity = 1.0;
};

struct ThroughputRequest {
  std::string source;
  std::string target;
  std::vector<std::vector<std::string>> paths;  // each path is an ordered list of edge ids
};

struct ThroughputSpec {
  std::vector<Edge> edges;
  std::vector<ThroughputRequest> requests;
  bool directed = false;
};

/// One variable per (request, path); a request's paths arrive consecutively.
/// Rows: one per edge (capacity c(e)), then one per request (capacity 1).
inline PackingInstance build_throughput(const ThroughputSpec& spec) {
  std::map<std::string, std::size_t> edge_row;
  for (std::size_t e = 0; e < spec.edges.size(); ++e) {
    if (!(spec.edges[e].capacity > 0.0)) throw std::invalid_argument("throughput: edge capacity must be > 0");
    if (!edge_row.emplace(spec.edges[e].id, e).second)
      throw std::invalid_argument("throughput: duplicate edge id " + spec.edges[e].id);
  }
  const std::size_t edges = spec.edges.size();

  PackingInstance inst;
  inst.m = edges + spec.requests.size();
  inst.b.assign(inst.m, 1.0);
  for (std::size_t e = 0; e < edges; ++e) inst.b[e] = spec.edges[e].capacity;

  for (std::size_t r = 0; r < spec.requests.size(); ++r) {
    const auto& req = spec.requests[r];
    for (const auto& path : req.paths) {
      if (path.empty()) throw std::invalid_argument("throughput: empty path");
      Column col;
      col.piece = Linear{1.0};
      std::vector<bool> on_path(edges, false);
      std::string at = req.source;
      for (const auto& id : path) {
        auto it = edge_row.find(id);
        if (it == edge_row.end()) throw std::invalid_argument("throughput: path uses unknown edge " + id);
        if (on_path[it->second]) throw std::invalid_argument("throughput: path repeats edge " + id);
        on_path[it->second] = true;
        const auto& edge = spec.edges[it->second];
        if (edge.from == at) at = edge.to;
        else if (!spec.directed && edge.to == at) at = edge.from;
        else throw std::invalid_argument("throughput: path is not connected at edge " + id);
      }
      if (at != req.target) throw std::invalid_argument("throughput: path does not end at the request target");
      for (std::size_t e = 0; e < edges; ++e)
        if (on_path[e]) col.coeffs.push_back({e, 1.0});
      col.coeffs.push_back({edges + r, 1.0});
      inst.columns.push_back(std::move(col));
    }
  }
  return inst;
}

struct OoicSpec {
  std::vector<ConcavePiece> revenue;  // g_t, one per slot
  double inventory = 0.0;             // Delta
  double min_slope = 0.0;             // optional bounds on g_t'(0); 0 disables
  double max_slope = 0.0;
};

/// maximize sum_t g_t(x_t) s.t. sum_t x_t <= Delta.
inline PackingInstance build_ooic(const OoicSpec& spec) {
  if (!(spec.inventory > 0.0)) throw std::invalid_argument("ooic: inventory must be > 0");
  const bool bounded = spec.min_slope > 0.0 || spec.max_slope > 0.0;
  if (bounded && !(spec.min_slope > 0.0 && spec.min_slope <= spec.max_slope))
    throw std::invalid_argument("ooic: need 0 < min_slope <= max_slope");

  PackingInstance inst;
  inst.m = 1;
  inst.b = {spec.inventory};
  for (const auto& g : spec.revenue) {
    if (auto err = g.parameter_error(); !err.empty()) throw std::invalid_argument("ooic: " + err);
    if (bounded) {
      const double d0 = g.marginal(0.0);
      if (std::isfinite(d0) && (d0 < spec.min_slope || d0 > spec.max_slope))
        throw std::invalid_argument("ooic: initial slope outside [min_slope, max_slope]");
    }
    Column col;
    col.piece = g;
    col.coeffs.push_back({0, 1.0});
    inst.columns.push_back(std::move(col));
  }
  return inst;
}

}  // namespace olpack
