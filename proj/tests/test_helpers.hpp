#pragma once

#include <random>
#include <vector>

#include "hgraph/event.hpp"
#include "hgraph/snapshot.hpp"

namespace hgraph::testing {

/// The running example log used across the core tests:
///   t1: NodeAdd n1, t1: NodeAdd n2, t2: EdgeAdd e1(n1,n2),
///   t3: NodeAttrSet n1 name -> "a", t4: EdgeDel e1, t5: NodeAdd n3
inline Eventlist example_log() {
  Eventlist log;
  log.push_back(node_add(1, 1));
  log.push_back(node_add(2, 1));
  log.push_back(edge_add(1, 1, 2, 2));
  log.push_back(node_attr_set(1, "name", std::nullopt, "a", 3));
  log.push_back(edge_del(1, 1, 2, 4));
  log.push_back(node_add(3, 5));
  log.assign_sequence_numbers();
  return log;
}

/// Small random valid eventlist over growing node/edge id spaces. Produces
/// adds, deletes, attr changes and transients, always applicable in order.
class RandomLog {
 public:
  explicit RandomLog(std::uint64_t seed) : rng_(seed) {}

  Eventlist make(std::size_t n_events, double del_ratio = 0.25,
                 double attr_ratio = 0.25, double transient_ratio = 0.05,
                 std::size_t ticks = 0) {
    Eventlist log;
    Snapshot state;
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;
    Time t = 1;
    if (ticks == 0) ticks = n_events;
    for (std::size_t i = 0; i < n_events; ++i) {
      if (i > 0 && chance(static_cast<double>(ticks) / n_events)) ++t;
      double roll = real();
      Event e;
      if (roll < transient_ratio && nodes.size() >= 2) {
        NodeId a = pick(nodes), b = pick(nodes);
        e = chance(0.5) ? transient_edge(next_edge_id_++, a, b, t)
                        : transient_node(next_node_id_++, t);
      } else if (roll < transient_ratio + attr_ratio && !nodes.empty()) {
        NodeId id = pick(nodes);
        const auto& attrs = state.nodes().at(id);
        std::string key = "k" + std::to_string(rng_() % 4);
        std::optional<std::string> old;
        if (auto it = attrs.find(key); it != attrs.end()) old = it->second;
        std::optional<std::string> val;
        if (!old || chance(0.7)) val = "v" + std::to_string(rng_() % 16);
        if (!old && !val) val = "v0";
        e = node_attr_set(id, key, old, val, t);
      } else if (roll < transient_ratio + attr_ratio + del_ratio &&
                 !edges.empty()) {
        std::size_t j = rng_() % edges.size();
        EdgeId id = edges[j];
        const auto& rec = state.edges().at(id);
        for (const auto& [k, v] : rec.attrs) {
          Event clear = edge_attr_set(id, k, v, std::nullopt, t);
          state.apply(clear);
          log.push_back(clear);
        }
        e = edge_del(id, rec.from, rec.to, t, rec.directed);
        edges.erase(edges.begin() + j);
      } else if (!nodes.empty() && chance(0.6)) {
        NodeId a = pick(nodes), b = pick(nodes);
        EdgeId id = next_edge_id_++;
        e = edge_add(id, a, b, t);
        edges.push_back(id);
      } else {
        NodeId id = next_node_id_++;
        e = node_add(id, t);
        nodes.push_back(id);
      }
      state.apply(e);
      log.push_back(e);
    }
    log.assign_sequence_numbers();
    return log;
  }

 private:
  bool chance(double p) { return real() < p; }
  double real() { return std::uniform_real_distribution<double>(0, 1)(rng_); }
  template <typename T>
  T pick(const std::vector<T>& v) {
    return v[rng_() % v.size()];
  }

  std::mt19937_64 rng_;
  NodeId next_node_id_ = 1;
  EdgeId next_edge_id_ = 1;
};

}  // namespace hgraph::testing
