#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>

#include "hgraph/snapshot.hpp"
#include "hgraph/types.hpp"

namespace hgraph {

/// Endpoint payload of an edge existence entry.
struct EdgeInfo {
  NodeId from = 0;
  NodeId to = 0;
  bool directed = false;

  friend bool operator==(const EdgeInfo&, const EdgeInfo&) = default;
  friend auto operator<=>(const EdgeInfo&, const EdgeInfo&) = default;
};

/// (element id, key, value) attribute binding entry.
using AttrBinding = std::tuple<std::uint64_t, std::string, std::string>;

/// A graph state viewed as a plain set of entries: node existence, edge
/// existence, and attribute bindings. Unlike Snapshot, an EntrySet enforces
/// no graph invariants; interior index nodes produced by differential
/// functions are EntrySets that need not be valid graphs, and may even hold
/// several bindings for one attribute key.
struct EntrySet {
  std::set<NodeId> nodes;
  std::map<EdgeId, EdgeInfo> edges;
  std::set<AttrBinding> node_attrs;
  std::set<AttrBinding> edge_attrs;

  bool empty() const {
    return nodes.empty() && edges.empty() && node_attrs.empty() &&
           edge_attrs.empty();
  }
  std::size_t size() const {
    return nodes.size() + edges.size() + node_attrs.size() + edge_attrs.size();
  }
  void clear() {
    nodes.clear();
    edges.clear();
    node_attrs.clear();
    edge_attrs.clear();
  }

  friend bool operator==(const EntrySet&, const EntrySet&) = default;
};

inline EntrySet to_entry_set(const Snapshot& s) {
  EntrySet out;
  for (const auto& [id, attrs] : s.nodes()) {
    out.nodes.insert(id);
    for (const auto& [k, v] : attrs) out.node_attrs.emplace(id, k, v);
  }
  for (const auto& [id, rec] : s.edges()) {
    out.edges.emplace(id, EdgeInfo{rec.from, rec.to, rec.directed});
    for (const auto& [k, v] : rec.attrs) out.edge_attrs.emplace(id, k, v);
  }
  return out;
}

/// Converts back to a validated Snapshot. Fails if the entry set is not a
/// well-formed graph (dangling edge endpoints, duplicate bindings for one
/// key, or bindings without their element).
inline Snapshot to_snapshot(const EntrySet& es) {
  try {
    Snapshot s;
    for (NodeId id : es.nodes) s.apply(node_add(id, 0));
    for (const auto& [id, info] : es.edges)
      s.apply(edge_add(id, info.from, info.to, 0, info.directed));
    for (const auto& [id, key, value] : es.node_attrs)
      s.apply(node_attr_set(id, key, std::nullopt, value, 0));
    for (const auto& [id, key, value] : es.edge_attrs)
      s.apply(edge_attr_set(id, key, std::nullopt, value, 0));
    return s;
  } catch (const InapplicableEventError& e) {
    throw CorruptionError(std::string("entry set is not a valid graph: ") +
                          e.what());
  }
}

/// Deterministic selection hash for one entry: the same entry always hashes
/// the same for a given seed, which is what makes fractional differential
/// functions valid (the added and removed halves are chosen consistently).
inline std::uint64_t entry_select_hash(std::uint64_t seed, ElementRole role,
                                       std::uint64_t id) {
  return hash_combine(hash_combine(seed, static_cast<std::uint64_t>(role)), id);
}

inline std::uint64_t entry_select_hash(std::uint64_t seed, ElementRole role,
                                       const AttrBinding& b) {
  std::uint64_t h = entry_select_hash(seed, role, std::get<0>(b));
  h = hash_string(std::get<1>(b), h);
  h = hash_string(std::get<2>(b), h ^ 0x517cc1b727220a95ULL);
  return h;
}

/// True iff the hash of (seed, key) lands in the first `fraction` of the
/// 64-bit range. fraction 0 selects nothing; 1 selects everything.
inline bool hash_selected(std::uint64_t h, double fraction) {
  if (fraction <= 0.0) return false;
  if (fraction >= 1.0) return true;
  // Compare in double space; 2^64 as a double is exact.
  return static_cast<double>(h) < fraction * 18446744073709551616.0;
}

}  // namespace hgraph
