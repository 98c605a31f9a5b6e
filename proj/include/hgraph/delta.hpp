#pragma once

#include <algorithm>
#include <vector>

#include "hgraph/attr_options.hpp"
#include "hgraph/entry.hpp"
#include "hgraph/event.hpp"

namespace hgraph {

/// Columnar components a delta or eventlist splits into. Struct holds
/// node/edge existence, the attr components hold attribute bindings, and
/// Transient holds transient events (eventlists only).
enum class Component : std::uint8_t {
  Struct = 0,
  NodeAttr = 1,
  EdgeAttr = 2,
  Transient = 3,
};

constexpr int kComponentCount = 4;

inline const char* component_name(Component c) {
  switch (c) {
    case Component::Struct: return "struct";
    case Component::NodeAttr: return "nodeattr";
    case Component::EdgeAttr: return "edgeattr";
    case Component::Transient: return "transient";
  }
  return "?";
}

/// Set difference between two graph states. Applying `adds` and removing
/// `dels` from the source state yields the target state. The columnar
/// split is implicit in the EntrySet layout: nodes+edges form the struct
/// component, the binding sets form the attr components.
struct Delta {
  EntrySet adds;
  EntrySet dels;

  bool empty() const { return adds.empty() && dels.empty(); }
  std::size_t entry_count() const { return adds.size() + dels.size(); }

  friend bool operator==(const Delta&, const Delta&) = default;
};

/// Swaps additions and deletions; used to traverse index edges against
/// their stored direction.
inline Delta reverse(Delta d) {
  std::swap(d.adds, d.dels);
  return d;
}

namespace detail {

template <typename K, typename V>
void map_diff(const std::map<K, V>& from, const std::map<K, V>& to,
              std::map<K, V>& only_to, std::map<K, V>& only_from) {
  auto a = from.begin();
  auto b = to.begin();
  while (a != from.end() || b != to.end()) {
    if (a == from.end()) {
      only_to.insert(*b++);
    } else if (b == to.end()) {
      only_from.insert(*a++);
    } else if (a->first < b->first) {
      only_from.insert(*a++);
    } else if (b->first < a->first) {
      only_to.insert(*b++);
    } else {
      if (a->second != b->second) {
        // Same edge id with different payload cannot occur while ids are
        // never reassigned; treat as replace.
        only_from.insert(*a);
        only_to.insert(*b);
      }
      ++a;
      ++b;
    }
  }
}

template <typename T>
void set_diff(const std::set<T>& from, const std::set<T>& to,
              std::set<T>& only_to, std::set<T>& only_from) {
  std::set_difference(to.begin(), to.end(), from.begin(), from.end(),
                      std::inserter(only_to, only_to.end()));
  std::set_difference(from.begin(), from.end(), to.begin(), to.end(),
                      std::inserter(only_from, only_from.end()));
}

}  // namespace detail

/// Element- and binding-level set difference: adds = to \ from,
/// dels = from \ to.
inline Delta diff(const EntrySet& from, const EntrySet& to) {
  Delta d;
  detail::set_diff(from.nodes, to.nodes, d.adds.nodes, d.dels.nodes);
  detail::map_diff(from.edges, to.edges, d.adds.edges, d.dels.edges);
  detail::set_diff(from.node_attrs, to.node_attrs, d.adds.node_attrs,
                   d.dels.node_attrs);
  detail::set_diff(from.edge_attrs, to.edge_attrs, d.adds.edge_attrs,
                   d.dels.edge_attrs);
  return d;
}

inline Delta diff(const Snapshot& from, const Snapshot& to) {
  return diff(to_entry_set(from), to_entry_set(to));
}

/// Applies a delta in place. Preconditions: dels are present, adds are
/// absent; a violation means the index or storage is inconsistent and
/// raises CorruptionError naming the element.
inline void apply_delta_inplace(EntrySet& s, const Delta& d) {
  auto corrupt = [](const std::string& what) {
    return CorruptionError("delta application: " + what);
  };
  for (NodeId id : d.dels.nodes)
    if (s.nodes.erase(id) == 0)
      throw corrupt("deleting absent node " + std::to_string(id));
  for (const auto& [id, info] : d.dels.edges) {
    auto it = s.edges.find(id);
    if (it == s.edges.end() || !(it->second == info))
      throw corrupt("deleting absent edge " + std::to_string(id));
    s.edges.erase(it);
  }
  for (const auto& b : d.dels.node_attrs)
    if (s.node_attrs.erase(b) == 0)
      throw corrupt("deleting absent node attr binding on node " +
                    std::to_string(std::get<0>(b)));
  for (const auto& b : d.dels.edge_attrs)
    if (s.edge_attrs.erase(b) == 0)
      throw corrupt("deleting absent edge attr binding on edge " +
                    std::to_string(std::get<0>(b)));

  for (NodeId id : d.adds.nodes)
    if (!s.nodes.insert(id).second)
      throw corrupt("adding already-present node " + std::to_string(id));
  for (const auto& [id, info] : d.adds.edges)
    if (!s.edges.emplace(id, info).second)
      throw corrupt("adding already-present edge " + std::to_string(id));
  for (const auto& b : d.adds.node_attrs)
    if (!s.node_attrs.insert(b).second)
      throw corrupt("adding already-present node attr binding on node " +
                    std::to_string(std::get<0>(b)));
  for (const auto& b : d.adds.edge_attrs)
    if (!s.edge_attrs.insert(b).second)
      throw corrupt("adding already-present edge attr binding on edge " +
                    std::to_string(std::get<0>(b)));
}

inline EntrySet apply_delta(EntrySet s, const Delta& d) {
  apply_delta_inplace(s, d);
  return s;
}

/// Keeps the struct component always; keeps only the attribute bindings
/// admitted by `opts`. Transients never appear in snapshot deltas.
inline Delta project(const Delta& d, const AttrOptions& opts) {
  Delta out;
  out.adds.nodes = d.adds.nodes;
  out.dels.nodes = d.dels.nodes;
  out.adds.edges = d.adds.edges;
  out.dels.edges = d.dels.edges;
  auto filter = [](const std::set<AttrBinding>& in, const AttrSpec& spec,
                   std::set<AttrBinding>& out_set) {
    for (const auto& b : in)
      if (spec.admits(std::get<1>(b))) out_set.insert(b);
  };
  filter(d.adds.node_attrs, opts.node, out.adds.node_attrs);
  filter(d.dels.node_attrs, opts.node, out.dels.node_attrs);
  filter(d.adds.edge_attrs, opts.edge, out.adds.edge_attrs);
  filter(d.dels.edge_attrs, opts.edge, out.dels.edge_attrs);
  return out;
}

/// Projects a whole state the same way (used for query results).
inline EntrySet project(const EntrySet& s, const AttrOptions& opts) {
  EntrySet out;
  out.nodes = s.nodes;
  out.edges = s.edges;
  for (const auto& b : s.node_attrs)
    if (opts.node.admits(std::get<1>(b))) out.node_attrs.insert(b);
  for (const auto& b : s.edge_attrs)
    if (opts.edge.admits(std::get<1>(b))) out.edge_attrs.insert(b);
  return out;
}

// ---------------------------------------------------------------------------
// Serialization. Per component, a sorted, length-prefixed binary encoding so
// equal deltas are byte-equal. Weights count entry payload bytes, so the
// weight of a chain of deltas is directly comparable with the encoded size
// of a snapshot.

constexpr std::size_t kNodeEntryBytes = 1 + 8;
constexpr std::size_t kEdgeEntryBytes = 1 + 8 + 8 + 8 + 1;

inline std::size_t binding_entry_bytes(const AttrBinding& b) {
  return 1 + 8 + 2 + std::get<1>(b).size() + 2 + std::get<2>(b).size();
}

/// Encoded payload size of a state's component (headers excluded). The
/// struct weight of a shortest path equals this measure of the leaf state
/// when the differential function telescopes.
inline std::uint64_t encoded_entry_bytes(const EntrySet& s, Component c) {
  switch (c) {
    case Component::Struct:
      return s.nodes.size() * kNodeEntryBytes + s.edges.size() * kEdgeEntryBytes;
    case Component::NodeAttr: {
      std::uint64_t n = 0;
      for (const auto& b : s.node_attrs) n += binding_entry_bytes(b);
      return n;
    }
    case Component::EdgeAttr: {
      std::uint64_t n = 0;
      for (const auto& b : s.edge_attrs) n += binding_entry_bytes(b);
      return n;
    }
    case Component::Transient:
      return 0;
  }
  return 0;
}

inline std::uint64_t encoded_entry_bytes(const Delta& d, Component c) {
  return encoded_entry_bytes(d.adds, c) + encoded_entry_bytes(d.dels, c);
}

namespace detail {

inline void encode_nodes(std::string& out, const std::set<NodeId>& ids) {
  put_u32(out, static_cast<std::uint32_t>(ids.size()));
  for (NodeId id : ids) {
    put_u8(out, 0);
    put_u64(out, id);
  }
}

inline void encode_edges(std::string& out, const std::map<EdgeId, EdgeInfo>& es) {
  put_u32(out, static_cast<std::uint32_t>(es.size()));
  for (const auto& [id, info] : es) {
    put_u8(out, 1);
    put_u64(out, id);
    put_u64(out, info.from);
    put_u64(out, info.to);
    put_u8(out, info.directed ? 1 : 0);
  }
}

inline void encode_bindings(std::string& out, const std::set<AttrBinding>& bs) {
  put_u32(out, static_cast<std::uint32_t>(bs.size()));
  for (const auto& [id, key, value] : bs) {
    put_u8(out, 2);
    put_u64(out, id);
    put_str(out, key);
    put_str(out, value);
  }
}

inline void decode_nodes(Cursor& cur, std::set<NodeId>& ids) {
  std::uint32_t n = cur.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    if (cur.u8() != 0) throw CorruptionError("struct component: bad node tag");
    ids.insert(cur.u64());
  }
}

inline void decode_edges(Cursor& cur, std::map<EdgeId, EdgeInfo>& es) {
  std::uint32_t n = cur.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    if (cur.u8() != 1) throw CorruptionError("struct component: bad edge tag");
    EdgeId id = cur.u64();
    EdgeInfo info;
    info.from = cur.u64();
    info.to = cur.u64();
    info.directed = cur.u8() != 0;
    es.emplace(id, info);
  }
}

inline void decode_bindings(Cursor& cur, std::set<AttrBinding>& bs) {
  std::uint32_t n = cur.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    if (cur.u8() != 2) throw CorruptionError("attr component: bad binding tag");
    std::uint64_t id = cur.u64();
    std::string key = cur.str();
    std::string value = cur.str();
    bs.emplace(id, std::move(key), std::move(value));
  }
}

}  // namespace detail

/// Encodes one component of a delta (adds first, then dels).
inline std::string encode_delta_component(const Delta& d, Component c) {
  std::string out;
  switch (c) {
    case Component::Struct:
      detail::encode_nodes(out, d.adds.nodes);
      detail::encode_edges(out, d.adds.edges);
      detail::encode_nodes(out, d.dels.nodes);
      detail::encode_edges(out, d.dels.edges);
      break;
    case Component::NodeAttr:
      detail::encode_bindings(out, d.adds.node_attrs);
      detail::encode_bindings(out, d.dels.node_attrs);
      break;
    case Component::EdgeAttr:
      detail::encode_bindings(out, d.adds.edge_attrs);
      detail::encode_bindings(out, d.dels.edge_attrs);
      break;
    case Component::Transient:
      throw Error("snapshot deltas have no transient component");
  }
  return out;
}

/// Merges one decoded component into `d`.
inline void decode_delta_component(const std::string& bytes, Component c,
                                   Delta& d) {
  detail::Cursor cur{
      reinterpret_cast<const unsigned char*>(bytes.data()),
      reinterpret_cast<const unsigned char*>(bytes.data()) + bytes.size()};
  switch (c) {
    case Component::Struct:
      detail::decode_nodes(cur, d.adds.nodes);
      detail::decode_edges(cur, d.adds.edges);
      detail::decode_nodes(cur, d.dels.nodes);
      detail::decode_edges(cur, d.dels.edges);
      break;
    case Component::NodeAttr:
      detail::decode_bindings(cur, d.adds.node_attrs);
      detail::decode_bindings(cur, d.dels.node_attrs);
      break;
    case Component::EdgeAttr:
      detail::decode_bindings(cur, d.adds.edge_attrs);
      detail::decode_bindings(cur, d.dels.edge_attrs);
      break;
    case Component::Transient:
      throw CorruptionError("snapshot deltas have no transient component");
  }
  if (!cur.done()) throw CorruptionError("delta component: trailing bytes");
}

// ---------------------------------------------------------------------------
// Eventlist segments are stored columnar as well: each component holds its
// events in log order so partial replay stays ordered after a merge.

inline Component event_component(const Event& e) {
  if (is_transient_kind(e.kind)) return Component::Transient;
  if (e.kind == EventKind::NodeAttrSet) return Component::NodeAttr;
  if (e.kind == EventKind::EdgeAttrSet) return Component::EdgeAttr;
  return Component::Struct;
}

inline std::string encode_event_component(const std::vector<Event>& events,
                                          Component c) {
  std::string out;
  std::uint32_t n = 0;
  for (const Event& e : events)
    if (event_component(e) == c) ++n;
  detail::put_u32(out, n);
  for (const Event& e : events)
    if (event_component(e) == c) encode_event(out, e);
  return out;
}

inline std::vector<Event> decode_event_component(const std::string& bytes) {
  detail::Cursor cur{
      reinterpret_cast<const unsigned char*>(bytes.data()),
      reinterpret_cast<const unsigned char*>(bytes.data()) + bytes.size()};
  std::uint32_t n = cur.u32();
  std::vector<Event> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) out.push_back(decode_event(cur));
  if (!cur.done()) throw CorruptionError("event component: trailing bytes");
  return out;
}

inline std::uint64_t encoded_event_bytes(const std::vector<Event>& events,
                                         Component c) {
  std::string tmp;
  std::uint64_t n = 0;
  for (const Event& e : events) {
    if (event_component(e) != c) continue;
    tmp.clear();
    encode_event(tmp, e);
    n += tmp.size();
  }
  return n;
}

}  // namespace hgraph
