#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgraph/diff_function.hpp"
#include "hgraph/event.hpp"
#include "hgraph/storage.hpp"

namespace hgraph {

using SkelNodeId = std::uint32_t;
inline constexpr SkelNodeId kSuperRoot = 0;

/// Construction parameters of an index.
struct BuildParams {
  std::uint64_t leaf_size = 1000;  // events per leaf-eventlist
  std::uint32_t arity = 2;         // children per interior node
  DiffFunctionSpec function = DiffFunctionSpec::balanced();
  PartitionMap partitions = {};

  void validate() const {
    if (leaf_size < 1) throw Error("build params: leaf size must be >= 1");
    if (arity < 2) throw Error("build params: arity must be >= 2");
    if (partitions.count < 1) throw Error("build params: need >= 1 partition");
    DiffFunctionSpec::validated(function);
  }
};

/// Per-component, per-partition encoded payload sizes.
struct EdgeWeights {
  // by_component[c][p]
  std::array<std::vector<std::uint64_t>, kComponentCount> by_component;

  explicit EdgeWeights(std::uint16_t partitions = 1) {
    for (auto& v : by_component) v.assign(partitions, 0);
  }

  std::uint64_t component_total(Component c) const {
    std::uint64_t n = 0;
    for (std::uint64_t v : by_component[static_cast<int>(c)]) n += v;
    return n;
  }
};

struct SkeletonNode {
  SkelNodeId id = 0;
  std::uint32_t level = 0;  // leaves are level 1; the super-root sits above all
  bool leaf = false;
  bool materialized = false;
  std::uint32_t leaf_index = 0;  // valid when leaf
  Time t_begin = 0;
  Time t_end = 0;
};

struct SkeletonEdge {
  enum class Kind : std::uint8_t {
    Hierarchy = 0,      // parent -> child delta
    LeafForward = 1,    // leaf i -> leaf i+1, eventlist applied forward
    LeafBackward = 2,   // leaf i+1 -> leaf i, same eventlist applied backward
    Materialization = 3,
  };

  std::uint32_t id = 0;
  SkelNodeId from = 0;
  SkelNodeId to = 0;
  Kind kind = Kind::Hierarchy;
  bool live = true;
  std::uint64_t payload = 0;   // delta id or eventlist id; 0 for materialization
  std::uint32_t segment = 0;   // segment index for leaf edges
  EdgeWeights weights;

  std::uint64_t weight_for(const AttrOptions& opts, bool transients = false) const {
    if (kind == Kind::Materialization) return 0;
    std::uint64_t w = weights.component_total(Component::Struct);
    if (!opts.node.none()) w += weights.component_total(Component::NodeAttr);
    if (!opts.edge.none()) w += weights.component_total(Component::EdgeAttr);
    if (transients) w += weights.component_total(Component::Transient);
    return w;
  }
};

/// One sealed leaf-eventlist: events [E_start, E_end) between two leaves.
struct SegmentInfo {
  std::uint64_t id = 0;     // content-addressed eventlist id
  Time e_start = 0;
  std::uint64_t count = 0;  // event count
};

/// The in-memory weighted graph the planner works on. Immutable snapshots of
/// it are handed to readers; the writer swaps in a new version on mutation.
struct Skeleton {
  BuildParams params;
  std::vector<SkeletonNode> nodes;  // indexed by node id
  std::vector<SkeletonEdge> edges;  // indexed by edge id
  std::vector<std::vector<std::uint32_t>> out;  // node -> edge ids
  std::vector<SegmentInfo> segments;            // segment i connects leaf i, i+1
  std::vector<SkelNodeId> leaves;               // leaf index -> node id
  /// Cascade state: levels with nodes awaiting enough siblings for a parent.
  std::vector<std::vector<SkelNodeId>> pending;
  Time max_time = 0;  // newest timestamp covered (sealed or buffered)

  SkelNodeId add_node(SkeletonNode n) {
    n.id = static_cast<SkelNodeId>(nodes.size());
    nodes.push_back(n);
    out.emplace_back();
    return n.id;
  }

  std::uint32_t add_edge(SkeletonEdge e) {
    e.id = static_cast<std::uint32_t>(edges.size());
    edges.push_back(e);
    out[e.from].push_back(e.id);
    return e.id;
  }

  void remove_edge(std::uint32_t edge_id) {
    std::erase(out[edges[edge_id].from], edge_id);
    edges[edge_id].live = false;
  }

  bool reachable_from_super_root(SkelNodeId target) const {
    std::vector<bool> seen(nodes.size(), false);
    std::vector<SkelNodeId> stack{kSuperRoot};
    seen[kSuperRoot] = true;
    auto visit = [&](SkelNodeId n) {
      if (!seen[n]) {
        seen[n] = true;
        stack.push_back(n);
      }
    };
    while (!stack.empty()) {
      SkelNodeId n = stack.back();
      stack.pop_back();
      if (n == target) return true;
      for (std::uint32_t eid : out[n]) visit(edges[eid].to);
      // Hierarchy edges are traversable upward too (delta reversal); leaf
      // edges already come in explicit forward/backward pairs.
      for (const SkeletonEdge& e : edges)
        if (e.live && e.kind == SkeletonEdge::Kind::Hierarchy && e.to == n)
          visit(e.from);
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Manifest: versioned, self-describing document persisted under a reserved
// storage key.

inline constexpr int kManifestFormat = 1;

inline nlohmann::json function_to_json(const DiffFunctionSpec& f) {
  return {{"kind", static_cast<int>(f.kind)},
          {"r1", f.r1},
          {"r2", f.r2},
          {"seed", f.seed}};
}

inline DiffFunctionSpec function_from_json(const nlohmann::json& j) {
  DiffFunctionSpec f;
  f.kind = static_cast<DiffFunctionSpec::Kind>(j.at("kind").get<int>());
  f.r1 = j.at("r1").get<double>();
  f.r2 = j.at("r2").get<double>();
  f.seed = j.at("seed").get<std::uint64_t>();
  return DiffFunctionSpec::validated(f);
}

inline std::string skeleton_to_manifest(const Skeleton& sk,
                                        const Eventlist& buffer) {
  nlohmann::json j;
  j["format"] = kManifestFormat;
  j["params"] = {{"leaf_size", sk.params.leaf_size},
                 {"arity", sk.params.arity},
                 {"function", function_to_json(sk.params.function)},
                 {"partitions", sk.params.partitions.count},
                 {"partition_seed", sk.params.partitions.seed}};
  j["max_time"] = sk.max_time;
  nlohmann::json nodes = nlohmann::json::array();
  for (const SkeletonNode& n : sk.nodes)
    nodes.push_back({{"level", n.level},
                     {"leaf", n.leaf},
                     {"leaf_index", n.leaf_index},
                     {"t0", n.t_begin},
                     {"t1", n.t_end}});
  j["nodes"] = std::move(nodes);
  nlohmann::json edges = nlohmann::json::array();
  for (const SkeletonEdge& e : sk.edges) {
    // Materialization is runtime memory state; a reopened index starts with
    // nothing materialized.
    if (!e.live || e.kind == SkeletonEdge::Kind::Materialization) continue;
    nlohmann::json w = nlohmann::json::array();
    for (const auto& per_part : e.weights.by_component) w.push_back(per_part);
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"kind", static_cast<int>(e.kind)},
                     {"payload", e.payload},
                     {"segment", e.segment},
                     {"weights", std::move(w)}});
  }
  j["edges"] = std::move(edges);
  nlohmann::json segs = nlohmann::json::array();
  for (const SegmentInfo& s : sk.segments)
    segs.push_back({{"id", s.id}, {"e_start", s.e_start}, {"count", s.count}});
  j["segments"] = std::move(segs);
  j["leaves"] = sk.leaves;
  j["pending"] = sk.pending;
  // The unsealed recent eventlist rides along so reopening is exact.
  std::string buf_bytes = encode_eventlist(buffer);
  j["buffer_hex"] = [&] {
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(buf_bytes.size() * 2);
    for (unsigned char c : buf_bytes) {
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xf]);
    }
    return out;
  }();
  return j.dump();
}

inline std::pair<Skeleton, Eventlist> skeleton_from_manifest(
    const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("format").get<int>() != kManifestFormat)
    throw CorruptionError("manifest: unsupported format");
  Skeleton sk;
  sk.params.leaf_size = j["params"].at("leaf_size").get<std::uint64_t>();
  sk.params.arity = j["params"].at("arity").get<std::uint32_t>();
  sk.params.function = function_from_json(j["params"].at("function"));
  sk.params.partitions.count = j["params"].at("partitions").get<std::uint16_t>();
  sk.params.partitions.seed = j["params"].at("partition_seed").get<std::uint64_t>();
  sk.max_time = j.at("max_time").get<Time>();
  for (const auto& n : j.at("nodes")) {
    SkeletonNode node;
    node.level = n.at("level").get<std::uint32_t>();
    node.leaf = n.at("leaf").get<bool>();
    node.leaf_index = n.at("leaf_index").get<std::uint32_t>();
    node.t_begin = n.at("t0").get<Time>();
    node.t_end = n.at("t1").get<Time>();
    sk.add_node(node);
  }
  for (const auto& e : j.at("edges")) {
    SkeletonEdge edge;
    edge.from = e.at("from").get<SkelNodeId>();
    edge.to = e.at("to").get<SkelNodeId>();
    edge.kind = static_cast<SkeletonEdge::Kind>(e.at("kind").get<int>());
    edge.payload = e.at("payload").get<std::uint64_t>();
    edge.segment = e.at("segment").get<std::uint32_t>();
    edge.weights = EdgeWeights(sk.params.partitions.count);
    const auto& w = e.at("weights");
    for (int c = 0; c < kComponentCount; ++c)
      edge.weights.by_component[c] = w.at(c).get<std::vector<std::uint64_t>>();
    sk.add_edge(edge);
  }
  for (const auto& s : j.at("segments")) {
    SegmentInfo seg;
    seg.id = s.at("id").get<std::uint64_t>();
    seg.e_start = s.at("e_start").get<Time>();
    seg.count = s.at("count").get<std::uint64_t>();
    sk.segments.push_back(seg);
  }
  sk.leaves = j.at("leaves").get<std::vector<SkelNodeId>>();
  sk.pending = j.at("pending").get<std::vector<std::vector<SkelNodeId>>>();

  std::string hexstr = j.at("buffer_hex").get<std::string>();
  std::string bytes;
  bytes.reserve(hexstr.size() / 2);
  auto val = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw CorruptionError("manifest: bad buffer hex");
  };
  for (std::size_t i = 0; i + 1 < hexstr.size(); i += 2)
    bytes.push_back(static_cast<char>(val(hexstr[i]) * 16 + val(hexstr[i + 1])));
  return {std::move(sk), decode_eventlist(bytes)};
}

}  // namespace hgraph
