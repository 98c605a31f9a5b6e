#pragma once

#include <atomic>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <thread>
#include <unordered_map>
#include <vector>

#include "hgraph/delta.hpp"
#include "hgraph/diff_function.hpp"
#include "hgraph/entry.hpp"
#include "hgraph/snapshot.hpp"
#include "hgraph/storage.hpp"

namespace hgraph {

using GraphId = std::uint64_t;
inline constexpr GraphId kCurrentGraphId = 0;

/// Growable bit vector, widened in whole-word increments only when a high
/// bit is actually set, so elements that belong to few graphs stay small.
class Bitmap {
 public:
  bool get(std::uint32_t i) const {
    std::uint32_t w = i >> 6;
    if (w >= words_.size()) return false;
    return (words_[w] >> (i & 63)) & 1;
  }
  void set(std::uint32_t i) {
    std::uint32_t w = i >> 6;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= std::uint64_t{1} << (i & 63);
  }
  void clear(std::uint32_t i) {
    std::uint32_t w = i >> 6;
    if (w < words_.size()) words_[w] &= ~(std::uint64_t{1} << (i & 63));
  }
  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }
  std::size_t word_count() const { return words_.size(); }

 private:
  std::vector<std::uint64_t> words_;
};

enum class GraphKind : std::uint8_t { Current = 0, Materialized = 1, Historical = 2 };

/// Pool statistics document, rendered to a machine-readable form by the CLI.
struct PoolStats {
  struct PerGraph {
    GraphId id;
    GraphKind kind;
    std::uint32_t bit;
    bool live;
    std::optional<GraphId> dependency;
    std::uint64_t explicit_bit_writes;
  };
  std::uint64_t node_slots = 0;
  std::uint64_t edge_slots = 0;
  std::uint64_t live_nodes = 0;
  std::uint64_t live_edges = 0;
  std::uint64_t attr_value_cells = 0;
  std::uint64_t bitmap_words = 0;
  std::uint64_t approx_bytes = 0;
  std::vector<PerGraph> graphs;
};

/// In-memory union of all active graphs: the current graph, historical
/// snapshots, and materialized index nodes. Each element (and each distinct
/// attribute value) carries a bitmap resolving membership per graph.
///
/// Bit scheme: bits 0 and 1 are reserved for the current graph (membership,
/// and recently-deleted-but-not-yet-indexed). A materialized graph holds one
/// bit. A historical graph holds an aligned bit pair {2i, 2i+1}: for a graph
/// dependent on a materialized/current graph, bit 2i is an override flag --
/// while clear, membership mirrors the dependency (so overlaying a graph
/// equal to its dependency writes no element bits at all); when set, bit
/// 2i+1 is authoritative.
class GraphPool {
 public:
  explicit GraphPool(PartitionMap pm = {}, std::uint64_t memory_limit_bytes = 0)
      : pm_(pm), memory_limit_(memory_limit_bytes), shards_(pm.count) {
    MappingEntry current;
    current.kind = GraphKind::Current;
    current.bit = 0;
    current.live = true;
    current.committed = true;
    mapping_.emplace(kCurrentGraphId, current);
    next_bit_ = 2;
  }

  GraphPool(const GraphPool&) = delete;
  GraphPool& operator=(const GraphPool&) = delete;

  const PartitionMap& partition_map() const { return pm_; }

  // -------------------------------------------------------------------------
  // Current graph maintenance.

  /// Applies one event to the current graph, with the same applicability
  /// checks as Snapshot::apply. Elements deleted here keep bit 1 set until
  /// forget_recent_deletions() runs after the region is sealed into the
  /// index.
  void apply_current_event(const Event& e) {
    std::unique_lock lock(pool_mu_);
    apply_current_locked(e);
  }

  void forget_recent_deletions() {
    std::unique_lock lock(pool_mu_);
    for (const ElemRef& r : recent_deletions_) {
      Bitmap* bits = elem_bits(r);
      if (bits) bits->clear(1);
    }
    recent_deletions_.clear();
  }

  /// Seeds the current graph from a full state. Only valid on a pool whose
  /// current graph is still empty (used when reopening a persisted index).
  void load_current(const EntrySet& state) {
    std::unique_lock lock(pool_mu_);
    for (const Shard& sh : shards_)
      if (!sh.nodes.empty() || !sh.edges.empty())
        throw Error("graph pool: load_current requires an empty pool");
    Undo undo;
    auto mark = [&](Bitmap& bits) { set_bit(bits, 0, undo); };
    for (NodeId id : state.nodes) {
      std::uint32_t slot = ensure_node(pm_.partition_of(id), id, &undo);
      mark(node_shard(id).nodes[slot].bits);
    }
    for (const auto& [id, info] : state.edges) {
      std::uint32_t slot = ensure_edge(id, info, &undo);
      mark(edge_shard(info.from, info.to).edges[slot].bits);
    }
    for (const auto& [id, key, value] : state.node_attrs) {
      std::uint32_t slot = ensure_node(pm_.partition_of(id), id, &undo);
      mark(ensure_value_cell(node_shard(id).nodes[slot].attrs, key, value).bits);
    }
    for (const auto& [id, key, value] : state.edge_attrs) {
      PoolEdge* pe = find_edge(id);
      if (!pe)
        throw CorruptionError("graph pool: attr binding for unknown edge " +
                              std::to_string(id));
      mark(ensure_value_cell(pe->attrs, key, value).bits);
    }
    for (const AdjIntent& ai : undo.adj_intents) attach_adjacency(ai);
  }

  /// Endpoint payload of a resident edge, whichever graphs it belongs to.
  std::optional<EdgeInfo> edge_info(EdgeId id) const {
    std::shared_lock lock(pool_mu_);
    for (const Shard& sh : shards_) {
      auto it = sh.edge_index.find(id);
      if (it != sh.edge_index.end()) {
        const PoolEdge& pe = sh.edges[it->second];
        if (!pe.dead()) return EdgeInfo{pe.from, pe.to, pe.directed};
      }
    }
    return std::nullopt;
  }

  // -------------------------------------------------------------------------
  // Overlays.

  /// Overlays a full state as a new graph with explicit membership bits.
  /// All-or-nothing: on memory-limit overflow the pool is left unchanged.
  GraphId overlay(const EntrySet& state, GraphKind kind = GraphKind::Historical) {
    std::unique_lock lock(pool_mu_);
    GraphId gid = new_graph_locked(kind, std::nullopt);
    Undo undo;
    try {
      overlay_adds_locked(gid, state, undo);
      check_memory_locked();
    } catch (...) {
      rollback_locked(undo, gid);
      drop_mapping_locked(gid);
      throw;
    }
    commit_locked(gid, undo);
    return gid;
  }

  /// Parallel variant: pieces are per-partition states; piece i may only
  /// contain elements owned by partition i.
  GraphId overlay_parallel(const std::vector<EntrySet>& pieces, GraphKind kind,
                           unsigned workers) {
    if (pieces.size() != shards_.size())
      throw Error("overlay_parallel: piece count != partition count");
    std::unique_lock lock(pool_mu_);
    GraphId gid = new_graph_locked(kind, std::nullopt);
    std::vector<Undo> undos(pieces.size());
    std::exception_ptr fail;
    std::mutex fail_mu;
    run_sharded(workers, pieces.size(), [&](std::size_t p) {
      try {
        overlay_piece_phase1(gid, pieces[p], static_cast<std::uint16_t>(p),
                             undos[p]);
      } catch (...) {
        std::lock_guard g(fail_mu);
        if (!fail) fail = std::current_exception();
      }
    });
    if (!fail) {
      // Adjacency intents cross shards; group by target shard, then apply
      // in parallel again.
      std::vector<std::vector<AdjIntent>> grouped(shards_.size());
      for (auto& u : undos)
        for (const AdjIntent& ai : u.adj_intents)
          grouped[pm_.partition_of(ai.node)].push_back(ai);
      run_sharded(workers, grouped.size(), [&](std::size_t p) {
        for (const AdjIntent& ai : grouped[p]) attach_adjacency(ai);
      });
      try {
        check_memory_locked();
      } catch (...) {
        std::lock_guard g(fail_mu);
        fail = std::current_exception();
      }
    }
    if (fail) {
      for (auto& u : undos) rollback_locked(u, gid);
      drop_mapping_locked(gid);
      std::rethrow_exception(fail);
    }
    Undo merged;
    for (auto& u : undos) merged.writes += u.writes;
    commit_locked(gid, merged);
    return gid;
  }

  /// Overlays a graph described as a diff against a live dependency
  /// (materialized or current). Only differing elements get explicit bits.
  GraphId overlay_dependent(GraphId dep, const Delta& diff_from_dep) {
    std::unique_lock lock(pool_mu_);
    const MappingEntry& dep_entry = mapping_entry(dep);
    if (dep_entry.kind == GraphKind::Historical)
      throw Error("graph pool: dependencies must be materialized or current");
    if (!dep_entry.live) throw Error("graph pool: dependency is released");
    GraphId gid = new_graph_locked(GraphKind::Historical, dep);
    Undo undo;
    try {
      overlay_adds_locked(gid, diff_from_dep.adds, undo);
      overlay_suppressions_locked(gid, diff_from_dep.dels, undo);
      check_memory_locked();
    } catch (...) {
      rollback_locked(undo, gid);
      drop_mapping_locked(gid);
      throw;
    }
    dependents_[dep].push_back(gid);
    commit_locked(gid, undo);
    return gid;
  }

  // -------------------------------------------------------------------------
  // Reads.

  bool member_node(GraphId g, NodeId id) const {
    std::shared_lock lock(pool_mu_);
    const MappingEntry& e = mapping_entry(g);
    const Shard& sh = shards_[pm_.partition_of(id)];
    auto it = sh.node_index.find(id);
    return it != sh.node_index.end() &&
           member_locked(sh.nodes[it->second].bits, e);
  }

  bool member_edge(GraphId g, EdgeId id, NodeId a, NodeId b) const {
    std::shared_lock lock(pool_mu_);
    const MappingEntry& e = mapping_entry(g);
    const Shard& sh = shards_[pm_.partition_of_edge(a, b)];
    auto it = sh.edge_index.find(id);
    return it != sh.edge_index.end() &&
           member_locked(sh.edges[it->second].bits, e);
  }

  /// Full projection of one graph to a plain entry set.
  EntrySet project_entries(GraphId g) const {
    std::shared_lock lock(pool_mu_);
    return project_entries_locked(g);
  }

  Snapshot project_snapshot(GraphId g) const {
    return to_snapshot(project_entries(g));
  }

  std::uint64_t graph_entry_count(GraphId g) const {
    std::shared_lock lock(pool_mu_);
    const MappingEntry& e = mapping_entry(g);
    std::uint64_t n = 0;
    for (const Shard& sh : shards_) {
      for (const PoolNode& pn : sh.nodes) {
        if (pn.dead()) continue;
        if (member_locked(pn.bits, e)) ++n;
        for (const AttrCell& c : pn.attrs)
          for (const ValueCell& v : c.values)
            if (member_locked(v.bits, e)) ++n;
      }
      for (const PoolEdge& pe : sh.edges) {
        if (pe.dead()) continue;
        if (member_locked(pe.bits, e)) ++n;
        for (const AttrCell& c : pe.attrs)
          for (const ValueCell& v : c.values)
            if (member_locked(v.bits, e)) ++n;
      }
    }
    return n;
  }

  /// Iterates the member nodes of a graph: fn(node id).
  void for_each_node(GraphId g, const std::function<void(NodeId)>& fn) const {
    std::shared_lock lock(pool_mu_);
    const MappingEntry& e = mapping_entry(g);
    for (const Shard& sh : shards_)
      for (const PoolNode& pn : sh.nodes)
        if (!pn.dead() && member_locked(pn.bits, e)) fn(pn.id);
  }

  /// Iterates member neighbors of a node: fn(other node id, edge id).
  /// Filters by the edge's membership bitmap on the fly.
  void for_each_neighbor(GraphId g, NodeId id,
                         const std::function<void(NodeId, EdgeId)>& fn) const {
    std::shared_lock lock(pool_mu_);
    const MappingEntry& e = mapping_entry(g);
    const Shard& sh = shards_[pm_.partition_of(id)];
    auto it = sh.node_index.find(id);
    if (it == sh.node_index.end()) return;
    for (const AdjEntry& a : sh.nodes[it->second].adj) {
      const PoolEdge& pe = shards_[a.edge_shard].edges[a.edge_slot];
      if (!pe.dead() && member_locked(pe.bits, e)) fn(a.other, pe.id);
    }
  }

  std::optional<std::string> node_attr(GraphId g, NodeId id,
                                       const std::string& key) const {
    std::shared_lock lock(pool_mu_);
    const MappingEntry& e = mapping_entry(g);
    const Shard& sh = shards_[pm_.partition_of(id)];
    auto it = sh.node_index.find(id);
    if (it == sh.node_index.end()) return std::nullopt;
    for (const AttrCell& c : sh.nodes[it->second].attrs) {
      if (c.key != key) continue;
      for (const ValueCell& v : c.values)
        if (member_locked(v.bits, e)) return v.value;
    }
    return std::nullopt;
  }

  // -------------------------------------------------------------------------
  // Lifecycle.

  /// O(1): marks the mapping entry dead. Bits are reclaimed lazily by
  /// cleanup passes; projections of other graphs never read dead bits.
  void release(GraphId g) {
    std::unique_lock lock(pool_mu_);
    if (g == kCurrentGraphId)
      throw Error("graph pool: the current graph is permanent");
    MappingEntry& e = mapping_mut(g);
    if (!e.live) return;
    // Promote dependents before their anchor goes away.
    if (auto it = dependents_.find(g); it != dependents_.end()) {
      for (GraphId d : it->second) {
        auto me = mapping_.find(d);
        if (me != mapping_.end() && me->second.live) promote_dependent_locked(d);
      }
      dependents_.erase(it);
    }
    e.live = false;
    draining_.push_back(g);
  }

  /// Scans up to `budget` elements, clearing bits of released graphs and
  /// removing elements with no live bits. Returns elements scanned. Bit
  /// indices recycle only once a full scan has completed for them.
  std::size_t cleanup_pass(std::size_t budget) {
    std::unique_lock lock(pool_mu_);
    return cleanup_locked(budget);
  }

  /// Urgent mode: runs to completion and recycles bit indices.
  void cleanup_all() {
    std::unique_lock lock(pool_mu_);
    cursor_ = {};
    cleanup_locked(~std::size_t{0});
    for (GraphId g : draining_) {
      auto it = mapping_.find(g);
      if (it == mapping_.end()) continue;
      recycle_bits_locked(it->second);
      mapping_.erase(it);
    }
    draining_.clear();
  }

  bool is_live(GraphId g) const {
    std::shared_lock lock(pool_mu_);
    auto it = mapping_.find(g);
    return it != mapping_.end() && it->second.live;
  }

  // -------------------------------------------------------------------------
  // Build support: differential-function evaluation and state diffing
  // directly over the overlaid bitmaps, one union pass each.

  GraphId eval_diff_function_into(const DiffFunctionSpec& spec,
                                  const std::vector<GraphId>& children) {
    std::unique_lock lock(pool_mu_);
    if (children.empty()) throw Error("differential function needs children");
    std::vector<const MappingEntry*> kids;
    kids.reserve(children.size());
    for (GraphId c : children) kids.push_back(&mapping_entry(c));
    GraphId gid = new_graph_locked(GraphKind::Historical, std::nullopt);
    MappingEntry& parent = mapping_mut(gid);
    std::vector<unsigned char> row(children.size());

    auto decide = [&](Bitmap& bits, std::uint64_t h) {
      for (std::size_t i = 0; i < kids.size(); ++i)
        row[i] = member_locked(bits, *kids[i]);
      if (detail::diff_function_member(spec, row, h)) {
        bits.set(parent.bit + 1);
        ++parent.explicit_bit_writes;
      }
    };
    for (Shard& sh : shards_) {
      for (PoolNode& pn : sh.nodes) {
        if (pn.dead()) continue;
        decide(pn.bits, entry_select_hash(spec.seed, ElementRole::Node, pn.id));
        for (AttrCell& c : pn.attrs)
          for (ValueCell& v : c.values)
            decide(v.bits, entry_select_hash(spec.seed, ElementRole::Node,
                                             AttrBinding{pn.id, c.key, v.value}));
      }
      for (PoolEdge& pe : sh.edges) {
        if (pe.dead()) continue;
        decide(pe.bits, entry_select_hash(spec.seed, ElementRole::Edge, pe.id));
        for (AttrCell& c : pe.attrs)
          for (ValueCell& v : c.values)
            decide(v.bits, entry_select_hash(spec.seed, ElementRole::Edge,
                                             AttrBinding{pe.id, c.key, v.value}));
      }
    }
    parent.committed = true;
    return gid;
  }

  /// diff(project(from), project(to)) in one union pass.
  Delta diff_graphs(GraphId from, GraphId to) const {
    std::shared_lock lock(pool_mu_);
    const MappingEntry& f = mapping_entry(from);
    const MappingEntry& t = mapping_entry(to);
    Delta d;
    for (const Shard& sh : shards_) {
      for (const PoolNode& pn : sh.nodes) {
        if (pn.dead()) continue;
        bool in_f = member_locked(pn.bits, f);
        bool in_t = member_locked(pn.bits, t);
        if (in_t && !in_f) d.adds.nodes.insert(pn.id);
        if (in_f && !in_t) d.dels.nodes.insert(pn.id);
        for (const AttrCell& c : pn.attrs)
          for (const ValueCell& v : c.values) {
            bool bf = member_locked(v.bits, f);
            bool bt = member_locked(v.bits, t);
            if (bt && !bf) d.adds.node_attrs.emplace(pn.id, c.key, v.value);
            if (bf && !bt) d.dels.node_attrs.emplace(pn.id, c.key, v.value);
          }
      }
      for (const PoolEdge& pe : sh.edges) {
        if (pe.dead()) continue;
        bool in_f = member_locked(pe.bits, f);
        bool in_t = member_locked(pe.bits, t);
        EdgeInfo info{pe.from, pe.to, pe.directed};
        if (in_t && !in_f) d.adds.edges.emplace(pe.id, info);
        if (in_f && !in_t) d.dels.edges.emplace(pe.id, info);
        for (const AttrCell& c : pe.attrs)
          for (const ValueCell& v : c.values) {
            bool bf = member_locked(v.bits, f);
            bool bt = member_locked(v.bits, t);
            if (bt && !bf) d.adds.edge_attrs.emplace(pe.id, c.key, v.value);
            if (bf && !bt) d.dels.edge_attrs.emplace(pe.id, c.key, v.value);
          }
      }
    }
    return d;
  }

  // -------------------------------------------------------------------------

  PoolStats stats() const {
    std::shared_lock lock(pool_mu_);
    PoolStats st;
    st.approx_bytes = approx_bytes_;
    for (const Shard& sh : shards_) {
      st.node_slots += sh.nodes.size();
      st.edge_slots += sh.edges.size();
      for (const PoolNode& pn : sh.nodes) {
        if (pn.dead()) continue;
        ++st.live_nodes;
        st.bitmap_words += pn.bits.word_count();
        for (const AttrCell& c : pn.attrs) {
          st.attr_value_cells += c.values.size();
          for (const ValueCell& v : c.values) st.bitmap_words += v.bits.word_count();
        }
      }
      for (const PoolEdge& pe : sh.edges) {
        if (pe.dead()) continue;
        ++st.live_edges;
        st.bitmap_words += pe.bits.word_count();
        for (const AttrCell& c : pe.attrs) {
          st.attr_value_cells += c.values.size();
          for (const ValueCell& v : c.values) st.bitmap_words += v.bits.word_count();
        }
      }
    }
    for (const auto& [gid, e] : mapping_)
      st.graphs.push_back({gid, e.kind, e.bit, e.live, e.dependency,
                           e.explicit_bit_writes});
    std::sort(st.graphs.begin(), st.graphs.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    return st;
  }

  std::uint64_t approx_bytes() const { return approx_bytes_.load(); }

 private:
  struct ValueCell {
    std::string value;
    Bitmap bits;
  };
  struct AttrCell {
    std::string key;
    std::vector<ValueCell> values;
  };
  struct AdjEntry {
    NodeId other;
    std::uint16_t edge_shard;
    std::uint32_t edge_slot;
  };
  struct PoolNode {
    NodeId id = 0;
    bool tomb = false;
    Bitmap bits;
    std::vector<AttrCell> attrs;
    std::vector<AdjEntry> adj;
    bool dead() const { return tomb; }
  };
  struct PoolEdge {
    EdgeId id = 0;
    NodeId from = 0;
    NodeId to = 0;
    bool directed = false;
    bool tomb = false;
    Bitmap bits;
    std::vector<AttrCell> attrs;
    bool dead() const { return tomb; }
  };
  struct Shard {
    std::deque<PoolNode> nodes;
    std::unordered_map<NodeId, std::uint32_t> node_index;
    std::vector<std::uint32_t> free_nodes;
    std::deque<PoolEdge> edges;
    std::unordered_map<EdgeId, std::uint32_t> edge_index;
    std::vector<std::uint32_t> free_edges;
  };
  struct MappingEntry {
    GraphKind kind = GraphKind::Historical;
    std::uint32_t bit = 0;  // pair (bit, bit+1) for historical graphs
    bool live = false;
    bool committed = false;
    std::optional<GraphId> dependency;
    std::uint64_t explicit_bit_writes = 0;
  };
  struct ElemRef {
    std::uint16_t shard;
    bool is_edge;
    std::uint32_t slot;
  };
  struct AdjIntent {
    NodeId node;
    NodeId other;
    std::uint16_t edge_shard;
    std::uint32_t edge_slot;
  };
  struct Undo {
    std::uint64_t writes = 0;
    std::vector<ElemRef> created;
    std::vector<AdjIntent> adj_intents;
  };
  struct Cursor {
    std::size_t shard = 0;
    bool edges = false;
    std::size_t slot = 0;
  };

  // --- mapping helpers -------------------------------------------------

  const MappingEntry& mapping_entry(GraphId g) const {
    auto it = mapping_.find(g);
    if (it == mapping_.end() || (!it->second.committed && g != kCurrentGraphId))
      throw Error("graph pool: unknown graph id " + std::to_string(g));
    if (!it->second.live)
      throw Error("graph pool: graph " + std::to_string(g) + " was released");
    return it->second;
  }
  MappingEntry& mapping_mut(GraphId g) {
    auto it = mapping_.find(g);
    if (it == mapping_.end())
      throw Error("graph pool: unknown graph id " + std::to_string(g));
    return it->second;
  }

  GraphId new_graph_locked(GraphKind kind, std::optional<GraphId> dep) {
    if (kind == GraphKind::Current)
      throw Error("graph pool: current graph already exists");
    MappingEntry e;
    e.kind = kind;
    e.dependency = dep;
    e.live = true;
    e.committed = false;
    if (kind == GraphKind::Materialized) {
      if (!free_single_bits_.empty()) {
        e.bit = free_single_bits_.back();
        free_single_bits_.pop_back();
      } else {
        e.bit = next_bit_++;
      }
    } else {
      if (!free_bit_pairs_.empty()) {
        e.bit = free_bit_pairs_.back();
        free_bit_pairs_.pop_back();
      } else {
        if (next_bit_ & 1) free_single_bits_.push_back(next_bit_++);
        e.bit = next_bit_;
        next_bit_ += 2;
      }
    }
    GraphId gid = next_graph_id_++;
    mapping_.emplace(gid, e);
    return gid;
  }

  void drop_mapping_locked(GraphId gid) {
    auto it = mapping_.find(gid);
    if (it == mapping_.end()) return;
    recycle_bits_locked(it->second);
    mapping_.erase(it);
  }

  void recycle_bits_locked(const MappingEntry& e) {
    if (e.kind == GraphKind::Materialized)
      free_single_bits_.push_back(e.bit);
    else if (e.kind == GraphKind::Historical)
      free_bit_pairs_.push_back(e.bit);
  }

  void commit_locked(GraphId gid, const Undo& undo) {
    MappingEntry& e = mapping_mut(gid);
    e.committed = true;
    e.explicit_bit_writes += undo.writes;
  }

  // --- membership ------------------------------------------------------

  bool member_locked(const Bitmap& bits, const MappingEntry& e) const {
    switch (e.kind) {
      case GraphKind::Current:
        return bits.get(0);
      case GraphKind::Materialized:
        return bits.get(e.bit);
      case GraphKind::Historical: {
        if (!e.dependency || bits.get(e.bit))  // independent, or overridden
          return bits.get(e.bit + 1);
        return member_locked(bits, mapping_.at(*e.dependency));
      }
    }
    return false;
  }

  // --- element storage -------------------------------------------------

  Shard& node_shard(NodeId id) { return shards_[pm_.partition_of(id)]; }
  Shard& edge_shard(NodeId a, NodeId b) {
    return shards_[pm_.partition_of_edge(a, b)];
  }

  Bitmap* elem_bits(const ElemRef& r) {
    Shard& sh = shards_[r.shard];
    if (r.is_edge) {
      if (r.slot >= sh.edges.size() || sh.edges[r.slot].dead()) return nullptr;
      return &sh.edges[r.slot].bits;
    }
    if (r.slot >= sh.nodes.size() || sh.nodes[r.slot].dead()) return nullptr;
    return &sh.nodes[r.slot].bits;
  }

  std::uint32_t ensure_node(std::uint16_t shard_idx, NodeId id, Undo* undo) {
    Shard& sh = shards_[shard_idx];
    auto it = sh.node_index.find(id);
    if (it != sh.node_index.end()) return it->second;
    std::uint32_t slot;
    if (!sh.free_nodes.empty()) {
      slot = sh.free_nodes.back();
      sh.free_nodes.pop_back();
      sh.nodes[slot] = PoolNode{};
    } else {
      slot = static_cast<std::uint32_t>(sh.nodes.size());
      sh.nodes.emplace_back();
    }
    sh.nodes[slot].id = id;
    sh.node_index.emplace(id, slot);
    approx_bytes_ += kNodeCost;
    if (undo) undo->created.push_back({shard_idx, false, slot});
    return slot;
  }

  std::uint32_t ensure_edge(NodeId id, const EdgeInfo& info, Undo* undo) {
    std::uint16_t shard_idx = pm_.partition_of_edge(info.from, info.to);
    Shard& sh = shards_[shard_idx];
    auto it = sh.edge_index.find(id);
    if (it != sh.edge_index.end()) return it->second;
    std::uint32_t slot;
    if (!sh.free_edges.empty()) {
      slot = sh.free_edges.back();
      sh.free_edges.pop_back();
      sh.edges[slot] = PoolEdge{};
    } else {
      slot = static_cast<std::uint32_t>(sh.edges.size());
      sh.edges.emplace_back();
    }
    PoolEdge& pe = sh.edges[slot];
    pe.id = id;
    pe.from = info.from;
    pe.to = info.to;
    pe.directed = info.directed;
    sh.edge_index.emplace(id, slot);
    approx_bytes_ += kEdgeCost;
    if (undo) {
      undo->created.push_back({shard_idx, true, slot});
      undo->adj_intents.push_back({info.from, info.to, shard_idx, slot});
      if (info.to != info.from)
        undo->adj_intents.push_back({info.to, info.from, shard_idx, slot});
    } else {
      attach_adjacency({info.from, info.to, shard_idx, slot});
      if (info.to != info.from)
        attach_adjacency({info.to, info.from, shard_idx, slot});
    }
    return slot;
  }

  /// Endpoint nodes referenced by an edge are materialized as placeholder
  /// slots (no membership bits) so adjacency stays linked even for states
  /// that are not valid graphs.
  void attach_adjacency(const AdjIntent& ai) {
    std::uint16_t shard_idx = pm_.partition_of(ai.node);
    std::uint32_t slot = ensure_node(shard_idx, ai.node, nullptr);
    shards_[shard_idx].nodes[slot].adj.push_back(
        {ai.other, ai.edge_shard, ai.edge_slot});
    approx_bytes_ += kAdjCost;
  }

  ValueCell& ensure_value_cell(std::vector<AttrCell>& attrs,
                               const std::string& key, const std::string& value) {
    for (AttrCell& c : attrs) {
      if (c.key != key) continue;
      for (ValueCell& v : c.values)
        if (v.value == value) return v;
      c.values.push_back({value, {}});
      approx_bytes_ += kCellCost + value.size();
      return c.values.back();
    }
    attrs.push_back({key, {}});
    attrs.back().values.push_back({value, {}});
    approx_bytes_ += kCellCost + key.size() + value.size();
    return attrs.back().values.back();
  }

  void set_bit(Bitmap& bits, std::uint32_t bit, Undo& undo) {
    if (bits.get(bit)) return;
    bits.set(bit);
    ++undo.writes;
  }

  // --- overlay internals -------------------------------------------------

  std::uint32_t member_bit(const MappingEntry& e) const {
    return e.kind == GraphKind::Materialized ? e.bit : e.bit + 1;
  }

  void overlay_adds_locked(GraphId gid, const EntrySet& state, Undo& undo) {
    MappingEntry& e = mapping_mut(gid);
    bool dep = e.dependency.has_value();
    auto mark = [&](Bitmap& bits) {
      if (dep) set_bit(bits, e.bit, undo);  // override flag
      set_bit(bits, member_bit(e), undo);
    };
    for (NodeId id : state.nodes) {
      std::uint32_t slot = ensure_node(pm_.partition_of(id), id, &undo);
      mark(node_shard(id).nodes[slot].bits);
    }
    for (const auto& [id, info] : state.edges) {
      std::uint32_t slot = ensure_edge(id, info, &undo);
      PoolEdge& pe = edge_shard(info.from, info.to).edges[slot];
      if (pe.from != info.from || pe.to != info.to || pe.directed != info.directed)
        throw CorruptionError("graph pool: edge " + std::to_string(id) +
                              " disagrees with resident endpoints");
      mark(pe.bits);
    }
    for (const auto& [id, key, value] : state.node_attrs) {
      std::uint32_t slot = ensure_node(pm_.partition_of(id), id, &undo);
      mark(ensure_value_cell(node_shard(id).nodes[slot].attrs, key, value).bits);
    }
    for (const auto& [id, key, value] : state.edge_attrs) {
      PoolEdge* pe = find_edge(id);
      if (!pe)
        throw CorruptionError("graph pool: attr binding for unknown edge " +
                              std::to_string(id));
      mark(ensure_value_cell(pe->attrs, key, value).bits);
    }
    // Apply any adjacency intents synchronously in the serial path.
    for (const AdjIntent& ai : undo.adj_intents) attach_adjacency(ai);
    undo.adj_intents.clear();
  }

  /// For dependent overlays: elements present in the dependency but absent
  /// from this graph get the override bit with the member bit clear.
  void overlay_suppressions_locked(GraphId gid, const EntrySet& dels, Undo& undo) {
    MappingEntry& e = mapping_mut(gid);
    for (NodeId id : dels.nodes) {
      Shard& sh = node_shard(id);
      auto it = sh.node_index.find(id);
      if (it == sh.node_index.end()) continue;
      set_bit(sh.nodes[it->second].bits, e.bit, undo);
    }
    for (const auto& [id, info] : dels.edges) {
      Shard& sh = edge_shard(info.from, info.to);
      auto it = sh.edge_index.find(id);
      if (it == sh.edge_index.end()) continue;
      set_bit(sh.edges[it->second].bits, e.bit, undo);
    }
    for (const auto& [id, key, value] : dels.node_attrs) {
      Shard& sh = node_shard(id);
      auto it = sh.node_index.find(id);
      if (it == sh.node_index.end()) continue;
      set_bit(ensure_value_cell(sh.nodes[it->second].attrs, key, value).bits,
              e.bit, undo);
    }
    for (const auto& [id, key, value] : dels.edge_attrs) {
      PoolEdge* pe = find_edge(id);
      if (!pe) continue;
      set_bit(ensure_value_cell(pe->attrs, key, value).bits, e.bit, undo);
    }
  }

  /// Phase-1 of parallel overlay: everything shard-local; adjacency intents
  /// are deferred into the undo record.
  void overlay_piece_phase1(GraphId gid, const EntrySet& piece,
                            std::uint16_t shard_idx, Undo& undo) {
    MappingEntry& e = mapping_mut(gid);
    auto mark = [&](Bitmap& bits) { set_bit(bits, member_bit(e), undo); };
    for (NodeId id : piece.nodes) {
      if (pm_.partition_of(id) != shard_idx)
        throw Error("overlay piece contains foreign node");
      std::uint32_t slot = ensure_node(shard_idx, id, &undo);
      mark(shards_[shard_idx].nodes[slot].bits);
    }
    for (const auto& [id, info] : piece.edges) {
      if (pm_.partition_of_edge(info.from, info.to) != shard_idx)
        throw Error("overlay piece contains foreign edge");
      std::uint32_t slot = ensure_edge(id, info, &undo);
      mark(shards_[shard_idx].edges[slot].bits);
    }
    for (const auto& [id, key, value] : piece.node_attrs) {
      std::uint32_t slot = ensure_node(shard_idx, id, &undo);
      mark(ensure_value_cell(shards_[shard_idx].nodes[slot].attrs, key, value).bits);
    }
    for (const auto& [id, key, value] : piece.edge_attrs) {
      auto it = shards_[shard_idx].edge_index.find(id);
      if (it == shards_[shard_idx].edge_index.end())
        throw CorruptionError("graph pool: attr binding for unknown edge " +
                              std::to_string(id));
      mark(ensure_value_cell(shards_[shard_idx].edges[it->second].attrs, key,
                             value).bits);
    }
  }

  /// Rollback scrubs the failed graph's bits pool-wide (its bit indices are
  /// exclusively owned, so this is safe) and removes elements it created.
  void rollback_locked(Undo& undo, GraphId gid) {
    auto it = mapping_.find(gid);
    if (it != mapping_.end()) {
      const MappingEntry& e = it->second;
      auto scrub = [&](Bitmap& bits) {
        bits.clear(e.bit);
        if (e.kind == GraphKind::Historical) bits.clear(e.bit + 1);
      };
      for (Shard& sh : shards_) {
        for (PoolNode& pn : sh.nodes) {
          if (pn.dead()) continue;
          scrub(pn.bits);
          for (AttrCell& c : pn.attrs)
            for (ValueCell& v : c.values) scrub(v.bits);
        }
        for (PoolEdge& pe : sh.edges) {
          if (pe.dead()) continue;
          scrub(pe.bits);
          for (AttrCell& c : pe.attrs)
            for (ValueCell& v : c.values) scrub(v.bits);
        }
      }
    }
    for (auto rit = undo.created.rbegin(); rit != undo.created.rend(); ++rit)
      remove_element_locked(*rit);
    undo = Undo{};
  }

  PoolEdge* find_edge(EdgeId id) {
    for (Shard& sh : shards_) {
      auto it = sh.edge_index.find(id);
      if (it != sh.edge_index.end()) return &sh.edges[it->second];
    }
    return nullptr;
  }

  // --- current-graph mutation with dependent preservation ----------------

  /// Before changing an element's current-graph membership, dependents of
  /// the current graph that still mirror it get the old value written out.
  void preserve_dependents_of_current(Bitmap& bits) {
    auto it = dependents_.find(kCurrentGraphId);
    if (it == dependents_.end()) return;
    bool old_member = bits.get(0);
    for (GraphId d : it->second) {
      auto me = mapping_.find(d);
      if (me == mapping_.end() || !me->second.live) continue;
      MappingEntry& e = me->second;
      if (bits.get(e.bit)) continue;  // already overridden
      bits.set(e.bit);
      if (old_member) bits.set(e.bit + 1);
      ++e.explicit_bit_writes;
    }
  }

  void apply_current_locked(const Event& e) {
    // Validate against the projected current graph with Snapshot semantics.
    switch (e.kind) {
      case EventKind::NodeAdd: {
        if (current_member_node(e.subject))
          throw InapplicableEventError("current graph: node " +
                                       std::to_string(e.subject) +
                                       " already present");
        std::uint32_t slot = ensure_node(pm_.partition_of(e.subject), e.subject,
                                         nullptr);
        Bitmap& bits = node_shard(e.subject).nodes[slot].bits;
        preserve_dependents_of_current(bits);
        bits.set(0);
        break;
      }
      case EventKind::NodeDel: {
        PoolNode* pn = find_current_node(e.subject);
        if (!pn)
          throw InapplicableEventError("current graph: node " +
                                       std::to_string(e.subject) + " absent");
        for (const AttrCell& c : pn->attrs)
          for (const ValueCell& v : c.values)
            if (v.bits.get(0))
              throw InapplicableEventError(
                  "current graph: node still carries attributes");
        for (const AdjEntry& a : pn->adj) {
          const PoolEdge& pe = shards_[a.edge_shard].edges[a.edge_slot];
          if (!pe.dead() && pe.bits.get(0))
            throw InapplicableEventError(
                "current graph: node still has incident edges");
        }
        preserve_dependents_of_current(pn->bits);
        pn->bits.clear(0);
        pn->bits.set(1);
        recent_deletions_.push_back(
            {pm_.partition_of(e.subject), false,
             node_shard(e.subject).node_index.at(e.subject)});
        break;
      }
      case EventKind::EdgeAdd: {
        if (!current_member_node(e.from) || !current_member_node(e.to))
          throw InapplicableEventError("current graph: edge endpoint absent");
        Shard& sh = edge_shard(e.from, e.to);
        auto it = sh.edge_index.find(e.subject);
        if (it != sh.edge_index.end() && sh.edges[it->second].bits.get(0))
          throw InapplicableEventError("current graph: edge already present");
        std::uint32_t slot =
            ensure_edge(e.subject, EdgeInfo{e.from, e.to, e.directed}, nullptr);
        PoolEdge& pe = sh.edges[slot];
        if (pe.from != e.from || pe.to != e.to)
          throw CorruptionError("current graph: edge id reuse with different "
                                "endpoints");
        preserve_dependents_of_current(pe.bits);
        pe.bits.set(0);
        break;
      }
      case EventKind::EdgeDel: {
        Shard& sh = edge_shard(e.from, e.to);
        auto it = sh.edge_index.find(e.subject);
        if (it == sh.edge_index.end() || !sh.edges[it->second].bits.get(0))
          throw InapplicableEventError("current graph: edge " +
                                       std::to_string(e.subject) + " absent");
        PoolEdge& pe = sh.edges[it->second];
        if (pe.from != e.from || pe.to != e.to || pe.directed != e.directed)
          throw InapplicableEventError(
              "current graph: edge endpoints disagree with event");
        for (const AttrCell& c : pe.attrs)
          for (const ValueCell& v : c.values)
            if (v.bits.get(0))
              throw InapplicableEventError(
                  "current graph: edge still carries attributes");
        preserve_dependents_of_current(pe.bits);
        pe.bits.clear(0);
        pe.bits.set(1);
        recent_deletions_.push_back({pm_.partition_of_edge(e.from, e.to), true,
                                     it->second});
        break;
      }
      case EventKind::NodeAttrSet: {
        PoolNode* pn = find_current_node(e.subject);
        if (!pn)
          throw InapplicableEventError("current graph: node " +
                                       std::to_string(e.subject) + " absent");
        apply_attr_change(pn->attrs, e);
        break;
      }
      case EventKind::EdgeAttrSet: {
        PoolEdge* pe = find_edge(e.subject);
        if (!pe || !pe->bits.get(0))
          throw InapplicableEventError("current graph: edge " +
                                       std::to_string(e.subject) + " absent");
        apply_attr_change(pe->attrs, e);
        break;
      }
      case EventKind::TransientEdge:
      case EventKind::TransientNode:
        break;  // transients never touch the current graph
    }
  }

  void apply_attr_change(std::vector<AttrCell>& attrs, const Event& e) {
    // Find the currently bound cell for this key, if any.
    ValueCell* bound = nullptr;
    for (AttrCell& c : attrs) {
      if (c.key != e.attr_key) continue;
      for (ValueCell& v : c.values)
        if (v.bits.get(0)) bound = &v;
    }
    bool have = bound != nullptr;
    if (e.old_value.has_value() != have ||
        (have && *e.old_value != bound->value))
      throw InapplicableEventError("current graph: attribute '" + e.attr_key +
                                   "' value disagrees with event");
    if (bound) {
      preserve_dependents_of_current(bound->bits);
      bound->bits.clear(0);
    }
    if (e.new_value) {
      ValueCell& cell = ensure_value_cell(attrs, e.attr_key, *e.new_value);
      preserve_dependents_of_current(cell.bits);
      cell.bits.set(0);
    }
  }

  bool current_member_node(NodeId id) {
    PoolNode* pn = find_current_node(id);
    return pn != nullptr;
  }

  PoolNode* find_current_node(NodeId id) {
    Shard& sh = node_shard(id);
    auto it = sh.node_index.find(id);
    if (it == sh.node_index.end()) return nullptr;
    PoolNode& pn = sh.nodes[it->second];
    return (!pn.dead() && pn.bits.get(0)) ? &pn : nullptr;
  }

  // --- projection --------------------------------------------------------

  EntrySet project_entries_locked(GraphId g) const {
    const MappingEntry& e = mapping_entry(g);
    EntrySet out;
    for (const Shard& sh : shards_) {
      for (const PoolNode& pn : sh.nodes) {
        if (pn.dead()) continue;
        if (member_locked(pn.bits, e)) out.nodes.insert(pn.id);
        for (const AttrCell& c : pn.attrs)
          for (const ValueCell& v : c.values)
            if (member_locked(v.bits, e))
              out.node_attrs.emplace(pn.id, c.key, v.value);
      }
      for (const PoolEdge& pe : sh.edges) {
        if (pe.dead()) continue;
        if (member_locked(pe.bits, e))
          out.edges.emplace(pe.id, EdgeInfo{pe.from, pe.to, pe.directed});
        for (const AttrCell& c : pe.attrs)
          for (const ValueCell& v : c.values)
            if (member_locked(v.bits, e))
              out.edge_attrs.emplace(pe.id, c.key, v.value);
      }
    }
    return out;
  }

  // --- dependent promotion ------------------------------------------------

  /// Writes explicit bits into a dependent graph for every element where it
  /// still mirrors its dependency, then detaches it.
  void promote_dependent_locked(GraphId g) {
    MappingEntry& e = mapping_mut(g);
    const MappingEntry& dep = mapping_.at(*e.dependency);
    auto fix = [&](Bitmap& bits) {
      if (bits.get(e.bit)) return;
      bits.set(e.bit);
      if (member_locked(bits, dep)) bits.set(e.bit + 1);
      ++e.explicit_bit_writes;
    };
    for (Shard& sh : shards_) {
      for (PoolNode& pn : sh.nodes) {
        if (pn.dead()) continue;
        fix(pn.bits);
        for (AttrCell& c : pn.attrs)
          for (ValueCell& v : c.values) fix(v.bits);
      }
      for (PoolEdge& pe : sh.edges) {
        if (pe.dead()) continue;
        fix(pe.bits);
        for (AttrCell& c : pe.attrs)
          for (ValueCell& v : c.values) fix(v.bits);
      }
    }
    e.dependency.reset();
  }

  // --- cleanup -------------------------------------------------------------

  std::size_t cleanup_locked(std::size_t budget) {
    std::size_t scanned = 0;
    std::size_t total_shards = shards_.size();
    std::size_t visited_segments = 0;
    while (scanned < budget && visited_segments < 2 * total_shards + 2) {
      Shard& sh = shards_[cursor_.shard];
      auto advance_segment = [&] {
        cursor_.slot = 0;
        ++visited_segments;
        if (!cursor_.edges) {
          cursor_.edges = true;
        } else {
          cursor_.edges = false;
          cursor_.shard = (cursor_.shard + 1) % total_shards;
        }
      };
      if (!cursor_.edges) {
        if (cursor_.slot >= sh.nodes.size()) {
          advance_segment();
          continue;
        }
        PoolNode& pn = sh.nodes[cursor_.slot];
        if (!pn.dead()) {
          scrub_element(pn.bits, pn.attrs);
          bool keep = pn.bits.any() || !pn.adj.empty();
          if (!keep) {
            for (const AttrCell& c : pn.attrs)
              for (const ValueCell& v : c.values)
                if (v.bits.any()) keep = true;
          }
          if (!keep) {
            sh.node_index.erase(pn.id);
            pn = PoolNode{};
            pn.tomb = true;
            sh.free_nodes.push_back(static_cast<std::uint32_t>(cursor_.slot));
          }
          ++scanned;
        }
        ++cursor_.slot;
      } else {
        if (cursor_.slot >= sh.edges.size()) {
          advance_segment();
          continue;
        }
        PoolEdge& pe = sh.edges[cursor_.slot];
        if (!pe.dead()) {
          scrub_element(pe.bits, pe.attrs);
          bool keep = pe.bits.any();
          if (!keep) {
            for (const AttrCell& c : pe.attrs)
              for (const ValueCell& v : c.values)
                if (v.bits.any()) keep = true;
          }
          if (!keep) {
            detach_edge_adjacency(pe, static_cast<std::uint32_t>(cursor_.slot),
                                  static_cast<std::uint16_t>(cursor_.shard));
            sh.edge_index.erase(pe.id);
            pe = PoolEdge{};
            pe.tomb = true;
            sh.free_edges.push_back(static_cast<std::uint32_t>(cursor_.slot));
          }
          ++scanned;
        }
        ++cursor_.slot;
      }
    }
    return scanned;
  }

  /// Clears bits of released graphs on one element and drops value cells
  /// whose bitmaps emptied out.
  void scrub_element(Bitmap& bits, std::vector<AttrCell>& attrs) {
    for (GraphId g : draining_) {
      auto it = mapping_.find(g);
      if (it == mapping_.end()) continue;
      const MappingEntry& e = it->second;
      bits.clear(e.bit);
      if (e.kind == GraphKind::Historical) bits.clear(e.bit + 1);
      for (AttrCell& c : attrs)
        for (ValueCell& v : c.values) {
          v.bits.clear(e.bit);
          if (e.kind == GraphKind::Historical) v.bits.clear(e.bit + 1);
        }
    }
    for (AttrCell& c : attrs)
      std::erase_if(c.values,
                    [](const ValueCell& v) { return !v.bits.any(); });
    std::erase_if(attrs, [](const AttrCell& c) { return c.values.empty(); });
  }

  void detach_edge_adjacency(const PoolEdge& pe, std::uint32_t slot,
                             std::uint16_t shard_idx) {
    for (NodeId n : {pe.from, pe.to}) {
      Shard& nsh = shards_[pm_.partition_of(n)];
      auto it = nsh.node_index.find(n);
      if (it == nsh.node_index.end()) continue;
      auto& adj = nsh.nodes[it->second].adj;
      std::erase_if(adj, [&](const AdjEntry& a) {
        return a.edge_shard == shard_idx && a.edge_slot == slot;
      });
      if (pe.from == pe.to) break;
    }
  }

  void remove_element_locked(const ElemRef& r) {
    Shard& sh = shards_[r.shard];
    if (r.is_edge) {
      PoolEdge& pe = sh.edges[r.slot];
      detach_edge_adjacency(pe, r.slot, r.shard);
      sh.edge_index.erase(pe.id);
      pe = PoolEdge{};
      pe.tomb = true;
      sh.free_edges.push_back(r.slot);
    } else {
      PoolNode& pn = sh.nodes[r.slot];
      if (!pn.adj.empty()) {
        pn.bits = Bitmap{};  // keep placeholder; edges still reference it
        return;
      }
      sh.node_index.erase(pn.id);
      pn = PoolNode{};
      pn.tomb = true;
      sh.free_nodes.push_back(r.slot);
    }
  }

  void check_memory_locked() const {
    if (memory_limit_ && approx_bytes_.load() > memory_limit_)
      throw Error("graph pool: memory ceiling of " +
                  std::to_string(memory_limit_) + " bytes exceeded");
  }

  static void run_sharded(unsigned workers, std::size_t n,
                          const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
      for (std::size_t i = 0; i < n; ++i) fn(i);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    unsigned count = std::min<unsigned>(workers, static_cast<unsigned>(n));
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          fn(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  static constexpr std::uint64_t kNodeCost = 96;
  static constexpr std::uint64_t kEdgeCost = 120;
  static constexpr std::uint64_t kAdjCost = 16;
  static constexpr std::uint64_t kCellCost = 64;

  PartitionMap pm_;
  std::uint64_t memory_limit_;
  mutable std::shared_mutex pool_mu_;
  std::vector<Shard> shards_;
  std::unordered_map<GraphId, MappingEntry> mapping_;
  std::unordered_map<GraphId, std::vector<GraphId>> dependents_;
  std::vector<GraphId> draining_;
  std::vector<ElemRef> recent_deletions_;
  std::vector<std::uint32_t> free_single_bits_;
  std::vector<std::uint32_t> free_bit_pairs_;
  std::uint32_t next_bit_ = 2;
  GraphId next_graph_id_ = 1;
  Cursor cursor_;
  std::atomic<std::uint64_t> approx_bytes_{0};
};

}  // namespace hgraph
