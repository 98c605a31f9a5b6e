#pragma once

#include <memory>
#include <mutex>

#include "hgraph/graphpool.hpp"
#include "hgraph/skeleton.hpp"

namespace hgraph {

struct StoreOptions {
  std::uint64_t pool_memory_limit = 0;  // 0 = unbounded
  unsigned fetch_workers = 1;
  /// Plans may start from the in-memory current graph (the rightmost leaf is
  /// then effectively materialized). Switchable off for cost analysis.
  bool use_current_in_plans = true;
  /// A fetched graph becomes dependent on the materialized/current graph its
  /// plan starts from when the applied diff is below this fraction of the
  /// graph's size.
  double dependent_threshold = 0.10;
};

/// Where a timepoint falls in the index.
struct SegmentLocation {
  bool in_buffer = false;
  std::uint32_t segment = 0;    // valid when !in_buffer
  SkelNodeId left_leaf = 0;
  SkelNodeId right_leaf = 0;    // valid when !in_buffer
  Time e_start = 0;
  Time e_end = 0;               // e_start of the next segment (or max_time+1)
};

/// The historical graph store: a hierarchical delta index over a key-value
/// backend plus the in-memory graph pool holding the current graph and any
/// retrieved snapshots.
class DeltaGraph {
 public:
  /// Bulk-loads an index from a chronological event log, bottom-up in one
  /// pass. Leaf 0 is the empty graph at the log's start; a leaf is sealed
  /// every leaf_size events; trailing events stay in the recent buffer.
  static std::unique_ptr<DeltaGraph> build(const Eventlist& log,
                                           const BuildParams& params,
                                           std::shared_ptr<KvBackend> backend,
                                           StoreOptions options = {}) {
    params.validate();
    auto dg = std::unique_ptr<DeltaGraph>(
        new DeltaGraph(std::move(backend), params, options));
    dg->bulk_build(log);
    return dg;
  }

  /// Opens a persisted index: loads the manifest, rebuilds the current graph
  /// and the pending construction states in the pool.
  static std::unique_ptr<DeltaGraph> open(std::shared_ptr<KvBackend> backend,
                                          StoreOptions options = {}) {
    auto dg = std::unique_ptr<DeltaGraph>(new DeltaGraph(std::move(backend), options));
    return dg;
  }

  // -------------------------------------------------------------------------

  std::shared_ptr<const Skeleton> skeleton() const {
    std::lock_guard lock(skeleton_mu_);
    return skeleton_;
  }

  GraphPool& pool() { return *pool_; }
  const GraphPool& pool() const { return *pool_; }
  ComponentStore& store() { return store_; }
  const ComponentStore& store() const { return store_; }
  const StoreOptions& options() const { return options_; }
  const BuildParams& params() const { return params_; }

  Time now() const { return now_.load(); }

  /// Snapshot of the recent (unsealed) eventlist. Memory-resident; replaying
  /// it involves no storage fetch.
  std::vector<Event> buffered_events() const {
    std::lock_guard lock(buffer_mu_);
    return buffer_.events();
  }

  std::optional<Time> buffer_first_ts() const {
    std::lock_guard lock(buffer_mu_);
    return buffer_first_ts_;
  }

  // -------------------------------------------------------------------------
  // Appends.

  /// Buffers one event and applies it to the current graph. Seals a leaf
  /// automatically once leaf_size events accumulate, cascading parents
  /// bottom-up when sibling groups complete.
  void append_event(const Event& e) {
    std::unique_lock writer(writer_mu_);
    if (e.timestamp < last_append_ts_)
      throw Error("append: out-of-order timestamp " +
                  std::to_string(e.timestamp) + " (last was " +
                  std::to_string(last_append_ts_) + ")");
    pool_->apply_current_event(e);
    Event copy = e;
    copy.seq = next_seq_++;
    {
      std::lock_guard lock(buffer_mu_);
      buffer_.push_back(copy);
      if (!buffer_first_ts_) buffer_first_ts_ = e.timestamp;
    }
    last_append_ts_ = e.timestamp;
    if (e.timestamp > now_.load()) now_.store(e.timestamp);
    if (buffer_.size() >= params_.leaf_size) seal_locked();
  }

  /// Forces the buffered events into a (short) sealed leaf. Used by tests
  /// and shutdown paths; normal sealing happens automatically at leaf_size.
  void seal_recent_eventlist() {
    std::unique_lock writer(writer_mu_);
    if (!buffer_.empty()) seal_locked();
  }

  // -------------------------------------------------------------------------
  // Lookup.

  /// Binary search at the leaf level: returns the eventlist with
  /// t in [E_start, E_end), or the recent buffer for t at or beyond the last
  /// sealed leaf. Errors if t is beyond current time.
  SegmentLocation locate_leaf_eventlist(Time t) const {
    auto sk = skeleton();
    return locate_in(*sk, buffer_first_ts(), now(), t);
  }

  static SegmentLocation locate_in(const Skeleton& sk,
                                   std::optional<Time> buffer_start, Time now,
                                   Time t) {
    if (t > now)
      throw PlanError("time " + std::to_string(t) +
                      " is beyond current time " + std::to_string(now));
    if ((buffer_start && t >= *buffer_start) || sk.segments.empty()) {
      SegmentLocation loc;
      loc.in_buffer = true;
      loc.left_leaf = sk.leaves.back();
      loc.e_start = buffer_start.value_or(now + 1);
      loc.e_end = now + 1;
      return loc;
    }
    // Last segment whose E_start <= t.
    std::uint32_t lo = 0, hi = static_cast<std::uint32_t>(sk.segments.size());
    while (hi - lo > 1) {
      std::uint32_t mid = lo + (hi - lo) / 2;
      if (sk.segments[mid].e_start <= t)
        lo = mid;
      else
        hi = mid;
    }
    SegmentLocation loc;
    loc.segment = lo;
    loc.left_leaf = sk.leaves[lo];
    loc.right_leaf = sk.leaves[lo + 1];
    loc.e_start = sk.segments[lo].e_start;
    loc.e_end = lo + 1 < sk.segments.size()
                    ? sk.segments[lo + 1].e_start
                    : buffer_start.value_or(now + 1);
    return loc;
  }

  // -------------------------------------------------------------------------
  // Materialization bookkeeping (the planner performs the actual load).

  /// Registers a loaded graph for an index node and adds the zero-weight
  /// super-root edge. Subsequent plans automatically benefit from it.
  void install_materialization(SkelNodeId node, GraphId gid) {
    std::unique_lock writer(writer_mu_);
    std::lock_guard lock(skeleton_mu_);
    if (materialized_.count(node))
      throw Error("node " + std::to_string(node) + " is already materialized");
    auto sk = std::make_shared<Skeleton>(*skeleton_);
    SkeletonEdge e;
    e.from = kSuperRoot;
    e.to = node;
    e.kind = SkeletonEdge::Kind::Materialization;
    e.weights = EdgeWeights(params_.partitions.count);
    std::uint32_t eid = sk->add_edge(e);
    sk->nodes[node].materialized = true;
    materialized_[node] = {gid, eid};
    skeleton_ = std::move(sk);
  }

  /// Removes the zero-weight edge and releases the pool graph; plan costs
  /// return to their prior values exactly.
  void dematerialize(SkelNodeId node) {
    std::unique_lock writer(writer_mu_);
    GraphId gid;
    {
      std::lock_guard lock(skeleton_mu_);
      auto it = materialized_.find(node);
      if (it == materialized_.end())
        throw Error("node " + std::to_string(node) + " is not materialized");
      auto sk = std::make_shared<Skeleton>(*skeleton_);
      sk->remove_edge(it->second.edge);
      sk->nodes[node].materialized = false;
      gid = it->second.graph;
      materialized_.erase(it);
      skeleton_ = std::move(sk);
    }
    pool_->release(gid);
  }

  std::optional<GraphId> materialized_graph(SkelNodeId node) const {
    std::lock_guard lock(skeleton_mu_);
    auto it = materialized_.find(node);
    if (it == materialized_.end()) return std::nullopt;
    return it->second.graph;
  }

  std::vector<SkelNodeId> materialized_nodes() const {
    std::lock_guard lock(skeleton_mu_);
    std::vector<SkelNodeId> out;
    for (const auto& [n, m] : materialized_) out.push_back(n);
    std::sort(out.begin(), out.end());
    return out;
  }

  // -------------------------------------------------------------------------
  // Fetch helpers.

  static std::vector<Component> components_for(const AttrOptions& opts,
                                               bool transients = false) {
    std::vector<Component> cs{Component::Struct};
    if (!opts.node.none()) cs.push_back(Component::NodeAttr);
    if (!opts.edge.none()) cs.push_back(Component::EdgeAttr);
    if (transients) cs.push_back(Component::Transient);
    return cs;
  }

  /// Keys for one stored delta or eventlist under the index's partitioning.
  std::vector<StorageKey> keys_for(std::uint64_t payload_id,
                                   const std::vector<Component>& comps) const {
    std::vector<StorageKey> keys;
    keys.reserve(comps.size() * params_.partitions.count);
    for (Component c : comps)
      for (std::uint16_t p = 0; p < params_.partitions.count; ++p)
        keys.push_back(StorageKey{p, payload_id, to_tag(c)});
    return keys;
  }

  Delta fetch_delta(std::uint64_t delta_id, const std::vector<Component>& comps,
                    const std::map<StorageKey, std::string>& prefetched) const {
    Delta d;
    for (Component c : comps) {
      if (c == Component::Transient) continue;
      for (std::uint16_t p = 0; p < params_.partitions.count; ++p) {
        StorageKey key{p, delta_id, to_tag(c)};
        auto it = prefetched.find(key);
        decode_delta_component(it != prefetched.end() ? it->second
                                                      : store_.get(key),
                               c, d);
      }
    }
    return d;
  }

  std::vector<Event> fetch_segment_events(
      std::uint64_t segment_id, const std::vector<Component>& comps,
      const std::map<StorageKey, std::string>& prefetched) const {
    std::vector<Event> events;
    for (Component c : comps) {
      for (std::uint16_t p = 0; p < params_.partitions.count; ++p) {
        StorageKey key{p, segment_id, to_tag(c)};
        auto it = prefetched.find(key);
        auto piece = decode_event_component(
            it != prefetched.end() ? it->second : store_.get(key));
        events.insert(events.end(), piece.begin(), piece.end());
      }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) {
                       return a.timestamp != b.timestamp
                                  ? a.timestamp < b.timestamp
                                  : a.seq < b.seq;
                     });
    return events;
  }

  /// Reference state resolution by folding eventlists (no shortest-path
  /// machinery). Used when reopening an index and as a slow path for
  /// materializing pending construction nodes.
  EntrySet resolve_node_state_slow(const Skeleton& sk, SkelNodeId node) const {
    const SkeletonNode& n = sk.nodes[node];
    if (n.leaf) return fold_leaf_state(sk, n.leaf_index);
    // Interior: reconstruct via the first child and the reversed delta.
    for (std::uint32_t eid : sk.out[node]) {
      const SkeletonEdge& e = sk.edges[eid];
      if (!e.live || e.kind != SkeletonEdge::Kind::Hierarchy) continue;
      EntrySet child = resolve_node_state_slow(sk, e.to);
      Delta d = fetch_delta(e.payload,
                            {Component::Struct, Component::NodeAttr,
                             Component::EdgeAttr},
                            {});
      return apply_delta(std::move(child), reverse(std::move(d)));
    }
    throw CorruptionError("interior index node " + std::to_string(node) +
                          " has no child deltas");
  }

  // -------------------------------------------------------------------------

  /// Persists the manifest. Called automatically after build and every seal.
  void save_manifest() {
    std::lock_guard lock(skeleton_mu_);
    store_.put(manifest_key(), skeleton_to_manifest(*skeleton_, buffer_),
               /*allow_overwrite=*/true);
    store_.backend().flush();
  }

 private:
  DeltaGraph(std::shared_ptr<KvBackend> backend, const BuildParams& params,
             StoreOptions options)
      : store_(std::move(backend)),
        params_(params),
        options_(options),
        pool_(std::make_unique<GraphPool>(params.partitions,
                                          options.pool_memory_limit)) {
    auto sk = std::make_shared<Skeleton>();
    sk->params = params_;
    skeleton_ = std::move(sk);
  }

  /// Open-existing constructor.
  DeltaGraph(std::shared_ptr<KvBackend> backend, StoreOptions options)
      : store_(std::move(backend)), options_(options) {
    auto stored = store_.get(manifest_key());
    auto [sk, buffer] = skeleton_from_manifest(stored);
    params_ = sk.params;
    buffer_ = std::move(buffer);
    skeleton_ = std::make_shared<Skeleton>(std::move(sk));
    pool_ = std::make_unique<GraphPool>(params_.partitions,
                                        options_.pool_memory_limit);
    rebuild_runtime_state();
  }

  void rebuild_runtime_state() {
    const Skeleton& sk = *skeleton_;
    // Current graph = rightmost leaf state + buffered events.
    EntrySet current = fold_leaf_state(sk, static_cast<std::uint32_t>(
                                               sk.leaves.size() - 1));
    pool_->load_current(current);
    std::uint64_t total = 0;
    for (const SegmentInfo& s : sk.segments) total += s.count;
    next_seq_ = total + buffer_.size();
    last_append_ts_ = sk.max_time;
    now_.store(sk.max_time);
    for (const Event& e : buffer_) {
      pool_->apply_current_event(e);
      if (!buffer_first_ts_) buffer_first_ts_ = e.timestamp;
    }
    // Pending construction states must be resident for future cascades.
    for (const auto& level : sk.pending)
      for (SkelNodeId n : level)
        pending_states_[n] = pool_->overlay(resolve_node_state_slow(sk, n));
  }

  EntrySet fold_leaf_state(const Skeleton& sk, std::uint32_t leaf_index) const {
    EntrySet state;
    auto comps = std::vector<Component>{Component::Struct, Component::NodeAttr,
                                        Component::EdgeAttr};
    for (std::uint32_t s = 0; s < leaf_index; ++s) {
      for (const Event& e : fetch_segment_events(sk.segments[s].id, comps, {}))
        apply_event_to_entries(state, e, Direction::Forward);
    }
    return state;
  }

 public:
  /// Event application at entry-set granularity, shared by query execution
  /// and state folding. Attribute events outside `opts` are skipped.
  static void apply_event_to_entries(EntrySet& s, const Event& e,
                                     Direction dir,
                                     const AttrOptions& opts = AttrOptions::everything()) {
    bool fwd = dir == Direction::Forward;
    auto corrupt = [&](const char* what) {
      return CorruptionError(std::string("event replay: ") + what + " {" +
                             format_event_text(e) + "}");
    };
    switch (e.kind) {
      case EventKind::NodeAdd:
      case EventKind::NodeDel: {
        bool add = (e.kind == EventKind::NodeAdd) == fwd;
        if (add) {
          if (!s.nodes.insert(e.subject).second)
            throw corrupt("node already present");
        } else {
          if (s.nodes.erase(e.subject) == 0) throw corrupt("node absent");
        }
        break;
      }
      case EventKind::EdgeAdd:
      case EventKind::EdgeDel: {
        bool add = (e.kind == EventKind::EdgeAdd) == fwd;
        if (add) {
          if (!s.edges.emplace(e.subject, EdgeInfo{e.from, e.to, e.directed})
                   .second)
            throw corrupt("edge already present");
        } else {
          if (s.edges.erase(e.subject) == 0) throw corrupt("edge absent");
        }
        break;
      }
      case EventKind::NodeAttrSet:
      case EventKind::EdgeAttrSet: {
        bool node_kind = e.kind == EventKind::NodeAttrSet;
        const AttrSpec& spec = node_kind ? opts.node : opts.edge;
        if (!spec.admits(e.attr_key)) break;
        auto& attrs = node_kind ? s.node_attrs : s.edge_attrs;
        const auto& remove_v = fwd ? e.old_value : e.new_value;
        const auto& insert_v = fwd ? e.new_value : e.old_value;
        if (remove_v) {
          if (attrs.erase(AttrBinding{e.subject, e.attr_key, *remove_v}) == 0)
            throw corrupt("attr binding to remove is absent");
        }
        if (insert_v) {
          if (!attrs.emplace(e.subject, e.attr_key, *insert_v).second)
            throw corrupt("attr binding to add already present");
        }
        break;
      }
      case EventKind::TransientEdge:
      case EventKind::TransientNode:
        break;
    }
  }

 private:
  // --- construction ---------------------------------------------------------

  void bulk_build(const Eventlist& log) {
    building_ = true;
    auto sk = std::make_shared<Skeleton>(*skeleton_);
    Skeleton& s = *sk;

    SkeletonNode super;
    super.level = 2;  // raised as the hierarchy grows
    s.add_node(super);

    // Leaf 0: the empty graph at the log's start.
    add_leaf(s, /*e_start=*/0);

    Time prev_ts = 0;
    std::vector<Event> seg;
    seg.reserve(params_.leaf_size);
    for (std::size_t i = 0; i < log.size(); ++i) {
      Event e = log[i];
      if (e.timestamp < prev_ts)
        throw Error("build: log is not chronologically ordered at index " +
                    std::to_string(i));
      prev_ts = e.timestamp;
      e.seq = next_seq_++;
      pool_->apply_current_event(e);
      s.max_time = std::max(s.max_time, e.timestamp);
      seg.push_back(e);
      if (seg.size() == params_.leaf_size) {
        seal_segment(s, seg);
        seg.clear();
      }
    }
    // Trailing events stay in the recent buffer.
    for (Event& e : seg) {
      if (!buffer_first_ts_) buffer_first_ts_ = e.timestamp;
      buffer_.push_back(e);
    }
    last_append_ts_ = prev_ts;
    now_.store(prev_ts);

    flush_partial_groups(s);
    building_ = false;
    skeleton_ = std::move(sk);
    save_manifest();
    pool_->cleanup_all();
  }

  SkelNodeId add_leaf(Skeleton& s, Time e_start) {
    SkeletonNode n;
    n.level = 1;
    n.leaf = true;
    n.leaf_index = static_cast<std::uint32_t>(s.leaves.size());
    n.t_begin = e_start;
    n.t_end = e_start;
    SkelNodeId id = s.add_node(n);
    s.leaves.push_back(id);
    if (s.pending.size() < 2) s.pending.resize(2);
    s.pending[1].push_back(id);
    pending_states_[id] =
        pool_->overlay_dependent(kCurrentGraphId, Delta{});
    return id;
  }

  /// Stores one leaf-eventlist, adds the new leaf and the bidirectional
  /// leaf-to-leaf edges, then cascades full sibling groups upward.
  void seal_segment(Skeleton& s, const std::vector<Event>& events) {
    std::uint32_t seg_index = static_cast<std::uint32_t>(s.segments.size());
    Time e_start = seg_index == 0 ? 0 : events.front().timestamp;

    // Content-addressed id over all partition/component pieces.
    auto pieces = split_by_partition(events, params_.partitions);
    std::uint64_t h = 0xE0E0E0E0ULL;
    std::array<std::vector<std::string>, kComponentCount> blobs;
    for (int c = 0; c < kComponentCount; ++c) {
      blobs[c].resize(pieces.size());
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        blobs[c][p] = encode_event_component(pieces[p], static_cast<Component>(c));
        h = hash_string(blobs[c][p], h);
      }
    }
    std::uint64_t seg_id = h;
    EdgeWeights w(params_.partitions.count);
    for (int c = 0; c < kComponentCount; ++c)
      for (std::size_t p = 0; p < pieces.size(); ++p) {
        store_.put(StorageKey{static_cast<std::uint16_t>(p), seg_id,
                              to_tag(static_cast<Component>(c))},
                   blobs[c][p]);
        w.by_component[c][p] =
            encoded_event_bytes(pieces[p], static_cast<Component>(c));
      }

    s.segments.push_back(SegmentInfo{seg_id, e_start, events.size()});
    SkelNodeId left = s.leaves.back();
    SkelNodeId right = add_leaf(s, events.back().timestamp);
    s.nodes[left].t_end = events.back().timestamp;

    SkeletonEdge fwd;
    fwd.from = left;
    fwd.to = right;
    fwd.kind = SkeletonEdge::Kind::LeafForward;
    fwd.payload = seg_id;
    fwd.segment = seg_index;
    fwd.weights = w;
    s.add_edge(fwd);
    SkeletonEdge bwd = fwd;
    bwd.from = right;
    bwd.to = left;
    bwd.kind = SkeletonEdge::Kind::LeafBackward;
    s.add_edge(bwd);

    pool_->forget_recent_deletions();
    cascade(s);
  }

  /// Groups of exactly `arity` pending siblings get a parent, repeatedly.
  void cascade(Skeleton& s) {
    for (std::uint32_t level = 1; level < s.pending.size(); ++level) {
      while (s.pending[level].size() >= params_.arity) {
        std::vector<SkelNodeId> group(
            s.pending[level].begin(),
            s.pending[level].begin() + params_.arity);
        s.pending[level].erase(s.pending[level].begin(),
                               s.pending[level].begin() + params_.arity);
        make_parent(s, level, group);
      }
    }
  }

  void make_parent(Skeleton& s, std::uint32_t level,
                   const std::vector<SkelNodeId>& group) {
    std::vector<GraphId> child_states;
    child_states.reserve(group.size());
    for (SkelNodeId c : group) child_states.push_back(pending_states_.at(c));

    GraphId parent_state =
        pool_->eval_diff_function_into(params_.function, child_states);
    SkeletonNode pn;
    pn.level = level + 1;
    pn.t_begin = s.nodes[group.front()].t_begin;
    pn.t_end = s.nodes[group.back()].t_end;
    SkelNodeId parent = s.add_node(pn);

    for (SkelNodeId c : group) {
      Delta d = pool_->diff_graphs(parent_state, pending_states_.at(c));
      auto [delta_id, w] = store_delta(d);
      SkeletonEdge e;
      e.from = parent;
      e.to = c;
      e.kind = SkeletonEdge::Kind::Hierarchy;
      e.payload = delta_id;
      e.weights = std::move(w);
      s.add_edge(e);
    }
    for (SkelNodeId c : group) {
      pool_->release(pending_states_.at(c));
      pending_states_.erase(c);
    }
    // Recycle released bit pairs often enough that element bitmaps stay
    // narrow during construction.
    if (++parents_made_ % 16 == 0)
      pool_->cleanup_all();
    else
      pool_->cleanup_pass(4096);

    if (s.pending.size() <= level + 1) s.pending.resize(level + 2);
    s.pending[level + 1].push_back(parent);
    pending_states_[parent] = parent_state;
    if (!building_ && s.nodes[kSuperRoot].level <= pn.level) {
      // A new top level appeared: connect it to the super-root.
      attach_super_root(s, parent, parent_state);
      s.nodes[kSuperRoot].level = pn.level + 1;
    }
  }

  void attach_super_root(Skeleton& s, SkelNodeId node, GraphId state) {
    Delta d;
    d.adds = pool_->project_entries(state);
    auto [delta_id, w] = store_delta(d);
    SkeletonEdge e;
    e.from = kSuperRoot;
    e.to = node;
    e.kind = SkeletonEdge::Kind::Hierarchy;
    e.payload = delta_id;
    e.weights = std::move(w);
    s.add_edge(e);
  }

  /// Build epilogue: trailing sibling groups of fewer than `arity` children
  /// still get a parent over the available children; lone survivors move up
  /// a level to merge there.
  void flush_partial_groups(Skeleton& s) {
    for (std::uint32_t level = 1; level < s.pending.size(); ++level) {
      auto& lvl = s.pending[level];
      if (lvl.empty()) continue;
      bool higher = false;
      for (std::uint32_t u = level + 1; u < s.pending.size(); ++u)
        if (!s.pending[u].empty()) higher = true;
      if (lvl.size() == 1) {
        if (!higher) break;  // single survivor at the top: the root
        // A lone survivor merges one level up; it covers newer leaves than
        // anything already pending there, so it goes last.
        if (s.pending.size() <= level + 1) s.pending.resize(level + 2);
        s.pending[level + 1].push_back(lvl.front());
        lvl.clear();
        continue;
      }
      std::vector<SkelNodeId> group = lvl;
      lvl.clear();
      make_parent(s, level, group);
    }
    // Drop empty trailing levels; the single pending survivor is the root.
    while (s.pending.size() > 2 && s.pending.back().empty()) s.pending.pop_back();
    SkelNodeId root = 0;
    bool found = false;
    for (auto& lvl : s.pending)
      for (SkelNodeId n : lvl) {
        if (found) throw Error("build: flush left multiple roots");
        root = n;
        found = true;
      }
    if (!found) throw Error("build: no root after flush");
    if (s.nodes[kSuperRoot].level <= s.nodes[root].level)
      s.nodes[kSuperRoot].level = s.nodes[root].level + 1;
    // The super-root edge may already exist (top-level growth); add if not.
    bool has_edge = false;
    for (std::uint32_t eid : s.out[kSuperRoot])
      if (s.edges[eid].live && s.edges[eid].to == root) has_edge = true;
    if (!has_edge) attach_super_root(s, root, pending_states_.at(root));
    s.nodes[kSuperRoot].t_begin = 0;
    s.nodes[kSuperRoot].t_end = s.max_time;
  }

  std::pair<std::uint64_t, EdgeWeights> store_delta(const Delta& d) {
    std::map<EdgeId, EdgeInfo> catalog;
    auto need_edge = [&](const std::set<AttrBinding>& bs) {
      for (const auto& b : bs) {
        EdgeId id = std::get<0>(b);
        if (catalog.count(id) || d.adds.edges.count(id) || d.dels.edges.count(id))
          continue;
        auto info = pool_->edge_info(id);
        if (!info)
          throw CorruptionError("delta references unknown edge " +
                                std::to_string(id));
        catalog.emplace(id, *info);
      }
    };
    need_edge(d.adds.edge_attrs);
    need_edge(d.dels.edge_attrs);
    auto pieces = split_by_partition(d, params_.partitions, catalog);

    static const Component kDeltaComps[] = {Component::Struct,
                                            Component::NodeAttr,
                                            Component::EdgeAttr};
    std::uint64_t h = 0xD1D1D1D1ULL;
    std::vector<std::array<std::string, 3>> blobs(pieces.size());
    for (std::size_t p = 0; p < pieces.size(); ++p)
      for (int c = 0; c < 3; ++c) {
        blobs[p][c] = encode_delta_component(pieces[p], kDeltaComps[c]);
        h = hash_string(blobs[p][c], h);
      }
    EdgeWeights w(params_.partitions.count);
    for (std::size_t p = 0; p < pieces.size(); ++p)
      for (int c = 0; c < 3; ++c) {
        store_.put(StorageKey{static_cast<std::uint16_t>(p), h,
                              to_tag(kDeltaComps[c])},
                   blobs[p][c]);
        w.by_component[static_cast<int>(kDeltaComps[c])][p] =
            encoded_entry_bytes(pieces[p], kDeltaComps[c]);
      }
    return {h, std::move(w)};
  }

  /// Seal path shared by appends; assumes the writer lock is held.
  void seal_locked() {
    auto sk = std::make_shared<Skeleton>(*skeleton_);
    seal_segment(*sk, buffer_.events());
    buffer_ = Eventlist{};
    buffer_first_ts_.reset();
    {
      std::lock_guard lock(skeleton_mu_);
      skeleton_ = std::move(sk);
    }
    save_manifest();
  }

  struct Materialization {
    GraphId graph;
    std::uint32_t edge;
  };

  ComponentStore store_;
  BuildParams params_;
  StoreOptions options_;
  std::unique_ptr<GraphPool> pool_;

  mutable std::mutex skeleton_mu_;
  std::shared_ptr<const Skeleton> skeleton_;
  std::map<SkelNodeId, Materialization> materialized_;
  std::map<SkelNodeId, GraphId> pending_states_;

  std::mutex writer_mu_;
  Eventlist buffer_;
  std::optional<Time> buffer_first_ts_;
  Time last_append_ts_ = 0;
  std::uint64_t next_seq_ = 0;
};

}  // namespace hgraph
