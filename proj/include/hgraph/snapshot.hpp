#pragma once

#include <map>
#include <string>

#include "hgraph/event.hpp"
#include "hgraph/types.hpp"

namespace hgraph {

using AttrTable = std::map<std::string, std::string>;

enum class Direction : std::uint8_t { Forward = 0, Backward = 1 };

/// A graph as of one instant: nodes and edges with attribute tables.
/// Every edge endpoint is a node in the snapshot.
class Snapshot {
 public:
  struct EdgeRec {
    NodeId from = 0;
    NodeId to = 0;
    bool directed = false;
    AttrTable attrs;

    friend bool operator==(const EdgeRec&, const EdgeRec&) = default;
  };

  using NodeMap = std::map<NodeId, AttrTable>;
  using EdgeMap = std::map<EdgeId, EdgeRec>;

  const NodeMap& nodes() const { return nodes_; }
  const EdgeMap& edges() const { return edges_; }

  bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
  bool has_edge(EdgeId id) const { return edges_.count(id) != 0; }
  bool empty() const { return nodes_.empty() && edges_.empty(); }

  std::size_t node_degree(NodeId id) const {
    auto it = degree_.find(id);
    return it == degree_.end() ? 0 : it->second;
  }

  friend bool operator==(const Snapshot& a, const Snapshot& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

  /// Applies one event in the given direction. Transient events exist only at
  /// their instant and leave the snapshot unchanged. Throws
  /// InapplicableEventError naming the event and the offending state.
  void apply(const Event& e, Direction dir = Direction::Forward) {
    bool fwd = dir == Direction::Forward;
    switch (e.kind) {
      case EventKind::NodeAdd:
        if (fwd) {
          add_node(e);
        } else {
          remove_node(e);
        }
        break;
      case EventKind::NodeDel:
        if (fwd) {
          remove_node(e);
        } else {
          add_node(e);
        }
        break;
      case EventKind::EdgeAdd:
        if (fwd) {
          add_edge(e);
        } else {
          remove_edge(e);
        }
        break;
      case EventKind::EdgeDel:
        if (fwd) {
          remove_edge(e);
        } else {
          add_edge(e);
        }
        break;
      case EventKind::NodeAttrSet: {
        auto it = nodes_.find(e.subject);
        if (it == nodes_.end())
          throw inapplicable(e, "node absent");
        set_attr(it->second, e, fwd);
        break;
      }
      case EventKind::EdgeAttrSet: {
        auto it = edges_.find(e.subject);
        if (it == edges_.end())
          throw inapplicable(e, "edge absent");
        set_attr(it->second.attrs, e, fwd);
        break;
      }
      case EventKind::TransientEdge:
      case EventKind::TransientNode:
        break;
    }
  }

 private:
  InapplicableEventError inapplicable(const Event& e, const std::string& why) const {
    return InapplicableEventError(
        "inapplicable event {" + format_event_text(e) + "}: " + why +
        " (snapshot: " + std::to_string(nodes_.size()) + " nodes, " +
        std::to_string(edges_.size()) + " edges)");
  }

  void add_node(const Event& e) {
    if (!nodes_.emplace(e.subject, AttrTable{}).second)
      throw inapplicable(e, "node id already present");
  }

  void remove_node(const Event& e) {
    auto it = nodes_.find(e.subject);
    if (it == nodes_.end()) throw inapplicable(e, "node absent");
    if (!it->second.empty())
      throw inapplicable(e, "node still carries attributes");
    if (node_degree(e.subject) != 0)
      throw inapplicable(e, "node still has incident edges");
    nodes_.erase(it);
    degree_.erase(e.subject);
  }

  void add_edge(const Event& e) {
    if (!nodes_.count(e.from))
      throw inapplicable(e, "endpoint node " + std::to_string(e.from) + " absent");
    if (!nodes_.count(e.to))
      throw inapplicable(e, "endpoint node " + std::to_string(e.to) + " absent");
    if (edges_.count(e.subject))
      throw inapplicable(e, "edge id already present");
    edges_.emplace(e.subject, EdgeRec{e.from, e.to, e.directed, {}});
    ++degree_[e.from];
    ++degree_[e.to];
  }

  void remove_edge(const Event& e) {
    auto it = edges_.find(e.subject);
    if (it == edges_.end()) throw inapplicable(e, "edge absent");
    const EdgeRec& rec = it->second;
    if (rec.from != e.from || rec.to != e.to || rec.directed != e.directed)
      throw inapplicable(e, "edge endpoints disagree with stored record");
    if (!rec.attrs.empty())
      throw inapplicable(e, "edge still carries attributes");
    --degree_[rec.from];
    --degree_[rec.to];
    edges_.erase(it);
  }

  void set_attr(AttrTable& attrs, const Event& e, bool fwd) {
    const auto& expect = fwd ? e.old_value : e.new_value;
    const auto& next = fwd ? e.new_value : e.old_value;
    auto it = attrs.find(e.attr_key);
    bool bound = it != attrs.end();
    if (expect.has_value() != bound || (bound && *expect != it->second))
      throw inapplicable(e, "attribute '" + e.attr_key +
                                "' value disagrees with event");
    if (next) {
      attrs[e.attr_key] = *next;
    } else if (bound) {
      attrs.erase(it);
    }
  }

  NodeMap nodes_;
  EdgeMap edges_;
  std::map<NodeId, std::size_t> degree_;
};

inline Snapshot apply_event(Snapshot s, const Event& e,
                            Direction dir = Direction::Forward) {
  s.apply(e, dir);
  return s;
}

/// Replays, from the empty graph, every event with timestamp <= t in list
/// order. Events with timestamp exactly t are included. This is the
/// independent oracle that anchors all retrieval correctness tests.
inline Snapshot replay(const Eventlist& log, Time t) {
  Snapshot s;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const Event& e = log[i];
    if (e.timestamp > t) break;
    try {
      s.apply(e, Direction::Forward);
    } catch (const InapplicableEventError& err) {
      throw InapplicableEventError("replay failed at event index " +
                                   std::to_string(i) + ": " + err.what());
    }
  }
  return s;
}

}  // namespace hgraph
