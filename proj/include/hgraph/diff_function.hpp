#pragma once

#include <span>
#include <string>
#include <vector>

#include "hgraph/delta.hpp"
#include "hgraph/entry.hpp"

namespace hgraph {

/// Rule producing an interior index node's state from its children, ordered
/// oldest to newest. The fractional functions select entries with a seeded
/// hash so that construction is deterministic and byte-reproducible, and the
/// same selection is used for the added and the removed halves, which keeps
/// the result of Mixed well defined.
struct DiffFunctionSpec {
  enum class Kind : std::uint8_t {
    Intersection = 0,
    Union = 1,
    Skewed = 2,
    RightSkewed = 3,
    LeftSkewed = 4,
    Mixed = 5,
    Balanced = 6,
    Empty = 7,
  };

  Kind kind = Kind::Balanced;
  double r1 = 0.5;
  double r2 = 0.5;
  std::uint64_t seed = 0;

  static DiffFunctionSpec intersection() { return {Kind::Intersection, 0, 0, 0}; }
  static DiffFunctionSpec set_union() { return {Kind::Union, 0, 0, 0}; }
  static DiffFunctionSpec skewed(double r, std::uint64_t seed = 0) {
    return validated({Kind::Skewed, r, r, seed});
  }
  static DiffFunctionSpec right_skewed(double r, std::uint64_t seed = 0) {
    return validated({Kind::RightSkewed, r, 0, seed});
  }
  static DiffFunctionSpec left_skewed(double r, std::uint64_t seed = 0) {
    return validated({Kind::LeftSkewed, r, 0, seed});
  }
  static DiffFunctionSpec mixed(double r1, double r2, std::uint64_t seed = 0) {
    return validated({Kind::Mixed, r1, r2, seed});
  }
  static DiffFunctionSpec balanced(std::uint64_t seed = 0) {
    return {Kind::Balanced, 0.5, 0.5, seed};
  }
  static DiffFunctionSpec empty() { return {Kind::Empty, 0, 0, 0}; }

  static DiffFunctionSpec validated(DiffFunctionSpec s) {
    if (s.r1 < 0.0 || s.r1 > 1.0 || s.r2 < 0.0 || s.r2 > 1.0)
      throw Error("differential function: parameters must lie in [0,1]");
    if ((s.kind == Kind::Mixed || s.kind == Kind::Skewed) && s.r2 > s.r1)
      throw Error("differential function: requires r2 <= r1");
    return s;
  }

  std::string name() const {
    switch (kind) {
      case Kind::Intersection: return "intersection";
      case Kind::Union: return "union";
      case Kind::Skewed: return "skewed(" + std::to_string(r1) + ")";
      case Kind::RightSkewed: return "rightskewed(" + std::to_string(r1) + ")";
      case Kind::LeftSkewed: return "leftskewed(" + std::to_string(r1) + ")";
      case Kind::Mixed:
        return "mixed(" + std::to_string(r1) + "," + std::to_string(r2) + ")";
      case Kind::Balanced: return "balanced";
      case Kind::Empty: return "empty";
    }
    return "?";
  }

  friend bool operator==(const DiffFunctionSpec&, const DiffFunctionSpec&) = default;
};

// ---------------------------------------------------------------------------
// Seeded fractional selection.

/// Deterministic subset of ids: an id is selected iff its seeded hash lands
/// in the first `fraction` of the hash range. The same (seed, fraction)
/// always yields the same subset.
inline std::set<std::uint64_t> select_fraction(const std::set<std::uint64_t>& ids,
                                               double fraction,
                                               std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    throw Error("select_fraction: fraction must lie in [0,1]");
  std::set<std::uint64_t> out;
  for (std::uint64_t id : ids)
    if (hash_selected(hash_combine(seed, id), fraction)) out.insert(id);
  return out;
}

/// Entry-level selection over a whole state, used by the fractional
/// differential functions.
inline EntrySet select_fraction(const EntrySet& s, double fraction,
                                std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    throw Error("select_fraction: fraction must lie in [0,1]");
  EntrySet out;
  for (NodeId id : s.nodes)
    if (hash_selected(entry_select_hash(seed, ElementRole::Node, id), fraction))
      out.nodes.insert(id);
  for (const auto& [id, info] : s.edges)
    if (hash_selected(entry_select_hash(seed, ElementRole::Edge, id), fraction))
      out.edges.emplace(id, info);
  for (const auto& b : s.node_attrs)
    if (hash_selected(entry_select_hash(seed, ElementRole::Node, b), fraction))
      out.node_attrs.insert(b);
  for (const auto& b : s.edge_attrs)
    if (hash_selected(entry_select_hash(seed, ElementRole::Edge, b), fraction))
      out.edge_attrs.insert(b);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation. All functions reduce to a per-entry membership rule over the
// child membership row, evaluated in one pass over the union of the
// children's entries.

namespace detail {

/// Membership rule shared by the set-algebra evaluation here and the
/// bitmap-row evaluation inside the graph pool. `row[i]` says whether the
/// entry is in child i; `h` is the entry's selection hash.
inline bool diff_function_member(const DiffFunctionSpec& spec,
                                 std::span<const unsigned char> row, std::uint64_t h) {
  std::size_t k = row.size();
  switch (spec.kind) {
    case DiffFunctionSpec::Kind::Empty:
      return false;
    case DiffFunctionSpec::Kind::Intersection: {
      for (unsigned char b : row)
        if (!b) return false;
      return true;
    }
    case DiffFunctionSpec::Kind::Union: {
      for (unsigned char b : row)
        if (b) return true;
      return false;
    }
    case DiffFunctionSpec::Kind::RightSkewed: {
      if (k != 2)
        throw Error("right-skewed differential function is defined for two "
                    "children only");
      bool both = row[0] && row[1];
      return both || (row[1] && !row[0] && hash_selected(h, spec.r1));
    }
    case DiffFunctionSpec::Kind::LeftSkewed: {
      if (k != 2)
        throw Error("left-skewed differential function is defined for two "
                    "children only");
      bool both = row[0] && row[1];
      return both || (row[0] && !row[1] && hash_selected(h, spec.r1));
    }
    case DiffFunctionSpec::Kind::Skewed:
      if (k != 2)
        throw Error("skewed differential function is defined for two "
                    "children only");
      [[fallthrough]];
    case DiffFunctionSpec::Kind::Mixed:
    case DiffFunctionSpec::Kind::Balanced: {
      // c1 + r1*(delta chain) - r2*(rho chain), pairwise over consecutive
      // children. Shared-seed selection with r2 <= r1 keeps every removal
      // valid: anything picked for removal was either in c1 or also picked
      // for addition.
      bool in_delta = false, in_rho = false;
      for (std::size_t i = 0; i + 1 < k; ++i) {
        if (!row[i] && row[i + 1]) in_delta = true;
        if (row[i] && !row[i + 1]) in_rho = true;
      }
      bool member = row[0] || (in_delta && hash_selected(h, spec.r1));
      if (in_rho && hash_selected(h, spec.r2)) member = false;
      return member;
    }
  }
  return false;
}

}  // namespace detail

/// Computes the parent state for `children` ordered oldest to newest.
inline EntrySet eval_diff_function(const DiffFunctionSpec& spec,
                                   std::span<const EntrySet> children) {
  if (children.empty())
    throw Error("differential function needs at least one child");
  std::size_t k = children.size();
  if (k == 1) {
    if (spec.kind == DiffFunctionSpec::Kind::Empty) return EntrySet{};
    return children[0];
  }
  EntrySet out;
  std::vector<unsigned char> row(k);

  // Nodes.
  {
    std::set<NodeId> all;
    for (const auto& c : children) all.insert(c.nodes.begin(), c.nodes.end());
    for (NodeId id : all) {
      for (std::size_t i = 0; i < k; ++i) row[i] = children[i].nodes.count(id);
      if (detail::diff_function_member(
              spec, row, entry_select_hash(spec.seed, ElementRole::Node, id)))
        out.nodes.insert(id);
    }
  }
  // Edges.
  {
    std::map<EdgeId, EdgeInfo> all;
    for (const auto& c : children) all.insert(c.edges.begin(), c.edges.end());
    for (const auto& [id, info] : all) {
      for (std::size_t i = 0; i < k; ++i) row[i] = children[i].edges.count(id);
      if (detail::diff_function_member(
              spec, row, entry_select_hash(spec.seed, ElementRole::Edge, id)))
        out.edges.emplace(id, info);
    }
  }
  // Attribute bindings.
  auto bindings = [&](auto member_of, ElementRole role, std::set<AttrBinding>& dst) {
    std::set<AttrBinding> all;
    for (const auto& c : children) {
      const auto& src = member_of(c);
      all.insert(src.begin(), src.end());
    }
    for (const auto& b : all) {
      for (std::size_t i = 0; i < k; ++i)
        row[i] = member_of(children[i]).count(b);
      if (detail::diff_function_member(spec, row,
                                       entry_select_hash(spec.seed, role, b)))
        dst.insert(b);
    }
  };
  bindings([](const EntrySet& c) -> const std::set<AttrBinding>& { return c.node_attrs; },
           ElementRole::Node, out.node_attrs);
  bindings([](const EntrySet& c) -> const std::set<AttrBinding>& { return c.edge_attrs; },
           ElementRole::Edge, out.edge_attrs);
  return out;
}

inline EntrySet eval_diff_function(const DiffFunctionSpec& spec,
                                   const std::vector<EntrySet>& children) {
  return eval_diff_function(spec, std::span<const EntrySet>(children));
}

}  // namespace hgraph
