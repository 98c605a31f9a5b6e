#pragma once

#include <set>
#include <string>

#include "hgraph/types.hpp"

namespace hgraph {

/// Which attributes a retrieval should fetch, for one element role.
/// Built from concatenated sub-options, processed left to right:
///   -node:all    none of the attributes (the default)
///   +node:all    all attributes
///   +node:attr1  that attribute; overrides -node:all for it
///   -node:attr1  drop that attribute; overrides +node:all for it
/// Later sub-options override earlier ones.
struct AttrSpec {
  bool all = false;
  std::set<std::string> include;  // consulted when all == false
  std::set<std::string> exclude;  // consulted when all == true

  bool admits(const std::string& key) const {
    return all ? exclude.count(key) == 0 : include.count(key) != 0;
  }
  bool none() const { return !all && include.empty(); }

  friend bool operator==(const AttrSpec&, const AttrSpec&) = default;
};

struct AttrOptions {
  AttrSpec node;
  AttrSpec edge;

  friend bool operator==(const AttrOptions&, const AttrOptions&) = default;

  static AttrOptions structure_only() { return AttrOptions{}; }
  static AttrOptions everything() {
    AttrOptions o;
    o.node.all = true;
    o.edge.all = true;
    return o;
  }
};

/// Parses an attr_options string such as "+node:all-node:salary+edge:name".
/// An empty string selects no attributes at all.
inline AttrOptions parse_attr_options(const std::string& text) {
  AttrOptions opts;
  std::size_t i = 0;
  while (i < text.size()) {
    char sign = text[i];
    if (sign != '+' && sign != '-')
      throw ParseError("attr options: expected '+' or '-' at byte offset " +
                       std::to_string(i));
    std::size_t start = i++;
    std::size_t next = text.find_first_of("+-", i);
    if (next == std::string::npos) next = text.size();
    std::string body = text.substr(i, next - i);
    std::size_t colon = body.find(':');
    if (colon == std::string::npos)
      throw ParseError("attr options: missing ':' in sub-option at byte offset " +
                       std::to_string(start));
    std::string role = body.substr(0, colon);
    std::string name = body.substr(colon + 1);
    if (name.empty())
      throw ParseError("attr options: empty attribute name at byte offset " +
                       std::to_string(start));
    if (name.find(':') != std::string::npos)
      throw ParseError("attr options: attribute name may not contain ':' "
                       "(byte offset " + std::to_string(start) + ")");
    AttrSpec* spec = nullptr;
    if (role == "node") {
      spec = &opts.node;
    } else if (role == "edge") {
      spec = &opts.edge;
    } else {
      throw ParseError("attr options: unknown role '" + role +
                       "' at byte offset " + std::to_string(start));
    }
    bool plus = sign == '+';
    if (name == "all") {
      spec->all = plus;
      spec->include.clear();
      spec->exclude.clear();
    } else if (plus) {
      spec->include.insert(name);
      spec->exclude.erase(name);
    } else {
      spec->exclude.insert(name);
      spec->include.erase(name);
    }
    i = next;
  }
  return opts;
}

/// Canonical rendering; parse(render(parse(x))) == parse(x).
inline std::string render_attr_options(const AttrOptions& opts) {
  std::string out;
  auto emit = [&out](const AttrSpec& spec, const char* role) {
    if (spec.all) {
      out += std::string("+") + role + ":all";
      for (const auto& a : spec.exclude) out += std::string("-") + role + ":" + a;
    } else {
      for (const auto& a : spec.include) out += std::string("+") + role + ":" + a;
    }
  };
  emit(opts.node, "node");
  emit(opts.edge, "edge");
  return out;
}

}  // namespace hgraph
