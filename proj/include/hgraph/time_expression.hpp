#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "hgraph/types.hpp"

namespace hgraph {

/// Boolean expression over a list of time points. Leaves reference time
/// points by index; internal nodes combine with AND / OR / NOT.
struct TimeExpression {
  struct Node {
    enum class Op : std::uint8_t { Point, And, Or, Not } op = Op::Point;
    std::size_t point = 0;  // Point
    std::vector<Node> children;

    static Node pt(std::size_t i) { return Node{Op::Point, i, {}}; }
    static Node negate(Node c) { return Node{Op::Not, 0, {std::move(c)}}; }
    static Node all_of(std::vector<Node> cs) { return Node{Op::And, 0, std::move(cs)}; }
    static Node any_of(std::vector<Node> cs) { return Node{Op::Or, 0, std::move(cs)}; }
  };

  std::vector<Time> timepoints;
  Node expr;
};

/// Evaluates the expression for one element given its per-timepoint
/// membership vector. The vector length must equal the timepoint count.
inline bool eval_time_expression(const TimeExpression& tex,
                                 const std::vector<bool>& membership) {
  if (membership.size() != tex.timepoints.size())
    throw Error("time expression: membership vector length " +
                std::to_string(membership.size()) + " != timepoint count " +
                std::to_string(tex.timepoints.size()));
  struct Eval {
    const std::vector<bool>& m;
    bool run(const TimeExpression::Node& n) const {
      switch (n.op) {
        case TimeExpression::Node::Op::Point:
          if (n.point >= m.size())
            throw Error("time expression: timepoint index " +
                        std::to_string(n.point) + " out of range");
          return m[n.point];
        case TimeExpression::Node::Op::Not:
          return !run(n.children.at(0));
        case TimeExpression::Node::Op::And: {
          for (const auto& c : n.children)
            if (!run(c)) return false;
          return true;
        }
        case TimeExpression::Node::Op::Or: {
          for (const auto& c : n.children)
            if (run(c)) return true;
          return false;
        }
      }
      return false;
    }
  };
  return Eval{membership}.run(tex.expr);
}

// ---------------------------------------------------------------------------
// Expression text parser: `t1 & !t2 | (t3 & t1)`. Timepoint references are
// 1-based (t1 .. tk). '&' binds tighter than '|'.

namespace detail {

class TexParser {
 public:
  TexParser(const std::string& s, std::size_t npoints)
      : s_(s), npoints_(npoints) {}

  TimeExpression::Node parse() {
    auto n = parse_or();
    skip_ws();
    if (pos_ != s_.size())
      throw ParseError("time expression: trailing input at byte offset " +
                       std::to_string(pos_));
    return n;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  TimeExpression::Node parse_or() {
    std::vector<TimeExpression::Node> terms;
    terms.push_back(parse_and());
    while (eat('|')) terms.push_back(parse_and());
    if (terms.size() == 1) return std::move(terms[0]);
    return TimeExpression::Node::any_of(std::move(terms));
  }

  TimeExpression::Node parse_and() {
    std::vector<TimeExpression::Node> terms;
    terms.push_back(parse_unary());
    while (eat('&')) terms.push_back(parse_unary());
    if (terms.size() == 1) return std::move(terms[0]);
    return TimeExpression::Node::all_of(std::move(terms));
  }

  TimeExpression::Node parse_unary() {
    if (eat('!')) return TimeExpression::Node::negate(parse_unary());
    if (eat('(')) {
      auto inner = parse_or();
      if (!eat(')'))
        throw ParseError("time expression: missing ')' at byte offset " +
                         std::to_string(pos_));
      return inner;
    }
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != 't')
      throw ParseError("time expression: expected 't<index>' at byte offset " +
                       std::to_string(pos_));
    ++pos_;
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (pos_ == start)
      throw ParseError("time expression: expected digits after 't' at byte offset " +
                       std::to_string(start));
    std::size_t idx = std::stoull(s_.substr(start, pos_ - start));
    if (idx < 1 || idx > npoints_)
      throw ParseError("time expression: t" + std::to_string(idx) +
                       " out of range (have " + std::to_string(npoints_) +
                       " timepoints)");
    return TimeExpression::Node::pt(idx - 1);
  }

  const std::string& s_;
  std::size_t npoints_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline TimeExpression parse_time_expression(std::vector<Time> points,
                                            const std::string& expr) {
  TimeExpression tex;
  tex.timepoints = std::move(points);
  tex.expr = detail::TexParser(expr, tex.timepoints.size()).parse();
  return tex;
}

}  // namespace hgraph
