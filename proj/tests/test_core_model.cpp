#include <gtest/gtest.h>

#include "hgraph/attr_options.hpp"
#include "hgraph/event.hpp"
#include "hgraph/snapshot.hpp"
#include "hgraph/time_expression.hpp"
#include "test_helpers.hpp"

using namespace hgraph;

TEST(ApplyEvent, NodeAddForwardAndBackward) {
  Snapshot s;
  Snapshot with_n1 = apply_event(s, node_add(1, 1));
  EXPECT_TRUE(with_n1.has_node(1));
  EXPECT_EQ(with_n1.nodes().size(), 1u);

  Snapshot back = apply_event(with_n1, node_add(1, 1), Direction::Backward);
  EXPECT_TRUE(back.empty());
}

TEST(ApplyEvent, EdgeAdd) {
  Snapshot s;
  s.apply(node_add(1, 1));
  s.apply(node_add(2, 1));
  s.apply(edge_add(1, 1, 2, 2));
  EXPECT_TRUE(s.has_edge(1));
  EXPECT_EQ(s.edges().at(1).from, 1u);
  EXPECT_EQ(s.edges().at(1).to, 2u);
  EXPECT_FALSE(s.edges().at(1).directed);
}

TEST(ApplyEvent, InapplicableEventsNameTheProblem) {
  Snapshot s;
  s.apply(node_add(1, 1));
  EXPECT_THROW(s.apply(node_add(1, 2)), InapplicableEventError);
  EXPECT_THROW(s.apply(edge_add(7, 1, 99, 2)), InapplicableEventError);
  EXPECT_THROW(s.apply(node_del(42, 2)), InapplicableEventError);
  try {
    s.apply(edge_add(7, 1, 99, 2));
    FAIL();
  } catch (const InapplicableEventError& e) {
    EXPECT_NE(std::string(e.what()).find("99"), std::string::npos);
  }
}

TEST(ApplyEvent, NodeDeleteRequiresBareNode) {
  Snapshot s;
  s.apply(node_add(1, 1));
  s.apply(node_add(2, 1));
  s.apply(edge_add(1, 1, 2, 2));
  EXPECT_THROW(s.apply(node_del(1, 3)), InapplicableEventError);
  s.apply(edge_del(1, 1, 2, 3));
  s.apply(node_attr_set(1, "x", std::nullopt, "1", 3));
  EXPECT_THROW(s.apply(node_del(1, 4)), InapplicableEventError);
  s.apply(node_attr_set(1, "x", "1", std::nullopt, 4));
  s.apply(node_del(1, 5));
  EXPECT_FALSE(s.has_node(1));
}

TEST(ApplyEvent, ReversibilityRoundTrips) {
  // 10k randomized apply/unapply round-trips, element for element.
  hgraph::testing::RandomLog gen(7);
  Eventlist log = gen.make(10000);
  Snapshot s;
  for (const Event& e : log) {
    Snapshot before = s;
    s.apply(e, Direction::Forward);
    Snapshot undone = apply_event(s, e, Direction::Backward);
    ASSERT_EQ(undone, before) << format_event_text(e);
  }
}

TEST(Replay, ExampleLog) {
  Eventlist log = hgraph::testing::example_log();

  Snapshot at3 = replay(log, 3);
  ASSERT_EQ(at3.nodes().size(), 2u);
  EXPECT_EQ(at3.nodes().at(1).at("name"), "a");
  EXPECT_TRUE(at3.nodes().at(2).empty());
  ASSERT_EQ(at3.edges().size(), 1u);
  EXPECT_TRUE(at3.has_edge(1));

  Snapshot at4 = replay(log, 4);
  EXPECT_EQ(at4.nodes().size(), 2u);
  EXPECT_EQ(at4.edges().size(), 0u);
  EXPECT_EQ(at4.nodes().at(1).at("name"), "a");

  EXPECT_TRUE(replay(log, 0).empty());
}

TEST(Replay, PrefixMonotonicityOnGrowingLogs) {
  hgraph::testing::RandomLog gen(3);
  Eventlist log = gen.make(2000, /*del_ratio=*/0.0, /*attr_ratio=*/0.0);
  Snapshot prev;
  for (Time t = 0; t <= log[log.size() - 1].timestamp + 1; t += 97) {
    Snapshot cur = replay(log, t);
    for (const auto& [id, attrs] : prev.nodes()) EXPECT_TRUE(cur.has_node(id));
    for (const auto& [id, rec] : prev.edges()) EXPECT_TRUE(cur.has_edge(id));
    prev = cur;
  }
}

TEST(Replay, TransientNeutrality) {
  hgraph::testing::RandomLog gen(11);
  Eventlist log = gen.make(3000, 0.2, 0.2, /*transient_ratio=*/0.15);
  std::vector<Event> plain;
  for (const Event& e : log)
    if (!is_transient_kind(e.kind)) plain.push_back(e);
  Eventlist stripped{std::move(plain)};
  Time max_t = log[log.size() - 1].timestamp;
  for (Time t = 0; t <= max_t + 1; t += 53)
    EXPECT_EQ(replay(log, t), replay(stripped, t));
}

TEST(Replay, ErrorsCarryOffendingIndex) {
  Eventlist log;
  log.push_back(node_add(1, 1));
  log.push_back(edge_add(1, 1, 2, 2));  // endpoint 2 missing
  try {
    replay(log, 10);
    FAIL();
  } catch (const InapplicableEventError& e) {
    EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos);
  }
}

// ---------------------------------------------------------------------------

TEST(AttrOptions, PaperExample) {
  AttrOptions o = parse_attr_options("+node:all-node:salary+edge:name");
  EXPECT_TRUE(o.node.all);
  EXPECT_TRUE(o.node.admits("age"));
  EXPECT_FALSE(o.node.admits("salary"));
  EXPECT_FALSE(o.edge.all);
  EXPECT_TRUE(o.edge.admits("name"));
  EXPECT_FALSE(o.edge.admits("weight"));
}

TEST(AttrOptions, DefaultIsNone) {
  AttrOptions o = parse_attr_options("");
  EXPECT_TRUE(o.node.none());
  EXPECT_TRUE(o.edge.none());
  EXPECT_FALSE(o.node.admits("anything"));
}

TEST(AttrOptions, SingleInclude) {
  AttrOptions o = parse_attr_options("+node:age");
  EXPECT_TRUE(o.node.admits("age"));
  EXPECT_FALSE(o.node.admits("salary"));
  EXPECT_TRUE(o.edge.none());
}

TEST(AttrOptions, LaterOptionsOverrideEarlier) {
  AttrOptions o = parse_attr_options("+node:salary-node:all");
  EXPECT_TRUE(o.node.none());
  o = parse_attr_options("-node:salary+node:all");
  EXPECT_TRUE(o.node.admits("salary"));
}

TEST(AttrOptions, MalformedReportsByteOffset) {
  try {
    parse_attr_options("+node:all~edge:x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
  }
  EXPECT_THROW(parse_attr_options("node:all"), ParseError);
  EXPECT_THROW(parse_attr_options("+cat:all"), ParseError);
  EXPECT_THROW(parse_attr_options("+node:"), ParseError);
}

TEST(AttrOptions, RenderParseIdempotent) {
  for (const char* text :
       {"", "+node:all", "+node:all-node:salary+edge:name", "+node:a+node:b",
        "+edge:all-edge:w-edge:q", "-node:all+node:x"}) {
    AttrOptions once = parse_attr_options(text);
    AttrOptions twice = parse_attr_options(render_attr_options(once));
    EXPECT_EQ(once, twice) << text;
  }
}

// ---------------------------------------------------------------------------

TEST(TimeExpression, PaperExample) {
  TimeExpression tex = parse_time_expression({3, 4}, "t1 & !t2");
  EXPECT_TRUE(eval_time_expression(tex, {true, false}));
  EXPECT_FALSE(eval_time_expression(tex, {true, true}));
}

TEST(TimeExpression, Disjunction) {
  TimeExpression tex = parse_time_expression({1, 2}, "t1 | t2");
  EXPECT_FALSE(eval_time_expression(tex, {false, false}));
  EXPECT_TRUE(eval_time_expression(tex, {false, true}));
}

TEST(TimeExpression, LengthMismatchRejected) {
  TimeExpression tex = parse_time_expression({1, 2}, "t1 & t2");
  EXPECT_THROW(eval_time_expression(tex, {true}), Error);
}

TEST(TimeExpression, ParserRejectsOutOfRange) {
  EXPECT_THROW(parse_time_expression({1, 2}, "t3"), ParseError);
  EXPECT_THROW(parse_time_expression({1}, "t1 &"), ParseError);
  EXPECT_THROW(parse_time_expression({1}, "(t1"), ParseError);
}

// ---------------------------------------------------------------------------

TEST(EventCodec, TextRoundTrip) {
  Eventlist log = hgraph::testing::RandomLog(5).make(500, 0.2, 0.3, 0.1);
  for (const Event& e : log) {
    Event back = parse_event_text(format_event_text(e));
    back.seq = e.seq;
    EXPECT_EQ(back, e);
  }
}

TEST(EventCodec, TextHandlesAwkwardValues) {
  Event e = node_attr_set(5, "a key", "50% space", std::nullopt, 9);
  Event back = parse_event_text(format_event_text(e));
  EXPECT_EQ(back.attr_key, "a key");
  EXPECT_EQ(*back.old_value, "50% space");
  EXPECT_FALSE(back.new_value.has_value());
}

TEST(EventCodec, PaperStyleLine) {
  Event e = parse_event_text("NE E:77 N:23 N:4590 directed:no 1069910400");
  EXPECT_EQ(e.kind, EventKind::EdgeAdd);
  EXPECT_EQ(e.subject, 77u);
  EXPECT_EQ(e.from, 23u);
  EXPECT_EQ(e.to, 4590u);
  EXPECT_FALSE(e.directed);
  EXPECT_EQ(e.timestamp, 1069910400u);
}

TEST(EventCodec, BinaryRoundTrip) {
  Eventlist log = hgraph::testing::RandomLog(6).make(800, 0.2, 0.3, 0.1);
  Eventlist back = decode_eventlist(encode_eventlist(log));
  ASSERT_EQ(back.size(), log.size());
  for (std::size_t i = 0; i < log.size(); ++i) EXPECT_EQ(back[i], log[i]);
}

TEST(EventCodec, ParseErrorsCarryOffset) {
  try {
    parse_event_text("NE E:x N:1 N:2 directed:no 3");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
  }
}
