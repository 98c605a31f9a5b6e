#include <gtest/gtest.h>

#include "hgraph/graphpool.hpp"
#include "test_helpers.hpp"

using namespace hgraph;

namespace {

EntrySet state_at(const Eventlist& log, Time t) {
  return to_entry_set(replay(log, t));
}

}  // namespace

TEST(GraphPool, CurrentGraphTracksReplay) {
  Eventlist log = hgraph::testing::RandomLog(3).make(3000, 0.2, 0.3, 0.05);
  GraphPool pool;
  for (const Event& e : log) pool.apply_current_event(e);
  EXPECT_EQ(pool.project_snapshot(kCurrentGraphId), replay(log, kTimeMax));
}

TEST(GraphPool, OverlayThenProjectIsIdentity) {
  Eventlist log = hgraph::testing::RandomLog(5).make(2000, 0.25, 0.3, 0.0);
  GraphPool pool;
  EntrySet s = state_at(log, 1200);
  GraphId g = pool.overlay(s);
  EXPECT_EQ(pool.project_entries(g), s);
}

TEST(GraphPool, OverlaysShareElements) {
  // Two overlays sharing ~90% of elements occupy ~1.1x one snapshot.
  Eventlist log = hgraph::testing::RandomLog(7).make(5000, 0.0, 0.0, 0.0);
  GraphPool pool;
  EntrySet a = state_at(log, 4500);
  EntrySet b = state_at(log, 5000);
  GraphId ga = pool.overlay(a);
  PoolStats one = pool.stats();
  GraphId gb = pool.overlay(b);
  PoolStats two = pool.stats();
  double ratio = static_cast<double>(two.live_nodes + two.live_edges) /
                 static_cast<double>(one.live_nodes + one.live_edges);
  EXPECT_LT(ratio, 1.25);
  EXPECT_EQ(pool.project_entries(ga), a);
  EXPECT_EQ(pool.project_entries(gb), b);
}

TEST(GraphPool, DependentOverlayEqualToDependencyWritesNothing) {
  Eventlist log = hgraph::testing::RandomLog(9).make(1000, 0.2, 0.2, 0.0);
  GraphPool pool;
  EntrySet s = state_at(log, 800);
  GraphId mat = pool.overlay(s, GraphKind::Materialized);
  GraphId dep = pool.overlay_dependent(mat, Delta{});
  PoolStats st = pool.stats();
  for (const auto& g : st.graphs)
    if (g.id == dep) EXPECT_EQ(g.explicit_bit_writes, 0u);
  EXPECT_EQ(pool.project_entries(dep), s);
}

TEST(GraphPool, DependentOverlayResolvesDiffs) {
  Eventlist log = hgraph::testing::RandomLog(11).make(3000, 0.25, 0.25, 0.0);
  GraphPool pool;
  EntrySet base = state_at(log, 1500);
  EntrySet other = state_at(log, 1800);
  GraphId mat = pool.overlay(base, GraphKind::Materialized);
  GraphId dep = pool.overlay_dependent(mat, diff(base, other));
  EXPECT_EQ(pool.project_entries(dep), other);
  // Membership through the bit pair: present regardless of dependency when
  // the override marks it in, absent when overridden out.
  Delta d = diff(base, other);
  if (!d.adds.nodes.empty())
    EXPECT_TRUE(pool.member_node(dep, *d.adds.nodes.begin()));
  if (!d.dels.nodes.empty())
    EXPECT_FALSE(pool.member_node(dep, *d.dels.nodes.begin()));
}

TEST(GraphPool, DependentsSurviveCurrentGraphUpdates) {
  GraphPool pool;
  pool.apply_current_event(node_add(1, 1));
  pool.apply_current_event(node_add(2, 1));
  GraphId snap = pool.overlay_dependent(kCurrentGraphId, Delta{});
  // Mutate current afterwards: the dependent must keep its frozen state.
  pool.apply_current_event(node_add(3, 2));
  pool.apply_current_event(node_del(2, 3));
  EXPECT_TRUE(pool.member_node(snap, 1));
  EXPECT_TRUE(pool.member_node(snap, 2));
  EXPECT_FALSE(pool.member_node(snap, 3));
  EXPECT_TRUE(pool.member_node(kCurrentGraphId, 3));
  EXPECT_FALSE(pool.member_node(kCurrentGraphId, 2));
}

TEST(GraphPool, ReleaseIsLazyAndCleanupReclaims) {
  Eventlist log = hgraph::testing::RandomLog(13).make(2000, 0.2, 0.2, 0.0);
  GraphPool pool;
  EntrySet a = state_at(log, 700);
  EntrySet b = state_at(log, 1900);
  GraphId ga = pool.overlay(a);
  GraphId gb = pool.overlay(b);
  pool.release(ga);
  // Live graph projections are unaffected before any cleanup.
  EXPECT_EQ(pool.project_entries(gb), b);
  // Partial cleanup with a small budget, then the rest.
  std::size_t scanned = pool.cleanup_pass(10);
  EXPECT_LE(scanned, 10u);
  EXPECT_EQ(pool.project_entries(gb), b);
  pool.cleanup_all();
  EXPECT_EQ(pool.project_entries(gb), b);

  // Pool now holds exactly the union of remaining live graphs: rebuild an
  // equal pool from scratch and compare footprints.
  GraphPool fresh;
  fresh.overlay(b);
  PoolStats after = pool.stats();
  PoolStats rebuilt = fresh.stats();
  EXPECT_EQ(after.live_nodes, rebuilt.live_nodes);
  EXPECT_EQ(after.live_edges, rebuilt.live_edges);
}

TEST(GraphPool, ReleasingCurrentRejected) {
  GraphPool pool;
  EXPECT_THROW(pool.release(kCurrentGraphId), Error);
}

TEST(GraphPool, ReleasedHandleRejected) {
  GraphPool pool;
  GraphId g = pool.overlay(EntrySet{});
  pool.release(g);
  EXPECT_THROW(pool.project_entries(g), Error);
}

TEST(GraphPool, MemoryCeilingAbortsAtomically) {
  Eventlist log = hgraph::testing::RandomLog(15).make(800, 0.0, 0.0, 0.0);
  GraphPool pool({1, 0}, /*memory_limit_bytes=*/40000);
  EntrySet small = state_at(log, 100);
  GraphId g = pool.overlay(small);
  PoolStats before = pool.stats();
  EXPECT_THROW(pool.overlay(state_at(log, 800)), Error);
  PoolStats after = pool.stats();
  EXPECT_EQ(before.live_nodes, after.live_nodes);
  EXPECT_EQ(before.live_edges, after.live_edges);
  EXPECT_EQ(pool.project_entries(g), small);
}

TEST(GraphPool, EvalDiffFunctionMatchesEntrySetRoute) {
  Eventlist log = hgraph::testing::RandomLog(17).make(4000, 0.25, 0.3, 0.0);
  GraphPool pool;
  std::vector<EntrySet> kid_states;
  std::vector<GraphId> kids;
  for (Time t : {600u, 1700u, 2900u, 3900u}) {
    kid_states.push_back(state_at(log, t));
    kids.push_back(pool.overlay(kid_states.back()));
  }
  for (DiffFunctionSpec spec :
       {DiffFunctionSpec::intersection(), DiffFunctionSpec::set_union(),
        DiffFunctionSpec::balanced(99), DiffFunctionSpec::mixed(0.8, 0.3, 7),
        DiffFunctionSpec::empty()}) {
    GraphId parent = pool.eval_diff_function_into(spec, kids);
    EXPECT_EQ(pool.project_entries(parent), eval_diff_function(spec, kid_states))
        << spec.name();
    pool.release(parent);
    pool.cleanup_all();
  }
}

TEST(GraphPool, DiffGraphsMatchesEntrySetDiff) {
  Eventlist log = hgraph::testing::RandomLog(19).make(3000, 0.25, 0.3, 0.0);
  GraphPool pool({3, 5});
  EntrySet a = state_at(log, 1000);
  EntrySet b = state_at(log, 2500);
  GraphId ga = pool.overlay(a);
  GraphId gb = pool.overlay(b);
  EXPECT_EQ(pool.diff_graphs(ga, gb), diff(a, b));
}

TEST(GraphPool, ParallelOverlayMatchesSerial) {
  Eventlist log = hgraph::testing::RandomLog(21).make(5000, 0.25, 0.3, 0.0);
  PartitionMap pm{4, 11};
  EntrySet s = state_at(log, 4500);
  Delta as_delta = diff(EntrySet{}, s);
  auto pieces_delta = split_by_partition(as_delta, pm, s.edges);
  std::vector<EntrySet> pieces;
  for (auto& p : pieces_delta) pieces.push_back(p.adds);

  GraphPool pool(pm);
  GraphId g = pool.overlay_parallel(pieces, GraphKind::Historical, 4);
  EXPECT_EQ(pool.project_entries(g), s);
}

TEST(GraphPool, NeighborIterationFiltersByBits) {
  GraphPool pool;
  EntrySet a;
  a.nodes = {1, 2, 3};
  a.edges.emplace(10, EdgeInfo{1, 2, false});
  EntrySet b;
  b.nodes = {1, 2, 3};
  b.edges.emplace(11, EdgeInfo{1, 3, false});
  GraphId ga = pool.overlay(a);
  GraphId gb = pool.overlay(b);
  std::vector<NodeId> na, nb;
  pool.for_each_neighbor(ga, 1, [&](NodeId o, EdgeId) { na.push_back(o); });
  pool.for_each_neighbor(gb, 1, [&](NodeId o, EdgeId) { nb.push_back(o); });
  EXPECT_EQ(na, std::vector<NodeId>{2});
  EXPECT_EQ(nb, std::vector<NodeId>{3});
}

TEST(GraphPool, MultipleAttrValuesKeepPerValueBitmaps) {
  GraphPool pool;
  EntrySet a, b;
  a.nodes = {1};
  a.node_attrs.emplace(1, "name", "x");
  b.nodes = {1};
  b.node_attrs.emplace(1, "name", "y");
  GraphId ga = pool.overlay(a);
  GraphId gb = pool.overlay(b);
  EXPECT_EQ(*pool.node_attr(ga, 1, "name"), "x");
  EXPECT_EQ(*pool.node_attr(gb, 1, "name"), "y");
}

TEST(GraphPool, StatsReportCoversGraphs) {
  GraphPool pool;
  EntrySet s;
  s.nodes = {1, 2};
  GraphId g1 = pool.overlay(s, GraphKind::Materialized);
  GraphId g2 = pool.overlay_dependent(g1, Delta{});
  PoolStats st = pool.stats();
  ASSERT_EQ(st.graphs.size(), 3u);  // current + 2
  EXPECT_EQ(st.graphs[0].id, kCurrentGraphId);
  bool found_dep = false;
  for (const auto& g : st.graphs)
    if (g.id == g2 && g.dependency && *g.dependency == g1) found_dep = true;
  EXPECT_TRUE(found_dep);
  EXPECT_GT(st.approx_bytes, 0u);
}
