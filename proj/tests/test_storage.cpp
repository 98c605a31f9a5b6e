#include <gtest/gtest.h>

#include <filesystem>

#include "hgraph/storage.hpp"
#include "test_helpers.hpp"

using namespace hgraph;

TEST(PartitionMap, SinglePartitionAlwaysZero) {
  PartitionMap pm{1, 12345};
  for (std::uint64_t id : {0ull, 1ull, 99ull, 1ull << 60})
    EXPECT_EQ(pm.partition_of(id), 0);
}

TEST(PartitionMap, DeterministicAcrossInstances) {
  PartitionMap a{8, 777};
  PartitionMap b{8, 777};
  for (std::uint64_t id = 0; id < 1000; ++id)
    EXPECT_EQ(a.partition_of(id), b.partition_of(id));
}

TEST(PartitionMap, UniformWithinThreeSigma) {
  PartitionMap pm{7, 42};
  std::vector<int> counts(7, 0);
  const int n = 100000;
  std::mt19937_64 rng(1);
  for (int i = 0; i < n; ++i) ++counts[pm.partition_of(rng())];
  double expect = n / 7.0;
  double sigma = std::sqrt(n * (1.0 / 7) * (6.0 / 7));
  for (int c : counts) EXPECT_NEAR(c, expect, 3 * sigma);
}

TEST(PartitionMap, EdgeOwnerIsEndpointSymmetric) {
  PartitionMap pm{4, 9};
  EXPECT_EQ(pm.partition_of_edge(3, 11), pm.partition_of_edge(11, 3));
  EXPECT_EQ(pm.partition_of_edge(3, 11), pm.partition_of(3));
}

TEST(StorageKeyCodec, BijectiveAndGroupsComponents) {
  StorageKey k{3, 0x1122334455667788ull, StorageTag::EdgeAttr};
  EXPECT_EQ(StorageKey::decode(k.encode()), k);
  // All components of one delta sort contiguously within a partition.
  StorageKey a{3, 100, StorageTag::Struct};
  StorageKey b{3, 100, StorageTag::Transient};
  StorageKey other{3, 101, StorageTag::Struct};
  EXPECT_LT(a.encode(), b.encode());
  EXPECT_LT(b.encode(), other.encode());
  StorageKey p2{2, 500, StorageTag::Struct};
  EXPECT_LT(p2.encode(), a.encode());
}

TEST(ValueEnvelope, RoundTripAndChecksum) {
  std::string raw = "the quick brown fox";
  std::string stored = wrap_value(raw);
  EXPECT_EQ(unwrap_value(stored), raw);

  // Flip a payload byte: checksum must catch it.
  std::string corrupted = stored;
  corrupted[corrupted.size() - 3] ^= 0x40;
  EXPECT_THROW(unwrap_value(corrupted), CorruptionError);
}

TEST(ValueEnvelope, CompressesRepetitiveDeltas) {
  hgraph::testing::RandomLog gen(8);
  Eventlist log = gen.make(5000, 0.0, 0.5, 0.0);
  Delta d = diff(EntrySet{}, to_entry_set(replay(log, kTimeMax)));
  std::string raw = encode_delta_component(d, Component::NodeAttr);
  std::string stored = wrap_value(raw);
  EXPECT_LT(stored.size(), raw.size());
  EXPECT_EQ(unwrap_value(stored), raw);
}

TEST(Backends, MemoryPutGet) {
  MemoryBackend kv;
  kv.put("a", "1");
  EXPECT_EQ(*kv.get("a"), "1");
  EXPECT_FALSE(kv.get("zzz").has_value());
  kv.put("a", "1");  // idempotent re-put
  EXPECT_THROW(kv.put("a", "2"), StorageError);
}

TEST(Backends, FileStoreSurvivesReopen) {
  auto dir = std::filesystem::temp_directory_path() / "hg_store_test";
  std::filesystem::remove_all(dir);
  auto path = dir / "store.kv";
  {
    FileBackend kv(path);
    kv.put("alpha", "one");
    kv.put("beta", std::string(100000, 'x'));
    kv.overwrite("gamma", "v1");
    kv.overwrite("gamma", "v2");
    kv.flush();
  }
  {
    FileBackend kv(path);
    EXPECT_EQ(*kv.get("alpha"), "one");
    EXPECT_EQ(kv.get("beta")->size(), 100000u);
    EXPECT_EQ(*kv.get("gamma"), "v2");
    EXPECT_EQ(kv.keys().size(), 3u);
  }
  std::filesystem::remove_all(dir);
}

TEST(ComponentStore, MissingKeyError) {
  ComponentStore store(std::make_shared<MemoryBackend>());
  EXPECT_THROW(store.get(StorageKey{0, 1, StorageTag::Struct}), StorageError);
}

TEST(ComponentStore, PutGetIdentity) {
  ComponentStore store(std::make_shared<MemoryBackend>());
  StorageKey key{0, 7, StorageTag::Struct};
  std::string raw = "payload bytes";
  store.put(key, raw);
  EXPECT_EQ(store.get(key), raw);
  EXPECT_GT(store.stored_size(key), 0u);
}

TEST(SplitByPartition, SinglePieceEqualsInput) {
  Eventlist log = hgraph::testing::example_log();
  Delta d = diff(EntrySet{}, to_entry_set(replay(log, 3)));
  PartitionMap pm{1, 0};
  auto pieces = split_by_partition(d, pm);
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0], d);
}

TEST(SplitByPartition, PiecesPartitionEntries) {
  hgraph::testing::RandomLog gen(15);
  Eventlist log = gen.make(4000, 0.25, 0.3, 0.0);
  EntrySet from = to_entry_set(replay(log, 500));
  EntrySet to = to_entry_set(replay(log, 3500));
  Delta d = diff(from, to);
  PartitionMap pm{4, 11};

  std::map<EdgeId, EdgeInfo> catalog = from.edges;
  catalog.insert(to.edges.begin(), to.edges.end());
  auto pieces = split_by_partition(d, pm, catalog);
  ASSERT_EQ(pieces.size(), 4u);

  std::size_t total = 0;
  Delta reassembled;
  for (const Delta& p : pieces) {
    total += p.entry_count();
    for (NodeId id : p.adds.nodes) reassembled.adds.nodes.insert(id);
    for (NodeId id : p.dels.nodes) reassembled.dels.nodes.insert(id);
    reassembled.adds.edges.insert(p.adds.edges.begin(), p.adds.edges.end());
    reassembled.dels.edges.insert(p.dels.edges.begin(), p.dels.edges.end());
    for (const auto& b : p.adds.node_attrs) reassembled.adds.node_attrs.insert(b);
    for (const auto& b : p.dels.node_attrs) reassembled.dels.node_attrs.insert(b);
    for (const auto& b : p.adds.edge_attrs) reassembled.adds.edge_attrs.insert(b);
    for (const auto& b : p.dels.edge_attrs) reassembled.dels.edge_attrs.insert(b);
  }
  EXPECT_EQ(total, d.entry_count());
  EXPECT_EQ(reassembled, d);
  // Canonical re-encoding of the reassembled delta is byte-identical.
  EXPECT_EQ(encode_delta_component(reassembled, Component::Struct),
            encode_delta_component(d, Component::Struct));
}

TEST(SplitByPartition, EventsFollowSubjectPartition) {
  Eventlist log = hgraph::testing::RandomLog(19).make(2000, 0.25, 0.2, 0.1);
  PartitionMap pm{4, 3};
  auto pieces = split_by_partition(log.events(), pm);
  std::size_t total = 0;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    total += pieces[p].size();
    for (const Event& e : pieces[p]) EXPECT_EQ(partition_of_event(e, pm), p);
  }
  EXPECT_EQ(total, log.size());
}
