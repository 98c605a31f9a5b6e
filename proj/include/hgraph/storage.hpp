#pragma once

#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hgraph/delta.hpp"
#include "hgraph/event.hpp"
#include "hgraph/types.hpp"

namespace hgraph {

/// Storage component tags. The snapshot-data tags reuse the Component
/// numbering; the aux tags and the manifest extend it.
enum class StorageTag : std::uint8_t {
  Struct = 0,
  NodeAttr = 1,
  EdgeAttr = 2,
  Transient = 3,
  AuxDelta = 4,
  AuxEvents = 5,
  Manifest = 15,
};

inline StorageTag to_tag(Component c) { return static_cast<StorageTag>(c); }

/// <partition id, delta/eventlist id, component tag>, encoded big-endian so
/// the byte order groups all components of one delta contiguously within a
/// partition.
struct StorageKey {
  std::uint16_t partition = 0;
  std::uint64_t id = 0;
  StorageTag tag = StorageTag::Struct;

  std::string encode() const {
    std::string out;
    detail::put_u16(out, partition);
    detail::put_u64(out, id);
    detail::put_u8(out, static_cast<std::uint8_t>(tag));
    return out;
  }

  static StorageKey decode(const std::string& bytes) {
    if (bytes.size() != 11) throw CorruptionError("storage key: bad length");
    detail::Cursor cur{
        reinterpret_cast<const unsigned char*>(bytes.data()),
        reinterpret_cast<const unsigned char*>(bytes.data()) + bytes.size()};
    StorageKey k;
    k.partition = cur.u16();
    k.id = cur.u64();
    k.tag = static_cast<StorageTag>(cur.u8());
    return k;
  }

  friend auto operator<=>(const StorageKey&, const StorageKey&) = default;
  friend bool operator==(const StorageKey&, const StorageKey&) = default;
};

inline constexpr std::uint16_t kManifestPartition = 0xffff;
inline StorageKey manifest_key() {
  return StorageKey{kManifestPartition, 0, StorageTag::Manifest};
}

/// Stable hash partitioning of the node id space. partition_of never changes
/// for the life of an index; re-partitioning requires a rebuild.
struct PartitionMap {
  std::uint16_t count = 1;
  std::uint64_t seed = 0;

  std::uint16_t partition_of(std::uint64_t node_id) const {
    if (count <= 1) return 0;
    return static_cast<std::uint16_t>(hash_combine(seed, node_id) % count);
  }

  /// Edge owner: the smaller endpoint id, which is deterministic and
  /// endpoint-symmetric.
  std::uint16_t partition_of_edge(NodeId a, NodeId b) const {
    return partition_of(a < b ? a : b);
  }

  friend bool operator==(const PartitionMap&, const PartitionMap&) = default;
};

// ---------------------------------------------------------------------------
// Value envelope: 1-byte codec id, crc32 of the raw bytes, raw length, then
// the (possibly compressed) payload. Checksums are verified on every read.

enum : std::uint8_t { kCodecIdentity = 0, kCodecZlib = 1 };

inline std::string wrap_value(const std::string& raw) {
  std::uint32_t crc = static_cast<std::uint32_t>(
      ::crc32(0, reinterpret_cast<const Bytef*>(raw.data()),
              static_cast<uInt>(raw.size())));
  uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
  std::string packed(bound, '\0');
  int rc = ::compress2(reinterpret_cast<Bytef*>(packed.data()), &bound,
                       reinterpret_cast<const Bytef*>(raw.data()),
                       static_cast<uLong>(raw.size()), 6);
  if (rc != Z_OK) throw StorageError("compression failed");
  packed.resize(bound);

  std::string out;
  bool shrunk = packed.size() < raw.size();
  detail::put_u8(out, shrunk ? kCodecZlib : kCodecIdentity);
  detail::put_u32(out, crc);
  detail::put_u64(out, raw.size());
  out.append(shrunk ? packed : raw);
  return out;
}

inline std::string unwrap_value(const std::string& stored) {
  detail::Cursor cur{
      reinterpret_cast<const unsigned char*>(stored.data()),
      reinterpret_cast<const unsigned char*>(stored.data()) + stored.size()};
  std::uint8_t codec = cur.u8();
  std::uint32_t crc = cur.u32();
  std::uint64_t raw_len = cur.u64();
  std::string raw;
  if (codec == kCodecIdentity) {
    raw.assign(reinterpret_cast<const char*>(cur.p), cur.end - cur.p);
  } else if (codec == kCodecZlib) {
    raw.resize(raw_len);
    uLongf out_len = static_cast<uLongf>(raw_len);
    int rc = ::uncompress(reinterpret_cast<Bytef*>(raw.data()), &out_len,
                          reinterpret_cast<const Bytef*>(cur.p),
                          static_cast<uLong>(cur.end - cur.p));
    if (rc != Z_OK || out_len != raw_len)
      throw CorruptionError("stored value failed to decompress");
  } else {
    throw CorruptionError("stored value: unknown codec id " +
                          std::to_string(codec));
  }
  if (raw.size() != raw_len)
    throw CorruptionError("stored value: length mismatch");
  std::uint32_t got = static_cast<std::uint32_t>(
      ::crc32(0, reinterpret_cast<const Bytef*>(raw.data()),
              static_cast<uInt>(raw.size())));
  if (got != crc) throw CorruptionError("stored value: checksum mismatch");
  return raw;
}

// ---------------------------------------------------------------------------
// Backends. Only a get/put interface is required of the storage engine; any
// key-value store can sit behind it.

class KvBackend {
 public:
  virtual ~KvBackend() = default;

  /// Stores bytes under a key. Values are content-addressed by the caller:
  /// re-putting an existing key requires identical bytes.
  virtual void put(const std::string& key, const std::string& value) = 0;
  /// Unconditional write; used for the manifest.
  virtual void overwrite(const std::string& key, const std::string& value) = 0;
  virtual std::optional<std::string> get(const std::string& key) const = 0;
  virtual bool contains(const std::string& key) const = 0;
  virtual std::vector<std::string> keys() const = 0;
  virtual void flush() {}
};

class MemoryBackend final : public KvBackend {
 public:
  void put(const std::string& key, const std::string& value) override {
    std::lock_guard lock(mu_);
    auto [it, inserted] = map_.emplace(key, value);
    if (!inserted && it->second != value)
      throw StorageError("put: key already bound to different bytes");
  }
  void overwrite(const std::string& key, const std::string& value) override {
    std::lock_guard lock(mu_);
    map_[key] = value;
  }
  std::optional<std::string> get(const std::string& key) const override {
    std::lock_guard lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const std::string& key) const override {
    std::lock_guard lock(mu_);
    return map_.count(key) != 0;
  }
  std::vector<std::string> keys() const override {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    out.reserve(map_.size());
    for (const auto& [k, v] : map_) out.push_back(k);
    return out;
  }

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::string> map_;
};

/// Embedded single-file store: an append-only record log with an in-memory
/// index rebuilt on open. Records are [klen u32][key][vlen u64][value].
/// The manifest key is rewritten by appending; the last record for a key
/// wins on open.
class FileBackend final : public KvBackend {
 public:
  explicit FileBackend(const std::filesystem::path& path) : path_(path) {
    if (std::filesystem::exists(path_)) {
      load();
    } else {
      if (path_.has_parent_path())
        std::filesystem::create_directories(path_.parent_path());
      file_ = std::fopen(path_.string().c_str(), "wb+");
      if (!file_) throw StorageError("cannot create store file " + path_.string());
      std::fwrite(kFileMagic, 1, sizeof(kFileMagic), file_);
      end_ = sizeof(kFileMagic);
    }
  }

  ~FileBackend() override {
    if (file_) std::fclose(file_);
  }

  FileBackend(const FileBackend&) = delete;
  FileBackend& operator=(const FileBackend&) = delete;

  void put(const std::string& key, const std::string& value) override {
    std::lock_guard lock(mu_);
    auto it = index_.find(key);
    if (it != index_.end()) {
      if (read_at(it->second) != value)
        throw StorageError("put: key already bound to different bytes");
      return;
    }
    append(key, value);
  }

  /// Unconditional write; the newest record for a key wins on reopen.
  void overwrite(const std::string& key, const std::string& value) override {
    std::lock_guard lock(mu_);
    append(key, value);
  }

  std::optional<std::string> get(const std::string& key) const override {
    std::lock_guard lock(mu_);
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return read_at(it->second);
  }

  bool contains(const std::string& key) const override {
    std::lock_guard lock(mu_);
    return index_.count(key) != 0;
  }

  std::vector<std::string> keys() const override {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    out.reserve(index_.size());
    for (const auto& [k, v] : index_) out.push_back(k);
    return out;
  }

  void flush() override {
    std::lock_guard lock(mu_);
    if (file_) std::fflush(file_);
  }

 private:
  struct Where {
    std::uint64_t offset;
    std::uint64_t size;
  };

  static constexpr char kFileMagic[8] = {'H', 'G', 'S', 'T', 'O', 'R', 'E', '1'};

  void load() {
    file_ = std::fopen(path_.string().c_str(), "rb+");
    if (!file_) throw StorageError("cannot open store file " + path_.string());
    char magic[8];
    if (std::fread(magic, 1, 8, file_) != 8 ||
        std::memcmp(magic, kFileMagic, 8) != 0)
      throw CorruptionError("store file: bad magic");
    std::uint64_t off = 8;
    for (;;) {
      unsigned char hdr[4];
      if (std::fread(hdr, 1, 4, file_) != 4) break;
      std::uint32_t klen = (std::uint32_t(hdr[0]) << 24) |
                           (std::uint32_t(hdr[1]) << 16) |
                           (std::uint32_t(hdr[2]) << 8) | hdr[3];
      std::string key(klen, '\0');
      if (std::fread(key.data(), 1, klen, file_) != klen)
        throw CorruptionError("store file: truncated key");
      unsigned char vh[8];
      if (std::fread(vh, 1, 8, file_) != 8)
        throw CorruptionError("store file: truncated value header");
      std::uint64_t vlen = 0;
      for (int i = 0; i < 8; ++i) vlen = (vlen << 8) | vh[i];
      std::uint64_t voff = off + 4 + klen + 8;
      if (std::fseek(file_, static_cast<long>(vlen), SEEK_CUR) != 0)
        throw CorruptionError("store file: truncated value");
      index_[key] = Where{voff, vlen};
      off = voff + vlen;
    }
    end_ = off;
    std::fseek(file_, 0, SEEK_END);
  }

  void append(const std::string& key, const std::string& value) {
    std::string rec;
    detail::put_u32(rec, static_cast<std::uint32_t>(key.size()));
    rec.append(key);
    detail::put_u64(rec, value.size());
    std::fseek(file_, 0, SEEK_END);
    if (std::fwrite(rec.data(), 1, rec.size(), file_) != rec.size() ||
        std::fwrite(value.data(), 1, value.size(), file_) != value.size())
      throw StorageError("store file: write failed");
    index_[key] = Where{end_ + rec.size(), value.size()};
    end_ += rec.size() + value.size();
  }

  std::string read_at(const Where& w) const {
    std::string out(w.size, '\0');
    if (std::fseek(file_, static_cast<long>(w.offset), SEEK_SET) != 0 ||
        std::fread(out.data(), 1, w.size, file_) != w.size)
      throw StorageError("store file: read failed");
    return out;
  }

  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
  std::uint64_t end_ = 0;
  mutable std::mutex mu_;
  std::map<std::string, Where> index_;
};

// ---------------------------------------------------------------------------
// Component store: typed get/put of delta and eventlist components over a
// backend, with the compression envelope applied transparently.

class ComponentStore {
 public:
  explicit ComponentStore(std::shared_ptr<KvBackend> backend)
      : backend_(std::move(backend)) {}

  void put(const StorageKey& key, const std::string& raw,
           bool allow_overwrite = false) {
    std::string wrapped = wrap_value(raw);
    {
      std::lock_guard lock(mu_);
      stored_sizes_[key] = wrapped.size();
    }
    if (allow_overwrite)
      backend_->overwrite(key.encode(), wrapped);
    else
      backend_->put(key.encode(), wrapped);
  }

  std::string get(const StorageKey& key) const {
    auto v = backend_->get(key.encode());
    if (!v)
      throw StorageError("missing storage key <" +
                         std::to_string(key.partition) + "," +
                         std::to_string(key.id) + "," +
                         std::to_string(static_cast<int>(key.tag)) + ">");
    return unwrap_value(*v);
  }

  bool contains(const StorageKey& key) const {
    return backend_->contains(key.encode());
  }

  std::uint64_t stored_size(const StorageKey& key) const {
    {
      std::lock_guard lock(mu_);
      auto it = stored_sizes_.find(key);
      if (it != stored_sizes_.end()) return it->second;
    }
    auto v = backend_->get(key.encode());
    return v ? v->size() : 0;
  }

  KvBackend& backend() { return *backend_; }
  const KvBackend& backend() const { return *backend_; }
  std::shared_ptr<KvBackend> backend_ptr() const { return backend_; }

 private:
  std::shared_ptr<KvBackend> backend_;
  mutable std::mutex mu_;
  mutable std::map<StorageKey, std::uint64_t> stored_sizes_;
};

// ---------------------------------------------------------------------------
// Partition splitting. Node-scoped entries go to the node's partition,
// edge-scoped entries to the partition of the smaller endpoint id. The
// pieces are disjoint and their union reproduces the input.

inline std::vector<Delta> split_by_partition(
    const Delta& d, const PartitionMap& pm,
    const std::map<EdgeId, EdgeInfo>& edge_catalog) {
  std::vector<Delta> pieces(pm.count);
  auto edge_partition = [&](EdgeId id) -> std::uint16_t {
    const EdgeInfo* info = nullptr;
    if (auto it = d.adds.edges.find(id); it != d.adds.edges.end())
      info = &it->second;
    else if (auto jt = d.dels.edges.find(id); jt != d.dels.edges.end())
      info = &jt->second;
    else if (auto kt = edge_catalog.find(id); kt != edge_catalog.end())
      info = &kt->second;
    else
      throw CorruptionError("partition split: unknown endpoints for edge " +
                            std::to_string(id));
    return pm.partition_of_edge(info->from, info->to);
  };

  auto place_nodes = [&](const std::set<NodeId>& src,
                         EntrySet Delta::* side) {
    for (NodeId id : src) (pieces[pm.partition_of(id)].*side).nodes.insert(id);
  };
  auto place_edges = [&](const std::map<EdgeId, EdgeInfo>& src,
                         EntrySet Delta::* side) {
    for (const auto& [id, info] : src)
      (pieces[pm.partition_of_edge(info.from, info.to)].*side).edges.emplace(id, info);
  };
  place_nodes(d.adds.nodes, &Delta::adds);
  place_nodes(d.dels.nodes, &Delta::dels);
  place_edges(d.adds.edges, &Delta::adds);
  place_edges(d.dels.edges, &Delta::dels);

  // Attribute bindings follow their element's partition.
  for (const auto& b : d.adds.node_attrs)
    pieces[pm.partition_of(std::get<0>(b))].adds.node_attrs.insert(b);
  for (const auto& b : d.dels.node_attrs)
    pieces[pm.partition_of(std::get<0>(b))].dels.node_attrs.insert(b);
  for (const auto& b : d.adds.edge_attrs)
    pieces[edge_partition(std::get<0>(b))].adds.edge_attrs.insert(b);
  for (const auto& b : d.dels.edge_attrs)
    pieces[edge_partition(std::get<0>(b))].dels.edge_attrs.insert(b);
  return pieces;
}

inline std::vector<Delta> split_by_partition(const Delta& d,
                                             const PartitionMap& pm) {
  return split_by_partition(d, pm, {});
}

inline std::uint16_t partition_of_event(const Event& e, const PartitionMap& pm) {
  if (is_edge_kind(e.kind)) return pm.partition_of_edge(e.from, e.to);
  return pm.partition_of(e.subject);
}

inline std::vector<std::vector<Event>> split_by_partition(
    const std::vector<Event>& events, const PartitionMap& pm) {
  std::vector<std::vector<Event>> pieces(pm.count);
  for (const Event& e : events) pieces[partition_of_event(e, pm)].push_back(e);
  return pieces;
}

}  // namespace hgraph
