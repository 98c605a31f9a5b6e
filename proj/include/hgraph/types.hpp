#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hgraph {

/// Discrete time instant. Ticks are unitless; ingestion maps wall-clock
/// timestamps to ticks. 0 is the earliest representable instant.
using Time = std::uint64_t;

/// Node and edge ids live in separate id spaces. Ids are never reassigned
/// after deletion; a deletion followed by a re-insertion gets a new id.
using NodeId = std::uint64_t;
using EdgeId = std::uint64_t;

constexpr Time kTimeMax = ~Time{0};

enum class ElementRole : std::uint8_t { Node = 0, Edge = 1 };

struct ElementId {
  std::uint64_t id = 0;
  ElementRole role = ElementRole::Node;

  friend bool operator==(const ElementId&, const ElementId&) = default;
  friend auto operator<=>(const ElementId&, const ElementId&) = default;
};

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an event cannot be applied to a snapshot in the requested
/// direction (e.g. adding a node whose id is already present).
class InapplicableEventError : public Error {
 public:
  using Error::Error;
};

/// Raised when stored data contradicts itself (delta preconditions violated,
/// checksum mismatches). Signals index or storage inconsistency.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

class StorageError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class PlanError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Hashing
//
// All seeded selection and partitioning in the index is keyed off this one
// mixing function so that index contents are byte-reproducible across runs
// and platforms.

/// 64-bit finalizer (splitmix64 increment + mix).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ mix64(v));
}

/// FNV-1a over raw bytes, folded through mix64 when seeding is needed.
inline std::uint64_t hash_bytes(const void* data, std::size_t n,
                                std::uint64_t seed = 0) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

inline std::uint64_t hash_string(const std::string& s, std::uint64_t seed = 0) {
  return hash_bytes(s.data(), s.size(), seed);
}

}  // namespace hgraph
