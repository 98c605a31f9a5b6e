#pragma once

#include <cctype>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hgraph/types.hpp"

namespace hgraph {

enum class EventKind : std::uint8_t {
  NodeAdd = 0,
  NodeDel = 1,
  EdgeAdd = 2,
  EdgeDel = 3,
  NodeAttrSet = 4,
  EdgeAttrSet = 5,
  TransientEdge = 6,
  TransientNode = 7,
};

inline bool is_edge_kind(EventKind k) {
  return k == EventKind::EdgeAdd || k == EventKind::EdgeDel ||
         k == EventKind::EdgeAttrSet || k == EventKind::TransientEdge;
}

inline bool is_attr_kind(EventKind k) {
  return k == EventKind::NodeAttrSet || k == EventKind::EdgeAttrSet;
}

inline bool is_transient_kind(EventKind k) {
  return k == EventKind::TransientEdge || k == EventKind::TransientNode;
}

/// Record of an atomic activity in the network. Events are bidirectional:
/// they can be applied to a snapshot in either direction of time, so attr
/// events carry both the old and the new value.
struct Event {
  EventKind kind = EventKind::NodeAdd;
  Time timestamp = 0;
  /// Ingestion sequence number; breaks ties among same-tick events.
  std::uint64_t seq = 0;
  /// Node id or edge id, depending on kind.
  std::uint64_t subject = 0;
  // Edge kinds only.
  NodeId from = 0;
  NodeId to = 0;
  bool directed = false;
  // Attr kinds only. An absent optional means "no binding".
  std::string attr_key;
  std::optional<std::string> old_value;
  std::optional<std::string> new_value;

  friend bool operator==(const Event&, const Event&) = default;
};

inline Event node_add(NodeId id, Time t) {
  return Event{EventKind::NodeAdd, t, 0, id};
}
inline Event node_del(NodeId id, Time t) {
  return Event{EventKind::NodeDel, t, 0, id};
}
inline Event edge_add(EdgeId id, NodeId a, NodeId b, Time t,
                      bool directed = false) {
  return Event{EventKind::EdgeAdd, t, 0, id, a, b, directed};
}
inline Event edge_del(EdgeId id, NodeId a, NodeId b, Time t,
                      bool directed = false) {
  return Event{EventKind::EdgeDel, t, 0, id, a, b, directed};
}
inline Event node_attr_set(NodeId id, std::string key,
                           std::optional<std::string> old_value,
                           std::optional<std::string> new_value, Time t) {
  Event e{EventKind::NodeAttrSet, t, 0, id};
  e.attr_key = std::move(key);
  e.old_value = std::move(old_value);
  e.new_value = std::move(new_value);
  return e;
}
inline Event edge_attr_set(EdgeId id, std::string key,
                           std::optional<std::string> old_value,
                           std::optional<std::string> new_value, Time t) {
  Event e{EventKind::EdgeAttrSet, t, 0, id};
  e.attr_key = std::move(key);
  e.old_value = std::move(old_value);
  e.new_value = std::move(new_value);
  return e;
}
inline Event transient_edge(EdgeId id, NodeId a, NodeId b, Time t,
                            bool directed = false) {
  return Event{EventKind::TransientEdge, t, 0, id, a, b, directed};
}
inline Event transient_node(NodeId id, Time t) {
  return Event{EventKind::TransientNode, t, 0, id};
}

/// Chronologically ordered event sequence. Timestamps are non-decreasing;
/// ties are broken by ingestion sequence number.
class Eventlist {
 public:
  Eventlist() = default;
  explicit Eventlist(std::vector<Event> events) : events_(std::move(events)) {}

  void push_back(Event e) {
    if (!events_.empty() && e.timestamp < events_.back().timestamp) {
      throw ParseError("eventlist: out-of-order timestamp " +
                       std::to_string(e.timestamp) + " after " +
                       std::to_string(events_.back().timestamp));
    }
    events_.push_back(std::move(e));
  }

  /// Renumbers ingestion sequence numbers 0..n-1 in list order.
  void assign_sequence_numbers() {
    for (std::size_t i = 0; i < events_.size(); ++i) events_[i].seq = i;
  }

  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }
  const std::vector<Event>& events() const { return events_; }
  std::vector<Event>& events() { return events_; }
  auto begin() const { return events_.begin(); }
  auto end() const { return events_.end(); }

 private:
  std::vector<Event> events_;
};

// ---------------------------------------------------------------------------
// Binary codec. The normalized length-prefixed binary log is the canonical
// persisted form; the same record codec is reused for eventlist components
// inside the index.

namespace detail {

inline void put_u8(std::string& out, std::uint8_t v) {
  out.push_back(static_cast<char>(v));
}
inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v & 0xff));
}
inline void put_u32(std::string& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}
inline void put_u64(std::string& out, std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}
inline void put_str(std::string& out, const std::string& s) {
  if (s.size() > 0xffff) throw ParseError("string field exceeds 64KiB");
  put_u16(out, static_cast<std::uint16_t>(s.size()));
  out.append(s);
}

struct Cursor {
  const unsigned char* p;
  const unsigned char* end;

  void need(std::size_t n) const {
    if (static_cast<std::size_t>(end - p) < n)
      throw ParseError("binary decode: truncated input");
  }
  std::uint8_t u8() {
    need(1);
    return *p++;
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = (std::uint16_t(p[0]) << 8) | p[1];
    p += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | p[i];
    p += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
    p += 8;
    return v;
  }
  std::string str() {
    std::uint16_t n = u16();
    need(n);
    std::string s(reinterpret_cast<const char*>(p), n);
    p += n;
    return s;
  }
  bool done() const { return p == end; }
};

}  // namespace detail

enum : std::uint8_t {
  kEventFlagDirected = 1,
  kEventFlagHasOld = 2,
  kEventFlagHasNew = 4,
};

inline void encode_event(std::string& out, const Event& e) {
  using namespace detail;
  std::string body;
  put_u8(body, static_cast<std::uint8_t>(e.kind));
  std::uint8_t flags = 0;
  if (e.directed) flags |= kEventFlagDirected;
  if (e.old_value) flags |= kEventFlagHasOld;
  if (e.new_value) flags |= kEventFlagHasNew;
  put_u8(body, flags);
  put_u64(body, e.timestamp);
  put_u64(body, e.seq);
  put_u64(body, e.subject);
  if (is_edge_kind(e.kind)) {
    put_u64(body, e.from);
    put_u64(body, e.to);
  }
  if (is_attr_kind(e.kind)) {
    put_str(body, e.attr_key);
    if (e.old_value) put_str(body, *e.old_value);
    if (e.new_value) put_str(body, *e.new_value);
  }
  put_u32(out, static_cast<std::uint32_t>(body.size()));
  out.append(body);
}

inline Event decode_event(detail::Cursor& cur) {
  std::uint32_t len = cur.u32();
  cur.need(len);
  detail::Cursor body{cur.p, cur.p + len};
  cur.p += len;
  Event e;
  e.kind = static_cast<EventKind>(body.u8());
  std::uint8_t flags = body.u8();
  e.timestamp = body.u64();
  e.seq = body.u64();
  e.subject = body.u64();
  e.directed = flags & kEventFlagDirected;
  if (is_edge_kind(e.kind)) {
    e.from = body.u64();
    e.to = body.u64();
  }
  if (is_attr_kind(e.kind)) {
    e.attr_key = body.str();
    if (flags & kEventFlagHasOld) e.old_value = body.str();
    if (flags & kEventFlagHasNew) e.new_value = body.str();
  }
  return e;
}

inline constexpr char kBinaryLogMagic[8] = {'H', 'G', 'E', 'V', 'L', 'O', 'G', '1'};

inline std::string encode_eventlist(const Eventlist& list) {
  std::string out;
  out.append(kBinaryLogMagic, sizeof(kBinaryLogMagic));
  detail::put_u64(out, list.size());
  for (const Event& e : list) encode_event(out, e);
  return out;
}

inline Eventlist decode_eventlist(const std::string& bytes) {
  detail::Cursor cur{reinterpret_cast<const unsigned char*>(bytes.data()),
                     reinterpret_cast<const unsigned char*>(bytes.data()) +
                         bytes.size()};
  cur.need(sizeof(kBinaryLogMagic));
  if (std::memcmp(cur.p, kBinaryLogMagic, sizeof(kBinaryLogMagic)) != 0)
    throw ParseError("binary log: bad magic");
  cur.p += sizeof(kBinaryLogMagic);
  std::uint64_t n = cur.u64();
  std::vector<Event> events;
  events.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) events.push_back(decode_event(cur));
  if (!cur.done()) throw ParseError("binary log: trailing bytes");
  return Eventlist(std::move(events));
}

// ---------------------------------------------------------------------------
// Text codec. One event per line, whitespace-separated:
//   NN N:<id> <tick>
//   DN N:<id> <tick>
//   NE E:<id> N:<a> N:<b> directed:<yes|no> <tick>
//   DE E:<id> N:<a> N:<b> directed:<yes|no> <tick>
//   UNA N:<id> <key> [old:<val>] new:<val> <tick>
//   UEA E:<id> <key> [old:<val>] new:<val> <tick>
//   TE E:<id> N:<a> N:<b> directed:<yes|no> <tick>
//   TN N:<id> <tick>
// Keys and values are percent-escaped tokens; the single token `~` denotes an
// absent value (no binding). Lines starting with '#' are comments.

namespace detail {

inline std::string escape_token(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    if (c <= ' ' || c == '%' || c == 0x7f || (out.empty() && c == '~')) {
      static const char* hex = "0123456789ABCDEF";
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xf]);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

inline std::string unescape_token(const std::string& s, std::size_t line_off) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%') {
      if (i + 2 >= s.size()) throw ParseError("bad escape at byte offset " +
                                              std::to_string(line_off + i));
      auto hexval = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw ParseError("bad escape at byte offset " +
                         std::to_string(line_off + i));
      };
      out.push_back(static_cast<char>(hexval(s[i + 1]) * 16 + hexval(s[i + 2])));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

inline std::string value_token(const std::optional<std::string>& v) {
  return v ? escape_token(*v) : std::string("~");
}

}  // namespace detail

inline std::string format_event_text(const Event& e) {
  std::ostringstream os;
  auto dir = [&] { return e.directed ? "directed:yes" : "directed:no"; };
  switch (e.kind) {
    case EventKind::NodeAdd:
      os << "NN N:" << e.subject;
      break;
    case EventKind::NodeDel:
      os << "DN N:" << e.subject;
      break;
    case EventKind::EdgeAdd:
      os << "NE E:" << e.subject << " N:" << e.from << " N:" << e.to << ' '
         << dir();
      break;
    case EventKind::EdgeDel:
      os << "DE E:" << e.subject << " N:" << e.from << " N:" << e.to << ' '
         << dir();
      break;
    case EventKind::NodeAttrSet:
      os << "UNA N:" << e.subject << ' ' << detail::escape_token(e.attr_key)
         << " old:" << detail::value_token(e.old_value)
         << " new:" << detail::value_token(e.new_value);
      break;
    case EventKind::EdgeAttrSet:
      os << "UEA E:" << e.subject << ' ' << detail::escape_token(e.attr_key)
         << " old:" << detail::value_token(e.old_value)
         << " new:" << detail::value_token(e.new_value);
      break;
    case EventKind::TransientEdge:
      os << "TE E:" << e.subject << " N:" << e.from << " N:" << e.to << ' '
         << dir();
      break;
    case EventKind::TransientNode:
      os << "TN N:" << e.subject;
      break;
  }
  os << ' ' << e.timestamp;
  return os.str();
}

/// Parses one event line. `line_start` is the byte offset of the line within
/// the whole document; parse errors report absolute byte offsets.
inline Event parse_event_text(const std::string& line, std::size_t line_start = 0) {
  std::vector<std::string> tok;
  std::vector<std::size_t> tok_off;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) {
      tok.push_back(line.substr(start, i - start));
      tok_off.push_back(line_start + start);
    }
  }
  auto fail = [&](std::size_t t, const std::string& msg) -> ParseError {
    std::size_t off = t < tok_off.size() ? tok_off[t] : line_start + line.size();
    return ParseError("event parse error at byte offset " + std::to_string(off) +
                      ": " + msg);
  };
  if (tok.empty()) throw fail(0, "empty event line");

  auto want = [&](std::size_t n) {
    if (tok.size() != n)
      throw fail(tok.size() - 1, "expected " + std::to_string(n) + " fields, got " +
                                     std::to_string(tok.size()));
  };
  auto parse_id = [&](std::size_t t, const char* prefix) -> std::uint64_t {
    const std::string& s = tok[t];
    std::size_t plen = std::strlen(prefix);
    if (s.size() <= plen || s.compare(0, plen, prefix) != 0)
      throw fail(t, std::string("expected ") + prefix + "<id>");
    try {
      return std::stoull(s.substr(plen));
    } catch (const std::exception&) {
      throw fail(t, "bad id number");
    }
  };
  auto parse_tick = [&](std::size_t t) -> Time {
    try {
      return std::stoull(tok[t]);
    } catch (const std::exception&) {
      throw fail(t, "bad tick");
    }
  };
  auto parse_dir = [&](std::size_t t) -> bool {
    if (tok[t] == "directed:yes") return true;
    if (tok[t] == "directed:no") return false;
    throw fail(t, "expected directed:yes|no");
  };
  auto parse_val = [&](std::size_t t, const char* prefix)
      -> std::optional<std::string> {
    const std::string& s = tok[t];
    std::size_t plen = std::strlen(prefix);
    if (s.size() < plen || s.compare(0, plen, prefix) != 0)
      throw fail(t, std::string("expected ") + prefix + "<value>");
    std::string body = s.substr(plen);
    if (body == "~") return std::nullopt;
    return detail::unescape_token(body, tok_off[t] + plen);
  };

  const std::string& kw = tok[0];
  if (kw == "NN") {
    want(3);
    return node_add(parse_id(1, "N:"), parse_tick(2));
  } else if (kw == "DN") {
    want(3);
    return node_del(parse_id(1, "N:"), parse_tick(2));
  } else if (kw == "NE" || kw == "DE" || kw == "TE") {
    want(6);
    EdgeId id = parse_id(1, "E:");
    NodeId a = parse_id(2, "N:");
    NodeId b = parse_id(3, "N:");
    bool dir = parse_dir(4);
    Time t = parse_tick(5);
    if (kw == "NE") return edge_add(id, a, b, t, dir);
    if (kw == "DE") return edge_del(id, a, b, t, dir);
    return transient_edge(id, a, b, t, dir);
  } else if (kw == "UNA" || kw == "UEA") {
    // old: may be omitted; ingestion back-fills it by replay.
    bool has_old = tok.size() == 6;
    if (tok.size() != 5 && tok.size() != 6)
      throw fail(tok.size() - 1, "expected 5 or 6 fields for attr event");
    std::uint64_t id = parse_id(1, kw == "UNA" ? "N:" : "E:");
    std::string key = detail::unescape_token(tok[2], tok_off[2]);
    std::optional<std::string> old_v;
    std::size_t next = 3;
    if (has_old) old_v = parse_val(next++, "old:");
    auto new_v = parse_val(next++, "new:");
    Time t = parse_tick(next);
    // An omitted old value is back-filled from replay state at ingest time.
    return kw == "UNA" ? node_attr_set(id, key, old_v, new_v, t)
                       : edge_attr_set(id, key, old_v, new_v, t);
  } else if (kw == "TN") {
    want(3);
    return transient_node(parse_id(1, "N:"), parse_tick(2));
  }
  throw fail(0, "unknown event kind '" + kw + "'");
}

}  // namespace hgraph
