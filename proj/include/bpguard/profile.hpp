#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "sha1.hpp"
#include "stats/pca.hpp"

namespace bpguard {

// Orders node ids like "datanode2" < "datanode10": shared prefix compared as
// text, trailing digits numerically.
inline bool node_id_less(std::string_view a, std::string_view b) {
  const auto split = [](std::string_view s) {
    std::size_t i = s.size();
    while (i > 0 && s[i - 1] >= '0' && s[i - 1] <= '9') --i;
    return std::pair{s.substr(0, i), s.substr(i)};
  };
  const auto [pa, na] = split(a);
  const auto [pb, nb] = split(b);
  if (pa != pb) return a < b;
  const auto trim = [](std::string_view d) {
    const auto nz = d.find_first_not_of('0');
    return nz == std::string_view::npos ? std::string_view{} : d.substr(nz);
  };
  const auto ta = trim(na), tb = trim(nb);
  if (ta.size() != tb.size()) return ta.size() < tb.size();
  if (ta != tb) return ta < tb;
  return na < nb;
}

struct NodeIdLess {
  bool operator()(std::string_view a, std::string_view b) const { return node_id_less(a, b); }
};

// SHA-1 digest of a call path; the lookup index of a profile's call table.
class CallKey {
 public:
  CallKey() = default;

  static CallKey from_hex(std::string_view digest) {
    if (digest.size() != 40)
      throw Error("bad-digest", "digest must be 40 hex chars, got " + std::to_string(digest.size()));
    for (char c : digest)
      if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
        throw Error("bad-digest", "digest must be lowercase hex");
    CallKey k;
    k.hex_ = std::string(digest);
    return k;
  }

  const std::string& hex() const noexcept { return hex_; }

  friend auto operator<=>(const CallKey&, const CallKey&) = default;

 private:
  std::string hex_;
};

inline CallKey hash_call_path(std::string_view path) {
  if (path.empty()) throw Error("empty-path", "call path must be non-empty");
  return CallKey::from_hex(sha1_hex(path));
}

struct CallKeyHash {
  std::size_t operator()(const CallKey& k) const noexcept {
    return std::hash<std::string>{}(k.hex());
  }
};

// One distinct system or library call seen by a process.
struct CallRecord {
  std::string callee;     // full class name
  std::string signature;  // method signature
  std::int64_t line = 0;  // source line, 0 when unknown
  std::string path;       // jar or shared-library path
  std::int64_t count = 1;

  friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

using CallTable = std::unordered_map<CallKey, CallRecord, CallKeyHash>;

struct MemorySample {
  std::int64_t timestamp_ms = 0;
  std::int64_t rss_kib = 0;
  std::int64_t shared_kib = 0;   // clean + dirty
  std::int64_t private_kib = 0;  // clean + dirty

  friend bool operator==(const MemorySample&, const MemorySample&) = default;
};

// The unit exchanged between replica datanodes.
struct BehaviorProfile {
  std::string identifier;  // job/task identity, identical across replicas
  std::string node_id;
  CallTable calls;
  stats::TSquaredVector t_squared;
  std::int64_t sample_count = 0;
  std::int64_t interval_ms = 2000;

  friend bool operator==(const BehaviorProfile&, const BehaviorProfile&) = default;

  std::int64_t total_calls() const {
    std::int64_t total = 0;
    for (const auto& [key, rec] : calls) total += rec.count;
    return total;
  }

  std::vector<CallKey> sorted_keys() const {
    std::vector<CallKey> keys;
    keys.reserve(calls.size());
    for (const auto& [key, rec] : calls) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    return keys;
  }
};

}  // namespace bpguard
