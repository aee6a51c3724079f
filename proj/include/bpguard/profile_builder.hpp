#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "profile.hpp"
#include "stats/pca.hpp"

namespace bpguard {

enum class CallKind { system, library };

inline std::string_view to_string(CallKind k) { return k == CallKind::system ? "system" : "library"; }

struct CallEvent {
  std::int64_t timestamp_ms = 0;
  std::string callee;
  std::string signature;
  std::int64_t line = 0;
  std::string path;
  CallKind kind = CallKind::system;

  friend bool operator==(const CallEvent&, const CallEvent&) = default;
};

struct SmapsMapping {
  std::int64_t rss_kib = 0;
  std::int64_t shared_clean_kib = 0;
  std::int64_t shared_dirty_kib = 0;
  std::int64_t private_clean_kib = 0;
  std::int64_t private_dirty_kib = 0;

  friend bool operator==(const SmapsMapping&, const SmapsMapping&) = default;
};

struct SmapsSnapshot {
  std::int64_t timestamp_ms = 0;
  std::vector<SmapsMapping> mappings;

  friend bool operator==(const SmapsSnapshot&, const SmapsSnapshot&) = default;
};

inline constexpr std::int64_t kDefaultIntervalMs = 2000;

// Totals of one snapshot as (rss, shared, private).
inline MemorySample summarize(const SmapsSnapshot& snap) {
  MemorySample s{snap.timestamp_ms, 0, 0, 0};
  for (const auto& m : snap.mappings) {
    if (m.rss_kib < 0 || m.shared_clean_kib < 0 || m.shared_dirty_kib < 0 ||
        m.private_clean_kib < 0 || m.private_dirty_kib < 0)
      throw Error("negative-size", "smaps sizes must be >= 0");
    s.rss_kib += m.rss_kib;
    s.shared_kib += m.shared_clean_kib + m.shared_dirty_kib;
    s.private_kib += m.private_clean_kib + m.private_dirty_kib;
  }
  return s;
}

inline stats::SampleMatrix to_sample_matrix(const std::vector<MemorySample>& samples) {
  stats::SampleMatrix m(samples.size(), 3);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    m(i, 0) = static_cast<double>(samples[i].rss_kib);
    m(i, 1) = static_cast<double>(samples[i].shared_kib);
    m(i, 2) = static_cast<double>(samples[i].private_kib);
  }
  return m;
}

// Accumulates one process's call events and memory snapshots into a
// behavior profile. Single writer.
class ProfileBuilder {
 public:
  ProfileBuilder(std::string identifier, std::string node_id,
                 std::int64_t interval_ms = kDefaultIntervalMs)
      : identifier_(std::move(identifier)), node_id_(std::move(node_id)), interval_ms_(interval_ms) {
    if (identifier_.empty()) throw Error("empty-identifier", "profile identifier must be non-empty");
    if (interval_ms_ <= 0) throw Error("bad-interval", "interval_ms must be positive");
  }

  // Calls with the same path fold into one record; the first event's
  // callee/signature/line are kept.
  ProfileBuilder& add_call(const CallEvent& event) {
    auto cached = key_cache_.find(event.path);
    if (cached == key_cache_.end())
      cached = key_cache_.emplace(event.path, hash_call_path(event.path)).first;
    auto [it, inserted] = calls_.try_emplace(
        cached->second, CallRecord{event.callee, event.signature, event.line, event.path, 1});
    if (!inserted) ++it->second.count;
    return *this;
  }

  // Returns false when the snapshot falls inside the current interval and
  // is skipped.
  bool add_memory(const SmapsSnapshot& snap) {
    if (last_seen_ms_ && snap.timestamp_ms < *last_seen_ms_)
      throw Error("non-monotone-sample", "snapshot at " + std::to_string(snap.timestamp_ms) +
                                             " ms precedes " + std::to_string(*last_seen_ms_) + " ms");
    last_seen_ms_ = snap.timestamp_ms;
    if (!samples_.empty() && snap.timestamp_ms - samples_.back().timestamp_ms < interval_ms_)
      return false;
    samples_.push_back(summarize(snap));
    return true;
  }

  BehaviorProfile finalize() const {
    if (samples_.size() == 1)
      throw Error("insufficient-observations", "a profile needs zero or at least two memory samples");
    BehaviorProfile p;
    p.identifier = identifier_;
    p.node_id = node_id_;
    p.calls = calls_;
    p.interval_ms = interval_ms_;
    p.sample_count = static_cast<std::int64_t>(samples_.size());
    if (!samples_.empty()) p.t_squared = stats::hotelling_t2(stats::pca(to_sample_matrix(samples_)));
    return p;
  }

  const std::vector<MemorySample>& samples() const noexcept { return samples_; }
  const CallTable& calls() const noexcept { return calls_; }

 private:
  std::string identifier_;
  std::string node_id_;
  std::int64_t interval_ms_;
  CallTable calls_;
  std::unordered_map<std::string, CallKey> key_cache_;
  std::vector<MemorySample> samples_;
  std::optional<std::int64_t> last_seen_ms_;
};

}  // namespace bpguard
