#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "profile.hpp"
#include "stats/hypothesis.hpp"
#include "stats/tukey.hpp"

namespace bpguard {

struct VerifyConfig {
  double alpha = 0.05;
  double delta = 0.5;        // max relative per-call count difference
  double percentile = 99.0;  // t² tail cut
};

struct CountViolation {
  CallKey key;
  std::int64_t local_count = 0;
  std::int64_t remote_count = 0;

  friend bool operator==(const CountViolation&, const CountViolation&) = default;
};

struct CallComparison {
  std::string remote_node;
  std::vector<CallKey> missing_local;   // present remotely, absent here
  std::vector<CallKey> missing_remote;  // present here, absent remotely
  std::vector<CountViolation> count_violations;
  bool calls_match = true;
};

struct MemComparison {
  stats::AnovaResult anova;
  std::optional<stats::TukeyResult> tukey;
  bool mem_match = true;
  std::optional<std::string> suspected_node;
  std::vector<std::string> group_nodes;  // node of each ANOVA group, sorted by node id
};

struct Verdict {
  std::string node_id;
  bool calls_match = true;
  bool mem_match = true;
  bool overall = true;
  std::optional<std::string> suspected_node;
  std::vector<CallComparison> calls;
  std::optional<MemComparison> memory;  // absent when no profile carries memory data
};

inline double relative_count_difference(std::int64_t a, std::int64_t b) {
  const auto hi = std::max(a, b);
  return hi == 0 ? 0.0 : static_cast<double>(std::llabs(a - b)) / static_cast<double>(hi);
}

inline CallComparison compare_calls(const BehaviorProfile& local, const BehaviorProfile& remote,
                                    double delta) {
  if (!(delta > 0.0)) throw Error("bad-delta", "delta must be positive");
  CallComparison out;
  out.remote_node = remote.node_id;
  for (const auto& key : local.sorted_keys()) {
    auto it = remote.calls.find(key);
    if (it == remote.calls.end()) {
      out.missing_remote.push_back(key);
      continue;
    }
    const auto lc = local.calls.at(key).count, rc = it->second.count;
    if (relative_count_difference(lc, rc) > delta) out.count_violations.push_back({key, lc, rc});
  }
  for (const auto& key : remote.sorted_keys())
    if (!local.calls.contains(key)) out.missing_local.push_back(key);
  out.calls_match =
      out.missing_local.empty() && out.missing_remote.empty() && out.count_violations.empty();
  return out;
}

// Drops values strictly above the given percentile (linear interpolation
// between order statistics). Survivors keep their original order.
inline stats::TSquaredVector filter_tail(const stats::TSquaredVector& t2, double percentile = 99.0) {
  if (t2.empty()) throw Error("empty-vector", "cannot filter an empty t² vector");
  if (!(percentile > 50.0 && percentile <= 100.0))
    throw Error("bad-percentile", "percentile must lie in (50, 100]");
  if (percentile == 100.0) return t2;
  auto sorted = t2;
  std::sort(sorted.begin(), sorted.end());
  const double pos = percentile / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double cut = sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  stats::TSquaredVector out;
  out.reserve(t2.size());
  for (double v : t2)
    if (!(v > cut)) out.push_back(v);
  return out;
}

inline MemComparison compare_memory(const std::vector<const BehaviorProfile*>& profiles,
                                    double alpha = 0.05, double percentile = 99.0) {
  if (profiles.size() < 2)
    throw Error("insufficient-group", "memory comparison needs at least two profiles");
  // Groups are ordered by node id so the outcome does not depend on the
  // order profiles arrived in.
  auto ordered = profiles;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return node_id_less(a->node_id, b->node_id); });
  MemComparison out;
  stats::Groups groups;
  for (const auto* p : ordered) {
    if (p->t_squared.size() < 2)
      throw Error("insufficient-group", "profile of " + p->node_id + " has fewer than two t² values");
    auto g = filter_tail(p->t_squared, percentile);
    if (g.size() < 2)
      throw Error("insufficient-group", "profile of " + p->node_id + " has fewer than two t² values after filtering");
    std::sort(g.begin(), g.end());
    groups.push_back(std::move(g));
    out.group_nodes.push_back(p->node_id);
  }
  out.anova = stats::one_way_anova(groups, alpha);
  out.mem_match = !(out.anova.p_value < alpha);
  if (!out.mem_match) {
    out.tukey = stats::tukey_hsd(groups, alpha);
    if (out.tukey->outlier_group) out.suspected_node = out.group_nodes[*out.tukey->outlier_group];
  }
  return out;
}

inline MemComparison compare_memory(const std::vector<BehaviorProfile>& profiles,
                                    double alpha = 0.05, double percentile = 99.0) {
  std::vector<const BehaviorProfile*> ptrs;
  for (const auto& p : profiles) ptrs.push_back(&p);
  return compare_memory(ptrs, alpha, percentile);
}

inline Verdict verify(const BehaviorProfile& local, const std::vector<BehaviorProfile>& received,
                      const VerifyConfig& config = {}) {
  for (const auto& r : received)
    if (r.identifier != local.identifier)
      throw Error("profile-identity-mismatch",
                  "profile from " + r.node_id + " is for '" + r.identifier + "', expected '" +
                      local.identifier + "'");
  Verdict v;
  v.node_id = local.node_id;
  for (const auto& r : received) {
    v.calls.push_back(compare_calls(local, r, config.delta));
    v.calls_match = v.calls_match && v.calls.back().calls_match;
  }

  std::vector<const BehaviorProfile*> all{&local};
  for (const auto& r : received) all.push_back(&r);
  const bool any_memory = std::any_of(all.begin(), all.end(),
                                      [](const auto* p) { return !p->t_squared.empty(); });
  if (any_memory && all.size() >= 2) {
    v.memory = compare_memory(all, config.alpha, config.percentile);
    v.mem_match = v.memory->mem_match;
    v.suspected_node = v.memory->suspected_node;
  }
  v.overall = v.calls_match && v.mem_match;
  return v;
}

}  // namespace bpguard
