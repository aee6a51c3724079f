#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "attack_lab.hpp"
#include "profile_builder.hpp"
#include "profile_codec.hpp"
#include "verifier.hpp"

namespace bpguard::sim {

inline constexpr std::string_view kNamenode = "namenode";

inline std::string datanode_id(std::size_t index) { return "datanode" + std::to_string(index + 1); }

struct Scenario {
  std::string identifier;  // defaults to "job-<workload>"
  lab::WorkloadSpec workload = lab::default_workload(lab::WorkloadKind::idle);
  lab::AttackSpec attack;
};

struct SimConfig {
  std::size_t replication = 3;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  double delta = 0.5;
  double percentile = 99.0;
  std::int64_t interval_ms = kDefaultIntervalMs;
  Scenario scenario;

  VerifyConfig verify_config() const { return {alpha, delta, percentile}; }
};

enum class MessageKind { profile, vote, alert };

inline std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::profile: return "profile";
    case MessageKind::vote: return "vote";
    case MessageKind::alert: return "alert";
  }
  return "profile";
}

inline MessageKind parse_message_kind(std::string_view s) {
  for (auto k : {MessageKind::profile, MessageKind::vote, MessageKind::alert})
    if (to_string(k) == s) return k;
  throw Error("parse-error", "unknown message kind '" + std::string(s) + "'");
}

struct Message {
  int round = 0;
  std::string from;
  std::string to;
  MessageKind kind = MessageKind::profile;
  std::string payload;

  friend bool operator==(const Message&, const Message&) = default;
};

// Delivery order: (round, from, to); the log keeps per-sender FIFO.
inline bool message_order(const Message& a, const Message& b) {
  if (a.round != b.round) return a.round < b.round;
  if (a.from != b.from) return node_id_less(a.from, b.from);
  return node_id_less(a.to, b.to);
}

enum class Decision { clean, intrusion };

inline std::string_view to_string(Decision d) { return d == Decision::clean ? "clean" : "intrusion"; }

struct ConsensusOutcome {
  std::map<std::string, Verdict, NodeIdLess> votes;
  Decision decision = Decision::clean;
  std::optional<std::string> suspected_node;
  bool suspected_tie = false;
  std::string reporter;  // primary datanode
};

using VerdictMap = std::map<std::string, Verdict, NodeIdLess>;

// Strict-majority vote over per-node verdicts. The suspected node is the
// most frequently named suspect; ties go to the lowest node id and are
// flagged. The lowest node id acts as primary and reports.
inline ConsensusOutcome consensus(const VerdictMap& verdicts) {
  if (verdicts.size() < 2) throw Error("insufficient-votes", "consensus needs at least two verdicts");
  ConsensusOutcome out;
  out.votes = verdicts;
  out.reporter = verdicts.begin()->first;
  std::size_t against = 0;
  std::map<std::string, std::size_t, NodeIdLess> suspects;
  for (const auto& [node, v] : verdicts) {
    if (!v.overall) ++against;
    if (v.suspected_node) ++suspects[*v.suspected_node];
  }
  out.decision = 2 * against > verdicts.size() ? Decision::intrusion : Decision::clean;
  std::size_t best = 0;
  for (const auto& [node, n] : suspects) {
    if (n > best) {
      best = n;
      out.suspected_node = node;
      out.suspected_tie = false;
    } else if (n == best) {
      out.suspected_tie = true;
    }
  }
  return out;
}

struct AlertRecord {
  std::string identifier;
  std::string reporter;
  std::optional<std::string> suspected_node;
  std::size_t votes_against = 0;
  std::size_t votes_total = 0;

  friend bool operator==(const AlertRecord&, const AlertRecord&) = default;
};

struct NodeRun {
  std::string node_id;
  BehaviorProfile profile;
  std::string profile_digest;  // SHA-1 of the serialized profile
  std::size_t accepted_samples = 0;
};

struct SimReport {
  SimConfig config;
  std::string identifier;
  std::vector<NodeRun> nodes;
  VerdictMap verdicts;
  ConsensusOutcome outcome;
  std::optional<AlertRecord> alert;
  std::vector<Message> messages;
};

}  // namespace bpguard::sim
