#pragma once

#include <string>
#include <vector>

#include "cluster_sim.hpp"
#include "json_io.hpp"

namespace bpguard::sim {

// Appends the primary's alert to the namenode.
inline AlertRecord notify_namenode(const ConsensusOutcome& outcome, const std::string& identifier,
                                   std::vector<Message>& log, int round) {
  if (outcome.decision != Decision::intrusion)
    throw Error("no-intrusion", "namenode is only notified after an intrusion decision");
  AlertRecord alert{identifier, outcome.reporter, outcome.suspected_node, 0, outcome.votes.size()};
  for (const auto& [node, v] : outcome.votes)
    if (!v.overall) ++alert.votes_against;
  log.push_back({round, outcome.reporter, std::string(kNamenode), MessageKind::alert, to_json(alert).dump()});
  return alert;
}

inline std::string vote_payload(const Verdict& v) {
  return json{{"node_id", v.node_id},
              {"calls_match", v.calls_match},
              {"mem_match", v.mem_match},
              {"overall", v.overall},
              {"suspected_node", v.suspected_node ? json(*v.suspected_node) : json(nullptr)}}
      .dump();
}

namespace detail {
[[noreturn]] inline void rethrow_for(const std::string& node, const Error& e) {
  throw Error(e.code(), node + ": " + e.what());
}
}  // namespace detail

// Rounds: 0 profile exchange among replicas, 1 votes to the primary,
// 2 alert to the namenode (only on an intrusion decision).
inline SimReport run_scenario(const SimConfig& config) {
  if (config.replication < 2) throw Error("bad-scenario", "replication must be >= 2");
  SimReport report;
  report.config = config;
  report.identifier = config.scenario.identifier.empty()
                          ? "job-" + std::string(lab::to_string(config.scenario.workload.kind))
                          : config.scenario.identifier;
  report.config.scenario.identifier = report.identifier;

  std::vector<std::string> ids;
  for (std::size_t i = 0; i < config.replication; ++i) ids.push_back(datanode_id(i));

  lab::ClusterStreams streams;
  for (const auto& id : ids)
    streams[id] = lab::gen_workload(config.scenario.workload, id, config.seed, config.interval_ms);
  streams = lab::apply_attack(std::move(streams), config.scenario.attack,
                              config.scenario.workload.duration_ms, config.seed);

  for (const auto& id : ids) {
    try {
      ProfileBuilder builder(report.identifier, id, config.interval_ms);
      for (const auto& e : streams.at(id).calls) builder.add_call(e);
      for (const auto& s : streams.at(id).snapshots) builder.add_memory(s);
      NodeRun run{id, builder.finalize(), {}, builder.samples().size()};
      run.profile_digest = sha1_hex(serialize_profile(run.profile));
      report.nodes.push_back(std::move(run));
    } catch (const Error& e) {
      detail::rethrow_for(id, e);
    }
  }

  // Profile round: full exchange among replicas.
  std::map<std::string, std::vector<BehaviorProfile>, NodeIdLess> inbox;
  for (const auto& from : report.nodes) {
    const std::string payload = serialize_profile(from.profile);
    for (const auto& to : ids) {
      if (to == from.node_id) continue;
      report.messages.push_back({0, from.node_id, to, MessageKind::profile, payload});
    }
  }
  for (const auto& m : report.messages) inbox[m.to].push_back(deserialize_profile(m.payload));

  // Vote round.
  const std::string& primary = ids.front();
  for (const auto& node : report.nodes) {
    try {
      report.verdicts[node.node_id] = verify(node.profile, inbox[node.node_id], config.verify_config());
    } catch (const Error& e) {
      detail::rethrow_for(node.node_id, e);
    }
    if (node.node_id != primary)
      report.messages.push_back(
          {1, node.node_id, primary, MessageKind::vote, vote_payload(report.verdicts[node.node_id])});
  }

  report.outcome = consensus(report.verdicts);
  if (report.outcome.decision == Decision::intrusion)
    report.alert = notify_namenode(report.outcome, report.identifier, report.messages, 2);

  std::stable_sort(report.messages.begin(), report.messages.end(), message_order);
  return report;
}

inline std::string report_text(const SimReport& report) { return to_json(report).dump(2) + "\n"; }

}  // namespace bpguard::sim
