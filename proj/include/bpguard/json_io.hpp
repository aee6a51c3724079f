#pragma once

#include <cmath>
#include <nlohmann/json.hpp>
#include <string>

#include "cluster_sim.hpp"

namespace bpguard {

using nlohmann::json;

namespace json_detail {
// Non-finite reals (an ANOVA with zero within-group variance) become null.
inline json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json optional(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}
}  // namespace json_detail

inline json to_json(const stats::AnovaResult& a) {
  using json_detail::real;
  return {{"f_statistic", real(a.f_statistic)}, {"p_value", real(a.p_value)},
          {"df_between", a.df_between},         {"df_within", a.df_within},
          {"ss_between", real(a.ss_between)},   {"ss_within", real(a.ss_within)},
          {"ss_total", real(a.ss_total)}};
}

inline json to_json(const stats::TukeyResult& t, const std::vector<std::string>& group_nodes) {
  json pairs = json::array();
  for (const auto& p : t.pairwise)
    pairs.push_back({{"group_a", group_nodes.at(p.group_a)},
                     {"group_b", group_nodes.at(p.group_b)},
                     {"mean_diff", p.mean_diff},
                     {"q_statistic", p.q_statistic},
                     {"significant", p.significant}});
  json groups = json::array();
  for (std::size_t g = 0; g < t.group_means.size(); ++g)
    groups.push_back({{"node", group_nodes.at(g)}, {"mean", t.group_means[g]}, {"n", t.group_sizes[g]}});
  return {{"pairwise", pairs},
          {"groups", groups},
          {"ms_within", t.ms_within},
          {"q_critical", t.q_critical},
          {"outlier_group", t.outlier_group ? json(group_nodes.at(*t.outlier_group)) : json(nullptr)}};
}

inline json to_json(const MemComparison& m) {
  return {{"anova", to_json(m.anova)},
          {"tukey", m.tukey ? to_json(*m.tukey, m.group_nodes) : json(nullptr)},
          {"mem_match", m.mem_match},
          {"suspected_node", json_detail::optional(m.suspected_node)},
          {"groups", m.group_nodes}};
}

inline json to_json(const CallComparison& c) {
  const auto keys = [](const std::vector<CallKey>& ks) {
    json a = json::array();
    for (const auto& k : ks) a.push_back(k.hex());
    return a;
  };
  json violations = json::array();
  for (const auto& v : c.count_violations)
    violations.push_back({{"key", v.key.hex()}, {"local", v.local_count}, {"remote", v.remote_count}});
  return {{"remote_node", c.remote_node},
          {"missing_local", keys(c.missing_local)},
          {"missing_remote", keys(c.missing_remote)},
          {"count_violations", violations},
          {"calls_match", c.calls_match}};
}

inline json to_json(const Verdict& v) {
  json calls = json::array();
  for (const auto& c : v.calls) calls.push_back(to_json(c));
  return {{"node_id", v.node_id},
          {"calls_match", v.calls_match},
          {"mem_match", v.mem_match},
          {"overall", v.overall},
          {"suspected_node", json_detail::optional(v.suspected_node)},
          {"calls", calls},
          {"memory", v.memory ? to_json(*v.memory) : json(nullptr)}};
}

namespace sim {

inline json to_json(const Message& m) {
  return {{"round", m.round},
          {"from", m.from},
          {"to", m.to},
          {"kind", std::string(to_string(m.kind))},
          {"payload", m.payload}};
}

inline Message message_from_json(const json& j) {
  try {
    return {j.at("round").get<int>(), j.at("from").get<std::string>(), j.at("to").get<std::string>(),
            parse_message_kind(j.at("kind").get<std::string>()), j.at("payload").get<std::string>()};
  } catch (const json::exception& e) {
    throw Error("parse-error", std::string("message: ") + e.what());
  }
}

inline json to_json(const AlertRecord& a) {
  return {{"identifier", a.identifier},
          {"reporter", a.reporter},
          {"suspected_node", json_detail::optional(a.suspected_node)},
          {"votes_against", a.votes_against},
          {"votes_total", a.votes_total}};
}

inline AlertRecord alert_from_json(const json& j) {
  try {
    AlertRecord a;
    a.identifier = j.at("identifier").get<std::string>();
    a.reporter = j.at("reporter").get<std::string>();
    if (!j.at("suspected_node").is_null()) a.suspected_node = j.at("suspected_node").get<std::string>();
    a.votes_against = j.at("votes_against").get<std::size_t>();
    a.votes_total = j.at("votes_total").get<std::size_t>();
    return a;
  } catch (const json::exception& e) {
    throw Error("parse-error", std::string("alert: ") + e.what());
  }
}

inline json to_json(const ConsensusOutcome& o) {
  json votes = json::object();
  for (const auto& [node, v] : o.votes) votes[node] = v.overall ? "clean" : "intrusion";
  return {{"decision", std::string(to_string(o.decision))},
          {"suspected_node", json_detail::optional(o.suspected_node)},
          {"suspected_tie", o.suspected_tie},
          {"reporter", o.reporter},
          {"votes", votes}};
}

inline json to_json(const Scenario& s) {
  json attack = {{"kind", std::string(lab::to_string(s.attack.kind))}};
  if (s.attack.kind != lab::AttackKind::none) attack["target"] = s.attack.target_node;
  if (s.attack.kind == lab::AttackKind::config_modification)
    attack["params"] = {{"heap_scale", s.attack.config.heap_scale},
                        {"thread_scale", s.attack.config.thread_scale},
                        {"reclaim_every_samples", s.attack.config.reclaim_every_samples}};
  if (s.attack.kind == lab::AttackKind::data_exfiltration)
    attack["params"] = {{"file_size_kib", s.attack.exfil.file_size_kib}, {"batch", s.attack.exfil.batch}};
  return {{"identifier", s.identifier},
          {"workload",
           {{"kind", std::string(lab::to_string(s.workload.kind))}, {"duration_ms", s.workload.duration_ms}}},
          {"attack", attack}};
}

inline json to_json(const SimConfig& c) {
  return {{"replication", c.replication}, {"seed", c.seed},
          {"alpha", c.alpha},             {"delta", c.delta},
          {"percentile", c.percentile},   {"interval_ms", c.interval_ms},
          {"scenario", to_json(c.scenario)}};
}

// Scenario descriptor (JSON):
//   {"identifier": "...", "workload": {"kind": "teragen", "duration_ms": ...},
//    "attack": {"kind": "config_modification", "target": "datanode1",
//               "params": {...}},
//    "replication": 3, "seed": 7, "alpha": 0.05, "delta": 0.5,
//    "percentile": 99, "interval_ms": 2000}
// Everything except workload.kind is optional.
inline SimConfig config_from_json(const json& j) {
  try {
    SimConfig c;
    c.replication = j.value("replication", c.replication);
    c.seed = j.value("seed", c.seed);
    c.alpha = j.value("alpha", c.alpha);
    c.delta = j.value("delta", c.delta);
    c.percentile = j.value("percentile", c.percentile);
    c.interval_ms = j.value("interval_ms", c.interval_ms);
    const json& sj = j.contains("scenario") ? j.at("scenario") : j;
    const json& w = sj.at("workload");
    c.scenario.workload = lab::default_workload(lab::parse_workload_kind(w.at("kind").get<std::string>()));
    c.scenario.workload.duration_ms = w.value("duration_ms", c.scenario.workload.duration_ms);
    c.scenario.identifier =
        sj.value("identifier", "job-" + std::string(lab::to_string(c.scenario.workload.kind)));
    if (sj.contains("attack")) {
      const json& a = sj.at("attack");
      auto& attack = c.scenario.attack;
      attack.kind = lab::parse_attack_kind(a.value("kind", std::string("none")));
      if (attack.kind != lab::AttackKind::none) attack.target_node = a.value("target", datanode_id(0));
      const json params = a.value("params", json::object());
      attack.config.heap_scale = params.value("heap_scale", attack.config.heap_scale);
      attack.config.thread_scale = params.value("thread_scale", attack.config.thread_scale);
      attack.config.reclaim_every_samples =
          params.value("reclaim_every_samples", attack.config.reclaim_every_samples);
      attack.exfil.file_size_kib = params.value("file_size_kib", attack.exfil.file_size_kib);
      attack.exfil.batch = params.value("batch", attack.exfil.batch);
    }
    return c;
  } catch (const json::exception& e) {
    throw Error("bad-scenario", e.what());
  }
}

inline json to_json(const SimReport& r) {
  json nodes = json::array();
  for (const auto& n : r.nodes) {
    json calls = json::array();
    for (const auto& key : n.profile.sorted_keys()) {
      const auto& rec = n.profile.calls.at(key);
      calls.push_back({{"digest", key.hex()}, {"path", rec.path}, {"callee", rec.callee}, {"count", rec.count}});
    }
    nodes.push_back({{"node_id", n.node_id},
                     {"profile_digest", n.profile_digest},
                     {"sample_count", n.profile.sample_count},
                     {"total_calls", n.profile.total_calls()},
                     {"distinct_calls", n.profile.calls.size()},
                     {"calls", calls},
                     {"t_squared", n.profile.t_squared}});
  }
  json verdicts = json::object();
  for (const auto& [node, v] : r.verdicts) verdicts[node] = bpguard::to_json(v);
  json messages = json::array();
  for (const auto& m : r.messages) {
    // Profile bodies are already in "nodes"; the log records their digest.
    json entry = {{"round", m.round}, {"from", m.from}, {"to", m.to},
                  {"kind", std::string(to_string(m.kind))}, {"bytes", m.payload.size()},
                  {"payload_sha1", sha1_hex(m.payload)}};
    if (m.kind != MessageKind::profile) entry["payload"] = m.payload;
    messages.push_back(entry);
  }
  return {{"format", "bpguard-simreport-v1"},
          {"config", to_json(r.config)},
          {"identifier", r.identifier},
          {"nodes", nodes},
          {"verdicts", verdicts},
          {"consensus", to_json(r.outcome)},
          {"alert", r.alert ? to_json(*r.alert) : json(nullptr)},
          {"messages", messages}};
}

}  // namespace sim
}  // namespace bpguard
