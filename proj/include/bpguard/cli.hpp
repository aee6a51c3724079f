#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json_io.hpp"
#include "profile_builder.hpp"
#include "profile_codec.hpp"
#include "simulate.hpp"
#include "trace_io.hpp"
#include "verifier.hpp"

namespace bpguard::cli {

enum ExitCode : int { kClean = 0, kIntrusion = 1, kUsage = 2, kRuntime = 3 };

// Error codes that mean the input was unusable rather than the run failing.
inline bool is_input_error(const std::string& code) {
  static const std::set<std::string> input{
      "parse-error",    "bad-digest", "bad-scenario",  "io-error",      "usage",
      "bad-alpha",      "bad-delta",  "bad-interval",  "bad-percentile", "empty-identifier",
      "empty-path",     "negative-size", "non-monotone-sample", "profile-identity-mismatch"};
  return input.contains(code);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io-error", "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io-error", "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("io-error", "short write to '" + path.string() + "'");
}

// Writes to the file, or to `fallback` when no path is given.
inline void emit(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty()) fallback << content;
  else write_file(path, content);
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kUsage : kRuntime;
  } catch (const json::exception& e) {
    err << "error: parse-error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
}

namespace detail {
[[noreturn]] inline void rethrow_in(const std::string& file, const Error& e) {
  throw Error(e.code(), file + ": " + e.what());
}
}  // namespace detail

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<double> delta;
  std::optional<double> percentile;
  std::optional<std::int64_t> interval_ms;
};

inline sim::SimConfig load_scenario(const std::string& path, const RunOverrides& o = {}) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("bad-scenario", path + ": " + e.what());
  }
  sim::SimConfig c;
  try {
    c = sim::config_from_json(j);
  } catch (const Error& e) {
    detail::rethrow_in(path, e);
  }
  if (o.seed) c.seed = *o.seed;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.delta) c.delta = *o.delta;
  if (o.percentile) c.percentile = *o.percentile;
  if (o.interval_ms) c.interval_ms = *o.interval_ms;
  return c;
}

inline int cmd_run(const std::string& scenario_path, const RunOverrides& overrides,
                   const std::string& out_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto config = load_scenario(scenario_path, overrides);
    const auto report = sim::run_scenario(config);
    emit(out_path, sim::report_text(report), out);
    err << report.identifier << ": " << sim::to_string(report.outcome.decision);
    if (report.outcome.suspected_node) err << " (suspected " << *report.outcome.suspected_node << ")";
    err << "\n";
    return report.outcome.decision == sim::Decision::intrusion ? kIntrusion : kClean;
  });
}

inline BehaviorProfile ingest(const std::string& call_log_path, const std::string& smaps_path,
                              const std::string& identifier, const std::string& node_id,
                              std::int64_t interval_ms = kDefaultIntervalMs) {
  std::vector<CallEvent> events;
  std::vector<SmapsSnapshot> snaps;
  try {
    events = parse_call_log(read_file(call_log_path));
  } catch (const Error& e) {
    detail::rethrow_in(call_log_path, e);
  }
  try {
    snaps = parse_smaps(read_file(smaps_path));
  } catch (const Error& e) {
    detail::rethrow_in(smaps_path, e);
  }
  ProfileBuilder builder(identifier, node_id, interval_ms);
  for (const auto& e : events) builder.add_call(e);
  try {
    for (const auto& s : snaps) builder.add_memory(s);
  } catch (const Error& e) {
    detail::rethrow_in(smaps_path, e);
  }
  return builder.finalize();
}

inline int cmd_ingest(const std::string& call_log_path, const std::string& smaps_path,
                      const std::string& identifier, const std::string& node_id,
                      const std::string& out_path, std::int64_t interval_ms, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    const auto profile = ingest(call_log_path, smaps_path, identifier, node_id, interval_ms);
    emit(out_path, serialize_profile(profile), out);
    return kClean;
  });
}

inline json verify_json(const std::vector<BehaviorProfile>& profiles, const VerifyConfig& config,
                        bool& any_intrusion) {
  json verdicts = json::array();
  json memory = nullptr;
  any_intrusion = false;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    std::vector<BehaviorProfile> others;
    for (std::size_t k = 0; k < profiles.size(); ++k)
      if (k != i) others.push_back(profiles[k]);
    const Verdict v = verify(profiles[i], others, config);
    any_intrusion = any_intrusion || !v.overall;
    json vj = to_json(v);
    // Every verdict runs the same memory comparison; print it once.
    if (memory.is_null() && !vj["memory"].is_null()) memory = vj["memory"];
    vj.erase("memory");
    verdicts.push_back(std::move(vj));
  }
  return {{"identifier", profiles.front().identifier},
          {"alpha", config.alpha},
          {"delta", config.delta},
          {"percentile", config.percentile},
          {"verdicts", verdicts},
          {"memory", memory},
          {"decision", any_intrusion ? "intrusion" : "clean"}};
}

inline int cmd_verify(const std::vector<std::string>& profile_paths, const VerifyConfig& config,
                      std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (profile_paths.size() < 2) throw Error("usage", "verify needs at least two profiles");
    std::vector<BehaviorProfile> profiles;
    for (const auto& path : profile_paths) {
      try {
        profiles.push_back(deserialize_profile(read_file(path)));
      } catch (const Error& e) {
        detail::rethrow_in(path, e);
      }
    }
    for (std::size_t i = 1; i < profiles.size(); ++i)
      if (profiles[i].identifier != profiles[0].identifier)
        throw Error("profile-identity-mismatch", profile_paths[i] + " is for '" + profiles[i].identifier +
                                                     "', " + profile_paths[0] + " is for '" +
                                                     profiles[0].identifier + "'");
    bool intrusion = false;
    const json result = verify_json(profiles, config, intrusion);
    out << result.dump(2) << "\n";
    return intrusion ? kIntrusion : kClean;
  });
}

namespace report_detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline std::string num(double v) { return codec_detail::format_double(v); }

struct ReportNode {
  std::string node_id;
  std::vector<double> t_squared;
  std::map<std::string, std::pair<std::string, std::string>> paths;  // digest -> (path, callee)
  std::map<std::string, std::int64_t> counts;                         // digest -> count
};

inline std::vector<ReportNode> read_nodes(const json& report) {
  std::vector<ReportNode> nodes;
  for (const auto& n : report.at("nodes")) {
    ReportNode r;
    r.node_id = n.at("node_id").get<std::string>();
    r.t_squared = n.at("t_squared").get<std::vector<double>>();
    for (const auto& c : n.at("calls")) {
      const auto digest = c.at("digest").get<std::string>();
      r.paths[digest] = {c.at("path").get<std::string>(), c.at("callee").get<std::string>()};
      r.counts[digest] = c.at("count").get<std::int64_t>();
    }
    nodes.push_back(std::move(r));
  }
  if (nodes.empty()) throw Error("parse-error", "report has no nodes");
  return nodes;
}

inline std::string t_squared_csv(const std::vector<ReportNode>& nodes) {
  std::ostringstream os;
  std::size_t rows = 0;
  std::vector<std::vector<double>> cols;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    os << (i ? "," : "") << csv_field(nodes[i].node_id);
    auto v = nodes[i].t_squared;
    std::sort(v.begin(), v.end());
    rows = std::max(rows, v.size());
    cols.push_back(std::move(v));
  }
  os << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os << ",";
      if (r < cols[i].size()) os << num(cols[i][r]);
    }
    os << "\n";
  }
  return os.str();
}

inline std::string call_counts_csv(const std::vector<ReportNode>& nodes) {
  std::map<std::string, std::pair<std::string, std::string>> all;
  for (const auto& n : nodes) all.insert(n.paths.begin(), n.paths.end());
  std::ostringstream os;
  os << "digest,path,callee";
  for (const auto& n : nodes) os << "," << csv_field(n.node_id);
  os << "\n";
  for (const auto& [digest, meta] : all) {
    os << digest << "," << csv_field(meta.first) << "," << csv_field(meta.second);
    for (const auto& n : nodes) {
      auto it = n.counts.find(digest);
      os << "," << (it == n.counts.end() ? 0 : it->second);
    }
    os << "\n";
  }
  return os.str();
}

// Comparison intervals: two groups differ at level alpha exactly when their
// intervals do not overlap (equal sizes), half width (q*/2)·sqrt(MSW/n).
inline std::string tukey_csv(const json& tukey) {
  const double q = tukey.at("q_critical").get<double>();
  const double msw = tukey.at("ms_within").get<double>();
  const json& outlier = tukey.at("outlier_group");
  std::ostringstream os;
  os << "node,mean,n,lower,upper,suspected\n";
  for (const auto& g : tukey.at("groups")) {
    const auto node = g.at("node").get<std::string>();
    const double mean = g.at("mean").get<double>();
    const auto n = g.at("n").get<std::size_t>();
    const double half = q / 2.0 * std::sqrt(msw / static_cast<double>(n));
    const bool suspected = !outlier.is_null() && outlier.get<std::string>() == node;
    os << csv_field(node) << "," << num(mean) << "," << n << "," << num(mean - half) << ","
       << num(mean + half) << "," << (suspected ? 1 : 0) << "\n";
  }
  return os.str();
}

}  // namespace report_detail

inline int cmd_report(const std::string& report_path, const std::string& out_dir, std::ostream& out,
                      std::ostream& err) {
  using namespace report_detail;
  return guarded(err, [&] {
    json report;
    try {
      report = json::parse(read_file(report_path));
      if (report.value("format", std::string()) != "bpguard-simreport-v1")
        throw Error("parse-error", "not a simulation report");
    } catch (const json::exception& e) {
      throw Error("parse-error", report_path + ": " + e.what());
    } catch (const Error& e) {
      detail::rethrow_in(report_path, e);
    }

    std::vector<ReportNode> nodes;
    json tukey = nullptr;
    std::string decision;
    try {
      nodes = read_nodes(report);
      const json& consensus = report.at("consensus");
      decision = consensus.at("decision").get<std::string>();
      const auto reporter = consensus.at("reporter").get<std::string>();
      const json& memory = report.at("verdicts").at(reporter).at("memory");
      if (!memory.is_null()) tukey = memory.at("tukey");
    } catch (const json::exception& e) {
      throw Error("parse-error", report_path + ": " + e.what());
    }

    const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("io-error", "cannot create '" + dir.string() + "': " + ec.message());

    json files = json::array();
    write_file(dir / "t_squared.csv", t_squared_csv(nodes));
    files.push_back("t_squared.csv");
    write_file(dir / "call_counts.csv", call_counts_csv(nodes));
    files.push_back("call_counts.csv");
    json manifest = {{"source", report_path},
                     {"identifier", report.value("identifier", std::string())},
                     {"decision", decision},
                     {"nodes", json::array()}};
    for (const auto& n : nodes) manifest["nodes"].push_back(n.node_id);
    if (tukey.is_null()) {
      manifest["tukey"] = "absent: ANOVA did not reject equal t² means";
    } else {
      write_file(dir / "tukey.csv", tukey_csv(tukey));
      files.push_back("tukey.csv");
      manifest["tukey"] = "tukey.csv";
    }
    manifest["files"] = files;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    out << "wrote " << files.size() << " CSV files to " << dir.string() << "\n";
    return kClean;
  });
}

}  // namespace bpguard::cli
