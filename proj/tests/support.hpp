#pragma once

#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <vector>

#include "bpguard/attack_lab.hpp"
#include "bpguard/error.hpp"
#include "bpguard/profile_builder.hpp"

namespace support {

// Code of the bpguard::Error thrown by f, or "none".
inline std::string error_code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const bpguard::Error& e) {
    return e.code();
  }
  return "none";
}

inline std::string fixture(const std::string& name) { return std::string(BPGUARD_FIXTURES) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Profiles of a simulated three-node cluster, in node order.
inline std::vector<bpguard::BehaviorProfile> cluster_profiles(const bpguard::lab::WorkloadSpec& spec,
                                                              const bpguard::lab::AttackSpec& attack,
                                                              std::uint64_t seed, std::size_t nodes = 3) {
  using namespace bpguard;
  lab::ClusterStreams streams;
  for (std::size_t i = 0; i < nodes; ++i) {
    const auto id = "datanode" + std::to_string(i + 1);
    streams[id] = lab::gen_workload(spec, id, seed);
  }
  streams = lab::apply_attack(std::move(streams), attack, spec.duration_ms, seed);
  std::vector<BehaviorProfile> out;
  for (const auto& [id, s] : streams) {
    ProfileBuilder b("job", id);
    for (const auto& e : s.calls) b.add_call(e);
    for (const auto& snap : s.snapshots) b.add_memory(snap);
    out.push_back(b.finalize());
  }
  return out;
}

}  // namespace support
