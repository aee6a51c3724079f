#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "profile_builder.hpp"

namespace bpguard::lab {

// ---------------------------------------------------------------------------
// Seeding

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) {
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a over the stream name
  for (unsigned char c : stream) h = (h ^ c) * 0x100000001B3ull;
  return splitmix64(seed ^ splitmix64(h));
}

// mt19937_64's output sequence is fixed by the standard; the conversion to
// [0, 1) is done here so results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Workloads

enum class WorkloadKind { idle, teragen, terasort, random_text_writer, aggregate_word_count };

inline constexpr WorkloadKind kBusyWorkloads[] = {WorkloadKind::teragen, WorkloadKind::terasort,
                                                  WorkloadKind::random_text_writer,
                                                  WorkloadKind::aggregate_word_count};

inline std::string_view to_string(WorkloadKind k) {
  switch (k) {
    case WorkloadKind::idle: return "idle";
    case WorkloadKind::teragen: return "teragen";
    case WorkloadKind::terasort: return "terasort";
    case WorkloadKind::random_text_writer: return "random_text_writer";
    case WorkloadKind::aggregate_word_count: return "aggregate_word_count";
  }
  return "idle";
}

inline WorkloadKind parse_workload_kind(std::string_view s) {
  for (auto k : {WorkloadKind::idle, WorkloadKind::teragen, WorkloadKind::terasort,
                 WorkloadKind::random_text_writer, WorkloadKind::aggregate_word_count})
    if (to_string(k) == s) return k;
  throw Error("bad-scenario", "unknown workload kind '" + std::string(s) + "'");
}

// A call site the workload exercises; base_count is the expected number of
// calls over the whole run.
struct CallSite {
  std::string callee;
  std::string signature;
  std::int64_t line = 0;
  std::string path;
  CallKind kind = CallKind::system;
  double base_count = 1.0;
};

struct FeatureModel {
  double mean_kib = 0.0;
  double stddev_kib = 0.0;
};

// Memory model per feature. Shared and private sizes follow an
// unsynchronised GC sawtooth: at each sample the phase is uniform, so the
// marginal is uniform with the given mean and standard deviation. Rss is
// shared + private plus a small independent term described by `rss`
// (mean offset and spread).
struct MemProfile {
  FeatureModel rss;
  FeatureModel shared;
  FeatureModel private_;
};

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::idle;
  std::int64_t duration_ms = 600'000;
  std::vector<CallSite> base_call_paths;
  MemProfile mem;
  double count_jitter = 0.1;  // per-node relative jitter on call counts
};

struct NodeStreams {
  std::vector<CallEvent> calls;
  std::vector<SmapsSnapshot> snapshots;

  friend bool operator==(const NodeStreams&, const NodeStreams&) = default;
};

// Streams of every node keyed by node id.
using ClusterStreams = std::map<std::string, NodeStreams, NodeIdLess>;

namespace fixtures {

inline constexpr std::string_view kLibc = "/lib/x86_64-linux-gnu/libc.so.6";
inline constexpr std::string_view kLibJvm = "/usr/lib/jvm/java-8-openjdk-amd64/jre/lib/amd64/server/libjvm.so";
inline constexpr std::string_view kHdfsJar = "/usr/local/hadoop/share/hadoop/hdfs/hadoop-hdfs-2.7.1.jar";
inline constexpr std::string_view kCommonJar = "/usr/local/hadoop/share/hadoop/common/hadoop-common-2.7.1.jar";
inline constexpr std::string_view kExamplesJar =
    "/usr/local/hadoop/share/hadoop/mapreduce/hadoop-mapreduce-examples-2.7.1.jar";
inline constexpr std::string_view kMrCoreJar =
    "/usr/local/hadoop/share/hadoop/mapreduce/hadoop-mapreduce-client-core-2.7.1.jar";

inline std::string site_path(std::string_view lib, std::string_view symbol) {
  return std::string(lib) + "#" + std::string(symbol);
}

inline CallSite sys(std::string callee, std::string sig, std::string_view symbol, double count) {
  return {std::move(callee), std::move(sig), 0, site_path(kLibc, symbol), CallKind::system, count};
}

inline CallSite lib(std::string callee, std::string sig, std::int64_t line, std::string_view jar,
                    double count) {
  const std::string method = callee + "." + sig.substr(0, sig.find('('));
  return {std::move(callee), std::move(sig), line, site_path(jar, method), CallKind::library, count};
}

// Datanode maintenance traffic: heartbeats, block reports, scanner. The
// base counts sum to 275.
inline std::vector<CallSite> idle_sites() {
  return {
      sys("sun.nio.ch.EPollArrayWrapper", "epollWait(JIJI)I", "epoll_wait", 60),
      sys("java.lang.Object", "wait(J)V", "futex", 48),
      sys("sun.nio.ch.FileDispatcherImpl", "read0(Ljava/io/FileDescriptor;JI)I", "read", 22),
      sys("sun.nio.ch.FileDispatcherImpl", "write0(Ljava/io/FileDescriptor;JI)I", "write", 20),
      sys("java.lang.System", "currentTimeMillis()J", "clock_gettime", 30),
      sys("java.io.UnixFileSystem", "getLength(Ljava/io/File;)J", "stat", 12),
      sys("sun.nio.ch.SocketChannelImpl", "checkConnect(Ljava/io/FileDescriptor;ZZ)I", "poll", 10),
      sys("java.lang.Thread", "yield()V", "sched_yield", 8),
      lib("org.apache.hadoop.hdfs.server.datanode.BPServiceActor", "sendHeartBeat()Lorg/apache/hadoop/hdfs/server/protocol/HeartbeatResponse;", 553, kHdfsJar, 20),
      lib("org.apache.hadoop.hdfs.server.datanode.BPServiceActor", "blockReport()Ljava/util/List;", 478, kHdfsJar, 5),
      lib("org.apache.hadoop.hdfs.server.datanode.DirectoryScanner", "scan()V", 512, kHdfsJar, 5),
      lib("org.apache.hadoop.ipc.Client", "call(Lorg/apache/hadoop/ipc/RPC$RpcKind;Lorg/apache/hadoop/io/Writable;Lorg/apache/hadoop/ipc/Client$ConnectionId;)Lorg/apache/hadoop/io/Writable;", 1448, kCommonJar, 25),
      lib("org.apache.hadoop.metrics2.impl.MetricsSystemImpl", "publishMetricsNow()V", 401, kCommonJar, 10),
  };
}

inline std::vector<CallSite> busy_sites(WorkloadKind kind) {
  // Shared data-transfer path of every map-reduce job on a datanode.
  std::vector<CallSite> s = {
      sys("sun.nio.ch.EPollArrayWrapper", "epollWait(JIJI)I", "epoll_wait", 900),
      sys("java.lang.Object", "wait(J)V", "futex", 1400),
      sys("sun.nio.ch.FileDispatcherImpl", "read0(Ljava/io/FileDescriptor;JI)I", "read", 1800),
      sys("sun.nio.ch.FileDispatcherImpl", "write0(Ljava/io/FileDescriptor;JI)I", "write", 1700),
      sys("sun.nio.ch.FileChannelImpl", "transferTo0(Ljava/io/FileDescriptor;JJLjava/io/FileDescriptor;)J", "sendfile", 600),
      sys("java.io.RandomAccessFile", "open0(Ljava/lang/String;I)V", "open", 240),
      sys("java.io.RandomAccessFile", "close0()V", "close", 240),
      sys("sun.nio.ch.FileChannelImpl", "map0(IJJ)J", "mmap", 120),
      sys("java.lang.System", "currentTimeMillis()J", "clock_gettime", 700),
      sys("sun.nio.ch.SocketChannelImpl", "checkConnect(Ljava/io/FileDescriptor;ZZ)I", "poll", 300),
      lib("org.apache.hadoop.hdfs.server.datanode.DataXceiver", "readBlock(Lorg/apache/hadoop/hdfs/protocol/ExtendedBlock;)V", 488, kHdfsJar, 500),
      lib("org.apache.hadoop.hdfs.server.datanode.DataXceiver", "writeBlock(Lorg/apache/hadoop/hdfs/protocol/ExtendedBlock;)V", 603, kHdfsJar, 500),
      lib("org.apache.hadoop.hdfs.server.datanode.BlockReceiver", "receivePacket()I", 472, kHdfsJar, 800),
      lib("org.apache.hadoop.hdfs.server.datanode.BlockSender", "sendPacket(Ljava/nio/ByteBuffer;ILjava/io/OutputStream;ZLorg/apache/hadoop/hdfs/util/DataTransferThrottler;)I", 531, kHdfsJar, 800),
      lib("org.apache.hadoop.util.DataChecksum", "verifyChunkedSums(Ljava/nio/ByteBuffer;Ljava/nio/ByteBuffer;Ljava/lang/String;J)V", 334, kCommonJar, 900),
      lib("org.apache.hadoop.hdfs.server.datanode.BPServiceActor", "sendHeartBeat()Lorg/apache/hadoop/hdfs/server/protocol/HeartbeatResponse;", 553, kHdfsJar, 60),
      lib("org.apache.hadoop.ipc.Client", "call(Lorg/apache/hadoop/ipc/RPC$RpcKind;Lorg/apache/hadoop/io/Writable;Lorg/apache/hadoop/ipc/Client$ConnectionId;)Lorg/apache/hadoop/io/Writable;", 1448, kCommonJar, 150),
  };
  switch (kind) {
    case WorkloadKind::teragen:
      s.push_back(lib("org.apache.hadoop.examples.terasort.TeraGen$SortGenMapper", "map(Lorg/apache/hadoop/io/LongWritable;Lorg/apache/hadoop/io/NullWritable;Lorg/apache/hadoop/mapreduce/Mapper$Context;)V", 163, kExamplesJar, 1200));
      s.push_back(lib("org.apache.hadoop.examples.terasort.Random16", "nextRand(Lorg/apache/hadoop/examples/terasort/Unsigned16;)V", 374, kExamplesJar, 1200));
      break;
    case WorkloadKind::terasort:
      s.push_back(lib("org.apache.hadoop.examples.terasort.TeraSort$TotalOrderPartitioner", "getPartition(Lorg/apache/hadoop/io/Text;Lorg/apache/hadoop/io/Text;I)I", 227, kExamplesJar, 2000));
      s.push_back(lib("org.apache.hadoop.mapred.MapTask$MapOutputBuffer", "sortAndSpill()V", 1605, kMrCoreJar, 400));
      s.push_back(lib("org.apache.hadoop.mapred.Merger$MergeQueue", "merge(Ljava/lang/Class;Ljava/lang/Class;I)Lorg/apache/hadoop/mapred/RawKeyValueIterator;", 663, kMrCoreJar, 150));
      break;
    case WorkloadKind::random_text_writer:
      s.push_back(lib("org.apache.hadoop.examples.RandomTextWriter$RandomTextMapper", "map(Lorg/apache/hadoop/io/Text;Lorg/apache/hadoop/io/Text;Lorg/apache/hadoop/mapreduce/Mapper$Context;)V", 140, kExamplesJar, 900));
      s.push_back(lib("org.apache.hadoop.examples.RandomTextWriter$RandomTextMapper", "generateSentence(I)Lorg/apache/hadoop/io/Text;", 175, kExamplesJar, 900));
      break;
    case WorkloadKind::aggregate_word_count:
      s.push_back(lib("org.apache.hadoop.mapreduce.lib.aggregate.ValueAggregatorMapper", "map(Ljava/lang/Object;Lorg/apache/hadoop/io/Text;Lorg/apache/hadoop/mapreduce/Mapper$Context;)V", 57, kMrCoreJar, 700));
      s.push_back(lib("org.apache.hadoop.mapreduce.lib.aggregate.LongValueSum", "addNextValue(Ljava/lang/Object;)V", 62, kMrCoreJar, 700));
      s.push_back(lib("org.apache.hadoop.mapreduce.lib.aggregate.ValueAggregatorReducer", "reduce(Lorg/apache/hadoop/io/Text;Ljava/lang/Iterable;Lorg/apache/hadoop/mapreduce/Reducer$Context;)V", 54, kMrCoreJar, 250));
      break;
    case WorkloadKind::idle:
      break;
  }
  return s;
}

}  // namespace fixtures

// Fixture defaults. Memory constants and durations are calibration values
// for the simulator (clean runs must pass the F-test/ANOVA at the nominal
// rate, attacked runs need enough samples for reclaim events to show); they
// are not measurements. Durations give 300-1000 samples at 2 s cadence.
inline WorkloadSpec default_workload(WorkloadKind kind) {
  WorkloadSpec w;
  w.kind = kind;
  switch (kind) {
    case WorkloadKind::idle:
      w.duration_ms = 600'000;
      w.base_call_paths = fixtures::idle_sites();
      w.mem = {{0, 400}, {62'000, 1'400}, {185'000, 4'000}};
      break;
    case WorkloadKind::teragen:
      w.duration_ms = 1'100'000;
      w.mem = {{0, 1'500}, {96'000, 2'400}, {910'000, 19'000}};
      break;
    case WorkloadKind::terasort:
      w.duration_ms = 2'000'000;
      w.mem = {{0, 2'000}, {104'000, 2'600}, {1'350'000, 27'000}};
      break;
    case WorkloadKind::random_text_writer:
      w.duration_ms = 900'000;
      w.mem = {{0, 1'200}, {88'000, 2'000}, {640'000, 14'000}};
      break;
    case WorkloadKind::aggregate_word_count:
      w.duration_ms = 800'000;
      w.mem = {{0, 1'100}, {86'000, 2'000}, {560'000, 12'000}};
      break;
  }
  if (kind != WorkloadKind::idle) w.base_call_paths = fixtures::busy_sites(kind);
  return w;
}

inline void validate(const WorkloadSpec& spec, std::int64_t interval_ms) {
  if (interval_ms <= 0) throw Error("bad-scenario", "interval_ms must be positive");
  if (spec.duration_ms < 2 * interval_ms)
    throw Error("bad-scenario", "workload duration must cover at least two sampling intervals");
  if (spec.kind != WorkloadKind::idle &&
      (!(spec.mem.shared.stddev_kib > 0) || !(spec.mem.private_.stddev_kib > 0) ||
       !(spec.mem.rss.stddev_kib > 0)))
    throw Error("bad-scenario", "memory stddevs must be positive for busy workloads");
  if (!(spec.count_jitter >= 0.0 && spec.count_jitter < 1.0))
    throw Error("bad-scenario", "count jitter must lie in [0, 1)");
}

namespace detail {

// Uniform draw with the given mean and standard deviation.
inline double sawtooth(Rng& rng, const FeatureModel& f) {
  return f.mean_kib + f.stddev_kib * std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
}

inline std::int64_t kib(double v) { return std::max<std::int64_t>(0, std::llround(v)); }

// Splits per-process totals into three mappings: shared libraries/code,
// Java heap and thread stacks.
inline SmapsSnapshot make_snapshot(std::int64_t ts, double rss, double shared, double priv) {
  const auto s = kib(shared), p = kib(priv), r = kib(rss);
  const auto shared_clean = kib(0.7 * static_cast<double>(s));
  const auto shared_dirty = s - shared_clean;
  const auto private_clean = kib(0.05 * static_cast<double>(p));
  const auto stack_dirty = kib(0.1 * static_cast<double>(p));
  const auto heap_dirty = p - private_clean - stack_dirty;
  SmapsMapping libs{shared_clean + private_clean, shared_clean, 0, private_clean, 0};
  SmapsMapping stacks{stack_dirty, 0, 0, 0, stack_dirty};
  SmapsMapping heap{std::max<std::int64_t>(0, r - libs.rss_kib - stacks.rss_kib), 0, shared_dirty, 0,
                    heap_dirty};
  return {ts, {libs, heap, stacks}};
}

}  // namespace detail

// Call events and smaps snapshots of one datanode. Per-site call rates are
// common to all nodes for a given seed; each node adds its own jitter.
inline NodeStreams gen_workload(const WorkloadSpec& spec, std::string_view node_id, std::uint64_t seed,
                                std::int64_t interval_ms = kDefaultIntervalMs) {
  validate(spec, interval_ms);
  Rng common(derive_seed(seed, "rates"));
  Rng node_calls(derive_seed(seed, std::string("calls/") + std::string(node_id)));
  Rng node_mem(derive_seed(seed, std::string("memory/") + std::string(node_id)));

  NodeStreams out;
  for (const auto& site : spec.base_call_paths) {
    const double rate = site.base_count * common.uniform(0.9, 1.1);
    const double jitter = node_calls.uniform(-spec.count_jitter, spec.count_jitter);
    const auto count = std::max<std::int64_t>(1, std::llround(rate * (1.0 + jitter)));
    for (std::int64_t i = 0; i < count; ++i) {
      const auto ts = static_cast<std::int64_t>(node_calls.uniform() * static_cast<double>(spec.duration_ms));
      out.calls.push_back({ts, site.callee, site.signature, site.line, site.path, site.kind});
    }
  }
  std::stable_sort(out.calls.begin(), out.calls.end(),
                   [](const CallEvent& a, const CallEvent& b) { return a.timestamp_ms < b.timestamp_ms; });

  for (std::int64_t ts = 0; ts < spec.duration_ms; ts += interval_ms) {
    const double shared = detail::sawtooth(node_mem, spec.mem.shared);
    const double priv = detail::sawtooth(node_mem, spec.mem.private_);
    const double rss = shared + priv + detail::sawtooth(node_mem, spec.mem.rss);
    out.snapshots.push_back(detail::make_snapshot(ts, rss, shared, priv));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Attacks

enum class AttackKind { none, config_modification, data_exfiltration };

inline std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::none: return "none";
    case AttackKind::config_modification: return "config_modification";
    case AttackKind::data_exfiltration: return "data_exfiltration";
  }
  return "none";
}

inline AttackKind parse_attack_kind(std::string_view s) {
  for (auto k : {AttackKind::none, AttackKind::config_modification, AttackKind::data_exfiltration})
    if (to_string(k) == s) return k;
  throw Error("bad-scenario", "unknown attack kind '" + std::string(s) + "'");
}

// Datanode reconfigured with a smaller heap and fewer handler threads.
// The starved heap is scaled by heap_scale and gives pages back once every
// reclaim_every_samples samples, by 2 * (1 - heap_scale) of its private
// size. System-call counts are scaled by thread_scale.
struct ConfigAttackParams {
  double heap_scale = 0.75;
  double thread_scale = 0.5;
  std::int64_t reclaim_every_samples = 150;
};

// Files copied off the node, zipped, and mailed out (or written to a raw
// device).
struct ExfilAttackParams {
  std::int64_t file_size_kib = 4096;
  std::int64_t batch = 10;
};

struct AttackSpec {
  AttackKind kind = AttackKind::none;
  std::string target_node;
  ConfigAttackParams config;
  ExfilAttackParams exfil;
};

inline NodeStreams& target_streams(ClusterStreams& streams, const std::string& target) {
  auto it = streams.find(target);
  if (it == streams.end()) throw Error("no-such-node", "no node named '" + target + "'");
  return it->second;
}

inline ClusterStreams inject_config_attack(ClusterStreams streams, const std::string& target,
                                           const ConfigAttackParams& params, std::uint64_t seed) {
  if (!(params.heap_scale > 0.0 && params.heap_scale <= 1.0) ||
      !(params.thread_scale > 0.0 && params.thread_scale <= 1.0) || params.reclaim_every_samples < 1)
    throw Error("bad-scenario", "config attack scales must lie in (0, 1], reclaim period >= 1");
  NodeStreams& node = target_streams(streams, target);

  if (params.thread_scale < 1.0) {
    std::map<std::string, std::int64_t> per_path;
    for (const auto& e : node.calls)
      if (e.kind == CallKind::system) ++per_path[e.path];
    std::map<std::string, std::int64_t> keep;
    for (const auto& [path, n] : per_path)
      keep[path] = std::max<std::int64_t>(1, std::llround(static_cast<double>(n) * params.thread_scale));
    std::vector<CallEvent> kept;
    kept.reserve(node.calls.size());
    for (auto& e : node.calls) {
      if (e.kind == CallKind::system) {
        auto& left = keep[e.path];
        if (left == 0) continue;
        --left;
      }
      kept.push_back(std::move(e));
    }
    node.calls = std::move(kept);
  }

  if (params.heap_scale < 1.0) {
    const double depth = std::min(0.95, 2.0 * (1.0 - params.heap_scale));
    Rng rng(derive_seed(seed, "reclaim/" + target));
    const auto period = static_cast<std::size_t>(params.reclaim_every_samples);
    const std::size_t phase = rng.below(period);
    for (std::size_t i = 0; i < node.snapshots.size(); ++i) {
      auto& snap = node.snapshots[i];
      for (auto& m : snap.mappings) {
        const auto scale = [&](std::int64_t& v) {
          v = detail::kib(static_cast<double>(v) * params.heap_scale);
        };
        scale(m.rss_kib);
        scale(m.shared_clean_kib);
        scale(m.shared_dirty_kib);
        scale(m.private_clean_kib);
        scale(m.private_dirty_kib);
      }
      if (i % period == phase) {
        // The heap mapping (index 1) returns pages.
        auto& heap = snap.mappings.at(1);
        const auto priv = summarize(snap).private_kib;
        const auto give_back =
            std::min(heap.private_dirty_kib, detail::kib(depth * static_cast<double>(priv)));
        heap.private_dirty_kib -= give_back;
        heap.rss_kib = std::max<std::int64_t>(0, heap.rss_kib - give_back);
      }
    }
  }
  return streams;
}

namespace fixtures {

// Device access and mail submission seen while staging stolen files.
inline std::vector<CallSite> exfil_sites(std::int64_t file_size_kib) {
  const double chunks64 = std::ceil(static_cast<double>(file_size_kib) / 64.0);
  const double chunks32 = std::ceil(static_cast<double>(file_size_kib) / 32.0);
  const double chunks16 = std::ceil(static_cast<double>(file_size_kib) / 16.0);
  constexpr std::string_view kDevice = "/dev/loop0";
  constexpr std::string_view kZip = "/usr/bin/zip";
  constexpr std::string_view kMail = "/usr/lib/thunderbird/libxul.so";
  const auto dev = [&](std::string_view call, double n) {
    return CallSite{"/bin/dd", std::string(call) + "()", 0, site_path(kDevice, call), CallKind::system, n};
  };
  return {
      dev("open", 2),
      dev("read", chunks64),
      dev("write", chunks64),
      dev("ioctl", 4),
      dev("poll", 4),
      dev("mmap", 1),
      dev("fcntl", 2),
      dev("close", 2),
      {"zip", "deflate(z_streamp,int)", 0, site_path(kZip, "deflate"), CallKind::library, chunks32},
      {"nsSmtpProtocol", "SendData(const char*,bool)", 0, site_path(kMail, "nsSmtpProtocol::SendData"),
       CallKind::library, chunks16},
  };
}

}  // namespace fixtures

inline ClusterStreams inject_exfil_attack(ClusterStreams streams, const std::string& target,
                                          const ExfilAttackParams& params, std::int64_t duration_ms,
                                          std::uint64_t seed) {
  if (params.file_size_kib <= 0) throw Error("bad-scenario", "file_size_kib must be positive");
  if (params.batch < 0) throw Error("bad-scenario", "batch must be >= 0");
  NodeStreams& node = target_streams(streams, target);
  if (params.batch == 0) return streams;

  Rng rng(derive_seed(seed, "exfil/" + target));
  const auto sites = fixtures::exfil_sites(params.file_size_kib);
  const double slot = static_cast<double>(duration_ms) / static_cast<double>(params.batch);
  std::vector<std::int64_t> starts;
  for (std::int64_t f = 0; f < params.batch; ++f) {
    const auto start = static_cast<std::int64_t>((static_cast<double>(f) + 0.25 * rng.uniform()) * slot);
    starts.push_back(start);
    // Each file takes a few seconds to stage, compress and send.
    const double window = std::min(slot, 4'000.0);
    for (const auto& site : sites)
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(site.base_count); ++i)
        node.calls.push_back({start + static_cast<std::int64_t>(rng.uniform() * window), site.callee,
                              site.signature, site.line, site.path, site.kind});
  }
  std::stable_sort(node.calls.begin(), node.calls.end(),
                   [](const CallEvent& a, const CallEvent& b) { return a.timestamp_ms < b.timestamp_ms; });

  // The staged file and its archive sit in shared page cache while in flight.
  for (auto& snap : node.snapshots)
    for (auto start : starts)
      if (snap.timestamp_ms >= start && snap.timestamp_ms < start + 4'000) {
        auto& heap = snap.mappings.at(1);
        heap.shared_dirty_kib += params.file_size_kib;
        heap.rss_kib += params.file_size_kib;
      }
  return streams;
}

inline ClusterStreams apply_attack(ClusterStreams streams, const AttackSpec& attack,
                                   std::int64_t duration_ms, std::uint64_t seed) {
  switch (attack.kind) {
    case AttackKind::none: return streams;
    case AttackKind::config_modification:
      return inject_config_attack(std::move(streams), attack.target_node, attack.config, seed);
    case AttackKind::data_exfiltration:
      return inject_exfil_attack(std::move(streams), attack.target_node, attack.exfil, duration_ms, seed);
  }
  return streams;
}

}  // namespace bpguard::lab
