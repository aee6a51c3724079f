#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "profile_builder.hpp"

namespace bpguard {

// Call-trace log: one event per line, tab separated
//   <timestamp_ms> <kind> <callee> <signature> <line> <path>
// with kind one of "system" / "library". Blank lines and lines starting
// with '#' are ignored.
//
// Smaps snapshot file: blocks separated by blank lines,
//   TS <timestamp_ms>
//   M <rss> <shared_clean> <shared_dirty> <private_clean> <private_dirty>
// sizes in KiB. Fields are separated by whitespace.

namespace trace_detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split(std::string_view line, bool tabs_only) {
  std::vector<std::string_view> out;
  if (tabs_only) {
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    return out;
  }
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] inline void fail(std::size_t line_no, const std::string& what) {
  throw Error("parse-error", "line " + std::to_string(line_no) + ": " + what);
}

inline std::int64_t to_int(std::string_view f, std::size_t line_no, std::string_view what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size())
    fail(line_no, "bad " + std::string(what) + " '" + std::string(f) + "'");
  return v;
}

inline bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

}  // namespace trace_detail

inline std::vector<CallEvent> parse_call_log(std::string_view text) {
  using namespace trace_detail;
  std::vector<CallEvent> events;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (is_blank(lines[i]) || lines[i].front() == '#') continue;
    const auto f = split(lines[i], true);
    if (f.size() != 6) fail(line_no, "expected 6 tab-separated fields, got " + std::to_string(f.size()));
    CallEvent e;
    e.timestamp_ms = to_int(f[0], line_no, "timestamp");
    if (f[1] == "system") e.kind = CallKind::system;
    else if (f[1] == "library") e.kind = CallKind::library;
    else fail(line_no, "call kind must be 'system' or 'library', got '" + std::string(f[1]) + "'");
    e.callee = std::string(f[2]);
    e.signature = std::string(f[3]);
    e.line = to_int(f[4], line_no, "source line");
    e.path = std::string(f[5]);
    if (e.path.empty()) fail(line_no, "empty call path");
    if (e.callee.empty()) fail(line_no, "empty callee");
    events.push_back(std::move(e));
  }
  return events;
}

inline std::vector<SmapsSnapshot> parse_smaps(std::string_view text) {
  using namespace trace_detail;
  std::vector<SmapsSnapshot> snaps;
  bool in_block = false;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (is_blank(lines[i])) {
      in_block = false;
      continue;
    }
    if (lines[i].front() == '#') continue;
    const auto f = split(lines[i], false);
    if (f[0] == "TS") {
      if (in_block) fail(line_no, "TS inside a block; separate snapshots with a blank line");
      if (f.size() != 2) fail(line_no, "TS line needs exactly one timestamp");
      snaps.push_back({to_int(f[1], line_no, "timestamp"), {}});
      in_block = true;
    } else if (f[0] == "M") {
      if (!in_block) fail(line_no, "M line outside a TS block");
      if (f.size() != 6) fail(line_no, "M line needs 5 sizes");
      SmapsMapping m{to_int(f[1], line_no, "rss"), to_int(f[2], line_no, "shared_clean"),
                     to_int(f[3], line_no, "shared_dirty"), to_int(f[4], line_no, "private_clean"),
                     to_int(f[5], line_no, "private_dirty")};
      if (m.rss_kib < 0 || m.shared_clean_kib < 0 || m.shared_dirty_kib < 0 ||
          m.private_clean_kib < 0 || m.private_dirty_kib < 0)
        fail(line_no, "sizes must be >= 0");
      snaps.back().mappings.push_back(m);
    } else {
      fail(line_no, "unknown record '" + std::string(f[0]) + "'");
    }
  }
  return snaps;
}

inline std::string format_call_log(const std::vector<CallEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += std::to_string(e.timestamp_ms) + '\t' + std::string(to_string(e.kind)) + '\t' + e.callee +
           '\t' + e.signature + '\t' + std::to_string(e.line) + '\t' + e.path + '\n';
  }
  return out;
}

inline std::string format_smaps(const std::vector<SmapsSnapshot>& snaps) {
  std::string out;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    if (i) out += '\n';
    out += "TS " + std::to_string(snaps[i].timestamp_ms) + '\n';
    for (const auto& m : snaps[i].mappings)
      out += "M " + std::to_string(m.rss_kib) + ' ' + std::to_string(m.shared_clean_kib) + ' ' +
             std::to_string(m.shared_dirty_kib) + ' ' + std::to_string(m.private_clean_kib) + ' ' +
             std::to_string(m.private_dirty_kib) + '\n';
  }
  return out;
}

}  // namespace bpguard
