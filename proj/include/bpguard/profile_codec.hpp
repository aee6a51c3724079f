#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "profile.hpp"

namespace bpguard {

// Profile exchange format v1. Line oriented, UTF-8, tab separated:
//
//   BPv1 <identifier> <node_id> <sample_count> <interval_ms>
//   C <digest> <count> <line> <callee> <signature> <path>     (ascending digest)
//   T <v1> <v2> ...
//
// Text fields escape backslash, tab, CR and LF. Reals use the shortest
// decimal form that reads back to the identical double.
inline constexpr std::string_view kProfileMagic = "BPv1";

namespace codec_detail {

inline std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

class LineParser {
 public:
  LineParser(std::string_view text) : text_(text) {}

  bool next_line() {
    if (pos_ >= text_.size()) return false;
    line_start_ = pos_;
    const auto nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) {
      ++line_no_;
      fail(0, "missing line terminator (truncated stream?)");
    }
    line_ = text_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    ++line_no_;
    return true;
  }

  std::vector<std::string_view> fields() const {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
      const auto tab = line_.find('\t', start);
      out.push_back(line_.substr(start, tab == std::string_view::npos ? tab : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    return out;
  }

  std::size_t offset_of(std::string_view field) const {
    return static_cast<std::size_t>(field.data() - line_.data());
  }

  [[noreturn]] void fail(std::size_t column, const std::string& what) const {
    throw Error("parse-error", "line " + std::to_string(std::max<std::size_t>(line_no_, 1)) +
                                   ", offset " + std::to_string(line_start_ + column) + ": " + what);
  }

  std::string unescape(std::string_view field) const {
    std::string out;
    out.reserve(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
      if (field[i] != '\\') {
        out.push_back(field[i]);
        continue;
      }
      if (i + 1 == field.size()) fail(offset_of(field) + i, "dangling escape");
      switch (field[++i]) {
        case '\\': out.push_back('\\'); break;
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        default: fail(offset_of(field) + i, "unknown escape");
      }
    }
    return out;
  }

  std::int64_t integer(std::string_view field) const {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
      fail(offset_of(field), "expected integer, got '" + std::string(field) + "'");
    return v;
  }

  double real(std::string_view field) const {
    double v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
      fail(offset_of(field), "expected real, got '" + std::string(field) + "'");
    return v;
  }

  std::size_t line_number() const { return line_no_; }

 private:
  std::string_view text_;
  std::string_view line_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace codec_detail

inline std::string serialize_profile(const BehaviorProfile& p) {
  using codec_detail::escape;
  std::string out;
  out += kProfileMagic;
  out += '\t' + escape(p.identifier) + '\t' + escape(p.node_id) + '\t' +
         std::to_string(p.sample_count) + '\t' + std::to_string(p.interval_ms) + '\n';
  for (const auto& key : p.sorted_keys()) {
    const CallRecord& r = p.calls.at(key);
    out += "C\t" + key.hex() + '\t' + std::to_string(r.count) + '\t' + std::to_string(r.line) +
           '\t' + escape(r.callee) + '\t' + escape(r.signature) + '\t' + escape(r.path) + '\n';
  }
  out += 'T';
  for (double v : p.t_squared) {
    out += '\t';
    out += codec_detail::format_double(v);
  }
  out += '\n';
  return out;
}

inline BehaviorProfile deserialize_profile(std::string_view bytes) {
  codec_detail::LineParser in(bytes);
  BehaviorProfile p;

  if (!in.next_line()) in.fail(0, "empty input");
  auto header = in.fields();
  if (header.size() != 5 || header[0] != kProfileMagic)
    in.fail(0, "expected header 'BPv1 <identifier> <node_id> <sample_count> <interval_ms>'");
  p.identifier = in.unescape(header[1]);
  p.node_id = in.unescape(header[2]);
  p.sample_count = in.integer(header[3]);
  p.interval_ms = in.integer(header[4]);
  if (p.identifier.empty()) in.fail(in.offset_of(header[1]), "empty identifier");
  if (p.sample_count < 0) in.fail(in.offset_of(header[3]), "negative sample count");

  bool saw_t = false;
  while (in.next_line()) {
    if (saw_t) in.fail(0, "content after T line");
    auto f = in.fields();
    if (f[0] == "C") {
      if (f.size() != 7) in.fail(0, "C line needs 7 fields, got " + std::to_string(f.size()));
      const CallKey key = CallKey::from_hex(f[1]);
      CallRecord r;
      r.count = in.integer(f[2]);
      r.line = in.integer(f[3]);
      r.callee = in.unescape(f[4]);
      r.signature = in.unescape(f[5]);
      r.path = in.unescape(f[6]);
      if (r.count < 1) in.fail(in.offset_of(f[2]), "call count must be >= 1");
      if (r.path.empty()) in.fail(in.offset_of(f[6]), "empty call path");
      if (hash_call_path(r.path) != key)
        throw Error("bad-digest", "line " + std::to_string(in.line_number()) +
                                      ": digest does not match SHA-1 of path");
      if (!p.calls.emplace(key, std::move(r)).second)
        in.fail(in.offset_of(f[1]), "duplicate call digest");
    } else if (f[0] == "T") {
      saw_t = true;
      for (std::size_t i = 1; i < f.size(); ++i) p.t_squared.push_back(in.real(f[i]));
      if (static_cast<std::int64_t>(p.t_squared.size()) != p.sample_count)
        in.fail(0, "T line holds " + std::to_string(p.t_squared.size()) +
                       " values but header declares " + std::to_string(p.sample_count));
    } else {
      in.fail(0, "unknown record type '" + std::string(f[0]) + "'");
    }
  }
  if (!saw_t) in.fail(0, "missing T line (truncated stream?)");
  return p;
}

}  // namespace bpguard
