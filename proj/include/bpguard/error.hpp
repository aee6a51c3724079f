#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bpguard {

// Error carries a stable machine-readable code ("empty-sample",
// "parse-error", ...) next to the human readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  explicit Error(std::string code) : Error(code, code) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace bpguard
