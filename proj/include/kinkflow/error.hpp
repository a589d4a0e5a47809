#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace kinkflow {

enum class ErrorKind { Config, Numerical };

// Every failure carries a short machine-readable code (e.g. "grid-too-small")
// plus a human message; the CLI maps the kind onto its exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), kind_(kind), code_(std::move(code)), message_(what) {}

  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  ErrorKind kind_;
  std::string code_;
  std::string message_;
};

// Compact rendering of a number for messages.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline Error config_error(const std::string& code, const std::string& what) {
  return Error(ErrorKind::Config, code, what);
}
inline Error numerical_error(const std::string& code, const std::string& what) {
  return Error(ErrorKind::Numerical, code, what);
}

}  // namespace kinkflow
