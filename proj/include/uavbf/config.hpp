#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "uavbf/experiments.hpp"

namespace uavbf {

/// Malformed configuration; `line` is 0 when the problem is not tied to one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string field, const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  int line_;
  std::string field_;
};

/// `key = value` lines; lists are comma separated; `#` starts a comment.
/// Unset keys keep their ExperimentConfig defaults. The result is validated.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const ExperimentConfig& config);

} // namespace uavbf
