#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tempo {

/// Raised when a caller violates an operation's preconditions (bad window,
/// out-of-range timestep, positive log score, ...).
class contract_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for malformed input data. Carries optional file/line context so the
/// CLI can point at the offending row.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& message, std::string file = {}, std::size_t line = 0)
      : std::runtime_error(format(message, file, line)), file_(std::move(file)), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& message, const std::string& file, std::size_t line) {
    if (file.empty()) return message;
    if (line == 0) return file + ": " + message;
    return file + ":" + std::to_string(line) + ": " + message;
  }

  std::string file_;
  std::size_t line_ = 0;
};

/// Query syntax error. offset() is a byte offset into the query text.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& message, std::size_t offset, std::vector<std::string> expected)
      : std::runtime_error(message + " at offset " + std::to_string(offset) + describe(expected)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string describe(const std::vector<std::string>& expected) {
    if (expected.empty()) return {};
    std::string out = " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += ", ";
      out += expected[i];
    }
    return out + ")";
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace tempo
