#pragma once

#include <stdexcept>
#include <string>

namespace rcm {

enum class ErrorKind {
  invalid_parameter,
  unsupported_dimension,
  unsupported_regime,
  unsupported_algorithm,
  cap_exceeded,
  invalid_window,
  insufficient_data,
  degenerate_sample,
  contract_violation,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const char* what) {
  if (!condition) fail(kind, what);
}

}  // namespace rcm
