#pragma once

#include <stdexcept>
#include <string>

namespace netstate {

enum class ErrorKind {
  invalid_input,
  invalid_pair,
  empty_band,
  geometry_mismatch,
  invalid_mode,
  invalid_rank,
  invalid_index,
  zero_norm,
  degenerate_core,
  invalid_config,
  io,
};

const char* to_string(ErrorKind kind);

// All library failures are reported with this type. The kind decides the
// CLI exit code (see exit_code()).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// 2 = invalid config, 3 = data error, 4 = numerical degeneracy.
int exit_code(ErrorKind kind);

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace netstate
