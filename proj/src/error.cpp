#include "netstate/error.hpp"

namespace netstate {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_pair: return "invalid-pair";
    case ErrorKind::empty_band: return "empty-band";
    case ErrorKind::geometry_mismatch: return "geometry-mismatch";
    case ErrorKind::invalid_mode: return "invalid-mode";
    case ErrorKind::invalid_rank: return "invalid-rank";
    case ErrorKind::invalid_index: return "invalid-index";
    case ErrorKind::zero_norm: return "zero-norm";
    case ErrorKind::degenerate_core: return "degenerate-core";
    case ErrorKind::invalid_config: return "invalid-config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_config:
      return 2;
    case ErrorKind::zero_norm:
    case ErrorKind::degenerate_core:
      return 4;
    default:
      return 3;
  }
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace netstate
