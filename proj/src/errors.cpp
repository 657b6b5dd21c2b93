#include "issv/errors.hpp"

namespace issv {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::BlowUp: return "blow-up";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Constraint: return "constraint";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace issv
