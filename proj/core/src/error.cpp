#include "zetapair/error.hpp"

namespace zetapair {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Config: return "config";
    case ErrorKind::InsufficientTables: return "insufficient-tables";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::IncompleteList: return "incomplete-list";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::BandLimit: return "band-limit";
  }
  return "unknown";
}

}  // namespace zetapair
