#include "hott/errors.hpp"

namespace hott {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::UniverseInconsistency: return "UniverseInconsistency";
    case ErrorKind::NotAFunction: return "NotAFunction";
    case ErrorKind::NotASigma: return "NotASigma";
    case ErrorKind::NotAType: return "NotAType";
    case ErrorKind::IllFormed: return "IllFormed";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::UnsolvedHole: return "UnsolvedHole";
    case ErrorKind::UnificationFailure: return "UnificationFailure";
    case ErrorKind::OccursCheck: return "OccursCheck";
    case ErrorKind::InstanceNotFound: return "InstanceNotFound";
    case ErrorKind::InstanceDepthExceeded: return "InstanceDepthExceeded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ImportCycle: return "ImportCycle";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

HottError::HottError(ErrorKind kind, std::string message, SourceSpan span)
    : std::runtime_error(std::move(message)), kind_(kind), span_(std::move(span)) {}

}  // namespace hott
