#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hott {

struct SourceSpan {
  std::string file;
  std::uint32_t line = 0;  // 1-based; 0 means unknown
  std::uint32_t col = 0;

  bool known() const { return line != 0; }
};

enum class ErrorKind {
  TypeMismatch,
  UnboundVariable,
  UniverseInconsistency,
  NotAFunction,
  NotASigma,
  NotAType,
  IllFormed,
  DuplicateName,
  UnknownName,
  UnsolvedHole,
  UnificationFailure,
  OccursCheck,
  InstanceNotFound,
  InstanceDepthExceeded,
  ParseError,
  ImportCycle,
  IoError,
};

const char* error_kind_name(ErrorKind k);

// Every checker, elaborator and frontend failure is one of these; the CLI
// turns each into exactly one Diagnostic.
class HottError : public std::runtime_error {
 public:
  HottError(ErrorKind kind, std::string message, SourceSpan span = {});

  ErrorKind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }
  HottError& at(const SourceSpan& s) {
    if (!span_.known()) span_ = s;
    return *this;
  }

  std::optional<std::string> expected;
  std::optional<std::string> got;
  std::vector<std::string> cycle;            // universe or import cycle
  std::vector<std::string> expected_tokens;  // parse errors

 private:
  ErrorKind kind_;
  SourceSpan span_;
};

}  // namespace hott
