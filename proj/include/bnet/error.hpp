#pragma once

#include <stdexcept>
#include <string>

namespace bnet {

// Every failure the library can signal carries one of these codes so that
// callers (and the CLI exit-code mapping) can dispatch without string
// matching.
enum class ErrorCode {
  // network construction / validation
  DuplicateName,
  BadVariable,
  CycleDetected,
  BadCptShape,
  RowNotNormalized,
  NegativeValue,
  UnknownVariable,

  // potential algebra
  StateSetMismatch,
  KeepNotSubset,
  DomainMismatch,
  DivisionByZero,
  VariableNotInDomain,
  BadMaskLength,

  // evidence / conflict analysis
  AllZeroMask,
  ZeroPriorFinding,
  ZeroPrior,
  InvalidSession,
  UnknownState,
  NotCoveredByAnyClique,

  // compiler bug guards: these should be unreachable on any input
  RunningIntersectionViolated,
  NoHostClique,

  // oracle guards
  TooLarge,

  // file formats
  SyntaxError,
  BadRowSum,
  DuplicateDeclaration,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // True for conditions that indicate a bug in the engine itself rather
  // than bad input.
  bool internal() const noexcept {
    return code_ == ErrorCode::RunningIntersectionViolated ||
           code_ == ErrorCode::NoHostClique;
  }

 private:
  ErrorCode code_;
};

}  // namespace bnet
