#include "bnet/error.hpp"

namespace bnet {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::BadVariable: return "BadVariable";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::BadCptShape: return "BadCptShape";
    case ErrorCode::RowNotNormalized: return "RowNotNormalized";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::StateSetMismatch: return "StateSetMismatch";
    case ErrorCode::KeepNotSubset: return "KeepNotSubset";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::VariableNotInDomain: return "VariableNotInDomain";
    case ErrorCode::BadMaskLength: return "BadMaskLength";
    case ErrorCode::AllZeroMask: return "AllZeroMask";
    case ErrorCode::ZeroPriorFinding: return "ZeroPriorFinding";
    case ErrorCode::ZeroPrior: return "ZeroPrior";
    case ErrorCode::InvalidSession: return "InvalidSession";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::NotCoveredByAnyClique: return "NotCoveredByAnyClique";
    case ErrorCode::RunningIntersectionViolated:
      return "RunningIntersectionViolated";
    case ErrorCode::NoHostClique: return "NoHostClique";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::BadRowSum: return "BadRowSum";
    case ErrorCode::DuplicateDeclaration: return "DuplicateDeclaration";
  }
  return "UnknownError";
}

}  // namespace bnet
