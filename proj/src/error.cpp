#include "brmgr/error.hpp"

namespace brmgr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::DuplicateRank: return "DuplicateRank";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonFiniteScore: return "NonFiniteScore";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::MisalignedInputs: return "MisalignedInputs";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::BackendRejected: return "BackendRejected";
    case ErrorCode::EmptyContinuationAfterTokenization: return "EmptyContinuationAfterTokenization";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::BackendUnavailable:
    case ErrorCode::BackendRejected:
    case ErrorCode::EmptyContinuationAfterTokenization:
      return ErrorCategory::Backend;
    case ErrorCode::Io:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Validation;
  }
}

int exit_code_for(ErrorCode code) {
  switch (category_of(code)) {
    case ErrorCategory::Validation: return 1;
    case ErrorCategory::Backend: return 2;
    case ErrorCategory::Io: return 3;
  }
  return 1;
}

}  // namespace brmgr
