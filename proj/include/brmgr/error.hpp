#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace brmgr {

enum class ErrorCode {
  // validation
  MissingField,
  EmptyText,
  DuplicateRank,
  ParseError,
  InvalidArgument,
  LengthMismatch,
  NonFiniteScore,
  EmptyInput,
  TooLarge,
  IndexOutOfRange,
  MisalignedInputs,
  // backend
  BackendUnavailable,
  BackendRejected,
  EmptyContinuationAfterTokenization,
  // filesystem
  Io,
};

std::string_view to_string(ErrorCode code);

enum class ErrorCategory { Validation, Backend, Io };

ErrorCategory category_of(ErrorCode code);

/// Process exit code for the CLI: 1 validation, 2 backend, 3 IO.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  bool retryable() const noexcept { return code_ == ErrorCode::BackendUnavailable; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Raised by score_batch; carries the position of the failing request.
class BatchError : public Error {
 public:
  BatchError(const Error& cause, std::size_t index)
      : Error(cause.code(), "request " + std::to_string(index) + ": " + cause.detail()),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace brmgr
