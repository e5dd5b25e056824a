#pragma once

#include <stdexcept>
#include <string>

namespace dawnet {

enum class ErrorCode {
  NotFound,
  NotEnabled,
  UnknownTransition,
  UnknownVariable,
  SyntaxError,
  GuardFalse,
  BadChoice,
  InvalidStep,
  InvalidCase,
  PayloadViolatesWr,
  NotATraceWorkflowCase,
  DomainTooLarge,
  IntervalNotExpanded,
  UnboundedVariable,
  ContradictionInInit,
  InconsistentState,
  IoError,
  SchemaError,
  FormatError,
  ValidationFailed,
  InvalidArgument,
};

const char* error_code_name(ErrorCode c);

class DawError : public std::runtime_error {
public:
  DawError(ErrorCode code, std::string message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

}  // namespace dawnet
