#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace koszulab {

enum class ErrorCode {
  DivisionByZero,
  MixedFields,
  MixedRings,
  SyntaxError,
  UnknownVariable,
  DegreeOverflow,
  NotGraded,
  ZeroElement,
  BadBounds,
  LiftFailure,
  UnstableWindow,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::MixedFields: return "MixedFields";
    case ErrorCode::MixedRings: return "MixedRings";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::NotGraded: return "NotGraded";
    case ErrorCode::ZeroElement: return "ZeroElement";
    case ErrorCode::BadBounds: return "BadBounds";
    case ErrorCode::LiftFailure: return "LiftFailure";
    case ErrorCode::UnstableWindow: return "UnstableWindow";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <ErrorCode C>
class TypedError : public Error {
 public:
  explicit TypedError(const std::string& what) : Error(C, what) {}
};

using DivisionByZero = TypedError<ErrorCode::DivisionByZero>;
using MixedFields = TypedError<ErrorCode::MixedFields>;
using MixedRings = TypedError<ErrorCode::MixedRings>;
using UnknownVariable = TypedError<ErrorCode::UnknownVariable>;
using DegreeOverflow = TypedError<ErrorCode::DegreeOverflow>;
using NotGraded = TypedError<ErrorCode::NotGraded>;
using ZeroElement = TypedError<ErrorCode::ZeroElement>;
using BadBounds = TypedError<ErrorCode::BadBounds>;
using LiftFailure = TypedError<ErrorCode::LiftFailure>;
using UnstableWindow = TypedError<ErrorCode::UnstableWindow>;
using InvalidArgument = TypedError<ErrorCode::InvalidArgument>;

/// Parse failure carrying the byte offset of the offending character.
class SyntaxError : public TypedError<ErrorCode::SyntaxError> {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : TypedError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace koszulab
