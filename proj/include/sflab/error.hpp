#pragma once

#include <stdexcept>
#include <string>

namespace sflab {

enum class ErrorCode {
  Syntax,
  NotSN,
  NotNN,
  NotNormal,
  NotClosed,
  WrongClass,
  FuelExhausted,
  NonSNSeed,
  OutOfUniverse,
  UncoveredVariable,
  UnindexedFreeVariable,
  EmptyDomain,
  InvalidDerivation,
  ContainsAllE,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t pos, const std::string& msg)
      : Error(ErrorCode::Syntax,
              "syntax error at " + std::to_string(pos) + ": " + msg),
        pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

}  // namespace sflab
