#pragma once

#include <stdexcept>
#include <string>

namespace hord {

// Every failure mode the library reports. Callers that care about the
// category catch hord::Error and switch on code().
enum class Errc {
  UnknownVariable,
  OutOfBounds,
  DuplicatePoint,
  TooFewPoints,
  SingularSystem,
  NegativeVariance,
  BudgetExhausted,
  NoCandidates,
  EmptyCandidateSet,
  Timeout,
  ProtocolError,
  NonFiniteValue,
  ChildCrashed,
  EvaluationError,
  ConfigInvalid,
  CorruptTrace,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace hord
