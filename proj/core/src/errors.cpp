#include "hord/errors.hpp"

namespace hord {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::NegativeVariance: return "NegativeVariance";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::NoCandidates: return "NoCandidates";
    case Errc::EmptyCandidateSet: return "EmptyCandidateSet";
    case Errc::Timeout: return "Timeout";
    case Errc::ProtocolError: return "ProtocolError";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::ChildCrashed: return "ChildCrashed";
    case Errc::EvaluationError: return "EvaluationError";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::CorruptTrace: return "CorruptTrace";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code) {}

void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace hord
