#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hord/domain.hpp"

namespace hord {

// How a study names its objective.
struct EvaluatorSpec {
  enum class Kind { Builtin, External };

  Kind kind = Kind::Builtin;

  // Builtin: catalog entry name.
  std::string name;

  // External: child process speaking the line-delimited JSON protocol.
  std::string command;
  std::vector<std::string> args;
  double timeout_s = 30.0;  // per request, handshake included

  void validate() const;  // ConfigInvalid
};

// One objective evaluation. Implementations raise hord::Error on failure
// (Timeout, ProtocolError, NonFiniteValue, ChildCrashed, EvaluationError);
// a returned value is always finite.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual double evaluate(const ExternalPoint& p) = 0;
};

std::unique_ptr<Evaluator> make_evaluator(const EvaluatorSpec& spec,
                                          const Domain& domain);

// Wraps an arbitrary function of the ordered variable values; used for
// custom objectives driven through the library API.
std::unique_ptr<Evaluator> make_function_evaluator(
    const Domain& domain, std::function<double(const Eigen::VectorXd&)> f);

// Catalog entry for a deterministic test function. `eval` takes the values
// in domain order (user units); `default_domain` builds the conventional
// box for a given dimension; `optimum` reports the known minimizer for a
// domain built by that template.
struct BuiltinFunction {
  std::string name;
  std::string summary;
  std::function<double(const Eigen::VectorXd&, const Domain&)> eval;
  std::function<Domain(int dim)> default_domain;
  std::function<Eigen::VectorXd(const Domain&)> optimum;
  double optimum_value = 0.0;
};

const std::vector<BuiltinFunction>& builtin_catalog();
const BuiltinFunction* find_builtin(const std::string& name);  // nullptr if absent

}  // namespace hord
