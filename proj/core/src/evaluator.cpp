#include "hord/evaluator.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "hord/errors.hpp"
#include "hord/external_evaluator.hpp"

namespace hord {

void EvaluatorSpec::validate() const {
  if (kind == Kind::Builtin) {
    if (find_builtin(name) == nullptr) {
      raise(Errc::ConfigInvalid, "unknown builtin objective '" + name + "'");
    }
  } else {
    if (command.empty()) {
      raise(Errc::ConfigInvalid, "external evaluator needs a command");
    }
    if (!(timeout_s > 0.0)) {
      raise(Errc::ConfigInvalid, "external evaluator timeout must be positive");
    }
  }
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sphere(const Eigen::VectorXd& x) { return x.squaredNorm(); }

double rastrigin(const Eigen::VectorXd& x) {
  double sum = 10.0 * static_cast<double>(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sum += x[i] * x[i] - 10.0 * std::cos(kTwoPi * x[i]);
  }
  return sum;
}

double ackley(const Eigen::VectorXd& x) {
  const double dim = static_cast<double>(x.size());
  double sum_sq = 0.0;
  double sum_cos = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sum_sq += x[i] * x[i];
    sum_cos += std::cos(kTwoPi * x[i]);
  }
  return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / dim)) -
         std::exp(sum_cos / dim) + 20.0 + std::numbers::e;
}

double levy(const Eigen::VectorXd& x) {
  const Eigen::Index dim = x.size();
  auto warp = [](double v) { return 1.0 + (v - 1.0) / 4.0; };
  const double w0 = warp(x[0]);
  double sum = std::sin(std::numbers::pi * w0) * std::sin(std::numbers::pi * w0);
  for (Eigen::Index i = 0; i < dim - 1; ++i) {
    const double wi = warp(x[i]);
    const double s = std::sin(std::numbers::pi * wi + 1.0);
    sum += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
  }
  const double wd = warp(x[dim - 1]);
  const double s = std::sin(kTwoPi * wd);
  sum += (wd - 1.0) * (wd - 1.0) * (1.0 + s * s);
  return sum;
}

// Smooth multimodal surface with a known interior minimum of 0; stands in
// for tuning-style objectives with mixed variables. Each coordinate adds a
// gentle quadratic bowl plus a cosine ripple that opens side minima near
// |x - c| ~ 3, and the center c follows a fixed pattern (rounded on integer
// variables so the optimum stays on the grid).
constexpr double kSurfacePattern[6] = {-1.2, 2.3, 0.7, -3.1, 1.9, -0.4};

double surface_center(int i, VarKind kind) {
  const double c = kSurfacePattern[i % 6];
  return kind == VarKind::Integer ? std::round(c) : c;
}

double pseudo_dnn(const Eigen::VectorXd& x, const Domain& domain) {
  double sum = 0.0;
  for (int i = 0; i < domain.dimension(); ++i) {
    const double z = x[i] - surface_center(i, domain.variable(i).kind);
    sum += 0.3 * z * z + 1.5 * (1.0 - std::cos(2.0 * z));
  }
  return sum;
}

Domain box_domain(int dim, double lower, double upper, int integer_tail,
                  double int_lower, double int_upper) {
  std::vector<VariableSpec> vars;
  vars.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    VariableSpec v;
    v.name = "x" + std::to_string(i + 1);
    const bool integer = i >= dim - integer_tail;
    v.kind = integer ? VarKind::Integer : VarKind::Continuous;
    v.lower = integer ? int_lower : lower;
    v.upper = integer ? int_upper : upper;
    vars.push_back(std::move(v));
  }
  return Domain(std::move(vars));
}

// Mixed templates put the integer block at the tail: one variable in three,
// at least one.
int integer_tail_for(int dim) { return std::max(1, dim / 3); }

Eigen::VectorXd zeros_optimum(const Domain& d) {
  return Eigen::VectorXd::Zero(d.dimension());
}

std::vector<BuiltinFunction> build_catalog() {
  std::vector<BuiltinFunction> fns;

  fns.push_back({"sphere", "sum of squares, minimum 0 at the origin",
                 [](const Eigen::VectorXd& x, const Domain&) { return sphere(x); },
                 [](int dim) { return box_domain(dim, -5.12, 5.12, 0, 0, 0); },
                 zeros_optimum, 0.0});

  fns.push_back(
      {"rastrigin", "highly multimodal cosine lattice, minimum 0 at the origin",
       [](const Eigen::VectorXd& x, const Domain&) { return rastrigin(x); },
       [](int dim) { return box_domain(dim, -5.12, 5.12, 0, 0, 0); },
       zeros_optimum, 0.0});

  fns.push_back(
      {"ackley", "exponential well with cosine ripples, minimum 0 at the origin",
       [](const Eigen::VectorXd& x, const Domain&) { return ackley(x); },
       [](int dim) { return box_domain(dim, -32.768, 32.768, 0, 0, 0); },
       zeros_optimum, 0.0});

  fns.push_back({"levy", "warped sine landscape, minimum 0 at all ones",
                 [](const Eigen::VectorXd& x, const Domain&) { return levy(x); },
                 [](int dim) { return box_domain(dim, -10.0, 10.0, 0, 0, 0); },
                 [](const Domain& d) {
                   return Eigen::VectorXd::Ones(d.dimension()).eval();
                 },
                 0.0});

  fns.push_back(
      {"mixed_sphere", "sphere with an integer tail block, minimum 0 at the origin",
       [](const Eigen::VectorXd& x, const Domain&) { return sphere(x); },
       [](int dim) {
         return box_domain(dim, -5.12, 5.12, integer_tail_for(dim), -5, 5);
       },
       zeros_optimum, 0.0});

  fns.push_back(
      {"mixed_rastrigin",
       "rastrigin with an integer tail block, minimum 0 at the origin",
       [](const Eigen::VectorXd& x, const Domain&) { return rastrigin(x); },
       [](int dim) {
         return box_domain(dim, -5.12, 5.12, integer_tail_for(dim), -5, 5);
       },
       zeros_optimum, 0.0});

  fns.push_back({"pseudo_dnn",
                 "smooth multimodal mixed-variable surface, minimum 0 at a "
                 "fixed interior point",
                 pseudo_dnn,
                 [](int dim) {
                   const int tail = dim >= 3 ? 2 : 0;
                   return box_domain(dim, -4.0, 4.0, tail, -4, 4);
                 },
                 [](const Domain& d) {
                   Eigen::VectorXd c(d.dimension());
                   for (int i = 0; i < d.dimension(); ++i) {
                     c[i] = surface_center(i, d.variable(i).kind);
                   }
                   return c;
                 },
                 0.0});

  return fns;
}

class BuiltinEvaluator : public Evaluator {
 public:
  BuiltinEvaluator(const BuiltinFunction& fn, Domain domain)
      : fn_(fn), domain_(std::move(domain)) {}

  double evaluate(const ExternalPoint& p) override {
    Eigen::VectorXd values(domain_.dimension());
    for (int i = 0; i < domain_.dimension(); ++i) {
      const auto it = p.find(domain_.variable(i).name);
      if (it == p.end()) {
        raise(Errc::UnknownVariable,
              "point is missing variable '" + domain_.variable(i).name + "'");
      }
      values[i] = it->second;
    }
    const double f = fn_.eval(values, domain_);
    if (!std::isfinite(f)) {
      raise(Errc::NonFiniteValue, "objective '" + fn_.name + "' returned a non-finite value");
    }
    return f;
  }

 private:
  const BuiltinFunction& fn_;
  Domain domain_;
};

class FunctionEvaluator : public Evaluator {
 public:
  FunctionEvaluator(Domain domain, std::function<double(const Eigen::VectorXd&)> f)
      : domain_(std::move(domain)), f_(std::move(f)) {}

  double evaluate(const ExternalPoint& p) override {
    Eigen::VectorXd values(domain_.dimension());
    for (int i = 0; i < domain_.dimension(); ++i) {
      values[i] = p.at(domain_.variable(i).name);
    }
    const double f = f_(values);
    if (!std::isfinite(f)) {
      raise(Errc::NonFiniteValue, "objective returned a non-finite value");
    }
    return f;
  }

 private:
  Domain domain_;
  std::function<double(const Eigen::VectorXd&)> f_;
};

}  // namespace

const std::vector<BuiltinFunction>& builtin_catalog() {
  static const std::vector<BuiltinFunction> catalog = build_catalog();
  return catalog;
}

const BuiltinFunction* find_builtin(const std::string& name) {
  for (const BuiltinFunction& fn : builtin_catalog()) {
    if (fn.name == name) return &fn;
  }
  return nullptr;
}

std::unique_ptr<Evaluator> make_evaluator(const EvaluatorSpec& spec,
                                          const Domain& domain) {
  spec.validate();
  if (spec.kind == EvaluatorSpec::Kind::Builtin) {
    return std::make_unique<BuiltinEvaluator>(*find_builtin(spec.name), domain);
  }
  return std::make_unique<ExternalEvaluator>(spec.command, spec.args,
                                             spec.timeout_s, domain);
}

std::unique_ptr<Evaluator> make_function_evaluator(
    const Domain& domain, std::function<double(const Eigen::VectorXd&)> f) {
  return std::make_unique<FunctionEvaluator>(domain, std::move(f));
}

}  // namespace hord
