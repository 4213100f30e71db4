#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "hord/errors.hpp"

namespace hord {

enum class VarKind { Continuous, Integer };

const char* var_kind_name(VarKind kind);
VarKind parse_var_kind(const std::string& text);

struct VariableSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  VarKind kind = VarKind::Continuous;
};

// A point in user units, keyed by variable name. std::map keeps the keys
// ordered so serialized output is stable.
using ExternalPoint = std::map<std::string, double>;

// Box-constrained mixed search space. All search geometry lives in the unit
// hypercube; this class owns the two affine maps between user units and
// [0,1]^D and the rounding rules for integer variables.
class Domain {
 public:
  // Zero-dimensional placeholder so config/result structs stay assignable;
  // every factual constructor validates its variables.
  Domain() = default;
  explicit Domain(std::vector<VariableSpec> variables);

  int dimension() const noexcept { return static_cast<int>(vars_.size()); }
  const std::vector<VariableSpec>& variables() const noexcept { return vars_; }
  const VariableSpec& variable(int i) const { return vars_.at(static_cast<std::size_t>(i)); }
  int index_of(const std::string& name) const;  // UnknownVariable if absent
  bool has_integer() const noexcept;

  // User units -> [0,1]^D. Requires exactly the domain's variables, each
  // within bounds (UnknownVariable / OutOfBounds otherwise).
  Eigen::VectorXd normalize(const ExternalPoint& p) const;

  // [0,1]^D -> user units. Integer variables are rounded to the nearest
  // integer (ties away from zero) and clamped into their bounds.
  ExternalPoint denormalize(const Eigen::VectorXd& coords) const;
  double denormalize_value(int i, double coord) const;

  // Moves integer coordinates onto the unit-interval grid their integer
  // range induces (round-trip through denormalize_value). Continuous
  // coordinates pass through unchanged. Idempotent.
  Eigen::VectorXd snap_integer_coords(const Eigen::VectorXd& coords) const;

  // Checks names, bounds, and integrality of integer variables.
  void validate_point(const ExternalPoint& p) const;

 private:
  std::vector<VariableSpec> vars_;
  std::map<std::string, int> index_;
};

enum class Phase { InitialDesign, Isp, Adaptive };

const char* phase_name(Phase phase);
Phase parse_phase(const std::string& text);

struct EvaluationRecord {
  int n = 0;  // 1-based evaluation number within the run
  Eigen::VectorXd point;  // internal coordinates, integer coords on-grid
  ExternalPoint point_external;
  double value = 0.0;
  Phase phase = Phase::InitialDesign;
  double wall_time = 0.0;  // seconds spent in the evaluator
};

// Append-only log of evaluated points with an incumbent index. Enforces the
// pairwise separation d_tol that the rest of the search assumes.
class EvaluationHistory {
 public:
  explicit EvaluationHistory(double d_tol = 1e-3);

  // DuplicatePoint if the point lies closer than d_tol to a stored one.
  // The record's n is assigned (1-based) if left at zero.
  void record(EvaluationRecord r);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const std::vector<EvaluationRecord>& records() const noexcept { return records_; }
  const EvaluationRecord& operator[](std::size_t i) const { return records_.at(i); }

  std::size_t best_index() const;       // earliest strict minimum
  const EvaluationRecord& best() const;
  double best_value() const;

  double min_distance(const Eigen::VectorXd& point) const;  // +inf when empty
  double d_tol() const noexcept { return d_tol_; }

  Eigen::MatrixXd points_matrix() const;  // n x D, row per evaluation
  Eigen::VectorXd values_vector() const;

 private:
  std::vector<EvaluationRecord> records_;
  std::size_t best_ = 0;
  double d_tol_;
};

}  // namespace hord
