#include "hord/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hord {

const char* var_kind_name(VarKind kind) {
  return kind == VarKind::Integer ? "integer" : "continuous";
}

VarKind parse_var_kind(const std::string& text) {
  if (text == "continuous") return VarKind::Continuous;
  if (text == "integer") return VarKind::Integer;
  raise(Errc::ConfigInvalid, "unknown variable kind '" + text + "'");
}

namespace {

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

Domain::Domain(std::vector<VariableSpec> variables) : vars_(std::move(variables)) {
  if (vars_.empty()) {
    raise(Errc::ConfigInvalid, "domain needs at least one variable");
  }
  for (int i = 0; i < static_cast<int>(vars_.size()); ++i) {
    const VariableSpec& v = vars_[static_cast<std::size_t>(i)];
    if (v.name.empty()) {
      raise(Errc::ConfigInvalid, "variable without a name");
    }
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper) || !(v.lower < v.upper)) {
      raise(Errc::ConfigInvalid, "variable '" + v.name + "' needs lower < upper");
    }
    if (v.kind == VarKind::Integer) {
      if (!is_integral(v.lower) || !is_integral(v.upper)) {
        raise(Errc::ConfigInvalid,
              "integer variable '" + v.name + "' needs integral bounds");
      }
      if (v.upper - v.lower < 1.0) {
        raise(Errc::ConfigInvalid,
              "integer variable '" + v.name + "' needs at least two grid values");
      }
    }
    if (!index_.emplace(v.name, i).second) {
      raise(Errc::ConfigInvalid, "duplicate variable name '" + v.name + "'");
    }
  }
}

int Domain::index_of(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) {
    raise(Errc::UnknownVariable, "variable '" + name + "' is not in the domain");
  }
  return it->second;
}

bool Domain::has_integer() const noexcept {
  return std::any_of(vars_.begin(), vars_.end(), [](const VariableSpec& v) {
    return v.kind == VarKind::Integer;
  });
}

Eigen::VectorXd Domain::normalize(const ExternalPoint& p) const {
  for (const auto& [name, value] : p) {
    (void)value;
    index_of(name);  // reject stray keys
  }
  Eigen::VectorXd coords(dimension());
  for (int i = 0; i < dimension(); ++i) {
    const VariableSpec& v = vars_[static_cast<std::size_t>(i)];
    const auto it = p.find(v.name);
    if (it == p.end()) {
      raise(Errc::UnknownVariable, "point is missing variable '" + v.name + "'");
    }
    const double value = it->second;
    if (!std::isfinite(value) || value < v.lower || value > v.upper) {
      std::ostringstream msg;
      msg << "variable '" << v.name << "' = " << value << " outside ["
          << v.lower << ", " << v.upper << "]";
      raise(Errc::OutOfBounds, msg.str());
    }
    coords[i] = (value - v.lower) / (v.upper - v.lower);
  }
  return coords;
}

double Domain::denormalize_value(int i, double coord) const {
  const VariableSpec& v = vars_.at(static_cast<std::size_t>(i));
  double value = v.lower + coord * (v.upper - v.lower);
  if (v.kind == VarKind::Integer) {
    value = std::clamp(std::round(value), v.lower, v.upper);
  }
  return value;
}

ExternalPoint Domain::denormalize(const Eigen::VectorXd& coords) const {
  if (coords.size() != dimension()) {
    raise(Errc::OutOfBounds, "coordinate vector has wrong dimension");
  }
  ExternalPoint p;
  for (int i = 0; i < dimension(); ++i) {
    p[vars_[static_cast<std::size_t>(i)].name] = denormalize_value(i, coords[i]);
  }
  return p;
}

Eigen::VectorXd Domain::snap_integer_coords(const Eigen::VectorXd& coords) const {
  Eigen::VectorXd snapped = coords;
  for (int i = 0; i < dimension(); ++i) {
    const VariableSpec& v = vars_[static_cast<std::size_t>(i)];
    if (v.kind != VarKind::Integer) continue;
    snapped[i] = (denormalize_value(i, coords[i]) - v.lower) / (v.upper - v.lower);
  }
  return snapped;
}

void Domain::validate_point(const ExternalPoint& p) const {
  (void)normalize(p);  // names and bounds
  for (const VariableSpec& v : vars_) {
    if (v.kind == VarKind::Integer && !is_integral(p.at(v.name))) {
      raise(Errc::OutOfBounds,
            "integer variable '" + v.name + "' holds a non-integral value");
    }
  }
}

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::InitialDesign: return "initial_design";
    case Phase::Isp: return "isp";
    case Phase::Adaptive: return "adaptive";
  }
  return "unknown";
}

Phase parse_phase(const std::string& text) {
  if (text == "initial_design") return Phase::InitialDesign;
  if (text == "isp") return Phase::Isp;
  if (text == "adaptive") return Phase::Adaptive;
  raise(Errc::CorruptTrace, "unknown phase '" + text + "'");
}

EvaluationHistory::EvaluationHistory(double d_tol) : d_tol_(d_tol) {
  if (!(d_tol > 0.0)) {
    raise(Errc::ConfigInvalid, "d_tol must be positive");
  }
}

void EvaluationHistory::record(EvaluationRecord r) {
  if (!std::isfinite(r.value)) {
    raise(Errc::NonFiniteValue, "refusing to record a non-finite objective value");
  }
  if (min_distance(r.point) < d_tol_) {
    raise(Errc::DuplicatePoint, "point lies within d_tol of an evaluated point");
  }
  if (r.n == 0) {
    r.n = static_cast<int>(records_.size()) + 1;
  }
  // Strict improvement moves the incumbent; ties keep the earlier record.
  if (records_.empty() || r.value < records_[best_].value) {
    best_ = records_.size();
  }
  records_.push_back(std::move(r));
}

std::size_t EvaluationHistory::best_index() const {
  if (records_.empty()) {
    raise(Errc::TooFewPoints, "history is empty");
  }
  return best_;
}

const EvaluationRecord& EvaluationHistory::best() const {
  return records_.at(best_index());
}

double EvaluationHistory::best_value() const { return best().value; }

double EvaluationHistory::min_distance(const Eigen::VectorXd& point) const {
  double dist = std::numeric_limits<double>::infinity();
  for (const EvaluationRecord& r : records_) {
    dist = std::min(dist, (r.point - point).norm());
  }
  return dist;
}

Eigen::MatrixXd EvaluationHistory::points_matrix() const {
  const auto n = static_cast<Eigen::Index>(records_.size());
  const Eigen::Index dim = n > 0 ? records_.front().point.size() : 0;
  Eigen::MatrixXd pts(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    pts.row(i) = records_[static_cast<std::size_t>(i)].point.transpose();
  }
  return pts;
}

Eigen::VectorXd EvaluationHistory::values_vector() const {
  const auto n = static_cast<Eigen::Index>(records_.size());
  Eigen::VectorXd vals(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    vals[i] = records_[static_cast<std::size_t>(i)].value;
  }
  return vals;
}

}  // namespace hord
