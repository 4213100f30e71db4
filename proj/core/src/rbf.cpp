#include "hord/rbf.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "hord/errors.hpp"

namespace hord {

namespace {

// All internal arithmetic runs on this scalar. Interpolating rough data at
// fine spacing makes |lambda| grow like |f| / gap^3, and the evaluation of
// S(x) then cancels terms thousands of times larger than the result; the
// extra mantissa bits keep the rounding floor below the residual tolerance.
using Wide = long double;
using WideMatrix = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
using WideVector = Eigen::Matrix<Wide, Eigen::Dynamic, 1>;

constexpr double kResidualTol = 1e-8;

Wide cubic_kernel(const Eigen::MatrixXd& a, Eigen::Index i,
                  const Eigen::MatrixXd& b, Eigen::Index j) {
  Wide r2 = 0.0L;
  for (Eigen::Index d = 0; d < a.cols(); ++d) {
    const Wide diff = static_cast<Wide>(a(i, d)) - static_cast<Wide>(b(j, d));
    r2 += diff * diff;
  }
  const Wide r = std::sqrt(r2);
  return r * r * r;
}

// Interpolation and tail-orthogonality residuals of a solution to the
// augmented system. The first n rows are S(x_i) - f_i by construction, the
// last D+1 rows are P^T lambda.
bool residual_ok(const WideMatrix& aug, const WideVector& rhs,
                 const WideVector& sol, Eigen::Index n) {
  const WideVector res = aug * sol - rhs;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Wide tol = kResidualTol * (1.0L + std::abs(rhs[i]));
    if (!(std::abs(res[i]) <= tol)) return false;  // NaN fails too
  }
  const Wide lambda_norm = sol.head(n).norm();
  const Wide tail_tol =
      kResidualTol * std::max<Wide>(1.0L, lambda_norm * std::sqrt(static_cast<Wide>(n)));
  for (Eigen::Index i = n; i < res.size(); ++i) {
    if (!(std::abs(res[i]) <= tail_tol)) return false;
  }
  return true;
}

// Pivoted LU solve with two rounds of iterative refinement; the augmented
// system is symmetric indefinite and refinement recovers the last digits on
// clustered node sets.
WideVector solve_refined(const WideMatrix& aug, const WideVector& rhs) {
  const Eigen::FullPivLU<WideMatrix> lu(aug);
  WideVector sol = lu.solve(rhs);
  for (int pass = 0; pass < 2; ++pass) {
    const WideVector res = rhs - aug * sol;
    if (!res.allFinite()) break;
    sol += lu.solve(res);
  }
  return sol;
}

}  // namespace

Eigen::MatrixXd rbf_kernel_matrix(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd phi(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phi(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = (points.row(i) - points.row(j)).norm();
      phi(i, j) = phi(j, i) = r * r * r;
    }
  }
  return phi;
}

RbfModel RbfModel::fit(const FitInput& input) {
  const Eigen::Index n = input.points.rows();
  const Eigen::Index dim = input.points.cols();
  if (n != input.values.size()) {
    raise(Errc::ConfigInvalid, "fit input points/values size mismatch");
  }
  if (dim < 1 || n < dim + 1) {
    std::ostringstream msg;
    msg << "cubic fit needs at least D+1 = " << dim + 1 << " points, got " << n;
    raise(Errc::TooFewPoints, msg.str());
  }
  if (!input.points.allFinite() || !input.values.allFinite()) {
    raise(Errc::NonFiniteValue, "fit input holds non-finite entries");
  }

  const Eigen::Index size = n + dim + 1;
  WideMatrix aug = WideMatrix::Zero(size, size);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      aug(i, j) = aug(j, i) = cubic_kernel(input.points, i, input.points, j);
    }
    for (Eigen::Index d = 0; d < dim; ++d) {
      aug(i, n + d) = aug(n + d, i) = static_cast<Wide>(input.points(i, d));
    }
    aug(i, n + dim) = aug(n + dim, i) = 1.0L;
  }

  WideVector rhs = WideVector::Zero(size);
  for (Eigen::Index i = 0; i < n; ++i) rhs[i] = static_cast<Wide>(input.values[i]);

  WideVector sol = solve_refined(aug, rhs);
  if (!sol.allFinite() || !residual_ok(aug, rhs, sol, n)) {
    // One retry with ridge regularization on the kernel block; the residual
    // is still judged against the unregularized system.
    const Wide eps = kResidualTol * aug.topLeftCorner(n, n).cwiseAbs().maxCoeff();
    WideMatrix ridged = aug;
    ridged.topLeftCorner(n, n).diagonal().array() += eps;
    sol = solve_refined(ridged, rhs);
    if (!sol.allFinite() || !residual_ok(aug, rhs, sol, n)) {
      raise(Errc::SingularSystem,
            "augmented system is singular or lost interpolation accuracy");
    }
  }

  RbfModel model;
  model.nodes_ = input.points;
  model.values_ = input.values;
  model.lambda_ = sol.head(n);
  model.tail_b_ = sol.segment(n, dim);
  model.tail_a_ = sol[size - 1];
  return model;
}

RbfModel RbfModel::from_parameters(Eigen::MatrixXd nodes, Eigen::VectorXd lambda,
                                   Eigen::VectorXd tail_b, double tail_a) {
  if (nodes.rows() != lambda.size() || nodes.cols() != tail_b.size()) {
    raise(Errc::ConfigInvalid, "coefficient shapes do not match the nodes");
  }
  RbfModel model;
  model.values_ = Eigen::VectorXd::Zero(nodes.rows());
  model.nodes_ = std::move(nodes);
  model.lambda_ = lambda.cast<Wide>();
  model.tail_b_ = tail_b.cast<Wide>();
  model.tail_a_ = static_cast<Wide>(tail_a);
  return model;
}

RbfModel RbfModel::refit_with(const Eigen::VectorXd& new_point, double new_value,
                              double d_tol) const {
  if (new_point.size() != dimension()) {
    raise(Errc::OutOfBounds, "new point has wrong dimension");
  }
  for (Eigen::Index i = 0; i < nodes_.rows(); ++i) {
    if ((nodes_.row(i).transpose() - new_point).norm() < d_tol) {
      raise(Errc::DuplicatePoint, "new point lies within d_tol of a node");
    }
  }
  FitInput input;
  input.points.resize(nodes_.rows() + 1, nodes_.cols());
  input.points.topRows(nodes_.rows()) = nodes_;
  input.points.bottomRows(1) = new_point.transpose();
  input.values.resize(values_.size() + 1);
  input.values.head(values_.size()) = values_;
  input.values[values_.size()] = new_value;
  return fit(input);
}

double RbfModel::predict(const Eigen::VectorXd& x) const {
  return predict_batch(x.transpose())[0];
}

Eigen::VectorXd RbfModel::predict_batch(const Eigen::MatrixXd& xs) const {
  if (xs.cols() != dimension()) {
    raise(Errc::OutOfBounds, "query points have wrong dimension");
  }
  Eigen::VectorXd out(xs.rows());
  for (Eigen::Index r = 0; r < xs.rows(); ++r) {
    // One pass over the nodes per query.
    Wide acc = 0.0L;
    for (Eigen::Index i = 0; i < nodes_.rows(); ++i) {
      acc += lambda_[i] * cubic_kernel(nodes_, i, xs, r);
    }
    for (Eigen::Index d = 0; d < dimension(); ++d) {
      acc += tail_b_[d] * static_cast<Wide>(xs(r, d));
    }
    out[r] = static_cast<double>(acc + tail_a_);
  }
  return out;
}

Eigen::VectorXd RbfModel::lambda() const {
  return lambda_.cast<double>();
}

Eigen::VectorXd RbfModel::tail_b() const {
  return tail_b_.cast<double>();
}

}  // namespace hord
