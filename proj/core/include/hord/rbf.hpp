#pragma once

#include <Eigen/Core>

namespace hord {

struct FitInput {
  Eigen::MatrixXd points;  // n x D, pairwise distinct
  Eigen::VectorXd values;  // n, finite
};

// Cubic radial basis interpolant with a linear tail:
//
//   S(x) = sum_i lambda_i * ||x - x_i||^3  +  b.x + a
//
// Coefficients come from the symmetric augmented system
//
//   [ Phi  P ] [lambda]   [F]          Phi_ij = ||x_i - x_j||^3
//   [ P^T  0 ] [  c   ] = [0]          P row i = [x_i^T, 1],  c = [b; a]
//
// solved by pivoted LU with iterative refinement; a singular or inaccurate
// solve is retried once with ridge regularization on Phi before giving up.
// The tail constraints P^T lambda = 0 make the interpolant reproduce affine
// functions exactly.
//
// The solve and all evaluations accumulate in extended precision. Clustered
// nodes give the cubic kernel huge coefficients of cancelling sign
// (|lambda| ~ |f| / gap^3 in one dimension), and at that magnitude the
// rounding floor of a plain double summation can exceed the interpolation
// tolerance even for the exactly-solved system.
class RbfModel {
 public:
  // Requires n >= D+1 (TooFewPoints) and an unisolvent geometry
  // (SingularSystem otherwise, also raised when duplicates defeat the solve).
  static RbfModel fit(const FitInput& input);

  // Assemble a model from explicit coefficients (diagnostics and tests).
  static RbfModel from_parameters(Eigen::MatrixXd nodes, Eigen::VectorXd lambda,
                                  Eigen::VectorXd tail_b, double tail_a);

  // Full refit on the n+1 point set. DuplicatePoint if new_point lies within
  // d_tol of an existing node.
  RbfModel refit_with(const Eigen::VectorXd& new_point, double new_value,
                      double d_tol = 1e-3) const;

  double predict(const Eigen::VectorXd& x) const;
  // Row r of xs is a query point; same arithmetic per row as predict().
  Eigen::VectorXd predict_batch(const Eigen::MatrixXd& xs) const;

  const Eigen::MatrixXd& nodes() const noexcept { return nodes_; }
  const Eigen::VectorXd& node_values() const noexcept { return values_; }
  // Coefficients rounded to double; the model itself keeps them wider.
  Eigen::VectorXd lambda() const;
  Eigen::VectorXd tail_b() const;
  double tail_a() const noexcept { return static_cast<double>(tail_a_); }
  int dimension() const noexcept { return static_cast<int>(nodes_.cols()); }
  int size() const noexcept { return static_cast<int>(nodes_.rows()); }

 private:
  using WideVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

  RbfModel() = default;

  Eigen::MatrixXd nodes_;
  Eigen::VectorXd values_;
  WideVector lambda_;
  WideVector tail_b_;
  long double tail_a_ = 0.0L;
};

// Pairwise cubic kernel matrix Phi (symmetric, zero diagonal).
Eigen::MatrixXd rbf_kernel_matrix(const Eigen::MatrixXd& points);

}  // namespace hord
