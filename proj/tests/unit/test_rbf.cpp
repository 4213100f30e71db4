#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hord/errors.hpp"
#include "hord/rbf.hpp"
#include "hord/rng.hpp"

using namespace hord;

namespace {

// Straight-from-the-definition reference: assemble the augmented system and
// solve it with hand-rolled Gaussian elimination (partial pivoting). No
// shared code with the library solver.
struct OracleModel {
  Eigen::MatrixXd nodes;
  std::vector<double> lambda;
  std::vector<double> b;
  double a = 0.0;
};

std::vector<double> gauss_solve(std::vector<std::vector<double>> m,
                                std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    REQUIRE(std::abs(m[col][col]) > 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = m[r][col] / m[col][col];
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] / m[i][i];
  return out;
}

OracleModel oracle_fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values) {
  const std::size_t n = static_cast<std::size_t>(points.rows());
  const std::size_t d = static_cast<std::size_t>(points.cols());
  const std::size_t size = n + d + 1;
  std::vector<std::vector<double>> m(size, std::vector<double>(size, 0.0));
  std::vector<double> rhs(size, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) -
                            points(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
        sq += diff * diff;
      }
      const double r = std::sqrt(sq);
      m[i][j] = r * r * r;
    }
    for (std::size_t k = 0; k < d; ++k) {
      m[i][n + k] = points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      m[n + k][i] = m[i][n + k];
    }
    m[i][n + d] = 1.0;
    m[n + d][i] = 1.0;
    rhs[i] = values[static_cast<Eigen::Index>(i)];
  }
  const std::vector<double> sol = gauss_solve(std::move(m), std::move(rhs));
  OracleModel out;
  out.nodes = points;
  out.lambda.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n));
  out.b.assign(sol.begin() + static_cast<std::ptrdiff_t>(n),
               sol.begin() + static_cast<std::ptrdiff_t>(n + d));
  out.a = sol[n + d];
  return out;
}

double oracle_predict(const OracleModel& m, const Eigen::VectorXd& x) {
  double s = m.a;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    s += m.b[static_cast<std::size_t>(k)] * x[k];
  }
  for (Eigen::Index i = 0; i < m.nodes.rows(); ++i) {
    const double r = (m.nodes.row(i).transpose() - x).norm();
    s += m.lambda[static_cast<std::size_t>(i)] * r * r * r;
  }
  return s;
}

// Random points in [0,1]^d with pairwise separation >= gap.
Eigen::MatrixXd separated_points(int n, int d, double gap, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd pts(n, d);
  int placed = 0;
  while (placed < n) {
    Eigen::VectorXd cand(d);
    for (int k = 0; k < d; ++k) cand[k] = unif(gen);
    bool ok = true;
    for (int i = 0; i < placed && ok; ++i) {
      ok = (pts.row(i).transpose() - cand).norm() >= gap;
    }
    if (ok) pts.row(placed++) = cand.transpose();
  }
  return pts;
}

}  // namespace

TEST_CASE("two nodes on a line give the pure linear interpolant") {
  Eigen::MatrixXd pts(2, 1);
  pts << 0.0, 1.0;
  Eigen::VectorXd vals(2);
  vals << 0.0, 1.0;
  RbfModel m = RbfModel::fit({pts, vals});
  CHECK(m.lambda().cwiseAbs().maxCoeff() < 1e-10);
  CHECK(m.tail_b()[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(m.tail_a()) < 1e-10);
  CHECK(m.predict(Eigen::VectorXd::Constant(1, 0.5)) ==
        doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("zero data fits the zero model") {
  std::mt19937_64 gen(1);
  Eigen::MatrixXd pts = separated_points(8, 3, 1e-2, gen);
  RbfModel m = RbfModel::fit({pts, Eigen::VectorXd::Zero(8)});
  CHECK(m.lambda().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(m.tail_b().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(m.tail_a()) < 1e-12);
  CHECK(std::abs(m.predict(Eigen::VectorXd::Constant(3, 0.37))) < 1e-12);
}

TEST_CASE("a single unit weight at the origin with no tail is the cubic kernel") {
  Eigen::MatrixXd node = Eigen::MatrixXd::Zero(1, 2);
  RbfModel m = RbfModel::from_parameters(node, Eigen::VectorXd::Ones(1),
                                         Eigen::VectorXd::Zero(2), 0.0);
  Eigen::VectorXd x(2);
  x << 0.5, 0.0;
  CHECK(m.predict(x) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("fit matches the independent dense solve") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> vals(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 4;
    const int n = d + 2 + trial;
    Eigen::MatrixXd pts = separated_points(n, d, 5e-3, gen);
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = vals(gen);

    RbfModel mine = RbfModel::fit({pts, f});
    OracleModel ref = oracle_fit(pts, f);

    for (int q = 0; q < 25; ++q) {
      Eigen::VectorXd x(d);
      for (int k = 0; k < d; ++k) x[k] = vals(gen) / 5.0 * 0.5 + 0.5;
      const double expected = oracle_predict(ref, x);
      CHECK(mine.predict(x) ==
            doctest::Approx(expected).epsilon(1e-7).scale(1.0 + std::abs(expected)));
    }
  }
}

TEST_CASE("interpolation residuals hold at every node") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> vals(-100.0, 100.0);
  for (const int d : {1, 2, 6}) {
    const int n = 4 * d + 3;
    Eigen::MatrixXd pts = separated_points(n, d, 1e-3, gen);
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = vals(gen);
    RbfModel m = RbfModel::fit({pts, f});
    for (int i = 0; i < n; ++i) {
      const double s = m.predict(pts.row(i).transpose());
      CHECK(std::abs(s - f[i]) <= 1e-8 * (1.0 + std::abs(f[i])));
    }
  }
}

TEST_CASE("orthogonality of the weights to the polynomial space") {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> vals(-3.0, 3.0);
  const int d = 4, n = 30;
  Eigen::MatrixXd pts = separated_points(n, d, 1e-3, gen);
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) f[i] = vals(gen);
  RbfModel m = RbfModel::fit({pts, f});
  Eigen::MatrixXd p(n, d + 1);
  p.leftCols(d) = pts;
  p.col(d).setOnes();
  const double scale = std::max(1.0, m.lambda().norm() * std::sqrt(double(n)));
  CHECK((p.transpose() * m.lambda()).cwiseAbs().maxCoeff() <= 1e-8 * scale);
}

TEST_CASE("affine functions are reproduced exactly") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (const int d : {1, 3, 7}) {
    Eigen::VectorXd c(d);
    for (int k = 0; k < d; ++k) c[k] = unif(gen);
    const double intercept = unif(gen);
    const int n = d + 5;
    Eigen::MatrixXd pts = separated_points(n, d, 1e-2, gen);
    Eigen::VectorXd f = pts * c + Eigen::VectorXd::Constant(n, intercept);
    RbfModel m = RbfModel::fit({pts, f});
    CHECK(m.lambda().cwiseAbs().maxCoeff() <= 1e-6);
    for (int q = 0; q < 100; ++q) {
      Eigen::VectorXd x(d);
      for (int k = 0; k < d; ++k) x[k] = 0.5 + unif(gen) / 4.0;
      CHECK(std::abs(m.predict(x) - (c.dot(x) + intercept)) <= 1e-6);
    }
  }
}

TEST_CASE("predictions are invariant under joint translation") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int d = 3, n = 12;
  Eigen::MatrixXd pts = separated_points(n, d, 1e-2, gen);
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) f[i] = unif(gen) * 4.0;
  Eigen::VectorXd shift(d);
  shift << 10.0, -3.0, 0.25;

  RbfModel base = RbfModel::fit({pts, f});
  RbfModel moved = RbfModel::fit({pts.rowwise() + shift.transpose(), f});
  for (int q = 0; q < 50; ++q) {
    Eigen::VectorXd x(d);
    for (int k = 0; k < d; ++k) x[k] = unif(gen);
    CHECK(moved.predict(x + shift) ==
          doctest::Approx(base.predict(x)).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("kernel matrix is symmetric with zero diagonal") {
  std::mt19937_64 gen(5);
  Eigen::MatrixXd pts = separated_points(9, 2, 1e-2, gen);
  Eigen::MatrixXd phi = rbf_kernel_matrix(pts);
  CHECK(phi.rows() == 9);
  CHECK(phi.cols() == 9);
  CHECK(phi.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((phi - phi.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(phi(0, 1) ==
        doctest::Approx(std::pow((pts.row(0) - pts.row(1)).norm(), 3)).epsilon(1e-15));
}

TEST_CASE("fit rejects undersized or non-finite inputs") {
  Eigen::MatrixXd pts(2, 2);
  pts << 0.0, 0.0, 1.0, 1.0;
  Eigen::VectorXd f(2);
  f << 1.0, 2.0;
  CHECK_THROWS_AS(RbfModel::fit({pts, f}), Error);  // n < D+1
  try {
    RbfModel::fit({pts, f});
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooFewPoints);
  }

  Eigen::MatrixXd pts3(3, 2);
  pts3 << 0.0, 0.0, 1.0, 0.2, 0.3, 0.9;
  Eigen::VectorXd bad(3);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN(), 0.0;
  CHECK_THROWS_AS(RbfModel::fit({pts3, bad}), Error);
}

TEST_CASE("refit_with equals a full fit on the extended set") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int d = 2, n = 8;
  Eigen::MatrixXd pts = separated_points(n + 1, d, 2e-2, gen);
  Eigen::VectorXd f(n + 1);
  for (int i = 0; i <= n; ++i) f[i] = unif(gen);

  RbfModel base = RbfModel::fit({pts.topRows(n), f.head(n)});
  RbfModel incremental = base.refit_with(pts.row(n).transpose(), f[n]);
  RbfModel full = RbfModel::fit({pts, f});

  CHECK((incremental.lambda() - full.lambda()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((incremental.tail_b() - full.tail_b()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(std::abs(incremental.tail_a() - full.tail_a()) <= 1e-10);

  // the new node is interpolated
  CHECK(std::abs(incremental.predict(pts.row(n).transpose()) - f[n]) <=
        1e-8 * (1.0 + std::abs(f[n])));

  // too-close insertions are refused
  Eigen::VectorXd close = pts.row(0).transpose();
  close[0] += 1e-5;
  CHECK_THROWS_AS(base.refit_with(close, 0.0), Error);
}

TEST_CASE("predict_batch is elementwise identical to predict") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int d = 5, n = 40;
  Eigen::MatrixXd pts = separated_points(n, d, 1e-3, gen);
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) f[i] = unif(gen) * 10.0 - 5.0;
  RbfModel m = RbfModel::fit({pts, f});

  Eigen::MatrixXd queries(64, d);
  for (int q = 0; q < 64; ++q) {
    for (int k = 0; k < d; ++k) queries(q, k) = unif(gen);
  }
  const Eigen::VectorXd batch = m.predict_batch(queries);
  REQUIRE(batch.size() == 64);
  for (int q = 0; q < 64; ++q) {
    CHECK(batch[q] == m.predict(queries.row(q).transpose()));  // bit-identical
  }
}

TEST_CASE("clustered nodes near the separation floor still interpolate") {
  Eigen::MatrixXd pts(4, 1);
  pts << 0.0, 1e-3, 0.5, 0.5 + 1.2e-3;
  Eigen::VectorXd f(4);
  f << 1.0, 1.1, -2.0, -1.9;
  RbfModel m = RbfModel::fit({pts, f});
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(m.predict(pts.row(i).transpose()) - f[i]) <=
          1e-8 * (1.0 + std::abs(f[i])));
  }
}
