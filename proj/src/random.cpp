#include "opstrata/random.hpp"

#include <algorithm>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "opstrata/error.hpp"

namespace opstrata {

namespace {

constexpr double kMinFactorGap = 1e-3;
constexpr int kMaxDraws = 1000;

Matrix normal_matrix(std::mt19937_64& engine, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Fill row by row so the stream order matches the row-major file layout.
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(engine);
  }
  return m;
}

Matrix draw_rank_k(std::mt19937_64& engine, Index rows, Index cols, Index k) {
  if (rows < 0 || cols < 0 || k < 0 || k > std::min(rows, cols)) {
    throw Error(ErrorCode::OutOfRange, "rank " + std::to_string(k) + " outside [0, min(" +
                                           std::to_string(rows) + ", " + std::to_string(cols) +
                                           ")]");
  }
  if (k == 0) return Matrix::Zero(rows, cols);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    const Matrix a = normal_matrix(engine, rows, k);
    const Matrix b = normal_matrix(engine, k, cols);
    Matrix m = a * b;
    const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
    if (sv(k - 1) >= kMinFactorGap * sv(0)) return m;
  }
  throw Error(ErrorCode::NumericalDegeneracy, "no well-conditioned rank-k draw");
}

}  // namespace

Matrix random_stratum_point(Index rows, Index cols, Index k, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  return draw_rank_k(engine, rows, cols, k);
}

Matrix InstanceGenerator::gaussian(Index rows, Index cols) {
  return normal_matrix(engine_, rows, cols);
}

Matrix InstanceGenerator::rank_k(Index rows, Index cols, Index k) {
  return draw_rank_k(engine_, rows, cols, k);
}

Subspace InstanceGenerator::subspace(Index n, Index d) {
  if (d < 0 || d > n) throw Error(ErrorCode::OutOfRange, "subspace dimension out of range");
  if (d == 0) return Subspace::zero(n);
  const Matrix g = normal_matrix(engine_, n, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, d);
  // Sign-fix against R's diagonal so the distribution is Haar.
  const Matrix r = qr.matrixQR();
  for (Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return Subspace::from_orthonormal(std::move(q));
}

Matrix InstanceGenerator::invertible(Index n, double min_inverse_condition) {
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Matrix m = normal_matrix(engine_, n, n);
    if (inverse_condition(m) >= min_inverse_condition) return m;
  }
  throw Error(ErrorCode::NumericalDegeneracy, "no well-conditioned invertible draw");
}

Index InstanceGenerator::uniform(Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(engine_);
}

double InstanceGenerator::uniform_real(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

}  // namespace opstrata
