#pragma once

#include <Eigen/Dense>

namespace opstrata {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Default relative singular-value threshold for rank decisions.
inline constexpr double kDefaultTol = 1e-9;
/// Minimum smallest singular value of a stacked basis [A | B] for A and B to
/// count as complementary.
inline constexpr double kComplementThreshold = 1e-8;
/// Principal angles (radians) below this count as a shared direction.
inline constexpr double kIntersectionAngle = 1e-7;

/// A linear subspace of R^n held as an orthonormal basis (columns).
/// Zero-dimensional subspaces keep their ambient dimension.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Index ambient_dim);
  static Subspace whole(Index ambient_dim);
  /// Takes ownership of an already-orthonormal basis; throws InvalidArgument if
  /// the columns are not orthonormal to 1e-12.
  static Subspace from_orthonormal(Matrix basis);
  /// Orthonormal basis of the numerical column span of `vectors`.
  static Subspace span(const Matrix& vectors, double tol = kDefaultTol);

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  bool empty() const { return basis_.cols() == 0; }
  const Matrix& basis() const { return basis_; }

  /// Orthogonal projector B Bᵀ.
  Matrix projector() const { return basis_ * basis_.transpose(); }
  /// Distance of v from the subspace relative to ‖v‖ is at most `tol`.
  bool contains(const Vector& v, double tol = 1e-8) const;

 private:
  Subspace(Index ambient, Matrix basis) : ambient_(ambient), basis_(std::move(basis)) {}

  Index ambient_ = 0;
  Matrix basis_;
};

}  // namespace opstrata
