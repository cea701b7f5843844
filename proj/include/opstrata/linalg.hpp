#pragma once

#include "opstrata/types.hpp"

namespace opstrata {

/// Outcome of a numerical rank decision on a matrix.
///
/// rank counts singular values σ_i > tolerance·σ₁. leading_gap is σ_rank/σ₁
/// (0 when rank is 0); trailing_ratio is σ_{rank+1}/σ₁ (0 when no singular
/// value was rejected or when σ₁ = 0).
struct RankDecision {
  Index rank = 0;
  double leading_gap = 0.0;
  double trailing_ratio = 0.0;
  double tolerance = kDefaultTol;
};

RankDecision numerical_rank(const Matrix& t, double tol = kDefaultTol);

/// Everything one SVD tells about a matrix: the rank decision and orthonormal
/// bases of the column space and null space. The column-space basis is made of
/// left singular vectors in decreasing singular-value order.
struct RankProfile {
  RankDecision decision;
  Subspace column_space;
  Subspace null_space;
  Vector singular_values;
};

RankProfile rank_profile(const Matrix& t, double tol = kDefaultTol);

Subspace column_space(const Matrix& t, double tol = kDefaultTol);
Subspace null_space(const Matrix& t, double tol = kDefaultTol);

/// Solves A X = B for square, well-conditioned A. Throws SingularMatrix when
/// σ_min(A)/σ_max(A) ≤ tol.
Matrix solve(const Matrix& a, const Matrix& b, double tol = 1e-12);

/// σ_min/σ_max of a square matrix (0 for singular, 1 for the empty matrix).
double inverse_condition(const Matrix& a);

/// Inverse of T on the complement `r` of its kernel, extended by zero on the
/// complement `n_star` of its range. With R(T) ⊕ N* as codomain split and
/// R ⊕ N(T) as domain split, the result satisfies T⁺T = P^{N(T)}_R and
/// TT⁺ = P^{N*}_{R(T)}.
Matrix restricted_inverse(const Matrix& t, const Subspace& r, const Subspace& n_star,
                          double tol = kDefaultTol);

/// Frobenius-norm helper that tolerates empty matrices.
inline double frobenius(const Matrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

}  // namespace opstrata
