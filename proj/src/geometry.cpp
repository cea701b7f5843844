#include "opstrata/geometry.hpp"

#include <algorithm>
#include <string>

#include <Eigen/SVD>

#include "opstrata/error.hpp"
#include "opstrata/random.hpp"
#include "opstrata/subspace.hpp"

namespace opstrata {

namespace {

// vec(Wᵀ T B) = (Bᵀ ⊗ Wᵀ) vec(T), column-major vec.
Matrix kron_system(const Matrix& right, const Matrix& left_t) {
  Matrix out(right.cols() * left_t.rows(), right.rows() * left_t.cols());
  for (Index j = 0; j < right.cols(); ++j) {
    for (Index i = 0; i < right.rows(); ++i) {
      out.block(j * left_t.rows(), i * left_t.cols(), left_t.rows(), left_t.cols()) =
          right(i, j) * left_t;
    }
  }
  return out;
}

// Linear constraints T ↦ W⊥ᵀ T B_N whose kernel is the tangent space at X.
Matrix tangent_constraints(const RankProfile& p) {
  const Matrix w_perp = orthogonal_complement(p.column_space).basis();
  return kron_system(p.null_space.basis(), w_perp.transpose());
}

Index matrix_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  const Vector sv = Eigen::BDCSVD<Matrix>(m).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  return (sv.array() > kDefaultTol * sv(0)).count();
}

}  // namespace

TangentMembership tangent_membership(const Matrix& x, const Matrix& t, double tol) {
  if (x.rows() != t.rows() || x.cols() != t.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "tangent candidate has a different shape");
  }
  const RankProfile p = rank_profile(x);
  const Matrix w_perp = orthogonal_complement(p.column_space).basis();
  TangentMembership out;
  out.residual = frobenius(w_perp.transpose() * t * p.null_space.basis());
  out.member = out.residual <= tol * frobenius(t);
  return out;
}

TangentSpaceReport tangent_space_dim(const Matrix& x, double tol) {
  const RankProfile p = rank_profile(x, tol);
  const RankDecision& d = p.decision;
  if ((d.rank > 0 && d.leading_gap < 100.0 * tol) || d.trailing_ratio > tol / 100.0) {
    throw Error(ErrorCode::NumericalDegeneracy,
                "rank decision is ambiguous (gap " + std::to_string(d.leading_gap) +
                    ", trailing " + std::to_string(d.trailing_ratio) + ")");
  }
  const Matrix system = tangent_constraints(p);
  TangentSpaceReport r;
  r.base_point_rank = d.rank;
  r.ambient_dim = x.rows() * x.cols();
  r.complement_dim = matrix_rank(system);
  r.tangent_dim = r.ambient_dim - r.complement_dim;
  r.formula_dim = (x.rows() + x.cols() - d.rank) * d.rank;
  r.residual = system.rows() == 0
                   ? 0.0
                   : (system * system.transpose() -
                      Matrix::Identity(system.rows(), system.rows()))
                         .norm();
  return r;
}

Index stratum_dim(Index m, Index n, Index k) {
  if (m < 0 || n < 0 || k < 0 || k > std::min(m, n)) {
    throw Error(ErrorCode::OutOfRange, "rank " + std::to_string(k) + " outside [0, min(" +
                                           std::to_string(m) + ", " + std::to_string(n) + ")]");
  }
  return (m + n - k) * k;
}

StratificationReport stratification_report(Index rows, Index cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::InvalidArgument, "dimensions must be positive");
  StratificationReport out;
  out.rows = rows;
  out.cols = cols;
  const Index top = std::min(rows, cols);
  for (Index k = 0; k <= top; ++k) {
    StratumEntry e;
    e.rank = k;
    e.dim = stratum_dim(rows, cols, k);
    const Matrix x = random_stratum_point(rows, cols, k, seed + static_cast<std::uint64_t>(k));
    const TangentSpaceReport t = tangent_space_dim(x);
    e.certified = t.agrees() && t.tangent_dim == e.dim;
    out.strata.push_back(e);
  }
  InstanceGenerator gen(seed ^ 0x9e3779b97f4a7c15ULL);
  out.generic_in_top_stratum = numerical_rank(gen.gaussian(rows, cols)).rank == top;
  return out;
}

CanonicalEmbeddings canonical_embeddings(Index rows, Index cols, Index k) {
  if (rows < 0 || cols < 0 || k < 0 || k > std::min(rows, cols)) {
    throw Error(ErrorCode::OutOfRange, "rank " + std::to_string(k) + " outside [0, min dims]");
  }
  CanonicalEmbeddings e;
  e.ik = Matrix::Zero(rows, cols);
  e.ik_plus = Matrix::Zero(cols, rows);
  for (Index i = 0; i < k; ++i) {
    e.ik(i, i) = 1.0;
    e.ik_plus(i, i) = 1.0;
  }
  e.codomain_projector = Matrix::Identity(rows, rows) - e.ik * e.ik_plus;
  e.domain_projector = Matrix::Identity(cols, cols) - e.ik_plus * e.ik;
  return e;
}

Index complement_space_dim(const CanonicalEmbeddings& e) {
  return matrix_rank(kron_system(e.domain_projector, e.codomain_projector));
}

Index tangent_plus_complement_rank(const CanonicalEmbeddings& e) {
  const Matrix tangent_basis = null_space(tangent_constraints(rank_profile(e.ik))).basis();
  const Matrix complement_basis =
      column_space(kron_system(e.domain_projector, e.codomain_projector)).basis();
  Matrix stacked(tangent_basis.rows(), tangent_basis.cols() + complement_basis.cols());
  stacked << tangent_basis, complement_basis;
  return matrix_rank(stacked);
}

}  // namespace opstrata
