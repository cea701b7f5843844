#include "opstrata/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "opstrata/error.hpp"
#include "opstrata/subspace.hpp"

namespace opstrata {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NumericallySingular: return "NumericallySingular";
    case ErrorCode::NotComplementary: return "NotComplementary";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoSpareDirection: return "NoSpareDirection";
    case ErrorCode::NotInRange: return "NotInRange";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::StratumDisconnected: return "StratumDisconnected";
    case ErrorCode::NumericalDegeneracy: return "NumericalDegeneracy";
    case ErrorCode::FredholmDataMismatch: return "FredholmDataMismatch";
    case ErrorCode::InfeasibleHop: return "InfeasibleHop";
    case ErrorCode::ChainInvalid: return "ChainInvalid";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Subspace

Subspace Subspace::zero(Index ambient_dim) { return Subspace(ambient_dim, Matrix(ambient_dim, 0)); }

Subspace Subspace::whole(Index ambient_dim) {
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  const Index n = basis.rows();
  if (basis.cols() > n) {
    throw Error(ErrorCode::InvalidArgument, "more basis vectors than the ambient dimension");
  }
  if (basis.cols() > 0) {
    const double defect =
        (basis.transpose() * basis - Matrix::Identity(basis.cols(), basis.cols())).norm();
    if (!(defect <= 1e-12 * std::max<double>(1.0, static_cast<double>(basis.cols())))) {
      throw Error(ErrorCode::InvalidArgument,
                  "basis is not orthonormal (defect " + std::to_string(defect) + ")");
    }
  }
  return Subspace(n, std::move(basis));
}

Subspace Subspace::span(const Matrix& vectors, double tol) { return column_space(vectors, tol); }

bool Subspace::contains(const Vector& v, double tol) const {
  if (v.size() != ambient_) throw Error(ErrorCode::AmbientMismatch, "vector length");
  const double norm = v.norm();
  if (norm == 0.0) return true;
  const Vector residual = v - basis_ * (basis_.transpose() * v);
  return residual.norm() <= tol * norm;
}

// ---------------------------------------------------------------------------
// Rank and spaces

namespace {

RankDecision decide(const Vector& sv, double tol) {
  RankDecision d;
  d.tolerance = tol;
  if (sv.size() == 0 || sv(0) == 0.0) return d;
  const double top = sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * top) ++rank;
  d.rank = rank;
  d.leading_gap = sv(rank - 1) / top;
  d.trailing_ratio = rank < sv.size() ? sv(rank) / top : 0.0;
  return d;
}

void require_finite(const Matrix& t) {
  if (t.size() > 0 && !t.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
  }
}

}  // namespace

RankDecision numerical_rank(const Matrix& t, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw Error(ErrorCode::InvalidArgument, "tol must lie in (0, 1)");
  require_finite(t);
  if (t.size() == 0) {
    RankDecision d;
    d.tolerance = tol;
    return d;
  }
  Eigen::JacobiSVD<Matrix> svd(t);
  return decide(svd.singularValues(), tol);
}

RankProfile rank_profile(const Matrix& t, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw Error(ErrorCode::InvalidArgument, "tol must lie in (0, 1)");
  require_finite(t);
  const Index rows = t.rows();
  const Index cols = t.cols();
  RankProfile p;
  p.decision.tolerance = tol;
  if (t.size() == 0) {
    p.column_space = Subspace::zero(rows);
    p.null_space = Subspace::whole(cols);
    p.singular_values = Vector(0);
    return p;
  }
  Eigen::JacobiSVD<Matrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  p.singular_values = svd.singularValues();
  p.decision = decide(p.singular_values, tol);
  const Index k = p.decision.rank;
  p.column_space = Subspace::from_orthonormal(svd.matrixU().leftCols(k));
  p.null_space = Subspace::from_orthonormal(svd.matrixV().rightCols(cols - k));
  return p;
}

Subspace column_space(const Matrix& t, double tol) { return rank_profile(t, tol).column_space; }

Subspace null_space(const Matrix& t, double tol) { return rank_profile(t, tol).null_space; }

double inverse_condition(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::ShapeMismatch, "square matrix required");
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  if (sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

Matrix solve(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::ShapeMismatch, "solve needs a square matrix");
  if (b.rows() != a.rows()) throw Error(ErrorCode::ShapeMismatch, "right-hand side rows");
  require_finite(a);
  require_finite(b);
  if (a.size() == 0) return Matrix(0, b.cols());
  const double rcond = inverse_condition(a);
  if (!(rcond > tol)) {
    throw Error(ErrorCode::SingularMatrix,
                "σ_min/σ_max = " + std::to_string(rcond) + " is not above tolerance");
  }
  return a.colPivHouseholderQr().solve(b);
}

Matrix restricted_inverse(const Matrix& t, const Subspace& r, const Subspace& n_star, double tol) {
  const RankProfile profile = rank_profile(t, tol);
  if (r.ambient_dim() != t.cols() || n_star.ambient_dim() != t.rows()) {
    throw Error(ErrorCode::AmbientMismatch, "restricted_inverse subspace ambient dimensions");
  }
  if (!are_complementary(r, profile.null_space)) {
    throw Error(ErrorCode::NotComplementary, "R is not a complement of N(T)");
  }
  if (!are_complementary(profile.column_space, n_star)) {
    throw Error(ErrorCode::NotComplementary, "N* is not a complement of R(T)");
  }
  const Index k = profile.decision.rank;
  if (k == 0) return Matrix::Zero(t.cols(), t.rows());

  const Matrix& range_basis = profile.column_space.basis();
  // Coordinates of T restricted to R, as a map R -> R(T).
  const Matrix core = range_basis.transpose() * t * r.basis();
  const double rcond = inverse_condition(core);
  if (!(rcond > tol)) {
    throw Error(ErrorCode::NumericallySingular, "T restricted to R is ill-conditioned");
  }
  const Matrix onto_range = oblique_projector(profile.column_space, n_star).matrix;
  return r.basis() * solve(core, range_basis.transpose() * onto_range, 0.0);
}

}  // namespace opstrata
