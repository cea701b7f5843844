#include "opstrata/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "opstrata/error.hpp"

namespace opstrata {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw Error(ErrorCode::AmbientMismatch, "subspaces live in R^" +
                                                std::to_string(a.ambient_dim()) + " and R^" +
                                                std::to_string(b.ambient_dim()));
  }
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

// Orthonormal basis of the orthogonal complement of span(m), assuming the
// columns of m span exactly `rank` dimensions.
Subspace complement_of_span(const Matrix& m, Index rank) {
  const Index n = m.rows();
  if (rank == 0 || m.cols() == 0) return Subspace::whole(n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  return Subspace::from_orthonormal(svd.matrixU().rightCols(n - rank));
}

}  // namespace

double complementarity_margin(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  if (a.dim() + b.dim() != a.ambient_dim()) return 0.0;
  if (a.ambient_dim() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(hstack(a.basis(), b.basis()));
  return svd.singularValues()(svd.singularValues().size() - 1);
}

bool are_complementary(const Subspace& a, const Subspace& b, double threshold) {
  return complementarity_margin(a, b) >= threshold;
}

Decomposition decompose(const Subspace& a, const Subspace& b, double threshold) {
  const double margin = complementarity_margin(a, b);
  if (!(margin >= threshold)) {
    throw Error(ErrorCode::NotComplementary,
                "dims " + std::to_string(a.dim()) + " + " + std::to_string(b.dim()) + " in R^" +
                    std::to_string(a.ambient_dim()) + ", margin " + std::to_string(margin));
  }
  return {a.ambient_dim(), a, b, margin};
}

Vector principal_sines(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  const Subspace& small = a.dim() <= b.dim() ? a : b;
  const Subspace& large = a.dim() <= b.dim() ? b : a;
  if (small.dim() == 0) return Vector(0);
  const Matrix residual =
      small.basis() - large.basis() * (large.basis().transpose() * small.basis());
  Eigen::JacobiSVD<Matrix> svd(residual);
  Vector sines = svd.singularValues().reverse();
  return sines.cwiseMin(1.0);
}

double max_principal_angle(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  if (a.dim() != b.dim()) return std::numbers::pi / 2;
  if (a.dim() == 0) return 0.0;
  const Vector sines = principal_sines(a, b);
  return std::asin(sines(sines.size() - 1));
}

Subspace sum(const Subspace& s1, const Subspace& s2, double tol) {
  require_same_ambient(s1, s2);
  return Subspace::span(hstack(s1.basis(), s2.basis()), tol);
}

Subspace intersect(const Subspace& s1, const Subspace& s2, double angle_threshold) {
  require_same_ambient(s1, s2);
  const Index n = s1.ambient_dim();
  if (s1.empty() || s2.empty()) return Subspace::zero(n);
  // Singular values of (I - P2) B1 are the sines of the angles between s1's
  // principal vectors and s2; they stay accurate for tiny angles.
  const Matrix residual = s1.basis() - s2.basis() * (s2.basis().transpose() * s1.basis());
  Eigen::JacobiSVD<Matrix> svd(residual, Eigen::ComputeFullV);
  const Vector& sines = svd.singularValues();
  const double cutoff = std::sin(angle_threshold);
  const Index d1 = s1.dim();
  Index shared = 0;
  for (Index i = 0; i < sines.size(); ++i) {
    if (sines(i) < cutoff) ++shared;
  }
  shared = std::min(shared, std::min(d1, s2.dim()));
  if (shared == 0) return Subspace::zero(n);
  return Subspace::span(s1.basis() * svd.matrixV().rightCols(shared), 1e-6);
}

Subspace orthogonal_complement(const Subspace& s) {
  const Index n = s.ambient_dim();
  if (s.empty()) return Subspace::whole(n);
  if (s.dim() == n) return Subspace::zero(n);
  Eigen::HouseholderQR<Matrix> qr(s.basis());
  const Matrix q = qr.householderQ();
  return Subspace::from_orthonormal(q.rightCols(n - s.dim()));
}

Subspace relative_complement(const Subspace& outer, const Subspace& inner) {
  require_same_ambient(outer, inner);
  if (inner.dim() > outer.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "inner subspace larger than outer");
  }
  if (inner.empty()) return outer;
  const Index rest = outer.dim() - inner.dim();
  if (rest == 0) return Subspace::zero(outer.ambient_dim());
  const Matrix coords = outer.basis().transpose() * inner.basis();
  Eigen::JacobiSVD<Matrix> svd(coords, Eigen::ComputeFullU);
  return Subspace::span(outer.basis() * svd.matrixU().rightCols(rest), 1e-6);
}

CommonComplementParts common_complement_parts(const Subspace& e1, const Subspace& e2) {
  require_same_ambient(e1, e2);
  if (e1.dim() != e2.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "common complement needs equal dimensions, got " +
                                                  std::to_string(e1.dim()) + " and " +
                                                  std::to_string(e2.dim()));
  }
  const Index n = e1.ambient_dim();
  CommonComplementParts parts;
  parts.shared = intersect(e1, e2);
  parts.e1_rest = relative_complement(e1, parts.shared);
  parts.e2_rest = relative_complement(e2, parts.shared);
  const Index rest = parts.e1_rest.dim();

  if (rest == 0) {
    parts.graph_part = Subspace::zero(n);
    parts.outside = orthogonal_complement(e1);
    parts.complement = parts.outside;
    return parts;
  }

  // Principal vectors of the residual parts: u_i ∈ E1*, v_i ∈ E2*, with
  // ⟨u_i, v_j⟩ = cos θ_i δ_ij.
  Eigen::JacobiSVD<Matrix> svd(parts.e1_rest.basis().transpose() * parts.e2_rest.basis(),
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix u = parts.e1_rest.basis() * svd.matrixU();
  Matrix v = parts.e2_rest.basis() * svd.matrixV();
  for (Index i = 0; i < rest; ++i) {
    if (svd.singularValues()(i) > 0.0) v.col(i) = -v.col(i);
  }
  parts.e1_rest = Subspace::span(u, 1e-6);
  parts.e2_rest = Subspace::span(v, 1e-6);

  Matrix graph = u + v;
  for (Index i = 0; i < rest; ++i) graph.col(i).normalize();
  parts.graph_part = Subspace::span(graph, 1e-6);

  Matrix pieces(n, parts.shared.dim() + 2 * rest);
  pieces << parts.shared.basis(), u, v;
  parts.outside = complement_of_span(pieces, parts.shared.dim() + 2 * rest);
  parts.complement = Subspace::span(hstack(parts.outside.basis(), parts.graph_part.basis()), 1e-6);
  return parts;
}

Subspace common_complement(const Subspace& e1, const Subspace& e2) {
  return common_complement_parts(e1, e2).complement;
}

Matrix GraphOperator::ambient() const {
  return codomain.basis() * coeffs * domain.basis().transpose();
}

GraphOperator graph_operator(const Subspace& e1, const Subspace& estar, const Subspace& r) {
  require_same_ambient(e1, estar);
  require_same_ambient(e1, r);
  if (!are_complementary(e1, r)) throw Error(ErrorCode::NotComplementary, "E1 and R");
  if (!are_complementary(estar, r)) throw Error(ErrorCode::NotComplementary, "E* and R");
  GraphOperator alpha{estar, r, Matrix::Zero(r.dim(), estar.dim())};
  if (estar.empty()) return alpha;
  const Matrix p = oblique_projector(estar, r).matrix;
  // For each basis vector x of E*, the unique e ∈ E1 with P e = x.
  const Matrix k = estar.basis().transpose() * p * e1.basis();
  const Matrix lifted = e1.basis() * solve(k, Matrix::Identity(k.rows(), k.cols()), 0.0);
  alpha.coeffs = r.basis().transpose() * (lifted - estar.basis());
  return alpha;
}

Subspace graph_subspace(const GraphOperator& alpha) {
  if (alpha.coeffs.rows() != alpha.codomain.dim() || alpha.coeffs.cols() != alpha.domain.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "graph operator coefficients");
  }
  if (alpha.domain.empty()) return Subspace::zero(alpha.domain.ambient_dim());
  return Subspace::span(alpha.domain.basis() + alpha.codomain.basis() * alpha.coeffs, 1e-12);
}

ObliqueProjector ObliqueProjector::complement() const {
  const Index n = matrix.rows();
  return {Matrix::Identity(n, n) - matrix, kernel_space, range_space};
}

ObliqueProjector oblique_projector(const Subspace& range, const Subspace& kernel) {
  decompose(range, kernel);
  const Index n = range.ambient_dim();
  if (range.empty()) return {Matrix::Zero(n, n), range, kernel};
  if (kernel.empty()) return {Matrix::Identity(n, n), range, kernel};
  const Matrix inverse = solve(hstack(range.basis(), kernel.basis()), Matrix::Identity(n, n), 0.0);
  return {range.basis() * inverse.topRows(range.dim()), range, kernel};
}

ObliqueProjector projector_update(const ObliqueProjector& p, const GraphOperator& alpha) {
  const Index n = p.matrix.rows();
  if (alpha.domain.ambient_dim() != n || alpha.codomain.ambient_dim() != n ||
      alpha.domain.dim() != p.range_space.dim() || alpha.codomain.dim() != p.kernel_space.dim() ||
      max_principal_angle(alpha.domain, p.range_space) > kIntersectionAngle ||
      max_principal_angle(alpha.codomain, p.kernel_space) > kIntersectionAngle) {
    throw Error(ErrorCode::ShapeMismatch, "projector and graph operator disagree on E* or R");
  }
  const Matrix updated = p.matrix + alpha.ambient() * p.matrix;
  return {updated, graph_subspace(alpha), p.kernel_space};
}

}  // namespace opstrata
