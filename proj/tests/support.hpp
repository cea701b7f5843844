#pragma once

#include <Eigen/Dense>

#include "opstrata/subspace.hpp"

namespace testing {

using opstrata::Index;
using opstrata::Matrix;
using opstrata::Subspace;
using opstrata::Vector;

inline Vector axis(Index n, Index i) { return Vector::Unit(n, i); }

inline Subspace span_of(std::initializer_list<Vector> vs) {
  Matrix m(vs.begin()->size(), static_cast<Index>(vs.size()));
  Index j = 0;
  for (const auto& v : vs) m.col(j++) = v;
  return Subspace::span(m);
}

inline Matrix mat(Index rows, Index cols, std::initializer_list<double> row_major) {
  Matrix m(rows, cols);
  auto it = row_major.begin();
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

/// σ_min of [A | B], computed here rather than through the library.
inline double stacked_sigma_min(const Subspace& a, const Subspace& b) {
  Matrix s(a.ambient_dim(), a.dim() + b.dim());
  s << a.basis(), b.basis();
  if (s.cols() != s.rows()) return 0.0;
  return Eigen::JacobiSVD<Matrix>(s).singularValues().minCoeff();
}

/// Projector with range `range` and kernel `kernel`, built from the inverse of
/// the stacked basis [B_range | B_kernel].
inline Matrix projector_oracle(const Subspace& range, const Subspace& kernel) {
  const Index n = range.ambient_dim();
  Matrix s(n, n);
  s << range.basis(), kernel.basis();
  Matrix keep = Matrix::Zero(n, n);
  keep.topLeftCorner(range.dim(), range.dim()).setIdentity();
  return s * keep * s.inverse();
}

/// Largest principal angle via the projector difference norm (sin of the
/// largest angle for equal dimensions).
inline double projector_gap(const Subspace& a, const Subspace& b) {
  return (a.projector() - b.projector()).operatorNorm();
}

}  // namespace testing
