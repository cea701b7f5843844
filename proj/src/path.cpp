#include "opstrata/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "opstrata/error.hpp"

namespace opstrata {

std::string_view to_string(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::ConstantRank: return "constant_rank";
    case InvariantKind::ConstantKernel: return "constant_kernel";
    case InvariantKind::ConstantRange: return "constant_range";
    case InvariantKind::ComplementedRange: return "complemented_range";
    case InvariantKind::ComplementedKernel: return "complemented_kernel";
    case InvariantKind::Invertible: return "invertible";
  }
  return "unknown";
}

Matrix rotate_left(const Matrix& t, const Vector& u, const Vector& v, double angle) {
  if (angle == 0.0) return t;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Eigen::RowVectorXd ut = u.transpose() * t;
  const Eigen::RowVectorXd vt = v.transpose() * t;
  return t + (c - 1.0) * (u * ut + v * vt) + s * (v * ut - u * vt);
}

Matrix rotate_right(const Matrix& t, const Vector& u, const Vector& v, double angle) {
  if (angle == 0.0) return t;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vector tu = t * u;
  const Vector tv = t * v;
  return t + (c - 1.0) * (tu * u.transpose() + tv * v.transpose()) +
         s * (tv * u.transpose() - tu * v.transpose());
}

namespace {

// (1-μ)·from + μ·to hits both ends exactly.
double interpolate(double from, double to, double mu) { return (1.0 - mu) * from + mu * to; }

struct Evaluator {
  double mu;
  Matrix operator()(const AffineKind& k) const { return k.a + mu * k.b; }
  Matrix operator()(const RightAffineKind& k) const { return k.t * (k.a + mu * k.b); }
  Matrix operator()(const RotationKind& k) const {
    return rotate_left(k.t, k.u, k.v, interpolate(k.angle_from, k.angle_to, mu));
  }
  Matrix operator()(const RightRotationKind& k) const {
    return rotate_right(k.t, k.u, k.v, interpolate(k.angle_from, k.angle_to, mu));
  }
};

Vector unit(const Vector& v, const char* what) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is zero");
  return v / norm;
}

}  // namespace

Matrix PathSegment::evaluate(double lambda) const {
  const double mu = reversed ? 1.0 - lambda : lambda;
  return std::visit(Evaluator{mu}, kind);
}

PathSegment PathSegment::reverse() const {
  PathSegment out = *this;
  out.reversed = !reversed;
  return out;
}

Index PathSegment::rows() const {
  return std::visit(
      [](const auto& k) -> Index {
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, AffineKind>) return k.a.rows();
        else return k.t.rows();
      },
      kind);
}

Index PathSegment::cols() const {
  return std::visit(
      [](const auto& k) -> Index {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, AffineKind> || std::is_same_v<K, RightAffineKind>) {
          return k.a.cols();
        } else {
          return k.t.cols();
        }
      },
      kind);
}

PathSegment constant_segment(const Matrix& t, std::vector<Invariant> invariants,
                             std::string provenance) {
  return {AffineKind{t, Matrix::Zero(t.rows(), t.cols())}, std::move(invariants),
          std::move(provenance)};
}

// ---------------------------------------------------------------------------
// OperatorPath

void OperatorPath::append(PathSegment segment) {
  if (segments_.empty() && rows_ == 0 && cols_ == 0) {
    rows_ = segment.rows();
    cols_ = segment.cols();
  }
  if (segment.rows() != rows_ || segment.cols() != cols_) {
    throw Error(ErrorCode::ShapeMismatch, "segment shape differs from path shape");
  }
  segments_.push_back(std::move(segment));
}

void OperatorPath::append(const OperatorPath& other) {
  for (const auto& s : other.segments()) append(s);
}

void OperatorPath::set_invariants(const std::vector<Invariant>& invariants) {
  for (auto& s : segments_) s.invariants = invariants;
}

Matrix OperatorPath::evaluate(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "path parameter " + std::to_string(t) + " not in [0, 1]");
  }
  if (segments_.empty()) throw Error(ErrorCode::InvalidArgument, "empty path");
  if (t == 0.0) return segments_.front().evaluate(0.0);
  const double n = static_cast<double>(segments_.size());
  const double scaled = t * n;
  const auto idx = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(scaled)) - 1, 0,
                                           segments_.size() - 1);
  const double local = std::clamp(scaled - static_cast<double>(idx), 0.0, 1.0);
  return segments_[idx].evaluate(local);
}

Matrix OperatorPath::start() const { return evaluate(0.0); }

Matrix OperatorPath::finish() const {
  if (segments_.empty()) throw Error(ErrorCode::InvalidArgument, "empty path");
  return segments_.back().evaluate(1.0);
}

OperatorPath OperatorPath::reverse() const {
  OperatorPath out(rows_, cols_);
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) out.append(it->reverse());
  return out;
}

double OperatorPath::max_joint_mismatch() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const Matrix end = segments_[i].finish();
    const double gap = frobenius(end - segments_[i + 1].start()) / (1.0 + frobenius(end));
    worst = std::max(worst, gap);
  }
  return worst;
}

PathSegment sandwich(const PathSegment& segment, const Matrix& left, const Matrix& right) {
  PathSegment out;
  out.provenance = segment.provenance;
  out.reversed = segment.reversed;
  out.kind = std::visit(
      [&](const auto& k) -> SegmentKind {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, AffineKind>) {
          return AffineKind{left * k.a * right, left * k.b * right};
        } else if constexpr (std::is_same_v<K, RightAffineKind>) {
          return RightAffineKind{left * k.t, k.a * right, k.b * right};
        } else if constexpr (std::is_same_v<K, RotationKind>) {
          const Index c = left.cols();
          if ((left.transpose() * left - Matrix::Identity(c, c)).norm() > 1e-10) {
            throw Error(ErrorCode::InvalidArgument, "rotation lift needs orthonormal columns");
          }
          return RotationKind{left * k.t * right, left * k.u, left * k.v, k.angle_from,
                              k.angle_to};
        } else {
          throw Error(ErrorCode::InvalidArgument, "right rotations cannot be lifted");
        }
      },
      segment.kind);
  return out;
}

// ---------------------------------------------------------------------------
// Alignment segments

PathSegment range_align_segment(const Matrix& t0, const Subspace& fstar, const Subspace& n,
                                double tol) {
  const RankProfile profile = rank_profile(t0, tol);
  if (fstar.ambient_dim() != t0.rows() || n.ambient_dim() != t0.rows()) {
    throw Error(ErrorCode::AmbientMismatch, "range alignment subspaces must live in the codomain");
  }
  if (!are_complementary(profile.column_space, n)) {
    throw Error(ErrorCode::NotComplementary, "R(T0) and N");
  }
  if (!are_complementary(fstar, n)) throw Error(ErrorCode::NotComplementary, "F* and N");
  // R(T0) is the graph of α over F* along N, and P^N_{F_λ} = P + λαP.
  const GraphOperator alpha = graph_operator(profile.column_space, fstar, n);
  const Matrix p = oblique_projector(fstar, n).matrix;
  const Matrix pt = p * t0;
  PathSegment seg{AffineKind{pt, alpha.ambient() * pt},
                  {Invariant::constant_rank(profile.decision.rank),
                   Invariant::constant_kernel(profile.null_space), Invariant::complemented_range(n)},
                  "range-align"};
  return seg;
}

PathSegment kernel_align_segment(const Matrix& t0, const Subspace& r0, const Subspace& estar,
                                 double tol) {
  const RankProfile profile = rank_profile(t0, tol);
  if (r0.ambient_dim() != t0.cols() || estar.ambient_dim() != t0.cols()) {
    throw Error(ErrorCode::AmbientMismatch, "kernel alignment subspaces must live in the domain");
  }
  if (!are_complementary(profile.null_space, r0)) {
    throw Error(ErrorCode::NotComplementary, "N(T0) and R0");
  }
  if (!are_complementary(estar, r0)) throw Error(ErrorCode::NotComplementary, "E* and R0");
  // N(T0) is the graph of α over E* along R0, so P^{N(T0)}_{R0} = P^{E*}_{R0} - αP^{R0}_{E*}.
  const GraphOperator alpha = graph_operator(profile.null_space, estar, r0);
  const ObliqueProjector onto_estar = oblique_projector(estar, r0);
  const Matrix onto_r0 = onto_estar.complement().matrix;
  PathSegment seg{RightAffineKind{t0, onto_r0, -(alpha.ambient() * onto_estar.matrix)},
                  {Invariant::constant_rank(profile.decision.rank),
                   Invariant::constant_range(profile.column_space),
                   Invariant::complemented_kernel(r0)},
                  "kernel-align"};
  return seg;
}

// ---------------------------------------------------------------------------
// Invertible endgame

Matrix reflection_representative(Index n) {
  Matrix d = Matrix::Identity(n, n);
  if (n > 0) d(0, 0) = -1.0;
  return d;
}

GlConnection gl_connect(const Matrix& q, double tol) {
  if (q.rows() != q.cols()) throw Error(ErrorCode::ShapeMismatch, "gl_connect needs a square matrix");
  const Index n = q.rows();
  const std::vector<Invariant> invariants{Invariant::invertible(), Invariant::constant_rank(n)};
  GlConnection out;
  out.path = OperatorPath(n, n);
  if (n == 0) {
    out.path.append(constant_segment(q, invariants, "gl-constant"));
    return out;
  }
  const double rcond = inverse_condition(q);
  if (!(rcond > tol)) {
    throw Error(ErrorCode::NumericallySingular, "σ_min/σ_max = " + std::to_string(rcond));
  }

  // Polar factors q = W S.
  Eigen::JacobiSVD<Matrix> svd(q, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix w = svd.matrixU() * svd.matrixV().transpose();
  const Matrix s = svd.matrixV() * svd.singularValues().asDiagonal() * svd.matrixV().transpose();
  const Matrix identity = Matrix::Identity(n, n);
  const bool polar_needed = (s - identity).norm() > 1e-12 * std::sqrt(static_cast<double>(n));

  // Planar rotations reducing the orthogonal factor to diag(±1, 1, ..., 1):
  // columns from last to second, zeroing entries above the diagonal into it.
  struct Step {
    Index pivot, other;
    double angle;
  };
  std::vector<Step> steps;
  Matrix work = polar_needed ? w : q;
  for (Index j = n - 1; j >= 1; --j) {
    for (Index i = j - 1; i >= 0; --i) {
      const double angle = std::atan2(-work(i, j), work(j, j));
      if (std::abs(angle) <= 1e-14) continue;
      work = rotate_left(work, Vector::Unit(n, j), Vector::Unit(n, i), angle);
      steps.push_back({j, i, angle});
    }
  }
  out.endpoint = work(0, 0) > 0.0 ? GlEndpoint::Identity : GlEndpoint::Reflection;
  const Matrix target =
      out.endpoint == GlEndpoint::Identity ? identity : reflection_representative(n);

  // Built backwards from the exact target so the final value is bit-exact.
  std::vector<PathSegment> rotations;
  Matrix base = target;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    const Vector u = Vector::Unit(n, it->pivot);
    const Vector v = Vector::Unit(n, it->other);
    rotations.push_back({RotationKind{base, u, v, -it->angle, 0.0}, invariants, "gl-rotation"});
    base = rotate_left(base, u, v, -it->angle);
  }
  std::reverse(rotations.begin(), rotations.end());

  if (polar_needed) {
    // λ ↦ W((1-λ)S + λI), written so that λ = 1 lands on `base` exactly.
    out.path.append(PathSegment{AffineKind{base, base * s - base}, invariants, "gl-polar", true});
  }
  for (auto& r : rotations) out.path.append(std::move(r));
  if (out.path.empty()) out.path.append(constant_segment(target, invariants, "gl-constant"));
  return out;
}

// ---------------------------------------------------------------------------
// Sign flips

Matrix reflect(const Vector& e) {
  const Vector u = unit(e, "reflection direction");
  return Matrix::Identity(u.size(), u.size()) - 2.0 * u * u.transpose();
}

PathSegment sign_flip_segment(const Matrix& t, const Vector& e, Vector f, double tol) {
  const RankProfile profile = rank_profile(t, tol);
  const Index k = profile.decision.rank;
  if (e.size() != t.rows()) throw Error(ErrorCode::ShapeMismatch, "flip direction length");
  if (k == t.rows()) throw Error(ErrorCode::NoSpareDirection, "R(T) is the whole codomain");
  const Vector eu = unit(e, "flip direction");
  if (!profile.column_space.contains(eu, 1e-8)) {
    throw Error(ErrorCode::NotInRange, "flip direction is not in R(T)");
  }
  const Matrix& range = profile.column_space.basis();
  if (f.size() == 0) {
    f = orthogonal_complement(profile.column_space).basis().col(0);
  } else {
    if (f.size() != t.rows()) throw Error(ErrorCode::ShapeMismatch, "spare direction length");
    f -= range * (range.transpose() * f);
    if (!(f.norm() > 1e-8)) throw Error(ErrorCode::InvalidArgument, "spare direction lies in R(T)");
    f.normalize();
  }
  return {RotationKind{reflect(eu) * t, eu, f, 0.0, std::numbers::pi},
          {Invariant::constant_rank(k), Invariant::constant_kernel(profile.null_space)},
          "sign-flip"};
}

PathSegment sign_flip_domain_segment(const Matrix& t, const Vector& e, Vector f, double tol) {
  const RankProfile profile = rank_profile(t, tol);
  const Index k = profile.decision.rank;
  if (e.size() != t.cols()) throw Error(ErrorCode::ShapeMismatch, "flip direction length");
  if (k == t.cols()) throw Error(ErrorCode::NoSpareDirection, "N(T) is zero");
  const Vector eu = unit(e, "flip direction");
  const Matrix& kernel = profile.null_space.basis();
  if ((kernel.transpose() * eu).norm() > 1e-8) {
    throw Error(ErrorCode::NotInRange, "flip direction is not in the row space of T");
  }
  if (f.size() == 0) {
    f = kernel.col(0);
  } else {
    if (f.size() != t.cols()) throw Error(ErrorCode::ShapeMismatch, "spare direction length");
    f = kernel * (kernel.transpose() * f);
    if (!(f.norm() > 1e-8)) throw Error(ErrorCode::InvalidArgument, "spare direction misses N(T)");
    f.normalize();
  }
  return {RightRotationKind{t * reflect(eu), eu, f, 0.0, -std::numbers::pi},
          {Invariant::constant_rank(k), Invariant::constant_range(profile.column_space)},
          "sign-flip-domain"};
}

PathSegment affine_sign_reversal_path(const Subspace& estar, const Subspace& r,
                                      const GraphOperator& alpha) {
  const Matrix p = oblique_projector(estar, r).matrix;
  if (alpha.domain.dim() != estar.dim() || alpha.codomain.dim() != r.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "graph operator does not map E* to R");
  }
  if (alpha.coeffs.size() == 0 || alpha.coeffs.isZero(0.0)) {
    throw Error(ErrorCode::InvalidArgument, "α must be non-zero");
  }
  const Matrix ap = alpha.ambient() * p;
  return {AffineKind{p + ap, -2.0 * p - ap},
          {Invariant::constant_kernel(r), Invariant::complemented_range(r)},
          "affine-sign-reversal"};
}

}  // namespace opstrata
