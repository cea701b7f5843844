#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "opstrata/subspace.hpp"

namespace opstrata {

enum class InvariantKind {
  ConstantRank,
  ConstantKernel,
  ConstantRange,
  ComplementedRange,  // R(P(λ)) ⊕ subspace = codomain
  ComplementedKernel, // N(P(λ)) ⊕ subspace = domain
  Invertible,
};

std::string_view to_string(InvariantKind kind);

/// A property a segment claims to keep for every λ in [0, 1].
struct Invariant {
  InvariantKind kind = InvariantKind::ConstantRank;
  Index rank = 0;                    // ConstantRank only
  std::optional<Subspace> subspace;  // kernel/range kinds only

  static Invariant constant_rank(Index k) { return {InvariantKind::ConstantRank, k, std::nullopt}; }
  static Invariant constant_kernel(Subspace s) { return {InvariantKind::ConstantKernel, 0, std::move(s)}; }
  static Invariant constant_range(Subspace s) { return {InvariantKind::ConstantRange, 0, std::move(s)}; }
  static Invariant complemented_range(Subspace s) {
    return {InvariantKind::ComplementedRange, 0, std::move(s)};
  }
  static Invariant complemented_kernel(Subspace s) {
    return {InvariantKind::ComplementedKernel, 0, std::move(s)};
  }
  static Invariant invertible() { return {InvariantKind::Invertible, 0, std::nullopt}; }
};

/// λ ↦ A + λB
struct AffineKind {
  Matrix a, b;
};

/// λ ↦ T (A + λB)
struct RightAffineKind {
  Matrix t, a, b;
};

/// λ ↦ G(θ(λ)) T, G(θ) the rotation by θ in the plane span(u, v) taking u
/// towards v, θ(λ) = angle_from + λ (angle_to - angle_from).
struct RotationKind {
  Matrix t;
  Vector u, v;
  double angle_from = 0.0;
  double angle_to = 0.0;
};

/// λ ↦ T G(θ(λ)), rotation acting on the domain side.
struct RightRotationKind {
  Matrix t;
  Vector u, v;
  double angle_from = 0.0;
  double angle_to = 0.0;
};

using SegmentKind = std::variant<AffineKind, RightAffineKind, RotationKind, RightRotationKind>;

/// Rotation by `angle` in span(u, v) (u, v orthonormal), applied to `t` from
/// the left. Exact when angle == 0.
Matrix rotate_left(const Matrix& t, const Vector& u, const Vector& v, double angle);
/// t · G(angle).
Matrix rotate_right(const Matrix& t, const Vector& u, const Vector& v, double angle);

struct PathSegment {
  SegmentKind kind;
  std::vector<Invariant> invariants;
  std::string provenance;
  /// When set the segment runs backwards: evaluate(λ) = kind(1 - λ).
  bool reversed = false;

  Matrix evaluate(double lambda) const;
  Matrix start() const { return evaluate(0.0); }
  Matrix finish() const { return evaluate(1.0); }
  PathSegment reverse() const;
  Index rows() const;
  Index cols() const;
};

PathSegment constant_segment(const Matrix& t, std::vector<Invariant> invariants,
                             std::string provenance = "constant");

/// Concatenation of segments, each given equal parameter length.
class OperatorPath {
 public:
  OperatorPath() = default;
  OperatorPath(Index rows, Index cols) : rows_(rows), cols_(cols) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const std::vector<PathSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }

  /// Throws ShapeMismatch on dimension disagreement.
  void append(PathSegment segment);
  void append(const OperatorPath& other);
  /// Replaces the invariants of every segment.
  void set_invariants(const std::vector<Invariant>& invariants);

  /// Segment i covers t in (i/n, (i+1)/n]; t = 0 maps to the start of segment
  /// 0. Throws OutOfDomain outside [0, 1].
  Matrix evaluate(double t) const;
  Matrix start() const;
  Matrix finish() const;
  OperatorPath reverse() const;

  /// Largest ‖seg_i(1) - seg_{i+1}(0)‖_F / (1 + ‖seg_i(1)‖_F).
  double max_joint_mismatch() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<PathSegment> segments_;
};

/// Lifts a segment by λ ↦ L · seg(λ) · R. Rotations need L with orthonormal
/// columns; right rotations are not liftable.
PathSegment sandwich(const PathSegment& segment, const Matrix& left, const Matrix& right);

/// Range alignment. With codomain = R(T0) ⊕ N = F* ⊕ N, the segment runs from
/// P^N_{F*} T0 (λ = 0) to T0 (λ = 1) through P^N_{F_λ} T0, F_λ the graph of λα.
/// Kernel stays N(T0); the range stays complementary to N.
PathSegment range_align_segment(const Matrix& t0, const Subspace& fstar, const Subspace& n,
                                double tol = kDefaultTol);

/// Kernel alignment. With domain = N(T0) ⊕ R0 = E* ⊕ R0, the segment runs from
/// T0 P^{E*}_{R0} (λ = 0) to T0 (λ = 1). Range stays R(T0); the kernel stays
/// complementary to R0.
PathSegment kernel_align_segment(const Matrix& t0, const Subspace& r0, const Subspace& estar,
                                 double tol = kDefaultTol);

enum class GlEndpoint { Identity, Reflection };

struct GlConnection {
  OperatorPath path;
  GlEndpoint endpoint = GlEndpoint::Identity;
};

/// diag(-1, 1, ..., 1)
Matrix reflection_representative(Index n);

/// Path through invertible matrices from Q to I (det Q > 0) or to
/// diag(-1, 1, ..., 1) (det Q < 0). A polar homotopy Q = W S → W is followed
/// by at most n(n-1)/2 planar rotations reducing W. The final value is the
/// target matrix bit for bit. Throws NumericallySingular.
GlConnection gl_connect(const Matrix& q, double tol = kDefaultTol);

/// Householder reflection I - 2eeᵀ.
Matrix reflect(const Vector& e);

/// Rank-preserving sign flip: λ ↦ G(πλ) D_e T, from D_e T to T, rotating in
/// span(e, f) with e ∈ R(T) and f ⊥ R(T). Pass an empty `f` to use the first
/// basis vector of R(T)^⊥. Throws NotInRange / NoSpareDirection.
PathSegment sign_flip_segment(const Matrix& t, const Vector& e, Vector f = {},
                              double tol = kDefaultTol);

/// Domain-side flip: λ ↦ T D_e G(-πλ), from T D_e to T, with e in the row
/// space of T and f ∈ N(T). It is the transpose of sign_flip_segment(Tᵀ, e, f).
PathSegment sign_flip_domain_segment(const Matrix& t, const Vector& e, Vector f = {},
                                     double tol = kDefaultTol);

/// The affine family (1-2λ)P + (1-λ)αP, P = P^R_{E*}: from P^R_{E1} to -P^R_{E*}.
/// It claims kernel R and range complementary to R throughout, which fails at
/// λ = 1/2 (the range there is αP's range, inside R). Kept as a regression
/// witness; it declares exactly those claims so certification can refute them.
PathSegment affine_sign_reversal_path(const Subspace& estar, const Subspace& r,
                                      const GraphOperator& alpha);

}  // namespace opstrata
