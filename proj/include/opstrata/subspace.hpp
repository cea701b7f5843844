#pragma once

#include "opstrata/linalg.hpp"

namespace opstrata {

/// A certified direct-sum split of R^n into two subspaces.
struct Decomposition {
  Index ambient_dim = 0;
  Subspace part_a;
  Subspace part_b;
  /// Smallest singular value of [B_a | B_b].
  double margin = 0.0;
};

/// σ_min of the stacked basis [B_a | B_b], or 0 when the dimensions do not add
/// up to the ambient dimension. Throws AmbientMismatch.
double complementarity_margin(const Subspace& a, const Subspace& b);
bool are_complementary(const Subspace& a, const Subspace& b,
                       double threshold = kComplementThreshold);
/// Throws NotComplementary unless `a ⊕ b` is the whole space.
Decomposition decompose(const Subspace& a, const Subspace& b,
                        double threshold = kComplementThreshold);

/// Sines of the principal angles between `a` and `b`, ascending. The result
/// has min(dim a, dim b) entries.
Vector principal_sines(const Subspace& a, const Subspace& b);
/// Largest principal angle in radians; π/2 when the dimensions differ.
double max_principal_angle(const Subspace& a, const Subspace& b);

Subspace sum(const Subspace& s1, const Subspace& s2, double tol = kDefaultTol);

/// Intersection by principal angles: directions of `s1` whose angle to `s2`
/// is below `angle_threshold` radians span the result.
Subspace intersect(const Subspace& s1, const Subspace& s2,
                   double angle_threshold = kIntersectionAngle);

Subspace orthogonal_complement(const Subspace& s);

/// Orthogonal complement of `inner` taken inside `outer` (inner ⊂ outer up to
/// rounding).
Subspace relative_complement(const Subspace& outer, const Subspace& inner);

/// Pieces of the common-complement construction, exposed for inspection.
struct CommonComplementParts {
  Subspace shared;          // E1 ∩ E2
  Subspace e1_rest;         // complement of the shared part inside E1
  Subspace e2_rest;         // complement of the shared part inside E2
  Subspace outside;         // H: orthogonal complement of E1 + E2
  Subspace graph_part;      // H₁ = {x + αx : x ∈ e1_rest}
  Subspace complement;      // R = H ⊕ H₁
};

/// A subspace complementary to both `e1` and `e2` (equal dimensions required,
/// DimensionMismatch otherwise).
///
/// The isomorphism between the two residual parts pairs their principal
/// vectors: the i-th basis vector u_i of E1* maps to the i-th basis vector of
/// E2*, taken as -v_i when ⟨u_i, v_i⟩ > 0. Each u_i - v_i then sits at least
/// π/4 away from both E1 and E2, however small the angle between them.
CommonComplementParts common_complement_parts(const Subspace& e1, const Subspace& e2);
Subspace common_complement(const Subspace& e1, const Subspace& e2);

/// The linear map α : E* → R whose graph {x + αx} is a given complement E1 of
/// R. `coeffs` holds α in the orthonormal bases of domain and codomain.
struct GraphOperator {
  Subspace domain;
  Subspace codomain;
  Matrix coeffs;

  /// α as an n×n matrix B_R · coeffs · B_*ᵀ. Only its action on `domain` is
  /// meaningful; compose with a projector onto `domain` to extend by zero.
  Matrix ambient() const;
};

GraphOperator graph_operator(const Subspace& e1, const Subspace& estar, const Subspace& r);
Subspace graph_subspace(const GraphOperator& alpha);

/// Idempotent with prescribed range and kernel.
struct ObliqueProjector {
  Matrix matrix;
  Subspace range_space;
  Subspace kernel_space;

  /// I - P, with range and kernel swapped.
  ObliqueProjector complement() const;
};

ObliqueProjector oblique_projector(const Subspace& range, const Subspace& kernel);

/// Projector onto the graph of α along R, computed as P + αP where P projects
/// onto α's domain along R. Throws ShapeMismatch if `p` is not that projector.
ObliqueProjector projector_update(const ObliqueProjector& p, const GraphOperator& alpha);

}  // namespace opstrata
