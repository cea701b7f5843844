#pragma once

#include <cstdint>
#include <vector>

#include "opstrata/linalg.hpp"

namespace opstrata {

struct TangentMembership {
  bool member = false;
  double residual = 0.0;  // ‖P⊥_{R(X)} T B_{N(X)}‖_F
};

/// Whether T maps N(X) into R(X), up to tol·‖T‖_F.
TangentMembership tangent_membership(const Matrix& x, const Matrix& t, double tol = 1e-9);

struct TangentSpaceReport {
  Index base_point_rank = 0;
  Index ambient_dim = 0;     // rows · cols
  Index tangent_dim = 0;     // nullity of T ↦ P⊥ T B_N
  Index complement_dim = 0;  // rank of that map
  Index formula_dim = 0;     // (rows + cols - k) k
  double residual = 0.0;     // orthonormality defect of the constraint rows

  bool agrees() const { return tangent_dim == formula_dim; }
};

/// Tangent dimension at X by explicit nullity. Throws NumericalDegeneracy when
/// X's rank decision sits within two decades of the tolerance.
TangentSpaceReport tangent_space_dim(const Matrix& x, double tol = kDefaultTol);

/// (m + n - k) k. Throws OutOfRange unless 0 ≤ k ≤ min(m, n).
Index stratum_dim(Index m, Index n, Index k);

struct StratumEntry {
  Index rank = 0;
  Index dim = 0;
  bool certified = false;  // nullity at a random rank-k point matches dim
};

struct StratificationReport {
  Index rows = 0;
  Index cols = 0;
  std::vector<StratumEntry> strata;
  bool generic_in_top_stratum = false;
};

StratificationReport stratification_report(Index rows, Index cols, std::uint64_t seed = 0);

/// The rank-k coordinate pair: I_k (rows × cols, ones at (i, i), i < k) and
/// I_k⁺ (cols × rows), with the complementary coordinate projectors
/// I - I_k I_k⁺ and I - I_k⁺ I_k.
struct CanonicalEmbeddings {
  Matrix ik;
  Matrix ik_plus;
  Matrix codomain_projector;
  Matrix domain_projector;
};

CanonicalEmbeddings canonical_embeddings(Index rows, Index cols, Index k);

/// Dimension of {P_cod T P_dom} computed as a rank.
Index complement_space_dim(const CanonicalEmbeddings& e);

/// Rank of the stacked bases of the tangent space at I_k and of the
/// complement space; equals rows·cols exactly when the sum is direct and full.
Index tangent_plus_complement_rank(const CanonicalEmbeddings& e);

}  // namespace opstrata
