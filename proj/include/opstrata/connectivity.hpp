#pragma once

#include <vector>

#include "opstrata/path.hpp"

namespace opstrata {

/// Either the rank stratum F_k or the Fredholm stratum Φ_{m,n} of
/// codomain_dim × domain_dim matrices.
struct StratumSpec {
  enum class Variant { Rank, Fredholm };

  Variant variant = Variant::Rank;
  Index rank = 0;         // Rank
  Index kernel_dim = 0;   // Fredholm
  Index cokernel_dim = 0; // Fredholm
  Index domain_dim = 0;
  Index codomain_dim = 0;

  static StratumSpec rank_stratum(Index k, Index domain_dim, Index codomain_dim);
  static StratumSpec fredholm(Index m, Index n, Index domain_dim, Index codomain_dim);

  /// Rank every member has.
  Index expected_rank() const;
  /// Throws InvalidArgument when the fields are inconsistent.
  void validate() const;
};

/// Path from T1 to T2 inside the rank-k matrices. Steps, in order: kernels
/// moved onto a common complement N0 of the row spaces, the range of T2 moved
/// onto R(T1) along a common complement N*, the invertible middle factor
/// P^{N*}_{R(T1)} T2 T1⁺ on R(T1) connected to I or a reflection, and a sign
/// flip when the reflection is reached.
///
/// Throws RankMismatch, StratumDisconnected (square invertible inputs with
/// determinants of opposite sign) or NumericalDegeneracy.
OperatorPath connect_rank_stratum(const Matrix& t1, const Matrix& t2, double tol = kDefaultTol);

/// Path from T1 to T2 with kernel dimension m and cokernel dimension n held
/// fixed (n > 0). Ranges are aligned first, then kernels, then the invertible
/// middle factor and a flip through the range complement.
OperatorPath connect_fredholm(const Matrix& t1, const Matrix& t2, const StratumSpec& spec,
                              double tol = kDefaultTol);

/// Kernel and range hops linking T0 to T*, with the common-complement
/// witnesses of every adjacent pair.
///
/// kernel_witnesses[i] complements both the i-th and (i+1)-th entry of
/// N(T0), N_1, ..., N_m, N(T*); range_witnesses likewise for
/// R(T0), F_1, ..., F_n, R(T*).
struct EquivalenceChain {
  std::vector<Subspace> kernel_chain;
  std::vector<Subspace> range_chain;
  std::vector<Subspace> kernel_witnesses;
  std::vector<Subspace> range_witnesses;

  /// Same chain walked from T* to T0.
  EquivalenceChain reverse() const;
};

/// Throws InfeasibleHop naming the first adjacent pair without a common
/// complement.
EquivalenceChain build_chain(const Matrix& t0, const Matrix& tstar,
                             const std::vector<Subspace>& kernel_hops,
                             const std::vector<Subspace>& range_hops, double tol = kDefaultTol);

/// Throws ChainInvalid if a witness fails to complement either neighbour.
void validate_chain(const Matrix& t0, const Matrix& tstar, const EquivalenceChain& chain,
                    double tol = kDefaultTol);

/// Path from T0 to T* through the equivalence class: kernel hops first (range
/// fixed at R(T0)), then range hops (kernel fixed at N_m), then the
/// restricted-inverse endgame. Throws HypothesisViolated when R(T0) is the
/// whole codomain, ChainInvalid for a bad chain.
OperatorPath connect_equiv_class(const Matrix& t0, const Matrix& tstar,
                                 const EquivalenceChain& chain, double tol = kDefaultTol);

}  // namespace opstrata
