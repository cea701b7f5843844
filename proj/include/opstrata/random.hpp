#pragma once

#include <cstdint>
#include <random>

#include "opstrata/linalg.hpp"

namespace opstrata {

/// Rank-k rows×cols matrix A·B from seeded standard normal factors. Draws
/// whose σ_k/σ₁ falls below 1e-3 are discarded and redrawn from the same
/// stream, so the result is a pure function of the arguments.
/// Throws OutOfRange unless 0 ≤ k ≤ min(rows, cols).
Matrix random_stratum_point(Index rows, Index cols, Index k, std::uint64_t seed);

/// Test-instance generators over a caller-owned engine.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : engine_(seed) {}

  Matrix gaussian(Index rows, Index cols);
  Matrix rank_k(Index rows, Index cols, Index k);
  /// Random d-dimensional subspace of R^n (Haar-distributed).
  Subspace subspace(Index n, Index d);
  /// Square matrix with σ_min/σ_max ≥ min_inverse_condition.
  Matrix invertible(Index n, double min_inverse_condition = 1e-4);
  Index uniform(Index lo, Index hi);
  double uniform_real(double lo, double hi);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace opstrata
