#pragma once

#include <string>
#include <vector>

#include "opstrata/connectivity.hpp"

namespace opstrata {

/// Acceptance thresholds used by certify().
struct CertificationThresholds {
  double max_trailing_ratio = 1e-8;
  double min_leading_gap = 1e-6;
  double max_subspace_angle = 1e-7;
  double min_complement_margin = kComplementThreshold;
  double min_inverse_condition = 1e-6;
  double max_joint_mismatch = 1e-9;
};

struct SegmentRecord {
  std::size_t segment_index = 0;
  std::vector<std::string> declared_invariants;
  double min_leading_gap = 1.0;
  double max_trailing_ratio = 0.0;
  double max_kernel_angle = 0.0;
  double max_range_angle = 0.0;
  double min_complement_margin = 1.0;
  double min_inverse_condition = 1.0;
  double endpoint_mismatch = 0.0;
  bool passed = true;
};

struct PathCertificate {
  /// Intervals per segment; each segment is evaluated at λ = i/samples for
  /// i = 0..samples, so λ = 1/2 is a sample whenever samples is even.
  int samples_per_segment = 0;
  std::vector<SegmentRecord> per_segment;
  bool passed = true;
  std::string first_failure;
  double wall_time_seconds = 0.0;
};

/// Samples every segment, checks stratum membership and each declared
/// invariant, and records the worst values seen. Failures are verdicts, not
/// exceptions. Throws InvalidArgument for samples < 2.
PathCertificate certify(const OperatorPath& path, const StratumSpec& spec, int samples = 100,
                        double tol = kDefaultTol, const CertificationThresholds& thresholds = {});

}  // namespace opstrata
