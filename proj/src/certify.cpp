#include "opstrata/certify.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "opstrata/error.hpp"

namespace opstrata {

namespace {

std::string describe(const Invariant& inv) {
  std::string s(to_string(inv.kind));
  if (inv.kind == InvariantKind::ConstantRank) s += "(" + std::to_string(inv.rank) + ")";
  if (inv.subspace) s += "(dim " + std::to_string(inv.subspace->dim()) + ")";
  return s;
}

class FailureLog {
 public:
  void note(std::size_t segment, double lambda, const std::string& what, SegmentRecord& rec) {
    rec.passed = false;
    if (!first_.empty()) return;
    std::ostringstream os;
    os.precision(6);
    os << "segment " << segment << " at lambda=" << lambda << ": " << what;
    first_ = os.str();
  }
  const std::string& first() const { return first_; }

 private:
  std::string first_;
};

std::string fmt(const char* label, double value) {
  std::ostringstream os;
  os.precision(6);
  os << label << " " << value;
  return os.str();
}

}  // namespace

PathCertificate certify(const OperatorPath& path, const StratumSpec& spec, int samples, double tol,
                        const CertificationThresholds& th) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "samples must be at least 2");
  const auto started = std::chrono::steady_clock::now();
  PathCertificate cert;
  cert.samples_per_segment = samples;
  FailureLog log;

  const Index expected = spec.expected_rank();
  const bool shape_ok = path.cols() == spec.domain_dim && path.rows() == spec.codomain_dim;
  if (!shape_ok) {
    cert.passed = false;
    cert.first_failure = "path shape differs from the stratum's ambient dimensions";
  }
  if (path.empty()) {
    cert.passed = false;
    if (cert.first_failure.empty()) cert.first_failure = "path has no segments";
  }

  const auto& segments = path.segments();
  for (std::size_t s = 0; s < segments.size() && shape_ok; ++s) {
    const PathSegment& seg = segments[s];
    SegmentRecord rec;
    rec.segment_index = s;
    for (const auto& inv : seg.invariants) rec.declared_invariants.push_back(describe(inv));
    if (seg.invariants.empty()) log.note(s, 0.0, "no declared invariants", rec);

    if (s > 0) {
      const Matrix prev_end = segments[s - 1].finish();
      rec.endpoint_mismatch = frobenius(prev_end - seg.start()) / (1.0 + frobenius(prev_end));
      if (rec.endpoint_mismatch > th.max_joint_mismatch) {
        log.note(s, 0.0, fmt("joint mismatch", rec.endpoint_mismatch), rec);
      }
    }

    for (int i = 0; i <= samples; ++i) {
      const double lambda = static_cast<double>(i) / samples;
      const Matrix value = seg.evaluate(lambda);
      const RankProfile p = rank_profile(value, tol);
      const RankDecision& d = p.decision;

      // Stratum membership.
      if (d.rank != expected) {
        log.note(s, lambda, "rank " + std::to_string(d.rank) + " != " + std::to_string(expected),
                 rec);
      }
      if (expected > 0) rec.min_leading_gap = std::min(rec.min_leading_gap, d.leading_gap);
      rec.max_trailing_ratio = std::max(rec.max_trailing_ratio, d.trailing_ratio);
      if (expected > 0 && d.leading_gap < th.min_leading_gap) {
        log.note(s, lambda, fmt("leading gap", d.leading_gap), rec);
      }
      if (d.trailing_ratio > th.max_trailing_ratio) {
        log.note(s, lambda, fmt("trailing ratio", d.trailing_ratio), rec);
      }
      if (spec.variant == StratumSpec::Variant::Fredholm &&
          (p.null_space.dim() != spec.kernel_dim ||
           value.rows() - d.rank != spec.cokernel_dim)) {
        log.note(s, lambda, "kernel/cokernel dimensions left the stratum", rec);
      }

      for (const auto& inv : seg.invariants) {
        try {
          switch (inv.kind) {
            case InvariantKind::ConstantRank:
              if (d.rank != inv.rank) {
                log.note(s, lambda, "declared rank " + std::to_string(inv.rank) + " not kept",
                         rec);
              }
              break;
            case InvariantKind::ConstantKernel: {
              const double a = max_principal_angle(p.null_space, *inv.subspace);
              rec.max_kernel_angle = std::max(rec.max_kernel_angle, a);
              if (a > th.max_subspace_angle) log.note(s, lambda, fmt("kernel angle", a), rec);
              break;
            }
            case InvariantKind::ConstantRange: {
              const double a = max_principal_angle(p.column_space, *inv.subspace);
              rec.max_range_angle = std::max(rec.max_range_angle, a);
              if (a > th.max_subspace_angle) log.note(s, lambda, fmt("range angle", a), rec);
              break;
            }
            case InvariantKind::ComplementedRange: {
              const double m = complementarity_margin(p.column_space, *inv.subspace);
              rec.min_complement_margin = std::min(rec.min_complement_margin, m);
              if (m < th.min_complement_margin) {
                log.note(s, lambda, fmt("range complement margin", m), rec);
              }
              break;
            }
            case InvariantKind::ComplementedKernel: {
              const double m = complementarity_margin(p.null_space, *inv.subspace);
              rec.min_complement_margin = std::min(rec.min_complement_margin, m);
              if (m < th.min_complement_margin) {
                log.note(s, lambda, fmt("kernel complement margin", m), rec);
              }
              break;
            }
            case InvariantKind::Invertible: {
              const Vector& sv = p.singular_values;
              const double c = (value.rows() != value.cols() || sv.size() == 0 || sv(0) == 0.0)
                                   ? 0.0
                                   : sv(sv.size() - 1) / sv(0);
              rec.min_inverse_condition = std::min(rec.min_inverse_condition, c);
              if (c < th.min_inverse_condition) {
                log.note(s, lambda, fmt("inverse condition", c), rec);
              }
              break;
            }
          }
        } catch (const Error& e) {
          log.note(s, lambda, describe(inv) + ": " + e.what(), rec);
        }
      }
    }
    cert.passed = cert.passed && rec.passed;
    cert.per_segment.push_back(std::move(rec));
  }
  if (cert.first_failure.empty()) cert.first_failure = log.first();
  cert.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return cert;
}

}  // namespace opstrata
