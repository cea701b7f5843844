#include "opstrata/connectivity.hpp"

#include <algorithm>
#include <string>

#include "opstrata/error.hpp"

namespace opstrata {

StratumSpec StratumSpec::rank_stratum(Index k, Index domain_dim, Index codomain_dim) {
  StratumSpec s;
  s.variant = Variant::Rank;
  s.rank = k;
  s.domain_dim = domain_dim;
  s.codomain_dim = codomain_dim;
  s.validate();
  return s;
}

StratumSpec StratumSpec::fredholm(Index m, Index n, Index domain_dim, Index codomain_dim) {
  StratumSpec s;
  s.variant = Variant::Fredholm;
  s.kernel_dim = m;
  s.cokernel_dim = n;
  s.domain_dim = domain_dim;
  s.codomain_dim = codomain_dim;
  s.validate();
  return s;
}

Index StratumSpec::expected_rank() const {
  return variant == Variant::Rank ? rank : domain_dim - kernel_dim;
}

void StratumSpec::validate() const {
  if (domain_dim < 0 || codomain_dim < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative dimensions");
  }
  if (variant == Variant::Rank) {
    if (rank < 0 || rank > std::min(domain_dim, codomain_dim)) {
      throw Error(ErrorCode::InvalidArgument, "rank " + std::to_string(rank) + " out of range");
    }
    return;
  }
  if (kernel_dim < 0 || kernel_dim > domain_dim || cokernel_dim < 0 ||
      cokernel_dim > codomain_dim || domain_dim - kernel_dim != codomain_dim - cokernel_dim) {
    throw Error(ErrorCode::InvalidArgument, "inconsistent Fredholm data (m=" +
                                                std::to_string(kernel_dim) + ", n=" +
                                                std::to_string(cokernel_dim) + ")");
  }
}

namespace {

bool identical(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "operators have different shapes");
  }
}

// Runs `build`, reporting failed intermediate certificates as NumericalDegeneracy.
template <typename Build>
OperatorPath guarded(Build&& build) {
  try {
    return build();
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::NotComplementary:
      case ErrorCode::NumericallySingular:
      case ErrorCode::SingularMatrix:
      case ErrorCode::NotInRange:
        throw Error(ErrorCode::NumericalDegeneracy, e.what());
      default:
        throw;
    }
  }
}

// Lifts a path Q(λ) in GL(k), written in the orthonormal basis `range_basis`
// of R(T), to λ ↦ B Q(λ) Bᵀ T.
OperatorPath lift_invertible_path(const OperatorPath& gl, const Matrix& range_basis,
                                  const Matrix& t, const std::vector<Invariant>& invariants) {
  OperatorPath out(t.rows(), t.cols());
  const Matrix right = range_basis.transpose() * t;
  for (const auto& seg : gl.segments()) {
    PathSegment lifted = sandwich(seg, range_basis, right);
    lifted.invariants = invariants;
    out.append(std::move(lifted));
  }
  return out;
}

// Segment from D_e T to T where e is the top left singular vector of T
// (first column of its column-space basis). Uses a codomain direction when
// R(T) is not everything, the kernel otherwise.
PathSegment flip_back(const RankProfile& profile, const Matrix& t, const Vector& spare,
                      double tol) {
  const Index k = profile.decision.rank;
  const Vector e = profile.column_space.basis().col(0);
  if (k < t.rows()) return sign_flip_segment(t, e, spare, tol);
  if (k < t.cols()) {
    // D_e T = T D_w with w the matching right singular vector.
    const Vector w = (t.transpose() * e).normalized();
    return sign_flip_domain_segment(t, w, {}, tol);
  }
  throw Error(ErrorCode::StratumDisconnected,
              "invertible square operators with determinants of opposite sign");
}

}  // namespace

OperatorPath connect_rank_stratum(const Matrix& t1, const Matrix& t2, double tol) {
  require_same_shape(t1, t2);
  const RankProfile p1 = rank_profile(t1, tol);
  const RankProfile p2 = rank_profile(t2, tol);
  const Index k = p1.decision.rank;
  if (k != p2.decision.rank) {
    throw Error(ErrorCode::RankMismatch, "ranks " + std::to_string(k) + " and " +
                                             std::to_string(p2.decision.rank));
  }
  const Index rows = t1.rows();
  const Index cols = t1.cols();
  if (identical(t1, t2) || k == 0) {
    OperatorPath path(rows, cols);
    path.append(constant_segment(t1, {Invariant::constant_rank(k)}));
    return path;
  }
  if (k == rows && k == cols && (t1.determinant() > 0.0) != (t2.determinant() > 0.0)) {
    throw Error(ErrorCode::StratumDisconnected,
                "invertible square operators with determinants of opposite sign");
  }

  return guarded([&] {
    // Kernels onto a common complement N0 of the two row spaces.
    const Subspace r1 = orthogonal_complement(p1.null_space);
    const Subspace r2 = orthogonal_complement(p2.null_space);
    const Subspace n0 = common_complement(r1, r2);
    const PathSegment kernel1 = kernel_align_segment(t1, r1, n0, tol);  // L1 -> T1
    const PathSegment kernel2 = kernel_align_segment(t2, r2, n0, tol);  // L2 -> T2
    const Matrix l1 = kernel1.start();
    const Matrix l2 = kernel2.start();
    const RankProfile pl1 = rank_profile(l1, tol);
    const RankProfile pl2 = rank_profile(l2, tol);

    // R(L2) onto R(L1) along a common complement N*.
    const Subspace n_star = common_complement(pl1.column_space, pl2.column_space);
    const PathSegment range2 = range_align_segment(l2, pl1.column_space, n_star, tol);  // M2 -> L2

    // M2 = Q L1 with Q = P^{N*}_{R(L1)} L2 L1⁺ invertible on R(L1).
    const Matrix l1_plus = restricted_inverse(l1, r1, n_star, tol);
    const Matrix onto_range = oblique_projector(pl1.column_space, n_star).matrix;
    const Matrix& basis = pl1.column_space.basis();
    const Matrix q = basis.transpose() * onto_range * l2 * l1_plus * basis;
    const GlConnection gl = gl_connect(q, tol);
    const OperatorPath middle = lift_invertible_path(
        gl.path, basis, l1,
        {Invariant::constant_rank(k), Invariant::constant_kernel(pl1.null_space),
         Invariant::constant_range(pl1.column_space)});

    OperatorPath path(rows, cols);
    path.append(kernel1.reverse());
    if (gl.endpoint == GlEndpoint::Reflection) path.append(flip_back(pl1, l1, {}, tol).reverse());
    path.append(middle.reverse());
    path.append(range2);
    path.append(kernel2);
    return path;
  });
}

OperatorPath connect_fredholm(const Matrix& t1, const Matrix& t2, const StratumSpec& spec,
                              double tol) {
  require_same_shape(t1, t2);
  if (spec.variant != StratumSpec::Variant::Fredholm) {
    throw Error(ErrorCode::FredholmDataMismatch, "stratum is not a Fredholm stratum");
  }
  spec.validate();
  if (spec.domain_dim != t1.cols() || spec.codomain_dim != t1.rows()) {
    throw Error(ErrorCode::FredholmDataMismatch, "stratum dimensions differ from operator shape");
  }
  if (spec.cokernel_dim == 0) {
    throw Error(ErrorCode::FredholmDataMismatch, "cokernel dimension must be positive");
  }
  const RankProfile p1 = rank_profile(t1, tol);
  const RankProfile p2 = rank_profile(t2, tol);
  for (const RankProfile* p : {&p1, &p2}) {
    if (p->null_space.dim() != spec.kernel_dim ||
        t1.rows() - p->decision.rank != spec.cokernel_dim) {
      throw Error(ErrorCode::FredholmDataMismatch,
                  "operator has kernel dim " + std::to_string(p->null_space.dim()) +
                      " and cokernel dim " + std::to_string(t1.rows() - p->decision.rank));
    }
  }
  const Index k = p1.decision.rank;
  if (identical(t1, t2) || k == 0) {
    OperatorPath path(t1.rows(), t1.cols());
    path.append(constant_segment(t1, {Invariant::constant_rank(k)}));
    return path;
  }

  return guarded([&] {
    // Ranges onto a common complement F* of N1 and N2.
    const Subspace n1 = orthogonal_complement(p1.column_space);
    const Subspace n2 = orthogonal_complement(p2.column_space);
    const Subspace fstar = common_complement(n1, n2);
    const PathSegment range1 = range_align_segment(t1, fstar, n1, tol);  // U1 -> T1
    const PathSegment range2 = range_align_segment(t2, fstar, n2, tol);  // U2 -> T2
    const Matrix u1 = range1.start();
    const Matrix u2 = range2.start();
    const RankProfile pu1 = rank_profile(u1, tol);
    const RankProfile pu2 = rank_profile(u2, tol);

    // Kernel of U2 onto N(U1) along a common complement R.
    const Subspace r = common_complement(pu1.null_space, pu2.null_space);
    const PathSegment kernel2 = kernel_align_segment(u2, r, pu1.null_space, tol);  // V2 -> U2

    // V2 = U2 U1⁺ U1 with U2 U1⁺ invertible on F*.
    const Matrix u1_plus = restricted_inverse(u1, r, n1, tol);
    const Matrix& basis = pu1.column_space.basis();
    const Matrix q = basis.transpose() * u2 * u1_plus * basis;
    const GlConnection gl = gl_connect(q, tol);
    const OperatorPath middle = lift_invertible_path(
        gl.path, basis, u1,
        {Invariant::constant_rank(k), Invariant::constant_kernel(pu1.null_space),
         Invariant::constant_range(pu1.column_space)});

    OperatorPath path(t1.rows(), t1.cols());
    path.append(range1.reverse());
    if (gl.endpoint == GlEndpoint::Reflection) {
      path.append(flip_back(pu1, u1, n1.basis().col(0), tol).reverse());
    }
    path.append(middle.reverse());
    path.append(kernel2);
    path.append(range2);
    return path;
  });
}

// ---------------------------------------------------------------------------
// Equivalence chains

EquivalenceChain EquivalenceChain::reverse() const {
  EquivalenceChain out = *this;
  std::reverse(out.kernel_chain.begin(), out.kernel_chain.end());
  std::reverse(out.range_chain.begin(), out.range_chain.end());
  std::reverse(out.kernel_witnesses.begin(), out.kernel_witnesses.end());
  std::reverse(out.range_witnesses.begin(), out.range_witnesses.end());
  return out;
}

namespace {

std::vector<Subspace> with_ends(const Subspace& first, const std::vector<Subspace>& hops,
                                const Subspace& last) {
  std::vector<Subspace> seq;
  seq.reserve(hops.size() + 2);
  seq.push_back(first);
  seq.insert(seq.end(), hops.begin(), hops.end());
  seq.push_back(last);
  return seq;
}

std::vector<Subspace> witnesses_for(const std::vector<Subspace>& seq, const char* side) {
  std::vector<Subspace> out;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const Subspace& a = seq[i];
    const Subspace& b = seq[i + 1];
    const std::string where =
        std::string(side) + " hop " + std::to_string(i) + "->" + std::to_string(i + 1);
    if (a.ambient_dim() != b.ambient_dim()) {
      throw Error(ErrorCode::InfeasibleHop, where + ": ambient dimensions differ");
    }
    if (a.dim() != b.dim()) {
      throw Error(ErrorCode::InfeasibleHop, where + ": dimensions " + std::to_string(a.dim()) +
                                                " and " + std::to_string(b.dim()));
    }
    Subspace w = common_complement(a, b);
    if (!are_complementary(a, w) || !are_complementary(b, w)) {
      throw Error(ErrorCode::InfeasibleHop, where + ": common complement is degenerate");
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

EquivalenceChain build_chain(const Matrix& t0, const Matrix& tstar,
                             const std::vector<Subspace>& kernel_hops,
                             const std::vector<Subspace>& range_hops, double tol) {
  require_same_shape(t0, tstar);
  const RankProfile p0 = rank_profile(t0, tol);
  const RankProfile ps = rank_profile(tstar, tol);
  EquivalenceChain chain;
  chain.kernel_chain = kernel_hops;
  chain.range_chain = range_hops;
  chain.kernel_witnesses =
      witnesses_for(with_ends(p0.null_space, kernel_hops, ps.null_space), "kernel");
  chain.range_witnesses =
      witnesses_for(with_ends(p0.column_space, range_hops, ps.column_space), "range");
  return chain;
}

void validate_chain(const Matrix& t0, const Matrix& tstar, const EquivalenceChain& chain,
                    double tol) {
  require_same_shape(t0, tstar);
  const RankProfile p0 = rank_profile(t0, tol);
  const RankProfile ps = rank_profile(tstar, tol);
  const auto check = [](const std::vector<Subspace>& seq, const std::vector<Subspace>& witnesses,
                        const char* side) {
    if (witnesses.size() + 1 != seq.size()) {
      throw Error(ErrorCode::ChainInvalid, std::string(side) + " witness count");
    }
    for (std::size_t i = 0; i < witnesses.size(); ++i) {
      const bool ok = seq[i].ambient_dim() == witnesses[i].ambient_dim() &&
                      seq[i + 1].ambient_dim() == witnesses[i].ambient_dim() &&
                      are_complementary(seq[i], witnesses[i]) &&
                      are_complementary(seq[i + 1], witnesses[i]);
      if (!ok) {
        throw Error(ErrorCode::ChainInvalid,
                    std::string(side) + " witness " + std::to_string(i) + " fails to complement");
      }
    }
  };
  check(with_ends(p0.null_space, chain.kernel_chain, ps.null_space), chain.kernel_witnesses,
        "kernel");
  check(with_ends(p0.column_space, chain.range_chain, ps.column_space), chain.range_witnesses,
        "range");
}

OperatorPath connect_equiv_class(const Matrix& t0, const Matrix& tstar,
                                 const EquivalenceChain& chain, double tol) {
  require_same_shape(t0, tstar);
  const RankProfile p0 = rank_profile(t0, tol);
  const Index k = p0.decision.rank;
  if (k == t0.rows()) {
    throw Error(ErrorCode::HypothesisViolated, "R(T0) is the whole codomain");
  }
  validate_chain(t0, tstar, chain, tol);
  const Index rows = t0.rows();
  const Index cols = t0.cols();
  OperatorPath path(rows, cols);
  if (identical(t0, tstar) && chain.kernel_chain.empty() && chain.range_chain.empty()) {
    path.append(constant_segment(t0, {Invariant::constant_rank(k)}));
    return path;
  }

  return guarded([&] {
    Matrix current = t0;

    // Kernel hops: T_i = T_{i-1} P^{N_i}_{R_i}, range pinned at R(T0).
    for (std::size_t i = 0; i < chain.kernel_chain.size(); ++i) {
      PathSegment seg =
          kernel_align_segment(current, chain.kernel_witnesses[i], chain.kernel_chain[i], tol);
      seg.invariants = {Invariant::constant_rank(k), Invariant::constant_range(p0.column_space),
                        Invariant::complemented_kernel(chain.kernel_witnesses[i])};
      seg.provenance = "kernel-hop";
      current = seg.start();
      path.append(seg.reverse());
    }
    const Subspace kernel_m =
        chain.kernel_chain.empty() ? p0.null_space : chain.kernel_chain.back();

    // Range hops: T_{m,i} = P^{S_i}_{F_i} T_{m,i-1}, kernel pinned at N_m.
    for (std::size_t i = 0; i < chain.range_chain.size(); ++i) {
      PathSegment seg =
          range_align_segment(current, chain.range_chain[i], chain.range_witnesses[i], tol);
      seg.invariants = {Invariant::constant_rank(k), Invariant::constant_kernel(kernel_m),
                        Invariant::complemented_range(chain.range_witnesses[i])};
      seg.provenance = "range-hop";
      current = seg.start();
      path.append(seg.reverse());
    }
    const Subspace range_n = chain.range_chain.empty() ? p0.column_space : chain.range_chain.back();
    const Subspace& r_last = chain.kernel_witnesses.back();
    const Subspace& s_last = chain.range_witnesses.back();

    // T* side: Z = P^{S}_{F_n} T* P^{N_m}_{R} reached through Y = T* P^{N_m}_{R}.
    const PathSegment kernel_end = kernel_align_segment(tstar, r_last, kernel_m, tol);  // Y -> T*
    const Matrix y = kernel_end.start();
    const PathSegment range_end = range_align_segment(y, range_n, s_last, tol);  // Z -> Y
    const Matrix z = range_end.start();

    // Z = Q T_{m,n} with Q = Z T_{m,n}⁺ invertible on F_n.
    const Matrix& tmn = current;
    const RankProfile pmn = rank_profile(tmn, tol);
    const Matrix tmn_plus = restricted_inverse(tmn, r_last, s_last, tol);
    const Matrix& basis = pmn.column_space.basis();
    const Matrix q = basis.transpose() * z * tmn_plus * basis;
    const GlConnection gl = gl_connect(q, tol);
    const OperatorPath middle = lift_invertible_path(
        gl.path, basis, tmn,
        {Invariant::constant_rank(k), Invariant::constant_kernel(kernel_m),
         Invariant::constant_range(range_n)});

    if (gl.endpoint == GlEndpoint::Reflection) {
      path.append(flip_back(pmn, tmn, s_last.basis().col(0), tol).reverse());
    }
    path.append(middle.reverse());
    path.append(range_end);
    path.append(kernel_end);
    return path;
  });
}

}  // namespace opstrata
