#include <numbers>

#include "doctest.h"
#include "opstrata/error.hpp"
#include "opstrata/path.hpp"
#include "opstrata/random.hpp"
#include "support.hpp"

using namespace opstrata;
using testing::axis;
using testing::mat;
using testing::span_of;

namespace {

PathSegment affine(const Matrix& a, const Matrix& b) {
  return {AffineKind{a, b}, {Invariant::constant_rank(0)}, "test"};
}

}  // namespace

TEST_CASE("path evaluation and parametrization") {
  const Matrix a = mat(2, 2, {1, 2, 3, 4});
  const Matrix b = mat(2, 2, {0, 1, 0, 1});
  OperatorPath one(2, 2);
  one.append(affine(a, b));
  CHECK(one.evaluate(0.0) == a);
  CHECK(one.evaluate(1.0) == a + b);

  OperatorPath two(2, 2);
  two.append(affine(a, b));
  two.append(affine(a + b, -b));
  CHECK(two.evaluate(0.5) == a + b);
  CHECK((two.evaluate(0.75) - (a + 0.5 * b)).norm() < 1e-15);
  CHECK(two.finish() == a);
  CHECK(two.max_joint_mismatch() == 0.0);
  CHECK_THROWS_AS(two.evaluate(1.5), Error);
  CHECK_THROWS_AS(two.evaluate(-0.1), Error);
  CHECK_THROWS_AS(two.append(affine(Matrix::Zero(3, 2), Matrix::Zero(3, 2))), Error);

  const OperatorPath back = two.reverse();
  for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    CHECK((back.evaluate(t) - two.evaluate(1.0 - t)).norm() < 1e-15);
  }
}

TEST_CASE("rotation helpers") {
  const Vector u = axis(3, 0), v = axis(3, 1);
  const Matrix t = Matrix::Identity(3, 3);
  CHECK(rotate_left(t, u, v, 0.0) == t);
  const Matrix g = rotate_left(t, u, v, std::numbers::pi / 2);
  CHECK((g * u - v).norm() < 1e-15);
  CHECK((rotate_right(t, u, v, 0.3) - rotate_left(t, u, v, 0.3)).norm() < 1e-15);
  const Matrix a = testing::mat(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK((rotate_right(a, u, v, 0.3) - a * rotate_left(t, u, v, 0.3)).norm() < 1e-14);
}

TEST_CASE("sandwich lifts every segment kind") {
  InstanceGenerator gen(31);
  const Matrix l = gen.subspace(5, 3).basis();
  const Matrix r = gen.gaussian(3, 4);
  const Matrix t = gen.gaussian(3, 3);
  const Vector u = axis(3, 0), v = axis(3, 2);
  const std::vector<PathSegment> segs = {
      {AffineKind{gen.gaussian(3, 3), gen.gaussian(3, 3)}, {Invariant::invertible()}, "a"},
      {RightAffineKind{t, gen.gaussian(3, 3), gen.gaussian(3, 3)}, {Invariant::invertible()}, "b"},
      {RotationKind{t, u, v, 0.2, -1.1}, {Invariant::invertible()}, "c"}};
  for (const auto& s : segs) {
    for (bool rev : {false, true}) {
      PathSegment seg = s;
      seg.reversed = rev;
      const PathSegment lifted = sandwich(seg, l, r);
      for (double lam : {0.0, 0.37, 1.0}) {
        CHECK((lifted.evaluate(lam) - l * seg.evaluate(lam) * r).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("range alignment keeps the kernel and the complement") {
  InstanceGenerator gen(32);
  for (int i = 0; i < 60; ++i) {
    const Index rows = gen.uniform(2, 7), cols = gen.uniform(1, 7);
    const Index k = gen.uniform(1, std::min(rows - 1, cols));
    const Matrix t0 = gen.rank_k(rows, cols, k);
    const RankProfile p = rank_profile(t0);
    const Subspace n = gen.subspace(rows, rows - k);
    const Subspace fstar = gen.subspace(rows, k);
    if (testing::stacked_sigma_min(p.column_space, n) < 1e-2 ||
        testing::stacked_sigma_min(fstar, n) < 1e-2) {
      continue;
    }
    const PathSegment seg = range_align_segment(t0, fstar, n);
    CHECK((seg.start() - testing::projector_oracle(fstar, n) * t0).norm() <= 1e-10 * (1 + t0.norm()));
    CHECK((seg.finish() - t0).norm() <= 1e-10 * (1 + t0.norm()));
    for (int s = 0; s <= 100; ++s) {
      const RankProfile q = rank_profile(seg.evaluate(s / 100.0));
      CHECK(q.decision.rank == k);
      CHECK(max_principal_angle(q.null_space, p.null_space) <= 1e-7);
      CHECK(testing::stacked_sigma_min(q.column_space, n) >= 1e-8);
    }
  }
}

TEST_CASE("kernel alignment keeps the range and the complement") {
  InstanceGenerator gen(33);
  for (int i = 0; i < 60; ++i) {
    const Index rows = gen.uniform(1, 7), cols = gen.uniform(2, 7);
    const Index k = gen.uniform(1, std::min(rows, cols - 1));
    const Matrix t0 = gen.rank_k(rows, cols, k);
    const RankProfile p = rank_profile(t0);
    const Subspace r0 = gen.subspace(cols, k);
    const Subspace estar = gen.subspace(cols, cols - k);
    if (testing::stacked_sigma_min(p.null_space, r0) < 1e-2 ||
        testing::stacked_sigma_min(estar, r0) < 1e-2) {
      continue;
    }
    const PathSegment seg = kernel_align_segment(t0, r0, estar);
    CHECK((seg.start() - t0 * testing::projector_oracle(r0, estar)).norm() <= 1e-10 * (1 + t0.norm()));
    CHECK((seg.finish() - t0).norm() <= 1e-10 * (1 + t0.norm()));
    for (int s = 0; s <= 100; ++s) {
      const RankProfile q = rank_profile(seg.evaluate(s / 100.0));
      CHECK(q.decision.rank == k);
      CHECK(max_principal_angle(q.column_space, p.column_space) <= 1e-7);
      CHECK(testing::stacked_sigma_min(q.null_space, r0) >= 1e-8);
    }
  }
}

TEST_CASE("alignment rejects non-complementary data") {
  const Matrix t = mat(2, 2, {1, 0, 0, 0});
  const Subspace e1 = span_of({axis(2, 0)});
  CHECK_THROWS_AS(range_align_segment(t, e1, e1), Error);
  CHECK_THROWS_AS(kernel_align_segment(t, span_of({axis(2, 1)}), e1), Error);
}

TEST_CASE("gl_connect ends exactly at I or the reflection") {
  const GlConnection id = gl_connect(Matrix::Identity(2, 2));
  CHECK(id.endpoint == GlEndpoint::Identity);
  CHECK(id.path.finish() == Matrix::Identity(2, 2));

  const GlConnection neg = gl_connect(-Matrix::Identity(2, 2));
  CHECK(neg.endpoint == GlEndpoint::Identity);
  CHECK(neg.path.finish() == Matrix::Identity(2, 2));
  CHECK((neg.path.start() + Matrix::Identity(2, 2)).norm() < 1e-14);

  const GlConnection refl = gl_connect(mat(2, 2, {1, 0, 0, -1}));
  CHECK(refl.endpoint == GlEndpoint::Reflection);
  CHECK(refl.path.finish() == reflection_representative(2));
  CHECK(reflection_representative(3) == Matrix(Eigen::Vector3d(-1, 1, 1).asDiagonal()));

  CHECK_THROWS_AS(gl_connect(mat(2, 2, {1, 2, 2, 4})), Error);
  CHECK_THROWS_AS(gl_connect(Matrix::Zero(2, 3)), Error);
}

TEST_CASE("gl_connect stays invertible with a fixed determinant sign") {
  InstanceGenerator gen(34);
  for (int i = 0; i < 80; ++i) {
    const Index n = gen.uniform(1, 8);
    const Matrix q = gen.invertible(n);
    const GlConnection g = gl_connect(q);
    const double sign = q.determinant() > 0 ? 1.0 : -1.0;
    CHECK((g.path.start() - q).norm() <= 1e-10 * q.norm());
    CHECK(g.path.finish() == (sign > 0 ? Matrix(Matrix::Identity(n, n)) : reflection_representative(n)));
    CHECK(g.path.size() <= static_cast<std::size_t>(n * (n - 1) / 2 + 1));
    CHECK(g.path.max_joint_mismatch() <= 1e-12);
    for (const auto& seg : g.path.segments()) {
      for (int s = 0; s <= 100; ++s) {
        const Matrix m = seg.evaluate(s / 100.0);
        CHECK(inverse_condition(m) >= 1e-6);
        CHECK(m.determinant() * sign > 0.0);
      }
    }
  }
}

TEST_CASE("codomain sign flip") {
  InstanceGenerator gen(35);
  const Matrix t = gen.rank_k(4, 3, 2);
  const RankProfile p = rank_profile(t);
  const Vector e = p.column_space.basis().col(0);
  const PathSegment seg = sign_flip_segment(t, e);
  CHECK(seg.start() == reflect(e) * t);
  CHECK((seg.finish() - t).norm() <= 1e-14 * t.norm());
  for (int s = 0; s <= 100; ++s) {
    const RankProfile q = rank_profile(seg.evaluate(s / 100.0));
    CHECK(q.decision.rank == 2);
    CHECK(q.decision.leading_gap >= 1e-6);
    CHECK(max_principal_angle(q.null_space, p.null_space) <= 1e-7);
  }
  try {
    sign_flip_segment(gen.rank_k(3, 4, 3), axis(3, 0));
    FAIL("expected NoSpareDirection");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NoSpareDirection);
  }
  const Vector outside = orthogonal_complement(p.column_space).basis().col(0);
  try {
    sign_flip_segment(t, outside);
    FAIL("expected NotInRange");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotInRange);
  }
  // A supplied spare direction is cleaned of its R(T) component.
  const PathSegment custom = sign_flip_segment(t, e, outside + 3.0 * e);
  CHECK((custom.finish() - t).norm() <= 1e-14 * t.norm());
}

TEST_CASE("domain sign flip") {
  InstanceGenerator gen(36);
  const Matrix t = gen.rank_k(3, 4, 3);
  const RankProfile p = rank_profile(t);
  const Vector w = orthogonal_complement(p.null_space).basis().col(0);
  const PathSegment seg = sign_flip_domain_segment(t, w);
  CHECK(seg.start() == t * reflect(w));
  CHECK((seg.finish() - t).norm() <= 1e-14 * t.norm());
  for (int s = 0; s <= 100; ++s) {
    const RankProfile q = rank_profile(seg.evaluate(s / 100.0));
    CHECK(q.decision.rank == 3);
    CHECK(max_principal_angle(q.column_space, p.column_space) <= 1e-7);
  }
  CHECK_THROWS_AS(sign_flip_domain_segment(gen.invertible(3), axis(3, 0)), Error);
  CHECK_THROWS_AS(sign_flip_domain_segment(t, p.null_space.basis().col(0)), Error);
}

TEST_CASE("affine sign reversal family on the 2x2 instance") {
  const Subspace estar = span_of({axis(2, 0)});
  const Subspace r = span_of({axis(2, 1)});
  const GraphOperator alpha = graph_operator(span_of({Vector(axis(2, 0) + axis(2, 1))}), estar, r);
  const PathSegment seg = affine_sign_reversal_path(estar, r, alpha);
  // P = diag(1, 0), αP = e2 e1ᵀ.
  CHECK((seg.evaluate(0.0) - mat(2, 2, {1, 0, 1, 0})).norm() < 1e-15);
  CHECK((seg.evaluate(0.0) - projector_update(oblique_projector(estar, r), alpha).matrix).norm() <
        1e-15);
  CHECK((seg.evaluate(1.0) + oblique_projector(estar, r).matrix).norm() < 1e-15);
  const Matrix mid = seg.evaluate(0.5);
  CHECK((mid - mat(2, 2, {0, 0, 0.5, 0})).norm() < 1e-15);
  const Subspace mid_range = column_space(mid);
  CHECK(max_principal_angle(mid_range, r) < 1e-12);
  CHECK(complementarity_margin(mid_range, r) < 1e-12);
  CHECK_THROWS_AS(affine_sign_reversal_path(estar, r, graph_operator(estar, estar, r)), Error);
}
