#include "doctest.h"
#include "opstrata/error.hpp"
#include "opstrata/random.hpp"
#include "opstrata/subspace.hpp"
#include "support.hpp"

using namespace opstrata;
using testing::axis;
using testing::mat;
using testing::span_of;

TEST_CASE("sum examples") {
  CHECK(sum(span_of({axis(2, 0)}), span_of({axis(2, 0)})).dim() == 1);
  CHECK(sum(span_of({axis(2, 0)}), span_of({axis(2, 1)})).dim() == 2);
  const Subspace s = sum(span_of({axis(3, 0)}), span_of({Vector(axis(3, 0) + axis(3, 1))}));
  CHECK(s.dim() == 2);
  CHECK(s.contains(axis(3, 0)));
  CHECK(s.contains(axis(3, 0) + axis(3, 1)));
  CHECK_FALSE(s.contains(axis(3, 2)));
  CHECK_THROWS_AS(sum(span_of({axis(2, 0)}), span_of({axis(3, 0)})), Error);
}

TEST_CASE("intersect examples") {
  const Subspace s = span_of({axis(3, 0), Vector(axis(3, 1) + axis(3, 2))});
  const Subspace self = intersect(s, s);
  CHECK(self.dim() == 2);
  CHECK(testing::projector_gap(self, s) < 1e-12);
  CHECK(intersect(span_of({axis(2, 0)}), span_of({axis(2, 1)})).dim() == 0);
  const Subspace i = intersect(span_of({axis(3, 0), axis(3, 1)}), span_of({axis(3, 1), axis(3, 2)}));
  REQUIRE(i.dim() == 1);
  CHECK(i.contains(axis(3, 1)));
  // A direction 1e-9 rad away still counts as shared; 1e-5 rad does not.
  const Vector tilted = axis(2, 0) + 1e-9 * axis(2, 1);
  CHECK(intersect(span_of({axis(2, 0)}), span_of({tilted})).dim() == 1);
  CHECK(intersect(span_of({axis(2, 0)}), span_of({Vector(axis(2, 0) + 1e-5 * axis(2, 1))})).dim() ==
        0);
}

TEST_CASE("orthogonal complement examples") {
  const Subspace c = orthogonal_complement(span_of({axis(2, 0)}));
  REQUIRE(c.dim() == 1);
  CHECK(c.contains(axis(2, 1)));
  CHECK(orthogonal_complement(Subspace::zero(3)).dim() == 3);
  const Subspace d = orthogonal_complement(span_of({Vector(axis(2, 0) + axis(2, 1))}));
  REQUIRE(d.dim() == 1);
  CHECK(d.contains(axis(2, 0) - axis(2, 1)));
  CHECK(are_complementary(span_of({axis(2, 0)}), c));
}

TEST_CASE("common complement examples") {
  const Subspace e1 = span_of({axis(2, 0)});
  const Subspace same = common_complement(e1, e1);
  REQUIRE(same.dim() == 1);
  CHECK(same.contains(axis(2, 1)));

  const Subspace r = common_complement(e1, span_of({axis(2, 1)}));
  REQUIRE(r.dim() == 1);
  // With α(e1) = ±e2 the complement is a diagonal line.
  CHECK(std::abs(r.basis()(0, 0)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(std::abs(r.basis()(1, 0)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(std::abs(mat(2, 2, {1, r.basis()(0, 0), 0, r.basis()(1, 0)}).determinant()) > 0.5);
  CHECK(std::abs(mat(2, 2, {0, r.basis()(0, 0), 1, r.basis()(1, 0)}).determinant()) > 0.5);

  const Subspace a = span_of({axis(4, 0), axis(4, 1)});
  const Subspace b = span_of({axis(4, 1), axis(4, 2)});
  const Subspace w = common_complement(a, b);
  CHECK(w.dim() == 2);
  CHECK(testing::stacked_sigma_min(a, w) >= 1e-8);
  CHECK(testing::stacked_sigma_min(b, w) >= 1e-8);

  CHECK_THROWS_AS(common_complement(e1, Subspace::whole(2)), Error);
}

TEST_CASE("common complement pieces satisfy the dimension identity") {
  InstanceGenerator gen(21);
  for (int i = 0; i < 300; ++i) {
    const Index n = gen.uniform(1, 10);
    const Index d = gen.uniform(0, n);
    const Index shared = gen.uniform(std::max<Index>(0, 2 * d - n), d);
    // Build pairs that share `shared` directions exactly.
    const Subspace base = gen.subspace(n, 2 * d - shared);
    const Matrix& q = base.basis();
    const Subspace e1 = Subspace::span(q.leftCols(d));
    const Subspace e2 = Subspace::span(q.middleCols(d - shared, d));
    const CommonComplementParts p = common_complement_parts(e1, e2);
    CHECK(p.shared.dim() == shared);
    CHECK(sum(e1, e2).dim() == p.e1_rest.dim() + p.e2_rest.dim() + p.shared.dim());
    CHECK(p.complement.dim() == n - d);
    CHECK(p.outside.dim() + p.graph_part.dim() == p.complement.dim());
    CHECK(testing::stacked_sigma_min(e1, p.complement) >= 1e-8);
    CHECK(testing::stacked_sigma_min(e2, p.complement) >= 1e-8);
  }
}

TEST_CASE("graph operator examples") {
  const Subspace estar = span_of({axis(2, 0)});
  const Subspace r = span_of({axis(2, 1)});
  const GraphOperator zero = graph_operator(estar, estar, r);
  CHECK(zero.coeffs.norm() < 1e-15);
  const double c = 0.75;
  const GraphOperator a = graph_operator(span_of({Vector(axis(2, 0) + c * axis(2, 1))}), estar, r);
  CHECK((a.ambient() * axis(2, 0) - c * axis(2, 1)).norm() < 1e-14);
  CHECK(testing::projector_gap(graph_subspace(a), span_of({Vector(axis(2, 0) + c * axis(2, 1))})) <
        1e-14);
  CHECK(testing::projector_gap(graph_subspace(zero), estar) < 1e-15);
  try {
    graph_operator(r, estar, r);
    FAIL("expected NotComplementary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotComplementary);
  }
}

TEST_CASE("oblique projector examples") {
  const Subspace e1 = span_of({axis(2, 0)});
  CHECK((oblique_projector(e1, span_of({axis(2, 1)})).matrix - mat(2, 2, {1, 0, 0, 0})).norm() <
        1e-15);
  const ObliqueProjector p = oblique_projector(e1, span_of({Vector(axis(2, 0) + axis(2, 1))}));
  CHECK((p.matrix - mat(2, 2, {1, -1, 0, 0})).norm() < 1e-14);
  CHECK((p.complement().matrix - (Matrix::Identity(2, 2) - p.matrix)).norm() < 1e-15);
  CHECK(oblique_projector(Subspace::zero(2), Subspace::whole(2)).matrix.norm() == 0.0);
  CHECK_THROWS_AS(oblique_projector(e1, e1), Error);
}

TEST_CASE("projector update examples") {
  const Subspace estar = span_of({axis(2, 0)});
  const Subspace r = span_of({axis(2, 1)});
  const ObliqueProjector p = oblique_projector(estar, r);
  const GraphOperator zero = graph_operator(estar, estar, r);
  CHECK((projector_update(p, zero).matrix - p.matrix).norm() < 1e-15);
  const double c = -2.5;
  const GraphOperator a = graph_operator(span_of({Vector(axis(2, 0) + c * axis(2, 1))}), estar, r);
  const Matrix up = projector_update(p, a).matrix;
  CHECK((up - mat(2, 2, {1, 0, c, 0})).norm() < 1e-13);
  CHECK((up * up - up).norm() < 1e-13);
  // A projector along a different kernel is rejected.
  CHECK_THROWS_AS(projector_update(oblique_projector(estar, span_of({Vector(axis(2, 0) + axis(2, 1))})), a),
                  Error);
}

TEST_CASE("complementary projectors sum to the identity") {
  InstanceGenerator gen(22);
  for (int i = 0; i < 300; ++i) {
    const Index n = gen.uniform(1, 10);
    const Index d = gen.uniform(0, n);
    const Subspace a = gen.subspace(n, d), b = gen.subspace(n, n - d);
    if (testing::stacked_sigma_min(a, b) < 1e-3) continue;
    const Matrix sum_p = oblique_projector(a, b).matrix + oblique_projector(b, a).matrix;
    CHECK((sum_p - Matrix::Identity(n, n)).norm() <= 1e-10 * n);
    const Matrix p = oblique_projector(a, b).matrix;
    CHECK((p * p - p).norm() <= 1e-10 * (1 + p.norm()));
    CHECK((p - testing::projector_oracle(a, b)).norm() <= 1e-10 * (1 + p.norm()));
  }
}
