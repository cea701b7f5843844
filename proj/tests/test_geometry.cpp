#include "doctest.h"
#include "opstrata/error.hpp"
#include "opstrata/geometry.hpp"
#include "opstrata/path.hpp"
#include "opstrata/random.hpp"
#include "support.hpp"

using namespace opstrata;
using testing::axis;
using testing::mat;

TEST_CASE("tangent membership examples") {
  InstanceGenerator gen(51);
  const Matrix x = gen.rank_k(4, 3, 2);
  CHECK(tangent_membership(x, x).member);
  const TangentMembership off = tangent_membership(mat(2, 2, {1, 0, 0, 0}), mat(2, 2, {0, 0, 0, 1}));
  CHECK_FALSE(off.member);
  CHECK(off.residual == doctest::Approx(1.0));
  const Matrix full = gen.invertible(3);
  for (int i = 0; i < 10; ++i) CHECK(tangent_membership(full, gen.gaussian(3, 3)).member);
  CHECK_THROWS_AS(tangent_membership(x, Matrix::Zero(3, 3)), Error);
}

TEST_CASE("tangent space dimension examples") {
  const TangentSpaceReport a = tangent_space_dim(mat(2, 2, {1, 0, 0, 0}));
  CHECK(a.tangent_dim == 3);
  CHECK(a.complement_dim == 1);
  CHECK(a.agrees());
  const TangentSpaceReport z = tangent_space_dim(Matrix::Zero(3, 4));
  CHECK(z.tangent_dim == 0);
  CHECK(z.complement_dim == 12);
  const TangentSpaceReport top = tangent_space_dim(random_stratum_point(3, 2, 2, 5));
  CHECK(top.tangent_dim == 6);
  CHECK(top.formula_dim == 6);
  CHECK(top.residual < 1e-12);
  try {
    tangent_space_dim(mat(2, 2, {1, 0, 0, 1e-10}));
    FAIL("expected NumericalDegeneracy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NumericalDegeneracy);
  }
}

TEST_CASE("stratum dimension formula") {
  CHECK(stratum_dim(2, 2, 1) == 3);
  CHECK(stratum_dim(5, 7, 0) == 0);
  CHECK(stratum_dim(4, 3, 2) == 10);
  CHECK(tangent_space_dim(random_stratum_point(4, 3, 2, 9)).tangent_dim == 10);
  CHECK_THROWS_AS(stratum_dim(2, 3, 3), Error);
  CHECK_THROWS_AS(stratum_dim(2, 3, -1), Error);
}

TEST_CASE("stratification reports") {
  const auto dims = [](const StratificationReport& r) {
    std::vector<Index> out;
    for (const auto& e : r.strata) out.push_back(e.dim);
    return out;
  };
  const StratificationReport a = stratification_report(2, 2);
  CHECK(dims(a) == std::vector<Index>{0, 3, 4});
  CHECK(a.generic_in_top_stratum);
  CHECK(dims(stratification_report(1, 1)) == std::vector<Index>{0, 1});
  const StratificationReport c = stratification_report(3, 2, 7);
  CHECK(dims(c) == std::vector<Index>{0, 4, 6});
  for (const auto& e : c.strata) CHECK(e.certified);
  CHECK_THROWS_AS(stratification_report(0, 2), Error);
}

TEST_CASE("canonical embeddings") {
  const CanonicalEmbeddings z = canonical_embeddings(3, 2, 0);
  CHECK(z.ik.isZero(0.0));
  CHECK(z.ik_plus.isZero(0.0));
  const CanonicalEmbeddings t = canonical_embeddings(3, 2, 2);
  CHECK(t.ik.topRows(2) == Matrix(Matrix::Identity(2, 2)));
  const CanonicalEmbeddings e = canonical_embeddings(3, 2, 1);
  CHECK(e.ik.rows() == 3);
  CHECK(e.ik.cols() == 2);
  CHECK(e.ik * e.ik_plus * e.ik == e.ik);
  CHECK(e.ik_plus * e.ik * e.ik_plus == e.ik_plus);
  CHECK(e.codomain_projector == Matrix(Eigen::Vector3d(0, 1, 1).asDiagonal()));
  CHECK(e.domain_projector == Matrix(Eigen::Vector2d(0, 1).asDiagonal()));
  CHECK_THROWS_AS(canonical_embeddings(3, 2, 3), Error);
}

TEST_CASE("tangent and complement spaces split the ambient space") {
  InstanceGenerator gen(52);
  for (int i = 0; i < 100; ++i) {
    const Index rows = gen.uniform(1, 7), cols = gen.uniform(1, 7);
    const Index k = gen.uniform(0, std::min(rows, cols));
    const CanonicalEmbeddings e = canonical_embeddings(rows, cols, k);
    CHECK(complement_space_dim(e) == (rows - k) * (cols - k));
    CHECK(complement_space_dim(e) + tangent_space_dim(e.ik).tangent_dim == rows * cols);
    CHECK(tangent_plus_complement_rank(e) == rows * cols);
  }
}

TEST_CASE("nullity matches the formula on random points") {
  InstanceGenerator gen(53);
  for (int i = 0; i < 1000; ++i) {
    const Index rows = gen.uniform(1, 10), cols = gen.uniform(1, 10);
    const Index k = gen.uniform(0, std::min(rows, cols));
    const TangentSpaceReport r = tangent_space_dim(gen.rank_k(rows, cols, k));
    CHECK(r.tangent_dim == (rows + cols - k) * k);
    CHECK(r.tangent_dim + r.complement_dim == r.ambient_dim);
  }
}

TEST_CASE("finite-difference velocity of a rank-preserving curve is tangent") {
  InstanceGenerator gen(54);
  for (int i = 0; i < 50; ++i) {
    const Index rows = gen.uniform(2, 7), cols = gen.uniform(2, 7);
    const Matrix x = gen.rank_k(rows, cols, gen.uniform(1, std::min(rows, cols)));
    const Matrix gu = gen.subspace(rows, 2).basis();
    const Matrix hu = gen.subspace(cols, 2).basis();
    const double a = gen.uniform_real(-2, 2), b = gen.uniform_real(-2, 2);
    const auto curve = [&](double t) {
      const Matrix g = rotate_left(Matrix::Identity(rows, rows), gu.col(0), gu.col(1), a * t);
      return Matrix(g * rotate_right(x, hu.col(0), hu.col(1), b * t));
    };
    const double h = 1e-4;
    const Matrix velocity = (curve(h) - curve(-h)) / (2 * h);
    const TangentMembership m = tangent_membership(x, velocity, 1e-6);
    CHECK(m.member);
    CHECK(m.residual <= 1e-6);
  }
}
