#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qrelkit/builders.hpp"

using namespace qrelkit;

namespace {

/// The flip a x b -> b x a on the tensor algebra, as a coordinate matrix.
CMatrix flip_matrix(const HAAlgebra& m) {
  const HAAlgebra mm = tensor_algebra(m, m);
  CMatrix t = CMatrix::Zero(mm.coord_dim(), mm.coord_dim());
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Eigen::Index ni = m.dim(i), nj = m.dim(j);
      const Eigen::Index src_off = mm.coord_offset(i * n + j);
      const Eigen::Index dst_off = mm.coord_offset(j * n + i);
      for (Eigen::Index p = 0; p < ni; ++p)
        for (Eigen::Index q = 0; q < ni; ++q)
          for (Eigen::Index r = 0; r < nj; ++r)
            for (Eigen::Index s = 0; s < nj; ++s)
              t(dst_off + (r * ni + p) * nj * ni + (s * ni + q),
                src_off + (p * nj + r) * ni * nj + (q * nj + s)) = 1.0;
    }
  return t;
}

bool cocommutative(const DiscreteQuantumMonoid& q, double tol = 1e-8) {
  return (flip_matrix(q.m) * q.delta.action - q.delta.action).norm() <= tol;
}

}  // namespace

TEST_CASE("monoid table validation") {
  CHECK_THROWS_AS(MonoidTable(0, {{0, 1}, {0, 1}}), InvalidArgument);  // unit law
  CHECK_THROWS_AS(MonoidTable(2, {{0, 1}, {1, 0}}), InvalidArgument);  // unit range
  CHECK_THROWS_AS(MonoidTable(0, {{0, 1}}), InvalidArgument);          // ragged
  // A non-associative magma: unit 0 with 1*1 depending on association.
  CHECK_THROWS_AS(MonoidTable(0, {{0, 1, 2}, {1, 2, 2}, {2, 2, 1}}), InvalidArgument);
}

TEST_CASE("is_group matches the classics") {
  CHECK(cyclic_table(1).is_group());
  CHECK(cyclic_table(5).is_group());
  CHECK(klein_four_table().is_group());
  CHECK(s3_table().is_group());
  CHECK(d4_table().is_group());
  CHECK(!bool_and_table().is_group());
  CHECK(!truncated_add_table(3).is_group());
  CHECK(!min_table(5).is_group());
  CHECK(!mod_mult_table(4).is_group());
  // 0 has no inverse mod 2; only the trivial case degenerates to a group.
  CHECK(!mod_mult_table(2).is_group());
  CHECK(mod_mult_table(1).is_group());
  CHECK(cyclic_table(2).inverse(1) == 1);
  CHECK(cyclic_table(5).inverse(2) == 3);
  CHECK_THROWS_AS(bool_and_table().inverse(0), NotAGroup);
}

TEST_CASE("s3 and d4 tables encode the dihedral relations") {
  MonoidTable s3 = s3_table();
  // f r f = r^{-1}: 3 * 1 * 3 encodes f, r, f.
  CHECK(s3.mul[s3.mul[3][1]][3] == 2);
  MonoidTable d4 = d4_table();
  CHECK(d4.mul[d4.mul[4][1]][4] == 3);
  CHECK(d4.mul[1][1] == 2);
}

TEST_CASE("function_algebra builds valid monoids") {
  for (const MonoidTable& t : {cyclic_table(4), min_table(3), s3_table(), mod_mult_table(4)}) {
    DiscreteQuantumMonoid q = function_algebra(t);
    CHECK(q.m.size() == t.n);
    for (std::size_t i = 0; i < q.m.size(); ++i) CHECK(q.m.dim(i) == 1);
    CHECK(check_monoid(q).passed());
  }
  CHECK(cocommutative(function_algebra(cyclic_table(3))));
  CHECK(!cocommutative(function_algebra(s3_table())));
}

TEST_CASE("group_algebra block structure") {
  DiscreteQuantumMonoid z3 = group_algebra(cyclic_table(3));
  std::vector<Eigen::Index> dims;
  for (const auto& b : z3.m.blocks) dims.push_back(b.dim);
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<Eigen::Index>{1, 1, 1});
  CHECK(check_monoid(z3).passed());

  DiscreteQuantumMonoid s3 = group_algebra(s3_table());
  dims.clear();
  for (const auto& b : s3.m.blocks) dims.push_back(b.dim);
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<Eigen::Index>{1, 1, 2});
  CHECK(check_monoid(s3).worst_residual() < 1e-8);
  CHECK(cocommutative(s3));
  CHECK(vaes_group_check(s3).is_group);

  CHECK_THROWS_AS(group_algebra(bool_and_table()), NotAGroup);
}

TEST_CASE("group_algebra of an abelian group is the dual function algebra") {
  // C[Z3] is commutative: all blocks 1-dim, and delta is the pointwise dual.
  DiscreteQuantumMonoid q = group_algebra(cyclic_table(3));
  CHECK(check_monoid(q).passed());
  CHECK(vaes_group_check(q).is_group);
  KacVerdict v = is_kac(q);
  CHECK(v.is_kac);
}

TEST_CASE("kac_paljutkin is an eight-dimensional group-like object") {
  DiscreteQuantumMonoid q = kac_paljutkin();
  std::vector<Eigen::Index> dims;
  Eigen::Index total = 0;
  for (const auto& b : q.m.blocks) {
    dims.push_back(b.dim);
    total += b.dim * b.dim;
  }
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<Eigen::Index>{1, 1, 1, 1, 2});
  CHECK(total == 8);

  CheckReport rep = check_monoid(q);
  CHECK(rep.passed());
  CHECK(rep.worst_residual() < 1e-9);
  CHECK(vaes_group_check(q).is_group);

  // Neither commutative (a 2-dim block) nor cocommutative, unlike C[D4].
  CHECK(!cocommutative(q));
  CHECK(cocommutative(group_algebra(d4_table())));
}

TEST_CASE("kac_paljutkin is deterministic in the seed") {
  DiscreteQuantumMonoid a = kac_paljutkin(7);
  DiscreteQuantumMonoid b = kac_paljutkin(7);
  CHECK((a.delta.action - b.delta.action).norm() == doctest::Approx(0.0));
  CHECK((a.epsilon.action - b.epsilon.action).norm() == doctest::Approx(0.0));
}
