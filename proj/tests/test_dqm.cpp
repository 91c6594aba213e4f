#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qrelkit/builders.hpp"

using namespace qrelkit;

namespace {

/// Compose a solved antipode with conjugation by a unitary in one block, a
/// deliberate corruption that keeps antimultiplicativity plausible but breaks
/// the convolution identities and the *-property generically.
AntipodeCandidate corrupt(const DiscreteQuantumMonoid& q, const AntipodeCandidate& s,
                          std::mt19937_64& rng) {
  CMatrix conj = CMatrix::Zero(q.m.coord_dim(), q.m.coord_dim());
  for (std::size_t i = 0; i < q.m.size(); ++i) {
    const Eigen::Index n = q.m.dim(i);
    CMatrix u = random_unitary(n, rng);
    conj.block(q.m.coord_offset(i), q.m.coord_offset(i), n * n, n * n) =
        kron(u, u.conjugate());
  }
  AntipodeCandidate out = s;
  out.action = conj * s.action;
  return out;
}

}  // namespace

TEST_CASE("check_monoid accepts the classical builders") {
  for (const MonoidTable& t : {cyclic_table(3), bool_and_table(), s3_table()}) {
    DiscreteQuantumMonoid q = function_algebra(t);
    CheckReport rep = check_monoid(q);
    CHECK(rep.passed());
    CHECK(rep.worst_residual() < 1e-10);
  }
}

TEST_CASE("check_monoid flags a perturbed coproduct") {
  DiscreteQuantumMonoid q = function_algebra(cyclic_table(3));
  q.delta.action(0, 0) += 0.1;
  CheckReport rep = check_monoid(q);
  CHECK(!rep.passed());
  CHECK(rep.worst_residual() > 0.05);
}

TEST_CASE("epsilon_hat and delta_hat have the expected types") {
  DiscreteQuantumMonoid q = function_algebra(cyclic_table(2));
  QRelation eh = epsilon_hat(q);
  CHECK(eh.dom == unit_qset());
  CHECK(eh.cod == q.qset());
  CHECK(is_function(eh));
  QRelation dh = delta_hat(q);
  CHECK(dh.dom == cartesian_product(q.qset(), q.qset()));
  CHECK(dh.cod == q.qset());
  CHECK(is_function(dh));
  // For the classical Z2 the multiplication relation has one point per pair.
  CHECK(dh.components.size() == 4);
}

TEST_CASE("epsilon_state and its support") {
  DiscreteQuantumMonoid q = function_algebra(cyclic_table(3));
  State eps = epsilon_state(q);
  CHECK(std::abs(eps(AlgebraElement::one(q.m)) - cxd(1.0)) < 1e-12);
  ProjectionElement e = counit_support(q);
  // Supported exactly on the unit element's atom.
  CHECK(std::abs(e.element.blocks[0](0, 0) - cxd(1.0)) < 1e-9);
  CHECK(e.element.blocks[1].norm() < 1e-9);
  CHECK(e.element.blocks[2].norm() < 1e-9);
}

TEST_CASE("group detection separates groups from monoids") {
  CHECK(vaes_group_check(function_algebra(cyclic_table(4))).is_group);
  CHECK(vaes_group_check(function_algebra(klein_four_table())).is_group);
  CHECK(vaes_group_check(function_algebra(s3_table())).is_group);
  CHECK(!vaes_group_check(function_algebra(bool_and_table())).is_group);
  CHECK(!vaes_group_check(function_algebra(truncated_add_table(3))).is_group);
  CHECK(!vaes_group_check(function_algebra(min_table(4))).is_group);
}

TEST_CASE("the antipode solves exactly for groups") {
  DiscreteQuantumMonoid z3 = function_algebra(cyclic_table(3));
  auto s = solve_antipode(z3);
  REQUIRE(s.has_value());
  CHECK(s->unique);
  CHECK(s->residual < 1e-9);
  CHECK(s->is_unital);
  CHECK(s->is_antimultiplicative);
  CHECK(s->is_star_map);
  // Classically s permutes the points by inversion: coordinate g -> -g mod 3.
  CMatrix want = CMatrix::Zero(3, 3);
  want(0, 0) = 1.0;
  want(1, 2) = 1.0;
  want(2, 1) = 1.0;
  CHECK((s->action - want).norm() < 1e-8);

  CHECK(!solve_antipode(function_algebra(bool_and_table())).has_value());
  CHECK(!solve_antipode(function_algebra(truncated_add_table(4))).has_value());
}

TEST_CASE("antipode_morphism lands in the dual algebra") {
  DiscreteQuantumMonoid q = group_algebra(s3_table());
  auto s = solve_antipode(q);
  REQUIRE(s.has_value());
  WStarMorphism sm = antipode_morphism(q, *s);
  CHECK(sm.target == ell_infty(dual_qset(q.qset())));
  CHECK(morphism_defect(sm) < 1e-7);
}

TEST_CASE("inversion_relation matches the antipode relation and is a function") {
  for (DiscreteQuantumMonoid q : {function_algebra(s3_table()), group_algebra(cyclic_table(3))}) {
    auto s = solve_antipode(q);
    REQUIRE(s.has_value());
    QRelation inv = inversion_relation(q, *s);
    QRelation s_hat = morphism_to_relation(antipode_morphism(q, *s));
    CHECK(rel_eq(inv, s_hat, 1e-7));
    CHECK(is_function(inv, 1e-7));
  }
}

TEST_CASE("the diagram battery passes on real inversions and fails on the top") {
  DiscreteQuantumMonoid q = function_algebra(cyclic_table(3));
  auto s = solve_antipode(q);
  REQUIRE(s.has_value());
  QRelation s_hat = morphism_to_relation(antipode_morphism(q, *s));
  CheckReport good = kac_diagram_battery(q, s_hat);
  CHECK(good.passed());
  CHECK(good.worst_residual() < 1e-8);

  QRelation top = top_relation(dual_qset(q.qset()), q.qset());
  CheckReport bad = kac_diagram_battery(q, top);
  CHECK(!bad.passed());
}

TEST_CASE("dqg_relation_check holds for the antipode relation") {
  for (DiscreteQuantumMonoid q : {function_algebra(klein_four_table()),
                                  group_algebra(cyclic_table(2))}) {
    auto s = solve_antipode(q);
    REQUIRE(s.has_value());
    QRelation inv = inversion_relation(q, *s);
    CheckReport rep = dqg_relation_check(q, inv);
    CHECK(rep.passed());
    CHECK(rep.worst_residual() < 1e-8);
    // The zero relation fails the inversion inequalities.
    CheckReport zero = dqg_relation_check(q, zero_relation(dual_qset(q.qset()), q.qset()));
    CHECK(!zero.passed());
  }
}

TEST_CASE("is_kac agrees three ways on commutative and cocommutative examples") {
  for (DiscreteQuantumMonoid q : {function_algebra(cyclic_table(2)),
                                  function_algebra(s3_table()),
                                  group_algebra(s3_table())}) {
    KacVerdict v = is_kac(q);
    CHECK(v.is_kac);
    CHECK(v.star_flag);
    CHECK(v.diagonal_flag);
    CHECK(v.diagram_flag);
    CHECK(v.report.passed());
  }
}

TEST_CASE("a corrupted antipode fails the diagonal and diagram checks together") {
  std::mt19937_64 rng(61);
  DiscreteQuantumMonoid q = group_algebra(s3_table());
  auto s = solve_antipode(q);
  REQUIRE(s.has_value());
  int corrupted_detected = 0;
  for (int k = 0; k < 5; ++k) {
    AntipodeCandidate bad = corrupt(q, *s, rng);
    const bool diag_ok = diagonal_condition_residual(q, bad) <= 1e-6;
    bool battery_ok;
    try {
      QRelation bad_hat = inversion_relation(q, bad);
      battery_ok = kac_diagram_battery(q, bad_hat).passed();
    } catch (const InvalidArgument&) {
      battery_ok = false;
    }
    CHECK(diag_ok == battery_ok);
    if (!diag_ok) ++corrupted_detected;
  }
  CHECK(corrupted_detected >= 4);
}

TEST_CASE("is_kac refuses non-groups") {
  CHECK_THROWS_AS(is_kac(function_algebra(bool_and_table())), InvalidArgument);
}
