#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qrelkit/states.hpp"

#include "random_instances.hpp"

using namespace qrelkit;

TEST_CASE("state validation and evaluation") {
  HAAlgebra m = ell_infty(QuantumSet{{Atom{"a", 1}, Atom{"b", 2}}});
  std::vector<CMatrix> dens{CMatrix::Constant(1, 1, 0.5), 0.25 * CMatrix::Identity(2, 2)};
  State phi(m, dens);
  CHECK(std::abs(phi(AlgebraElement::one(m)) - cxd(1.0)) < 1e-12);

  CHECK_THROWS_AS(State(m, {CMatrix::Constant(1, 1, 0.5), 0.5 * CMatrix::Identity(2, 2)}),
                  InvalidState);
  CHECK_THROWS_AS(State(m, {CMatrix::Constant(1, 1, 1.5), -0.25 * CMatrix::Identity(2, 2)}),
                  InvalidState);
}

TEST_CASE("support projection") {
  HAAlgebra m = ell_infty(QuantumSet{{Atom{"a", 2}, Atom{"b", 2}}});
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  State phi(m, {rho, CMatrix::Zero(2, 2)});
  ProjectionElement p = support_projection(phi);
  CHECK((p.element.blocks[0] - rho).norm() < 1e-9);
  CHECK(p.element.blocks[1].norm() < 1e-9);
  CHECK(std::abs(phi(p.element) - cxd(1.0)) < 1e-9);
}

TEST_CASE("diagonal projection structure") {
  QuantumSet x{{Atom{"a", 1}, Atom{"b", 2}}};
  ProjectionElement delta = diagonal_projection(x);
  const auto& blocks = delta.element.blocks;
  REQUIRE(blocks.size() == 4);
  CHECK(std::abs(blocks[0].trace() - cxd(1.0)) < 1e-12);
  CHECK(blocks[1].norm() < 1e-12);
  CHECK(blocks[2].norm() < 1e-12);
  CHECK(std::abs(blocks[3].trace() - cxd(1.0)) < 1e-12);
  CHECK(projection_defect(delta.element) < 1e-12);
  // The op-side variant has the same block data.
  ProjectionElement delta_op = diagonal_projection(x, true);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK((delta_op.element.blocks[i] - blocks[i]).norm() < 1e-12);
}

TEST_CASE("delta is orthogonal to p x (1 - p)") {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 200; ++k) {
    QuantumSet x = testgen::random_qset(2, 3, rng, "x");
    const HAAlgebra alg = ell_infty(x);
    AlgebraElement delta = diagonal_projection(x).element;
    AlgebraElement p = random_projection_element(alg, rng, true);
    AlgebraElement q = AlgebraElement::one(alg) - p;
    AlgebraElement mixed = embed_tensor(p, q, false, true);
    CHECK((mixed * delta).norm() < 1e-9);
  }
}

TEST_CASE("delta is nondegenerate") {
  std::mt19937_64 rng(52);
  for (int k = 0; k < 10; ++k) {
    QuantumSet x = testgen::random_qset(3, 3, rng, "x");
    CHECK(is_nondegenerate_diagonal(x, 20, rng));
  }
}

TEST_CASE("extreme diagonal states evaluate as normalized block traces") {
  QuantumSet x{{Atom{"a", 1}, Atom{"b", 2}}};
  const HAAlgebra alg = ell_infty(x);
  std::mt19937_64 rng(53);
  auto phis = extreme_diagonal_states(x);
  REQUIRE(phis.size() == 2);
  for (int k = 0; k < 10; ++k) {
    AlgebraElement a(alg, {random_cmatrix(1, 1, rng), random_cmatrix(2, 2, rng)});
    AlgebraElement b(alg, {random_cmatrix(1, 1, rng), random_cmatrix(2, 2, rng)});
    AlgebraElement ab = embed_tensor(a, b, false, true);
    // phi_i(a x b) = tr(a_i b_i) / n_i.
    CHECK(std::abs(phis[0](ab) - (a.blocks[0] * b.blocks[0]).trace()) < 1e-10);
    CHECK(std::abs(phis[1](ab) - (a.blocks[1] * b.blocks[1]).trace() / 2.0) < 1e-10);
  }
}

TEST_CASE("diagonal decomposition recovers the weights") {
  std::mt19937_64 rng(54);
  for (int k = 0; k < 40; ++k) {
    QuantumSet x = testgen::random_qset(3, 2, rng, "x");
    auto phis = extreme_diagonal_states(x);
    std::vector<double> w(phis.size());
    double total = 0.0;
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    for (auto& v : w) {
      v = unif(rng);
      total += v;
    }
    for (auto& v : w) v /= total;
    std::vector<CMatrix> dens;
    for (std::size_t blk = 0; blk < phis[0].densities.size(); ++blk) {
      CMatrix rho = CMatrix::Zero(phis[0].densities[blk].rows(), phis[0].densities[blk].cols());
      for (std::size_t i = 0; i < phis.size(); ++i) rho += w[i] * phis[i].densities[blk];
      dens.push_back(std::move(rho));
    }
    State mixed(phis[0].parent, std::move(dens));
    DiagonalDecomposition dec = decompose_diagonal_state(mixed, x);
    CHECK(dec.is_diagonal(1e-8));
    REQUIRE(dec.weights.size() == w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      CHECK(dec.weights[i] == doctest::Approx(w[i]).epsilon(1e-8));
  }
}

TEST_CASE("a generic product state is not diagonal") {
  QuantumSet x{{Atom{"q", 2}}};
  const HAAlgebra amb = tensor_op_algebra(ell_infty(x), ell_infty(x));
  CMatrix rho = CMatrix::Zero(4, 4);
  rho(0, 0) = 1.0;  // e_0 e_0^* x e_0 e_0^*, a pure product state
  State phi(amb, {rho});
  CHECK(!decompose_diagonal_state(phi, x).is_diagonal(1e-3));
}

TEST_CASE("pullback of states along morphisms") {
  std::mt19937_64 rng(55);
  for (int k = 0; k < 20; ++k) {
    HAAlgebra src = ell_infty(testgen::random_qset(2, 2, rng, "s"));
    WStarMorphism f = testgen::random_morphism(src, rng);
    State phi = random_state(f.target, rng);
    State pulled = pullback_state(phi, f);
    for (int t = 0; t < 5; ++t) {
      AlgebraElement a = AlgebraElement::from_coords(
          src, random_cmatrix(src.coord_dim(), 1, rng).col(0));
      CHECK(std::abs(pulled(a) - phi(f.apply(a))) < 1e-9);
    }
  }
}

TEST_CASE("morphisms_equal_via_diagonals separates morphisms") {
  std::mt19937_64 rng(56);
  HAAlgebra m = ell_infty(QuantumSet{{Atom{"a", 1}, Atom{"b", 2}}});
  WStarMorphism id = WStarMorphism::identity(m);
  CHECK(morphisms_equal_via_diagonals(id, id));

  // Conjugation by a nontrivial unitary differs from the identity.
  CMatrix u = random_unitary(2, rng);
  CMatrix act = CMatrix::Zero(m.coord_dim(), m.coord_dim());
  act(0, 0) = 1.0;
  CMatrix conj = kron(u, u.conjugate());
  act.block(1, 1, 4, 4) = conj;
  WStarMorphism ad(m, m, act);
  REQUIRE(morphism_defect(ad) < 1e-9);
  CHECK(!morphisms_equal_via_diagonals(id, ad));
  CHECK(morphisms_equal_via_diagonals(ad, ad));

  // Agreement of random pairs matches direct action comparison.
  for (int k = 0; k < 10; ++k) {
    HAAlgebra src = ell_infty(testgen::random_qset(2, 2, rng, "s"));
    WStarMorphism f = testgen::random_morphism(src, rng);
    CHECK(morphisms_equal_via_diagonals(f, f));
  }
}
