#ifndef QRELKIT_BUILDERS_HPP
#define QRELKIT_BUILDERS_HPP

#include <string>
#include <utility>
#include <vector>

#include "dqm.hpp"

/// Ground-truth DiscreteQuantumMonoid builders: classical function algebras,
/// group algebras via the regular representation, and the eight-dimensional
/// example presented by generators and relations.
namespace qrelkit {

struct NotAGroup : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A finite monoid given by its multiplication table.
struct MonoidTable {
  std::size_t n = 0;
  std::size_t unit = 0;
  std::vector<std::vector<std::size_t>> mul;

  MonoidTable() = default;
  MonoidTable(std::size_t unit_, std::vector<std::vector<std::size_t>> mul_)
      : n(mul_.size()), unit(unit_), mul(std::move(mul_)) {
    if (n == 0) throw InvalidArgument("empty monoid table");
    if (unit >= n) throw InvalidArgument("unit index out of range");
    for (const auto& row : mul) {
      if (row.size() != n) throw InvalidArgument("ragged monoid table");
      for (std::size_t v : row)
        if (v >= n) throw InvalidArgument("monoid table entry out of range");
    }
    for (std::size_t a = 0; a < n; ++a)
      if (mul[unit][a] != a || mul[a][unit] != a) throw InvalidArgument("unit law fails");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
            throw InvalidArgument("associativity fails");
  }

  /// Brute-force two-sided inverse search.
  bool is_group() const {
    for (std::size_t a = 0; a < n; ++a) {
      bool has_inverse = false;
      for (std::size_t b = 0; b < n; ++b)
        if (mul[a][b] == unit && mul[b][a] == unit) {
          has_inverse = true;
          break;
        }
      if (!has_inverse) return false;
    }
    return true;
  }

  std::size_t inverse(std::size_t a) const {
    for (std::size_t b = 0; b < n; ++b)
      if (mul[a][b] == unit && mul[b][a] == unit) return b;
    throw NotAGroup("element has no inverse");
  }
};

inline MonoidTable cyclic_table(std::size_t n) {
  std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
  return MonoidTable(0, std::move(mul));
}

inline MonoidTable klein_four_table() {
  // Z2 x Z2 with elements encoded as bit pairs.
  std::vector<std::vector<std::size_t>> mul(4, std::vector<std::size_t>(4));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) mul[a][b] = a ^ b;
  return MonoidTable(0, std::move(mul));
}

/// S3 with elements r^a f^b encoded as a + 3b, r the 3-cycle, f a flip.
inline MonoidTable s3_table() {
  std::vector<std::vector<std::size_t>> mul(6, std::vector<std::size_t>(6));
  auto enc = [](std::size_t a, std::size_t b) { return a + 3 * b; };
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t d = 0; d < 2; ++d) {
          // r^a f^b r^c f^d = r^{a + (-1)^b c} f^{b+d}
          std::size_t rot = (a + (b ? 3 - c : c)) % 3;
          mul[enc(a, b)][enc(c, d)] = enc(rot, (b + d) % 2);
        }
  return MonoidTable(0, std::move(mul));
}

/// D4 with elements r^a f^b encoded as a + 4b.
inline MonoidTable d4_table() {
  std::vector<std::vector<std::size_t>> mul(8, std::vector<std::size_t>(8));
  auto enc = [](std::size_t a, std::size_t b) { return a + 4 * b; };
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t d = 0; d < 2; ++d) {
          std::size_t rot = (a + (b ? 4 - c : c)) % 4;
          mul[enc(a, b)][enc(c, d)] = enc(rot, (b + d) % 2);
        }
  return MonoidTable(0, std::move(mul));
}

/// {0..n-1} under addition truncated at n-1; unit 0, n-1 absorbing.
inline MonoidTable truncated_add_table(std::size_t n) {
  std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mul[a][b] = std::min(a + b, n - 1);
  return MonoidTable(0, std::move(mul));
}

/// {0..n-1} under min; unit n-1, 0 absorbing.
inline MonoidTable min_table(std::size_t n) {
  std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mul[a][b] = std::min(a, b);
  return MonoidTable(n - 1, std::move(mul));
}

/// {0,1} under multiplication.
inline MonoidTable bool_and_table() { return min_table(2); }

/// {0..n-1} under multiplication mod n; a monoid, a group only for n = 1.
inline MonoidTable mod_mult_table(std::size_t n) {
  std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mul[a][b] = (a * b) % n;
  return MonoidTable(1 % n, std::move(mul));
}

/// The classical function algebra: one 1-dim atom per element, delta dual to
/// the multiplication, epsilon the evaluation at the unit.
inline DiscreteQuantumMonoid function_algebra(const MonoidTable& t) {
  std::vector<Atom> atoms;
  for (std::size_t g = 0; g < t.n; ++g) atoms.push_back({"g" + std::to_string(g), 1});
  const HAAlgebra m = ell_infty(QuantumSet{std::move(atoms)});

  CMatrix delta = CMatrix::Zero(static_cast<Eigen::Index>(t.n * t.n),
                                static_cast<Eigen::Index>(t.n));
  for (std::size_t h = 0; h < t.n; ++h)
    for (std::size_t k = 0; k < t.n; ++k)
      delta(static_cast<Eigen::Index>(h * t.n + k),
            static_cast<Eigen::Index>(t.mul[h][k])) = 1.0;
  CMatrix eps = CMatrix::Zero(1, static_cast<Eigen::Index>(t.n));
  eps(0, static_cast<Eigen::Index>(t.unit)) = 1.0;

  return {m, WStarMorphism(m, tensor_algebra(m, m), std::move(delta)),
          WStarMorphism(m, scalar_algebra(), std::move(eps))};
}

namespace detail {

/// The left regular representation as permutation matrices.
inline std::vector<CMatrix> regular_representation(const MonoidTable& t) {
  std::vector<CMatrix> out;
  for (std::size_t g = 0; g < t.n; ++g) {
    CMatrix lam = CMatrix::Zero(static_cast<Eigen::Index>(t.n), static_cast<Eigen::Index>(t.n));
    for (std::size_t h = 0; h < t.n; ++h)
      lam(static_cast<Eigen::Index>(t.mul[g][h]), static_cast<Eigen::Index>(h)) = 1.0;
    out.push_back(std::move(lam));
  }
  return out;
}

}  // namespace detail

/// The group algebra in block-diagonal form: the regular representation is
/// decomposed with wedderburn_decompose and delta(u_g) = u_g (x) u_g,
/// epsilon(u_g) = 1 are transported through the isomorphism.
inline DiscreteQuantumMonoid group_algebra(const MonoidTable& t, unsigned long long seed = 20240101) {
  if (!t.is_group()) throw NotAGroup("group_algebra requires a group table");
  std::vector<CMatrix> lams = detail::regular_representation(t);
  WedderburnDecomposition wd = wedderburn_decompose(
      lams, CMatrix::Identity(static_cast<Eigen::Index>(t.n), static_cast<Eigen::Index>(t.n)),
      1e-9, seed);

  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < wd.block_dims.size(); ++i)
    atoms.push_back({"pi" + std::to_string(i), wd.block_dims[i]});
  const HAAlgebra m = ell_infty(QuantumSet{std::move(atoms)});
  const HAAlgebra mm = tensor_algebra(m, m);

  // Coordinates of the images u_g; for a group these span M.
  CMatrix basis(m.coord_dim(), static_cast<Eigen::Index>(t.n));
  std::vector<AlgebraElement> us;
  for (std::size_t g = 0; g < t.n; ++g) {
    us.emplace_back(m, wd.apply(lams[g]));
    basis.col(static_cast<Eigen::Index>(g)) = us.back().coords();
  }
  if (basis.rows() != basis.cols() || matrix_rank(basis, 1e-8) != basis.rows())
    throw NotAGroup("regular representation images do not span the block algebra");
  CMatrix basis_inv = basis.partialPivLu().solve(CMatrix::Identity(basis.rows(), basis.rows()));

  CMatrix delta_on_us(mm.coord_dim(), static_cast<Eigen::Index>(t.n));
  CMatrix eps_on_us = CMatrix::Ones(1, static_cast<Eigen::Index>(t.n));
  for (std::size_t g = 0; g < t.n; ++g)
    delta_on_us.col(static_cast<Eigen::Index>(g)) =
        embed_tensor(us[g], us[g], false, false).coords();

  return {m, WStarMorphism(m, mm, delta_on_us * basis_inv),
          WStarMorphism(m, scalar_algebra(), eps_on_us * basis_inv)};
}

/// The eight-dimensional quantum group that is neither commutative nor
/// cocommutative, presented on unitary generators x, y, z with
///   x^2 = y^2 = 1,  xy = yx,  zx = yz,  zy = xz,  z^2 = (1 + x + y - xy)/2,
///   delta(x) = x (x) x,  delta(y) = y (x) y,
///   delta(z) = (1 (x) 1 + 1 (x) x + y (x) 1 - y (x) x)(z (x) z)/2,
///   epsilon = 1 on all three generators,
/// realized through its irreducible *-representations: the characters
/// (x, y, z) -> (1, 1, 1), (1, 1, -1), (-1, -1, i), (-1, -1, -i) and one
/// two-dimensional block x -> diag(1, -1), y -> -x, z -> the flip, the
/// latter conjugated by a seeded random unitary so the block basis is not
/// special.  The structure maps are transported off the word basis
/// {x^a y^b z^c}; the construction is validated downstream by the monoid,
/// group, and Kac checks rather than against any hardcoded table.
inline DiscreteQuantumMonoid kac_paljutkin(unsigned long long seed = 20240101) {
  std::vector<Atom> atoms;
  for (int i = 0; i < 4; ++i) atoms.push_back({"pi" + std::to_string(i), 1});
  atoms.push_back({"pi4", 2});
  const HAAlgebra m = ell_infty(QuantumSet{std::move(atoms)});
  const HAAlgebra mm = tensor_algebra(m, m);

  std::mt19937_64 rng(seed);
  const CMatrix u = random_unitary(2, rng);
  auto two = [&](double a, double b, double c, double d) {
    CMatrix t(2, 2);
    t << a, b, c, d;
    return CMatrix(u * t * u.adjoint());
  };
  auto gen = [&](std::complex<double> s0, std::complex<double> s1, std::complex<double> s2,
                 std::complex<double> s3, const CMatrix& blk) {
    AlgebraElement e = AlgebraElement::zero(m);
    e.blocks[0](0, 0) = s0;
    e.blocks[1](0, 0) = s1;
    e.blocks[2](0, 0) = s2;
    e.blocks[3](0, 0) = s3;
    e.blocks[4] = blk;
    return e;
  };
  const std::complex<double> i1(0.0, 1.0);
  const AlgebraElement gx = gen(1, 1, -1, -1, two(1, 0, 0, -1));
  const AlgebraElement gy = gen(1, 1, -1, -1, two(-1, 0, 0, 1));
  const AlgebraElement gz = gen(1, -1, i1, -i1, two(0, 1, 1, 0));

  auto word = [&](int a, int b, int c) {
    AlgebraElement w = AlgebraElement::one(m);
    if (a % 2) w = w * gx;
    if (b % 2) w = w * gy;
    if (c % 2) w = w * gz;
    return w;
  };

  CMatrix basis(m.coord_dim(), 8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        basis.col(a + 2 * b + 4 * c) = word(a, b, c).coords();
  if (matrix_rank(basis, 1e-8) != 8)
    throw InternalDisagreement("word images do not span the block algebra");
  CMatrix basis_inv = basis.partialPivLu().solve(CMatrix::Identity(8, 8));

  CMatrix delta_on_words(mm.coord_dim(), 8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      delta_on_words.col(a + 2 * b) =
          embed_tensor(word(a, b, 0), word(a, b, 0), false, false).coords();
      // (x^a y^b (x) x^a y^b)(z (x) z + z (x) xz + yz (x) z - yz (x) xz)/2
      AlgebraElement d =
          embed_tensor(word(a, b, 1), word(a, b, 1), false, false) +
          embed_tensor(word(a, b, 1), word(a + 1, b, 1), false, false) +
          embed_tensor(word(a, b + 1, 1), word(a, b, 1), false, false) -
          embed_tensor(word(a, b + 1, 1), word(a + 1, b, 1), false, false);
      delta_on_words.col(a + 2 * b + 4) = 0.5 * d.coords();
    }

  return {m, WStarMorphism(m, mm, delta_on_words * basis_inv),
          WStarMorphism(m, scalar_algebra(), CMatrix::Ones(1, 8) * basis_inv)};
}

}  // namespace qrelkit

#endif  // QRELKIT_BUILDERS_HPP
