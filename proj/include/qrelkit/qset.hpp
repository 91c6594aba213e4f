#ifndef QRELKIT_QSET_HPP
#define QRELKIT_QSET_HPP

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "numlin.hpp"

/// Quantum sets (finite families of labeled finite-dimensional Hilbert-space
/// atoms), their duals and Cartesian products, and the associated finite
/// products of matrix algebras.
namespace qrelkit {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Atom {
  std::string label;
  Eigen::Index dim = 1;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.label == b.label && a.dim == b.dim;
  }
};

/// Label of the canonical monoidal-unit atom.  Cartesian products elide this
/// atom, which makes the monoidal structure strict.
inline const std::string kUnitLabel = "1";

/// An ordered finite family of atoms with unique labels.  Atom order is
/// significant and preserved by all constructors.
struct QuantumSet {
  std::vector<Atom> atoms;

  QuantumSet() = default;
  explicit QuantumSet(std::vector<Atom> a) : atoms(std::move(a)) { validate(); }

  void validate() const {
    if (atoms.empty()) throw InvalidArgument("quantum set must have at least one atom");
    std::set<std::string> seen;
    for (const auto& atom : atoms) {
      if (atom.dim < 1) throw InvalidArgument("atom dimension must be positive");
      if (!seen.insert(atom.label).second)
        throw InvalidArgument("duplicate atom label: " + atom.label);
    }
  }

  std::size_t size() const { return atoms.size(); }
  Eigen::Index dim(std::size_t i) const { return atoms[i].dim; }
  const std::string& label(std::size_t i) const { return atoms[i].label; }

  friend bool operator==(const QuantumSet& a, const QuantumSet& b) { return a.atoms == b.atoms; }
};

inline QuantumSet unit_qset() { return QuantumSet{{Atom{kUnitLabel, 1}}}; }

inline bool is_unit_qset(const QuantumSet& x) {
  return x.atoms.size() == 1 && x.atoms[0].label == kUnitLabel && x.atoms[0].dim == 1;
}

inline std::string dual_label(const std::string& label) {
  if (label == kUnitLabel) return label;  // the monoidal unit is self-dual
  if (!label.empty() && label.back() == '*') return label.substr(0, label.size() - 1);
  return label + "*";
}

/// Dual quantum set: same dimensions, labels toggled by the star marker.
/// Involutive: dual_qset(dual_qset(x)) == x.
inline QuantumSet dual_qset(const QuantumSet& x) {
  QuantumSet out;
  out.atoms.reserve(x.atoms.size());
  for (const auto& a : x.atoms) out.atoms.push_back(Atom{dual_label(a.label), a.dim});
  return out;
}

/// Cartesian (monoidal) product.  Atoms are indexed by pairs in lexicographic
/// order with dim products; the canonical unit is a strict unit.
inline QuantumSet cartesian_product(const QuantumSet& x, const QuantumSet& y) {
  if (is_unit_qset(x)) return y;
  if (is_unit_qset(y)) return x;
  QuantumSet out;
  out.atoms.reserve(x.atoms.size() * y.atoms.size());
  for (const auto& a : x.atoms)
    for (const auto& b : y.atoms)
      out.atoms.push_back(Atom{a.label + "\xE2\x8A\x97" + b.label, a.dim * b.dim});
  return out;
}

/// Index of the product atom built from atom i of x and atom j of y,
/// accounting for unit elision.
inline std::size_t product_atom_index(const QuantumSet& x, const QuantumSet& y, std::size_t i,
                                      std::size_t j) {
  if (is_unit_qset(x)) return j;
  if (is_unit_qset(y)) return i;
  return i * y.atoms.size() + j;
}

/// A finite product of matrix algebras, one block per labeled atom.
struct HAAlgebra {
  std::vector<Atom> blocks;

  HAAlgebra() = default;
  explicit HAAlgebra(std::vector<Atom> b) : blocks(std::move(b)) {
    if (blocks.empty()) throw InvalidArgument("algebra must have at least one block");
  }

  std::size_t size() const { return blocks.size(); }
  Eigen::Index dim(std::size_t i) const { return blocks[i].dim; }

  /// Total dimension of the coordinate space (sum of squared block sizes).
  Eigen::Index coord_dim() const {
    Eigen::Index total = 0;
    for (const auto& b : blocks) total += b.dim * b.dim;
    return total;
  }

  Eigen::Index coord_offset(std::size_t i) const {
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < i; ++k) off += blocks[k].dim * blocks[k].dim;
    return off;
  }

  friend bool operator==(const HAAlgebra& a, const HAAlgebra& b) { return a.blocks == b.blocks; }
};

inline HAAlgebra ell_infty(const QuantumSet& x) { return HAAlgebra{x.atoms}; }

inline QuantumSet qset_of(const HAAlgebra& m) { return QuantumSet{m.blocks}; }

inline HAAlgebra scalar_algebra() { return ell_infty(unit_qset()); }

/// M (x) N with blocks indexed by pairs; elements embed via Kronecker
/// products (see embed_tensor).
inline HAAlgebra tensor_algebra(const HAAlgebra& m, const HAAlgebra& n) {
  return ell_infty(cartesian_product(qset_of(m), qset_of(n)));
}

/// M (x) N^op.  Block structure as for the plain tensor but with dual labels
/// on the second factor; elements embed with the second Kronecker factor
/// transposed, which realizes the opposite multiplication.
inline HAAlgebra tensor_op_algebra(const HAAlgebra& m, const HAAlgebra& n) {
  return ell_infty(cartesian_product(qset_of(m), dual_qset(qset_of(n))));
}

inline HAAlgebra op_tensor_algebra(const HAAlgebra& m, const HAAlgebra& n) {
  return ell_infty(cartesian_product(dual_qset(qset_of(m)), qset_of(n)));
}

/// A block-diagonal element of an HAAlgebra.
struct AlgebraElement {
  HAAlgebra parent;
  std::vector<CMatrix> blocks;

  AlgebraElement() = default;
  AlgebraElement(HAAlgebra alg, std::vector<CMatrix> b)
      : parent(std::move(alg)), blocks(std::move(b)) {
    if (blocks.size() != parent.size())
      throw InvalidArgument("element block count does not match algebra");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (blocks[i].rows() != parent.dim(i) || blocks[i].cols() != parent.dim(i))
        throw InvalidArgument("element block shape does not match algebra");
    }
  }

  static AlgebraElement zero(const HAAlgebra& alg) {
    std::vector<CMatrix> b;
    for (const auto& blk : alg.blocks) b.push_back(CMatrix::Zero(blk.dim, blk.dim));
    return AlgebraElement(alg, std::move(b));
  }

  static AlgebraElement one(const HAAlgebra& alg) {
    std::vector<CMatrix> b;
    for (const auto& blk : alg.blocks) b.push_back(CMatrix::Identity(blk.dim, blk.dim));
    return AlgebraElement(alg, std::move(b));
  }

  CVector coords() const {
    CVector v(parent.coord_dim());
    Eigen::Index off = 0;
    for (const auto& b : blocks) {
      v.segment(off, b.size()) = vec_row(b);
      off += b.size();
    }
    return v;
  }

  static AlgebraElement from_coords(const HAAlgebra& alg, const CVector& v) {
    if (v.size() != alg.coord_dim()) throw InvalidArgument("coordinate size mismatch");
    std::vector<CMatrix> b;
    Eigen::Index off = 0;
    for (const auto& blk : alg.blocks) {
      b.push_back(unvec_row(v.segment(off, blk.dim * blk.dim), blk.dim, blk.dim));
      off += blk.dim * blk.dim;
    }
    return AlgebraElement(alg, std::move(b));
  }

  AlgebraElement adjoint() const {
    std::vector<CMatrix> b;
    for (const auto& blk : blocks) b.push_back(blk.adjoint());
    return AlgebraElement(parent, std::move(b));
  }

  double norm() const {
    double s = 0.0;
    for (const auto& b : blocks) s += b.squaredNorm();
    return std::sqrt(s);
  }

  double trace_real() const {
    cxd t = 0.0;
    for (const auto& b : blocks) t += b.trace();
    return t.real();
  }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    check_same(a, b);
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) out.push_back(a.blocks[i] + b.blocks[i]);
    return AlgebraElement(a.parent, std::move(out));
  }

  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    check_same(a, b);
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) out.push_back(a.blocks[i] - b.blocks[i]);
    return AlgebraElement(a.parent, std::move(out));
  }

  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    check_same(a, b);
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) out.push_back(a.blocks[i] * b.blocks[i]);
    return AlgebraElement(a.parent, std::move(out));
  }

  friend AlgebraElement operator*(const cxd& c, const AlgebraElement& a) {
    std::vector<CMatrix> out;
    for (const auto& blk : a.blocks) out.push_back(c * blk);
    return AlgebraElement(a.parent, std::move(out));
  }

 private:
  static void check_same(const AlgebraElement& a, const AlgebraElement& b) {
    if (!(a.parent == b.parent)) throw InvalidArgument("algebra mismatch");
  }
};

/// p with p^2 = p = p^* blockwise to tol.
inline double projection_defect(const AlgebraElement& p) {
  double worst = 0.0;
  for (const auto& b : p.blocks) {
    worst = std::max(worst, (b * b - b).norm());
    worst = std::max(worst, (b - b.adjoint()).norm());
  }
  return worst;
}

struct InvalidProjection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProjectionElement {
  AlgebraElement element;

  ProjectionElement() = default;
  explicit ProjectionElement(AlgebraElement e, double tol = kDefaultTol)
      : element(std::move(e)) {
    if (projection_defect(element) > tol)
      throw InvalidProjection("element is not a projection to tolerance");
  }

  static ProjectionElement zero(const HAAlgebra& alg) {
    return ProjectionElement(AlgebraElement::zero(alg));
  }
  static ProjectionElement one(const HAAlgebra& alg) {
    return ProjectionElement(AlgebraElement::one(alg));
  }
};

/// Projection order p <= q, i.e. pq = p to tolerance.
inline bool projection_leq(const ProjectionElement& p, const ProjectionElement& q,
                           double tol = kDefaultTol) {
  return (p.element * q.element - p.element).norm() <= tol;
}

/// Embed a (x) b into the tensor algebra.  With `second_op` (resp.
/// `first_op`) the corresponding Kronecker factor is transposed, realizing
/// the opposite multiplication: (a (x) b)(a' (x) b') = aa' (x) b'b.
inline AlgebraElement embed_tensor(const AlgebraElement& a, const AlgebraElement& b,
                                   bool first_op = false, bool second_op = false) {
  const QuantumSet qa = qset_of(a.parent);
  const QuantumSet qb = qset_of(b.parent);
  const HAAlgebra target = ell_infty(cartesian_product(first_op ? dual_qset(qa) : qa,
                                                       second_op ? dual_qset(qb) : qb));
  std::vector<CMatrix> blocks;
  for (std::size_t i = 0; i < a.parent.size(); ++i) {
    CMatrix ai = first_op ? CMatrix(a.blocks[i].transpose()) : a.blocks[i];
    for (std::size_t j = 0; j < b.parent.size(); ++j) {
      CMatrix bj = second_op ? CMatrix(b.blocks[j].transpose()) : b.blocks[j];
      blocks.push_back(kron(ai, bj));
    }
  }
  // Unit elision: a scalar factor contributes trivially and the product
  // algebra collapses onto the other factor.
  if (is_unit_qset(qset_of(a.parent))) {
    cxd c = a.blocks[0](0, 0);
    std::vector<CMatrix> collapsed;
    for (std::size_t j = 0; j < b.parent.size(); ++j)
      collapsed.push_back(c * (second_op ? CMatrix(b.blocks[j].transpose()) : b.blocks[j]));
    return AlgebraElement(target, std::move(collapsed));
  }
  if (is_unit_qset(qset_of(b.parent))) {
    cxd c = b.blocks[0](0, 0);
    std::vector<CMatrix> collapsed;
    for (std::size_t i = 0; i < a.parent.size(); ++i)
      collapsed.push_back(c * (first_op ? CMatrix(a.blocks[i].transpose()) : a.blocks[i]));
    return AlgebraElement(target, std::move(collapsed));
  }
  return AlgebraElement(target, std::move(blocks));
}

/// Partial traces of a block of a tensor(-op) algebra element, viewing the
/// block as an operator on C^{d1} (x) C^{d2}.
inline CMatrix partial_trace_second(const CMatrix& x, Eigen::Index d1, Eigen::Index d2) {
  CMatrix out = CMatrix::Zero(d1, d1);
  for (Eigen::Index p = 0; p < d1; ++p)
    for (Eigen::Index q = 0; q < d1; ++q)
      for (Eigen::Index r = 0; r < d2; ++r) out(p, q) += x(p * d2 + r, q * d2 + r);
  return out;
}

inline CMatrix partial_trace_first(const CMatrix& x, Eigen::Index d1, Eigen::Index d2) {
  CMatrix out = CMatrix::Zero(d2, d2);
  for (Eigen::Index r = 0; r < d2; ++r)
    for (Eigen::Index s = 0; s < d2; ++s)
      for (Eigen::Index p = 0; p < d1; ++p) out(r, s) += x(p * d2 + r, p * d2 + s);
  return out;
}

}  // namespace qrelkit

#endif  // QRELKIT_QSET_HPP
