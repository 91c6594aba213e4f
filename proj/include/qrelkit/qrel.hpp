#ifndef QRELKIT_QREL_HPP
#define QRELKIT_QREL_HPP

#include <map>
#include <utility>
#include <vector>

#include "qset.hpp"

/// Quantum relations as per-atom-pair operator subspaces, with the full
/// dagger-quantaloid structure: composition, dagger, order, lattice
/// operations, monoidal products, evaluation/coevaluation, and the function
/// predicate.
namespace qrelkit {

/// A relation X -> Y: for each (dom atom a, cod atom b) a subspace of
/// L(X_a, Y_b).  Components are stored sparsely; a missing entry is the zero
/// subspace.
struct QRelation {
  QuantumSet dom;
  QuantumSet cod;
  std::map<std::pair<std::size_t, std::size_t>, OperatorSubspace> components;

  QRelation() = default;
  QRelation(QuantumSet d, QuantumSet c) : dom(std::move(d)), cod(std::move(c)) {}

  const OperatorSubspace* find(std::size_t a, std::size_t b) const {
    auto it = components.find({a, b});
    return it == components.end() ? nullptr : &it->second;
  }

  OperatorSubspace component(std::size_t a, std::size_t b) const {
    const OperatorSubspace* s = find(a, b);
    return s ? *s : zero_subspace(dom.dim(a), cod.dim(b));
  }

  /// Drop zero components; validate shapes.
  void set(std::size_t a, std::size_t b, OperatorSubspace s) {
    if (s.dom_dim != dom.dim(a) || s.cod_dim != cod.dim(b))
      throw ShapeMismatch("relation component shape does not match atom dims");
    if (s.is_zero())
      components.erase({a, b});
    else
      components[{a, b}] = std::move(s);
  }
};

inline QRelation identity_relation(const QuantumSet& x) {
  QRelation r(x, x);
  for (std::size_t a = 0; a < x.size(); ++a) {
    OperatorSubspace s = zero_subspace(x.dim(a), x.dim(a));
    s.basis.push_back(CMatrix::Identity(x.dim(a), x.dim(a)) /
                      std::sqrt(static_cast<double>(x.dim(a))));
    r.set(a, a, std::move(s));
  }
  return r;
}

inline QRelation zero_relation(const QuantumSet& x, const QuantumSet& y) {
  return QRelation(x, y);
}

inline QRelation top_relation(const QuantumSet& x, const QuantumSet& y) {
  QRelation r(x, y);
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < y.size(); ++b) r.set(a, b, full_subspace(x.dim(a), y.dim(b)));
  return r;
}

/// Componentwise span of products through the middle quantum set.
inline QRelation compose(const QRelation& s, const QRelation& r, double tol = kDefaultTol) {
  if (!(s.dom == r.cod)) throw InvalidArgument("compose: domain mismatch");
  QRelation out(r.dom, s.cod);
  for (std::size_t a = 0; a < r.dom.size(); ++a) {
    for (std::size_t c = 0; c < s.cod.size(); ++c) {
      std::vector<CMatrix> prods;
      for (std::size_t b = 0; b < s.dom.size(); ++b) {
        const OperatorSubspace* sb = s.find(b, c);
        const OperatorSubspace* rb = r.find(a, b);
        if (!sb || !rb) continue;
        for (const auto& u : sb->basis)
          for (const auto& v : rb->basis) prods.push_back(u * v);
      }
      out.set(a, c, span(prods, r.dom.dim(a), s.cod.dim(c), tol));
    }
  }
  return out;
}

/// Componentwise adjoints; involutive and contravariant.
inline QRelation dagger(const QRelation& r, double tol = kDefaultTol) {
  QRelation out(r.cod, r.dom);
  for (const auto& [key, sub] : r.components) {
    std::vector<CMatrix> adj;
    for (const auto& m : sub.basis) adj.push_back(m.adjoint());
    out.set(key.second, key.first, span(adj, sub.cod_dim, sub.dom_dim, tol));
  }
  return out;
}

inline double leq_residual(const QRelation& r, const QRelation& s) {
  if (!(r.dom == s.dom) || !(r.cod == s.cod)) throw InvalidArgument("leq: type mismatch");
  double worst = 0.0;
  for (const auto& [key, sub] : r.components)
    worst = std::max(worst, leq_residual(sub, s.component(key.first, key.second)));
  return worst;
}

inline bool leq(const QRelation& r, const QRelation& s, double tol = kDefaultTol) {
  return leq_residual(r, s) <= tol;
}

inline bool rel_eq(const QRelation& r, const QRelation& s, double tol = kDefaultTol) {
  return leq(r, s, tol) && leq(s, r, tol);
}

inline double rel_eq_residual(const QRelation& r, const QRelation& s) {
  return std::max(leq_residual(r, s), leq_residual(s, r));
}

inline QRelation join(const QRelation& r, const QRelation& s, double tol = kDefaultTol) {
  if (!(r.dom == s.dom) || !(r.cod == s.cod)) throw InvalidArgument("join: type mismatch");
  QRelation out(r.dom, r.cod);
  for (std::size_t a = 0; a < r.dom.size(); ++a)
    for (std::size_t b = 0; b < r.cod.size(); ++b)
      out.set(a, b, subspace_sum(r.component(a, b), s.component(a, b), tol));
  return out;
}

inline QRelation meet(const QRelation& r, const QRelation& s, double tol = kDefaultTol) {
  if (!(r.dom == s.dom) || !(r.cod == s.cod)) throw InvalidArgument("meet: type mismatch");
  QRelation out(r.dom, r.cod);
  for (const auto& [key, sub] : r.components) {
    const OperatorSubspace* other = s.find(key.first, key.second);
    if (!other) continue;
    out.set(key.first, key.second, subspace_intersect(sub, *other, tol));
  }
  return out;
}

/// Monoidal product: componentwise Kronecker products of bases.
inline QRelation rel_product(const QRelation& r, const QRelation& s, double tol = kDefaultTol) {
  QRelation out(cartesian_product(r.dom, s.dom), cartesian_product(r.cod, s.cod));
  for (const auto& [rk, rsub] : r.components) {
    for (const auto& [sk, ssub] : s.components) {
      std::vector<CMatrix> mats;
      for (const auto& u : rsub.basis)
        for (const auto& v : ssub.basis) mats.push_back(kron(u, v));
      std::size_t a = product_atom_index(r.dom, s.dom, rk.first, sk.first);
      std::size_t b = product_atom_index(r.cod, s.cod, rk.second, sk.second);
      // With unit elision two distinct component pairs can land on the same
      // product atom pair only through zero-dim factors, so plain set is safe.
      out.set(a, b, span(mats, out.dom.dim(a), out.cod.dim(b), tol));
    }
  }
  return out;
}

/// Evaluation X* x X -> 1 of the rigid structure.  The only nonzero
/// components pair an atom with its dual and are spanned by the functional
/// dual to the dual-basis vector, which under row-major vectorization is the
/// identity matrix.
inline QRelation ev_relation(const QuantumSet& x) {
  QRelation r(cartesian_product(dual_qset(x), x), unit_qset());
  for (std::size_t a = 0; a < x.size(); ++a) {
    const Eigen::Index n = x.dim(a);
    std::size_t pair = product_atom_index(dual_qset(x), x, a, a);
    OperatorSubspace s = zero_subspace(n * n, 1);
    CMatrix db = vec_row(CMatrix::Identity(n, n)).transpose();
    s.basis.push_back(db / db.norm());
    r.set(pair, 0, std::move(s));
  }
  return r;
}

inline QRelation coev_relation(const QuantumSet& x) { return dagger(ev_relation(x)); }

/// id_Y >= R R-dagger and id_X <= R-dagger R.
inline bool is_function(const QRelation& r, double tol = kDefaultTol) {
  QRelation rd = dagger(r);
  return leq(compose(r, rd, tol), identity_relation(r.cod), tol) &&
         leq(identity_relation(r.dom), compose(rd, r, tol), tol);
}

}  // namespace qrelkit

#endif  // QRELKIT_QREL_HPP
