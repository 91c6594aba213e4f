#ifndef QRELKIT_CORR_HPP
#define QRELKIT_CORR_HPP

#include <optional>
#include <utility>
#include <vector>

#include "qrel.hpp"

/// The three-way correspondence between quantum relations, projections in
/// M (x) N^op, and (for functions) W*-morphisms.
namespace qrelkit {

struct NotAFunction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A linear map between HAAlgebras, stored as one matrix acting on the
/// concatenated row-vectorized block coordinates.  Whether it is a unital
/// normal *-homomorphism is a checkable property, not an assumption.
struct WStarMorphism {
  HAAlgebra source;
  HAAlgebra target;
  CMatrix action;  // target.coord_dim() x source.coord_dim()

  WStarMorphism() = default;
  WStarMorphism(HAAlgebra src, HAAlgebra tgt, CMatrix act)
      : source(std::move(src)), target(std::move(tgt)), action(std::move(act)) {
    if (action.rows() != target.coord_dim() || action.cols() != source.coord_dim())
      throw InvalidArgument("morphism action shape does not match algebras");
  }

  static WStarMorphism identity(const HAAlgebra& alg) {
    return WStarMorphism(alg, alg, CMatrix::Identity(alg.coord_dim(), alg.coord_dim()));
  }

  AlgebraElement apply(const AlgebraElement& x) const {
    if (!(x.parent == source)) throw InvalidArgument("morphism applied to wrong algebra");
    return AlgebraElement::from_coords(target, action * x.coords());
  }
};

inline WStarMorphism compose(const WStarMorphism& g, const WStarMorphism& f) {
  if (!(g.source == f.target)) throw InvalidArgument("morphism compose: type mismatch");
  return WStarMorphism(f.source, g.target, g.action * f.action);
}

/// Matrix units of one block, embedded as algebra elements.
inline AlgebraElement matrix_unit(const HAAlgebra& alg, std::size_t block, Eigen::Index p,
                                  Eigen::Index q) {
  AlgebraElement e = AlgebraElement::zero(alg);
  e.blocks[block](p, q) = 1.0;
  return e;
}

/// Worst residual of the W*-morphism laws (unitality, *-preservation, and
/// multiplicativity on matrix-unit generators).
inline double morphism_defect(const WStarMorphism& f) {
  double worst = (f.apply(AlgebraElement::one(f.source)) - AlgebraElement::one(f.target)).norm();
  std::vector<AlgebraElement> units;
  std::vector<AlgebraElement> images;
  for (std::size_t i = 0; i < f.source.size(); ++i)
    for (Eigen::Index p = 0; p < f.source.dim(i); ++p)
      for (Eigen::Index q = 0; q < f.source.dim(i); ++q) {
        units.push_back(matrix_unit(f.source, i, p, q));
        images.push_back(f.apply(units.back()));
      }
  for (std::size_t u = 0; u < units.size(); ++u) {
    worst = std::max(worst, (f.apply(units[u].adjoint()) - images[u].adjoint()).norm());
    for (std::size_t v = 0; v < units.size(); ++v) {
      worst = std::max(worst, (f.apply(units[u] * units[v]) - images[u] * images[v]).norm());
    }
  }
  return worst;
}

inline bool is_wstar_morphism(const WStarMorphism& f, double tol = kDefaultTol) {
  return morphism_defect(f) <= tol;
}

/// f (x) g on the tensor algebra.  The source/target `op` flags say which
/// factors are embedded with a transpose (opposite-algebra bookkeeping); the
/// underlying maps f and g are applied to the plain (untransposed) factors.
inline WStarMorphism tensor_morphism(const WStarMorphism& f, const WStarMorphism& g,
                                     bool src_first_op = false, bool src_second_op = false,
                                     bool tgt_first_op = false, bool tgt_second_op = false) {
  const QuantumSet sf = qset_of(f.source);
  const QuantumSet sg = qset_of(g.source);
  const HAAlgebra src = ell_infty(cartesian_product(src_first_op ? dual_qset(sf) : sf,
                                                    src_second_op ? dual_qset(sg) : sg));
  const QuantumSet tf = qset_of(f.target);
  const QuantumSet tg = qset_of(g.target);
  const HAAlgebra tgt = ell_infty(cartesian_product(tgt_first_op ? dual_qset(tf) : tf,
                                                    tgt_second_op ? dual_qset(tg) : tg));

  CMatrix act = CMatrix::Zero(tgt.coord_dim(), src.coord_dim());
  Eigen::Index col = 0;
  const bool f_unit = is_unit_qset(sf);
  const bool g_unit = is_unit_qset(sg);

  auto column_for = [&](const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement fa = f.apply(a);
    AlgebraElement gb = g.apply(b);
    return embed_tensor(fa, gb, tgt_first_op, tgt_second_op).coords();
  };

  if (f_unit) {
    for (std::size_t j = 0; j < g.source.size(); ++j)
      for (Eigen::Index r = 0; r < g.source.dim(j); ++r)
        for (Eigen::Index s = 0; s < g.source.dim(j); ++s) {
          AlgebraElement b = matrix_unit(g.source, j, src_second_op ? s : r, src_second_op ? r : s);
          act.col(col++) = column_for(AlgebraElement::one(f.source), b);
        }
  } else if (g_unit) {
    for (std::size_t i = 0; i < f.source.size(); ++i)
      for (Eigen::Index p = 0; p < f.source.dim(i); ++p)
        for (Eigen::Index q = 0; q < f.source.dim(i); ++q) {
          AlgebraElement a = matrix_unit(f.source, i, src_first_op ? q : p, src_first_op ? p : q);
          act.col(col++) = column_for(a, AlgebraElement::one(g.source));
        }
  } else {
    // Source coordinates run over blocks (i,j) with entries ((p r),(q s));
    // the ((p r),(q s)) unit decodes as X (x) Y with X = e_pq, Y = e_rs, and
    // an op flag undoes the transpose baked into the embedding.
    for (std::size_t i = 0; i < f.source.size(); ++i)
      for (std::size_t j = 0; j < g.source.size(); ++j)
        for (Eigen::Index p = 0; p < f.source.dim(i); ++p)
          for (Eigen::Index r = 0; r < g.source.dim(j); ++r)
            for (Eigen::Index q = 0; q < f.source.dim(i); ++q)
              for (Eigen::Index s = 0; s < g.source.dim(j); ++s) {
                AlgebraElement a =
                    matrix_unit(f.source, i, src_first_op ? q : p, src_first_op ? p : q);
                AlgebraElement b =
                    matrix_unit(g.source, j, src_second_op ? s : r, src_second_op ? r : s);
                act.col(col++) = column_for(a, b);
              }
  }
  return WStarMorphism(src, tgt, std::move(act));
}

/// The relation psi-hat associated with psi: ell_infty(Y) -> ell_infty(X):
/// component (a in X, b in Y) is the space of intertwiners
/// { T : u T = T psi(u) for all u in block b of ell_infty(Y) }.
inline QRelation morphism_to_relation(const WStarMorphism& psi, double tol = kDefaultTol) {
  const QuantumSet x = qset_of(psi.target);
  const QuantumSet y = qset_of(psi.source);
  QRelation rel(x, y);
  // All matrix units of the source with their images, tagged by block.
  std::vector<std::tuple<std::size_t, CMatrix, std::vector<CMatrix>>> unit_images;
  for (std::size_t b = 0; b < y.size(); ++b) {
    const Eigen::Index nb = y.dim(b);
    for (Eigen::Index r = 0; r < nb; ++r)
      for (Eigen::Index s = 0; s < nb; ++s) {
        AlgebraElement img = psi.apply(matrix_unit(psi.source, b, r, s));
        CMatrix u = CMatrix::Zero(nb, nb);
        u(r, s) = 1.0;
        unit_images.emplace_back(b, std::move(u), std::move(img.blocks));
      }
  }
  for (std::size_t b = 0; b < y.size(); ++b) {
    const Eigen::Index nb = y.dim(b);
    for (std::size_t a = 0; a < x.size(); ++a) {
      const Eigen::Index na = x.dim(a);
      CMatrix constraints(static_cast<Eigen::Index>(unit_images.size()) * nb * na, nb * na);
      Eigen::Index row = 0;
      for (const auto& [ub, u, img] : unit_images) {
        // a_b T - T psi(a)_a = 0 over vec_row(T), with a_b zero when the
        // unit lives in another block.
        CMatrix lhs = ub == b ? kron(u, CMatrix::Identity(na, na))
                              : CMatrix(CMatrix::Zero(nb * na, nb * na));
        constraints.middleRows(row, nb * na) =
            lhs - kron(CMatrix::Identity(nb, nb), img[a].transpose());
        row += nb * na;
      }
      std::vector<CVector> null = nullspace(constraints, tol);
      std::vector<CMatrix> basis;
      for (const auto& v : null) basis.push_back(unvec_row(v, nb, na));
      rel.set(a, b, span(basis, na, nb, tol));
    }
  }
  return rel;
}

/// Inverse of morphism_to_relation on functions: reconstructs psi(u) per
/// block by solving the intertwiner constraints, then validates.
inline WStarMorphism relation_to_morphism(const QRelation& f, bool require_function = true,
                                          double tol = kDefaultTol) {
  if (require_function && !is_function(f, tol))
    throw NotAFunction("relation fails the function predicate");
  const HAAlgebra src = ell_infty(f.cod);
  const HAAlgebra tgt = ell_infty(f.dom);
  CMatrix action = CMatrix::Zero(tgt.coord_dim(), src.coord_dim());

  Eigen::Index col = 0;
  for (std::size_t b = 0; b < f.cod.size(); ++b) {
    const Eigen::Index nb = f.cod.dim(b);
    for (Eigen::Index r = 0; r < nb; ++r)
      for (Eigen::Index s = 0; s < nb; ++s) {
        CMatrix u = CMatrix::Zero(nb, nb);
        u(r, s) = 1.0;
        AlgebraElement img = AlgebraElement::zero(tgt);
        for (std::size_t a = 0; a < f.dom.size(); ++a) {
          const Eigen::Index na = f.dom.dim(a);
          // Constraints over m = psi(u)_a:  T m = u_{b'} T for every basis T
          // of every component (a, b'), with u supported on block b.
          // vec_row(T m) = (T (x) I_na) vec_row(m).
          Eigen::Index rows = 0;
          std::vector<CMatrix> lhs;
          std::vector<CVector> rhs_parts;
          for (std::size_t b2 = 0; b2 < f.cod.size(); ++b2) {
            const OperatorSubspace* sub = f.find(a, b2);
            if (!sub) continue;
            for (const auto& t : sub->basis) {
              lhs.push_back(kron(t, CMatrix::Identity(na, na)));
              rhs_parts.push_back(vec_row(b2 == b ? (u * t).eval()
                                                  : CMatrix::Zero(f.cod.dim(b2), na).eval()));
              rows += lhs.back().rows();
            }
          }
          if (rows == 0) continue;
          CMatrix sys(rows, na * na);
          CVector rhs(rows);
          Eigen::Index pos = 0;
          for (std::size_t k = 0; k < lhs.size(); ++k) {
            sys.middleRows(pos, lhs[k].rows()) = lhs[k];
            rhs.segment(pos, rhs_parts[k].size()) = rhs_parts[k];
            pos += lhs[k].rows();
          }
          LinearSolution sol = solve_linear(sys, rhs);
          if (!sol.consistent(std::max(tol, 1e-8)))
            throw NotAFunction("intertwiner system is inconsistent");
          img.blocks[a] = unvec_row(sol.solution, na, na);
        }
        action.col(col++) = img.coords();
      }
  }
  WStarMorphism psi(src, tgt, std::move(action));
  if (require_function && !rel_eq(morphism_to_relation(psi, tol), f, std::max(tol, 1e-7)))
    throw NotAFunction("reconstructed morphism does not reproduce the relation");
  return psi;
}

namespace detail {

/// Action of a tensor-op block element c on x in L(X_a, Y_b): x . (u (x) v)
/// = v x u, extended linearly.  `c` is given in the Kronecker embedding
/// kron(u, v^T); the output is the matrix of x -> x.c over vec_row(x).
inline CMatrix right_action_matrix(const CMatrix& c, Eigen::Index na, Eigen::Index nb) {
  CMatrix t = CMatrix::Zero(nb * na, nb * na);
  // T[(u,v),(w,z)] = C[(z w),(v u)] for output index (u,v), input (w,z).
  for (Eigen::Index u = 0; u < nb; ++u)
    for (Eigen::Index v = 0; v < na; ++v)
      for (Eigen::Index w = 0; w < nb; ++w)
        for (Eigen::Index z = 0; z < na; ++z)
          t(u * na + v, w * na + z) = c(z * nb + w, v * nb + u);
  return t;
}

}  // namespace detail

/// The projection P with Ann(R) = (1-P)A in A = ell_infty(X) (x)
/// ell_infty(Y)^op, computed blockwise from the annihilator right ideal of
/// each component under the action x.(u (x) v) = v x u.
inline ProjectionElement relation_to_projection(const QRelation& r, double tol = kDefaultTol) {
  const HAAlgebra alg = tensor_op_algebra(ell_infty(r.dom), ell_infty(r.cod));
  std::vector<CMatrix> blocks;
  for (std::size_t a = 0; a < r.dom.size(); ++a) {
    const Eigen::Index na = r.dom.dim(a);
    for (std::size_t b = 0; b < r.cod.size(); ++b) {
      const Eigen::Index nb = r.cod.dim(b);
      const Eigen::Index d = na * nb;
      const OperatorSubspace sub = r.component(a, b);
      if (sub.is_zero()) {
        blocks.push_back(CMatrix::Zero(d, d));
        continue;
      }
      // Annihilator: c with x.c = 0 for all x in the component.
      CMatrix constraints =
          CMatrix::Zero(static_cast<Eigen::Index>(sub.basis.size()) * d, d * d);
      Eigen::Index row = 0;
      for (const auto& x : sub.basis) {
        CVector vx = vec_row(x);
        for (Eigen::Index out = 0; out < d; ++out) {
          const Eigen::Index u = out / na;
          const Eigen::Index v = out % na;
          for (Eigen::Index in = 0; in < d; ++in) {
            const Eigen::Index w = in / na;
            const Eigen::Index z = in % na;
            // coefficient of C[(z w),(v u)] is x[w,z]
            constraints(row + out, (z * nb + w) * d + (v * nb + u)) = vx(w * na + z);
          }
        }
        row += d;
      }
      std::vector<CVector> ann = nullspace(constraints, tol);
      std::vector<CMatrix> ann_mats;
      for (const auto& c : ann) ann_mats.push_back(unvec_row(c, d, d));
      CMatrix support = column_space_projection(ann_mats, d, tol);
      blocks.push_back(CMatrix::Identity(d, d) - support);
    }
  }
  return ProjectionElement(AlgebraElement(alg, std::move(blocks)), std::max(tol, 1e-7));
}

/// Inverse direction: component (a,b) is the image of L(X_a, Y_b) under the
/// right action of p.
inline QRelation projection_to_relation(const ProjectionElement& p, const QuantumSet& x,
                                        const QuantumSet& y, double tol = kDefaultTol) {
  if (!(p.element.parent == tensor_op_algebra(ell_infty(x), ell_infty(y))))
    throw InvalidArgument("projection does not live in ell(X) (x) ell(Y)^op");
  QRelation rel(x, y);
  std::size_t blk = 0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const Eigen::Index na = x.dim(a);
    for (std::size_t b = 0; b < y.size(); ++b, ++blk) {
      const Eigen::Index nb = y.dim(b);
      CMatrix act = detail::right_action_matrix(p.element.blocks[blk], na, nb);
      std::vector<CMatrix> images;
      for (Eigen::Index i = 0; i < nb * na; ++i) {
        CVector e = CVector::Zero(nb * na);
        e[i] = 1.0;
        images.push_back(unvec_row(act * e, nb, na));
      }
      rel.set(a, b, span(images, na, nb, tol));
    }
  }
  return rel;
}

/// (psi_l (x) psi_r)(P_R) = P_{psi_r-hat-dagger o R o psi_l-hat}.
inline bool pushforward_check(const WStarMorphism& psi_l, const WStarMorphism& psi_r,
                              const QRelation& r, double tol = 1e-8) {
  if (!(psi_l.source == ell_infty(r.dom)) || !(psi_r.source == ell_infty(r.cod)))
    throw InvalidArgument("pushforward_check: type mismatch");
  ProjectionElement pr = relation_to_projection(r);
  WStarMorphism big = tensor_morphism(psi_l, psi_r, false, true, false, true);
  AlgebraElement lhs = big.apply(pr.element);
  QRelation pushed = compose(dagger(morphism_to_relation(psi_r)),
                             compose(r, morphism_to_relation(psi_l)));
  AlgebraElement rhs = relation_to_projection(pushed).element;
  return (lhs - rhs).norm() <= tol;
}

/// Common support of { T . im(p) : T intertwiner } equals psi(p), for
/// psi: N -> M and a projection p in N.
inline bool support_image_check(const WStarMorphism& psi, const ProjectionElement& p,
                                double tol = 1e-8) {
  if (!(p.element.parent == psi.source)) throw InvalidArgument("projection not in source");
  AlgebraElement image = psi.apply(p.element);
  const QuantumSet xn = qset_of(psi.source);
  const QuantumSet xm = qset_of(psi.target);
  // Intertwiners T : K_j -> H_i with T n = psi(n) T.
  for (std::size_t i = 0; i < xm.size(); ++i) {
    const Eigen::Index ni = xm.dim(i);
    std::vector<CMatrix> column_spans;
    for (std::size_t j = 0; j < xn.size(); ++j) {
      const Eigen::Index nj = xn.dim(j);
      std::vector<CMatrix> constraint_rows;
      for (std::size_t j2 = 0; j2 < xn.size(); ++j2)
        for (Eigen::Index r = 0; r < xn.dim(j2); ++r)
          for (Eigen::Index s = 0; s < xn.dim(j2); ++s) {
            AlgebraElement img = psi.apply(matrix_unit(psi.source, j2, r, s));
            // T u_j - psi(u)_i T = 0 over vec_row(T); u_j vanishes for
            // units from other blocks.
            CMatrix rhs = kron(img.blocks[i], CMatrix::Identity(nj, nj));
            if (j2 == j) {
              CMatrix u = CMatrix::Zero(nj, nj);
              u(r, s) = 1.0;
              constraint_rows.push_back(kron(CMatrix::Identity(ni, ni), u.transpose()) - rhs);
            } else {
              constraint_rows.push_back(-rhs);
            }
          }
      CMatrix sys(static_cast<Eigen::Index>(constraint_rows.size()) * ni * nj, ni * nj);
      for (std::size_t k = 0; k < constraint_rows.size(); ++k)
        sys.middleRows(static_cast<Eigen::Index>(k) * ni * nj, ni * nj) = constraint_rows[k];
      for (const auto& v : nullspace(sys)) {
        CMatrix t = unvec_row(v, ni, nj);
        column_spans.push_back(t * p.element.blocks[j]);
      }
    }
    CMatrix support = column_space_projection(column_spans, ni);
    if ((support - image.blocks[i]).norm() > tol) return false;
  }
  return true;
}

}  // namespace qrelkit

#endif  // QRELKIT_CORR_HPP
