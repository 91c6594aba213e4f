#ifndef QRELKIT_DQM_HPP
#define QRELKIT_DQM_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "states.hpp"

/// Discrete quantum monoids and groups: monoid axioms, the support-projection
/// group criterion, antipode solving, Kac-type detection three ways, and the
/// relation-level diagram batteries.
namespace qrelkit {

struct InternalDisagreement : std::logic_error {
  using std::logic_error::logic_error;
};

struct DiscreteQuantumMonoid {
  HAAlgebra m;
  WStarMorphism delta;    // m -> m (x) m
  WStarMorphism epsilon;  // m -> C

  QuantumSet qset() const { return qset_of(m); }
};

/// One named condition with its numerical margin.  For equalities and
/// inequalities `residual` is the violation (pass means small); for
/// non-vanishing conditions it is the margin (pass means large), with `pass`
/// always the authoritative bit.
struct ConditionLine {
  std::string name;
  std::string condition;
  double residual = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::vector<ConditionLine> lines;

  bool passed() const {
    for (const auto& l : lines)
      if (!l.pass) return false;
    return true;
  }

  double worst_residual() const {
    double worst = 0.0;
    for (const auto& l : lines) worst = std::max(worst, l.residual);
    return worst;
  }
};

/// Counit and comultiplication transported to relations; epsilon-hat has
/// type 1 -> X and delta-hat has type X x X -> X.
inline QRelation epsilon_hat(const DiscreteQuantumMonoid& q, double tol = kDefaultTol) {
  return morphism_to_relation(q.epsilon, tol);
}

inline QRelation delta_hat(const DiscreteQuantumMonoid& q, double tol = kDefaultTol) {
  return morphism_to_relation(q.delta, tol);
}

inline CheckReport check_monoid(const DiscreteQuantumMonoid& q, double tol = 1e-8) {
  CheckReport rep;
  auto add = [&](std::string name, std::string cond, double resid) {
    rep.lines.push_back({std::move(name), std::move(cond), resid, resid <= tol});
  };
  if (!(q.delta.source == q.m) || !(q.delta.target == tensor_algebra(q.m, q.m)) ||
      !(q.epsilon.source == q.m) || !(q.epsilon.target == scalar_algebra()))
    throw InvalidArgument("monoid structure maps have wrong types");

  add("delta_morphism", "comultiplication is a unital normal *-homomorphism",
      morphism_defect(q.delta));
  add("epsilon_morphism", "counit is a unital normal *-homomorphism", morphism_defect(q.epsilon));

  const WStarMorphism id = WStarMorphism::identity(q.m);
  CMatrix lhs = compose(tensor_morphism(q.delta, id), q.delta).action;
  CMatrix rhs = compose(tensor_morphism(id, q.delta), q.delta).action;
  add("coassociativity", "(delta (x) id) delta = (id (x) delta) delta", (lhs - rhs).norm());

  const CMatrix eye = CMatrix::Identity(q.m.coord_dim(), q.m.coord_dim());
  add("counit_left", "(epsilon (x) id) delta = id",
      (compose(tensor_morphism(q.epsilon, id), q.delta).action - eye).norm());
  add("counit_right", "(id (x) epsilon) delta = id",
      (compose(tensor_morphism(id, q.epsilon), q.delta).action - eye).norm());
  return rep;
}

/// The counit as a normal state on M; its density per block is the transpose
/// of the counit's unvectorized action row.
inline State epsilon_state(const DiscreteQuantumMonoid& q, double tol = 1e-7) {
  CVector row = q.epsilon.action.row(0);
  std::vector<CMatrix> dens;
  for (std::size_t i = 0; i < q.m.size(); ++i) {
    const Eigen::Index n = q.m.dim(i);
    dens.push_back(unvec_row(row.segment(q.m.coord_offset(i), n * n), n, n).transpose());
  }
  return State(q.m, std::move(dens), tol);
}

inline ProjectionElement counit_support(const DiscreteQuantumMonoid& q, double tol = 1e-8) {
  return support_projection(epsilon_state(q), tol);
}

struct GroupVerdict {
  bool is_group = false;
  CheckReport report;
};

/// Group criterion: with e the support projection of the counit, both
/// marginal supports of delta(e) must be full, i.e. for every atom nu the
/// row of blocks (nu, .) and the column of blocks (., nu) of delta(e) must
/// each contain a nonzero block.
inline GroupVerdict vaes_group_check(const DiscreteQuantumMonoid& q, double tol = 1e-7) {
  const ProjectionElement e = counit_support(q, tol);
  const AlgebraElement de = q.delta.apply(e.element);
  const std::size_t n = q.m.size();
  GroupVerdict out;
  for (std::size_t nu = 0; nu < n; ++nu) {
    double left = 0.0;
    double right = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      left = std::max(left, de.blocks[nu * n + j].norm());
      right = std::max(right, de.blocks[j * n + nu].norm());
    }
    out.report.lines.push_back({"left_support_atom_" + q.m.blocks[nu].label,
                                "(p (x) 1) delta(e) nonzero at this atom", left, left > tol});
    out.report.lines.push_back({"right_support_atom_" + q.m.blocks[nu].label,
                                "(1 (x) p) delta(e) nonzero at this atom", right, right > tol});
  }
  out.is_group = out.report.passed();
  return out;
}

/// A solved antipode: a linear map on the coordinates of M, to be read as a
/// map M -> M^op.  All flags are recomputed from the solution.
struct AntipodeCandidate {
  CMatrix action;
  double residual = 0.0;
  bool unique = false;
  bool is_unital = false;
  bool is_antimultiplicative = false;
  bool is_star_map = false;

  bool is_wstar_into_op() const { return is_unital && is_antimultiplicative && is_star_map; }

  AlgebraElement apply(const AlgebraElement& x) const {
    return AlgebraElement::from_coords(x.parent, action * x.coords());
  }
};

namespace detail {

/// Coordinate permutation performing a blockwise transpose.
inline CMatrix block_transpose_matrix(const HAAlgebra& alg) {
  CMatrix t = CMatrix::Zero(alg.coord_dim(), alg.coord_dim());
  for (std::size_t i = 0; i < alg.size(); ++i) {
    const Eigen::Index n = alg.dim(i);
    const Eigen::Index off = alg.coord_offset(i);
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index r = 0; r < n; ++r) t(off + r * n + p, off + p * n + r) = 1.0;
  }
  return t;
}

inline double antipode_identity_residual(const DiscreteQuantumMonoid& q, const CMatrix& s_action,
                                         bool s_left) {
  const HAAlgebra& m = q.m;
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (Eigen::Index p = 0; p < m.dim(i); ++p)
      for (Eigen::Index u = 0; u < m.dim(i); ++u) {
        AlgebraElement unit = matrix_unit(m, i, p, u);
        AlgebraElement dm = q.delta.apply(unit);
        std::complex<double> eps = q.epsilon.apply(unit).blocks[0](0, 0);
        AlgebraElement acc = AlgebraElement::zero(m);
        for (std::size_t j = 0; j < m.size(); ++j)
          for (std::size_t k = 0; k < m.size(); ++k) {
            const CMatrix& blk = dm.blocks[j * m.size() + k];
            const Eigen::Index nj = m.dim(j);
            const Eigen::Index nk = m.dim(k);
            for (Eigen::Index a = 0; a < nj; ++a)
              for (Eigen::Index b = 0; b < nj; ++b)
                for (Eigen::Index c = 0; c < nk; ++c)
                  for (Eigen::Index d = 0; d < nk; ++d) {
                    const std::complex<double> coef = blk(a * nk + c, b * nk + d);
                    if (std::abs(coef) < 1e-14) continue;
                    if (s_left) {
                      AlgebraElement sm = AlgebraElement::from_coords(
                          m, s_action * matrix_unit(m, j, a, b).coords());
                      acc = acc + coef * (sm * matrix_unit(m, k, c, d));
                    } else {
                      AlgebraElement sm = AlgebraElement::from_coords(
                          m, s_action * matrix_unit(m, k, c, d).coords());
                      acc = acc + coef * (matrix_unit(m, j, a, b) * sm);
                    }
                  }
          }
        worst = std::max(worst, (acc - eps * AlgebraElement::one(m)).norm());
      }
  return worst;
}

}  // namespace detail

/// Solves mult((id (x) s) delta(m)) = epsilon(m) 1 together with the
/// s-on-the-left variant as one linear system in the coefficients of s.
/// Returns nothing when the system is inconsistent, which is precisely the
/// non-group case.
inline std::optional<AntipodeCandidate> solve_antipode(const DiscreteQuantumMonoid& q,
                                                       double tol = 1e-7) {
  const HAAlgebra& m = q.m;
  const Eigen::Index big = m.coord_dim();
  // Unknown vector u with u[c * big + t] = S(t, c).
  CMatrix sys = CMatrix::Zero(2 * big * big, big * big);
  CVector rhs = CVector::Zero(2 * big * big);
  Eigen::Index eq = 0;

  for (std::size_t i = 0; i < m.size(); ++i)
    for (Eigen::Index p = 0; p < m.dim(i); ++p)
      for (Eigen::Index pq = 0; pq < m.dim(i); ++pq) {
        AlgebraElement unit = matrix_unit(m, i, p, pq);
        AlgebraElement dm = q.delta.apply(unit);
        const std::complex<double> eps = q.epsilon.apply(unit).blocks[0](0, 0);

        // Right identity, output block j, entry (u, v):
        //   sum_{k,c,d,b} D_{jk}[(u c),(b d)] S(e_cd)_j[b, v] = eps delta_uv
        for (std::size_t j = 0; j < m.size(); ++j) {
          const Eigen::Index nj = m.dim(j);
          for (Eigen::Index uu = 0; uu < nj; ++uu)
            for (Eigen::Index vv = 0; vv < nj; ++vv) {
              for (std::size_t k = 0; k < m.size(); ++k) {
                const CMatrix& blk = dm.blocks[j * m.size() + k];
                const Eigen::Index nk = m.dim(k);
                for (Eigen::Index c = 0; c < nk; ++c)
                  for (Eigen::Index d = 0; d < nk; ++d)
                    for (Eigen::Index b = 0; b < nj; ++b) {
                      const std::complex<double> coef = blk(uu * nk + c, b * nk + d);
                      if (std::abs(coef) < 1e-14) continue;
                      const Eigen::Index src = m.coord_offset(k) + c * nk + d;
                      const Eigen::Index tgt = m.coord_offset(j) + b * nj + vv;
                      sys(eq, src * big + tgt) += coef;
                    }
              }
              rhs(eq++) = (uu == vv) ? eps : 0.0;
            }
        }

        // Left identity, output block k, entry (u, v):
        //   sum_{j,a,b,c} D_{jk}[(a c),(b v)] S(e_ab)_k[u, c] = eps delta_uv
        for (std::size_t k = 0; k < m.size(); ++k) {
          const Eigen::Index nk = m.dim(k);
          for (Eigen::Index uu = 0; uu < nk; ++uu)
            for (Eigen::Index vv = 0; vv < nk; ++vv) {
              for (std::size_t j = 0; j < m.size(); ++j) {
                const CMatrix& blk = dm.blocks[j * m.size() + k];
                const Eigen::Index nj = m.dim(j);
                for (Eigen::Index a = 0; a < nj; ++a)
                  for (Eigen::Index b = 0; b < nj; ++b)
                    for (Eigen::Index c = 0; c < nk; ++c) {
                      const std::complex<double> coef = blk(a * nk + c, b * nk + vv);
                      if (std::abs(coef) < 1e-14) continue;
                      const Eigen::Index src = m.coord_offset(j) + a * nj + b;
                      const Eigen::Index tgt = m.coord_offset(k) + uu * nk + c;
                      sys(eq, src * big + tgt) += coef;
                    }
              }
              rhs(eq++) = (uu == vv) ? eps : 0.0;
            }
        }
      }

  LinearSolution sol = solve_linear(sys, rhs);
  if (!sol.consistent(tol)) return std::nullopt;

  AntipodeCandidate cand;
  cand.action = CMatrix(big, big);
  for (Eigen::Index c = 0; c < big; ++c)
    for (Eigen::Index t = 0; t < big; ++t) cand.action(t, c) = sol.solution(c * big + t);
  cand.residual = std::max(detail::antipode_identity_residual(q, cand.action, false),
                           detail::antipode_identity_residual(q, cand.action, true));
  if (cand.residual > std::max(tol, 1e-6)) return std::nullopt;
  cand.unique = matrix_rank(sys, tol) == big * big;

  cand.is_unital =
      (cand.apply(AlgebraElement::one(m)) - AlgebraElement::one(m)).norm() <= std::max(tol, 1e-6);
  double antim = 0.0;
  double star = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (Eigen::Index p = 0; p < m.dim(i); ++p)
      for (Eigen::Index r = 0; r < m.dim(i); ++r) {
        AlgebraElement x = matrix_unit(m, i, p, r);
        star = std::max(star, (cand.apply(x.adjoint()) - cand.apply(x).adjoint()).norm());
        for (std::size_t j = 0; j < m.size(); ++j)
          for (Eigen::Index a = 0; a < m.dim(j); ++a)
            for (Eigen::Index b = 0; b < m.dim(j); ++b) {
              AlgebraElement y = matrix_unit(m, j, a, b);
              antim = std::max(antim,
                               (cand.apply(x * y) - cand.apply(y) * cand.apply(x)).norm());
            }
      }
  cand.is_antimultiplicative = antim <= std::max(tol, 1e-6);
  cand.is_star_map = star <= std::max(tol, 1e-6);
  return cand;
}

/// The antipode as an honest morphism M -> ell(X*): compose with a blockwise
/// transpose, which realizes M^op concretely on the dual atoms.
inline WStarMorphism antipode_morphism(const DiscreteQuantumMonoid& q,
                                       const AntipodeCandidate& s) {
  return WStarMorphism(q.m, ell_infty(dual_qset(q.qset())),
                       detail::block_transpose_matrix(q.m) * s.action);
}

/// The relation X* -> X induced by the antipode, component (alpha*, beta) =
/// { T : T s(m)^t_alpha = m_beta T for all m }.
inline QRelation inversion_relation(const DiscreteQuantumMonoid& q, const AntipodeCandidate& s,
                                    double tol = kDefaultTol) {
  const QuantumSet x = q.qset();
  QRelation rel(dual_qset(x), x);
  for (std::size_t alpha = 0; alpha < x.size(); ++alpha) {
    const Eigen::Index na = x.dim(alpha);
    for (std::size_t beta = 0; beta < x.size(); ++beta) {
      const Eigen::Index nb = x.dim(beta);
      std::vector<CMatrix> rows;
      for (std::size_t i = 0; i < q.m.size(); ++i)
        for (Eigen::Index p = 0; p < q.m.dim(i); ++p)
          for (Eigen::Index r = 0; r < q.m.dim(i); ++r) {
            AlgebraElement mm = matrix_unit(q.m, i, p, r);
            AlgebraElement sm = s.apply(mm);
            // T s(m)^t - m T = 0 over vec_row(T)
            rows.push_back(kron(CMatrix::Identity(nb, nb), sm.blocks[alpha]) -
                           kron(mm.blocks[beta], CMatrix::Identity(na, na)));
          }
      CMatrix sys(static_cast<Eigen::Index>(rows.size()) * nb * na, nb * na);
      for (std::size_t k = 0; k < rows.size(); ++k)
        sys.middleRows(static_cast<Eigen::Index>(k) * nb * na, nb * na) = rows[k];
      std::vector<CMatrix> basis;
      for (const auto& v : nullspace(sys, tol)) basis.push_back(unvec_row(v, nb, na));
      rel.set(alpha, beta, span(basis, na, nb, tol));
    }
  }
  return rel;
}

/// The six relation-level conditions on a candidate inversion s_hat: X* -> X:
/// the two counit-diagram inequalities, the two coevaluation-diagram
/// equalities, and the two map conditions.
inline CheckReport kac_diagram_battery(const DiscreteQuantumMonoid& q, const QRelation& s_hat,
                                       double tol = 1e-7) {
  const QuantumSet x = q.qset();
  const QuantumSet xd = dual_qset(x);
  if (!(s_hat.dom == xd) || !(s_hat.cod == x))
    throw InvalidArgument("inversion candidate must have type X* -> X");

  const QRelation dh = delta_hat(q);
  const QRelation ehd = dagger(epsilon_hat(q));
  const QRelation idx = identity_relation(x);
  const QRelation idxd = identity_relation(xd);
  const QRelation sh_dag = dagger(s_hat);

  CheckReport rep;
  auto add = [&](std::string name, std::string cond, double resid) {
    rep.lines.push_back({std::move(name), std::move(cond), resid, resid <= tol});
  };

  add("counit_diagram_left", "eps-hat-dag delta-hat (s-hat x id) >= ev_X",
      leq_residual(ev_relation(x), compose(ehd, compose(dh, rel_product(s_hat, idx)))));
  add("counit_diagram_right", "eps-hat-dag delta-hat (id x s-hat) >= ev_X*",
      leq_residual(ev_relation(xd), compose(ehd, compose(dh, rel_product(idx, s_hat)))));
  add("coev_diagram_left", "delta-hat (s-hat x id) coev_X = eps-hat",
      rel_eq_residual(compose(dh, compose(rel_product(s_hat, idx), coev_relation(x))),
                      epsilon_hat(q)));
  add("coev_diagram_right", "delta-hat (id x s-hat) coev_X* = eps-hat",
      rel_eq_residual(compose(dh, compose(rel_product(idx, s_hat), coev_relation(xd))),
                      epsilon_hat(q)));
  add("map_single_valued", "s-hat s-hat-dag <= id", leq_residual(compose(s_hat, sh_dag), idx));
  add("map_total", "id <= s-hat-dag s-hat", leq_residual(idxd, compose(sh_dag, s_hat)));
  return rep;
}

/// The two inequalities on a candidate inversion relation R: X* -> X,
/// together with the weaker top-composite consequences.
inline CheckReport dqg_relation_check(const DiscreteQuantumMonoid& q, const QRelation& r,
                                      double tol = 1e-7) {
  const QuantumSet x = q.qset();
  const QuantumSet xd = dual_qset(x);
  if (!(r.dom == xd) || !(r.cod == x))
    throw InvalidArgument("inversion candidate must have type X* -> X");

  const QRelation dh = delta_hat(q);
  const QRelation ehd = dagger(epsilon_hat(q));
  const QRelation idx = identity_relation(x);

  CheckReport rep;
  auto add = [&](std::string name, std::string cond, double resid) {
    rep.lines.push_back({std::move(name), std::move(cond), resid, resid <= tol});
  };
  add("inversion_left", "eps-hat-dag delta-hat (R x id) >= ev_X",
      leq_residual(ev_relation(x), compose(ehd, compose(dh, rel_product(r, idx)))));
  add("inversion_right", "eps-hat-dag delta-hat (id x R) >= ev_X*",
      leq_residual(ev_relation(xd), compose(ehd, compose(dh, rel_product(idx, r)))));
  add("top_consequence_left", "eps-hat-dag delta-hat (top x id) = top",
      leq_residual(top_relation(x, unit_qset()),
                   compose(ehd, compose(dh, rel_product(top_relation(unit_qset(), x), idx)))));
  add("top_consequence_right", "eps-hat-dag delta-hat (id x top) = top",
      leq_residual(top_relation(x, unit_qset()),
                   compose(ehd, compose(dh, rel_product(idx, top_relation(unit_qset(), x))))));
  return rep;
}

struct KacVerdict {
  bool is_kac = false;
  bool star_flag = false;
  bool diagonal_flag = false;
  bool diagram_flag = false;
  CheckReport report;
};

/// Residual of the diagonal-state conditions for a candidate antipode: for
/// every extreme diagonal state phi, phi (s (x) id) delta = epsilon and
/// phi (id (x) s) delta = epsilon, as equalities of linear functionals.
inline double diagonal_condition_residual(const DiscreteQuantumMonoid& q,
                                          const AntipodeCandidate& s) {
  const QuantumSet x = q.qset();
  const WStarMorphism id = WStarMorphism::identity(q.m);
  const WStarMorphism s_plain(q.m, q.m, s.action);
  // (s (x) id): M (x) M -> M^op (x) M; (id (x) s): M (x) M -> M (x) M^op.
  const CMatrix left = tensor_morphism(s_plain, id, false, false, true, false).action *
                       q.delta.action;
  const CMatrix right = tensor_morphism(id, s_plain, false, false, false, true).action *
                        q.delta.action;
  double worst = 0.0;
  const std::vector<State> phis_l = extreme_diagonal_states(x, true);
  const std::vector<State> phis_r = extreme_diagonal_states(x, false);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CVector dl(phis_l[i].parent.coord_dim());
    CVector dr(phis_r[i].parent.coord_dim());
    Eigen::Index off = 0;
    for (const auto& rho : phis_l[i].densities) {
      dl.segment(off, rho.size()) = vec_row(CMatrix(rho.transpose()));
      off += rho.size();
    }
    off = 0;
    for (const auto& rho : phis_r[i].densities) {
      dr.segment(off, rho.size()) = vec_row(CMatrix(rho.transpose()));
      off += rho.size();
    }
    worst = std::max(worst, (dl.transpose() * left - q.epsilon.action).norm());
    worst = std::max(worst, (dr.transpose() * right - q.epsilon.action).norm());
  }
  return worst;
}

/// Kac detection three ways, with cross-validation: the *-map flag of the
/// solved antipode, the diagonal-state conditions, and the relation-level
/// diagram battery must agree.
inline KacVerdict is_kac(const DiscreteQuantumMonoid& q, double tol = 1e-6) {
  std::optional<AntipodeCandidate> cand = solve_antipode(q);
  if (!cand) throw InvalidArgument("is_kac requires a discrete quantum group");
  KacVerdict out;
  out.star_flag = cand->is_star_map;

  const double diag_resid = diagonal_condition_residual(q, *cand);
  out.diagonal_flag = diag_resid <= tol;
  out.report.lines.push_back({"antipode_star", "s(x*) = s(x)* on a basis",
                              out.star_flag ? 0.0 : 1.0, out.star_flag});
  out.report.lines.push_back({"diagonal_states", "phi (s (x) id) delta = eps, both sides",
                              diag_resid, out.diagonal_flag});

  if (cand->is_wstar_into_op()) {
    const QRelation s_hat = morphism_to_relation(antipode_morphism(q, *cand));
    CheckReport battery = kac_diagram_battery(q, s_hat, tol);
    out.diagram_flag = battery.passed();
    for (auto& l : battery.lines) out.report.lines.push_back(std::move(l));
  } else {
    out.diagram_flag = false;
    out.report.lines.push_back({"diagram_battery", "s is not a *-morphism, battery skipped", 1.0,
                                false});
  }

  if (out.star_flag != out.diagonal_flag || out.star_flag != out.diagram_flag)
    throw InternalDisagreement("Kac checks disagree: star=" + std::to_string(out.star_flag) +
                               " diagonal=" + std::to_string(out.diagonal_flag) +
                               " diagram=" + std::to_string(out.diagram_flag));
  out.is_kac = out.star_flag;
  return out;
}

}  // namespace qrelkit

#endif  // QRELKIT_DQM_HPP
