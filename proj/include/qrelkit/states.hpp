#ifndef QRELKIT_STATES_HPP
#define QRELKIT_STATES_HPP

#include <utility>
#include <vector>

#include "corr.hpp"

/// Normal states on HAAlgebras and the diagonal-state machinery used to
/// compare morphisms and to detect diagonality of counit-like functionals.
namespace qrelkit {

struct InvalidState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A normal state, stored as one density matrix per block; phi(m) =
/// sum_i tr(rho_i m_i).
struct State {
  HAAlgebra parent;
  std::vector<CMatrix> densities;

  State() = default;
  State(HAAlgebra alg, std::vector<CMatrix> dens, double tol = 1e-8)
      : parent(std::move(alg)), densities(std::move(dens)) {
    if (densities.size() != parent.size()) throw InvalidState("density count mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < densities.size(); ++i) {
      const CMatrix& rho = densities[i];
      if (rho.rows() != parent.dim(i) || rho.cols() != parent.dim(i))
        throw InvalidState("density shape mismatch");
      if ((rho - rho.adjoint()).norm() > tol) throw InvalidState("density not self-adjoint");
      Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint().eval()));
      if (es.eigenvalues().minCoeff() < -tol) throw InvalidState("density not positive");
      total += rho.real().trace();
    }
    if (std::abs(total - 1.0) > tol) throw InvalidState("densities do not sum to trace one");
  }

  std::complex<double> operator()(const AlgebraElement& m) const {
    if (!(m.parent == parent)) throw InvalidArgument("state applied to wrong algebra");
    std::complex<double> out = 0.0;
    for (std::size_t i = 0; i < densities.size(); ++i)
      out += (densities[i] * m.blocks[i]).trace();
    return out;
  }
};

/// Smallest projection p with phi(p) = 1, blockwise from the density's
/// eigenspaces.
inline ProjectionElement support_projection(const State& phi, double tol = 1e-8) {
  std::vector<CMatrix> blocks;
  for (const auto& rho : phi.densities) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint().eval()));
    CMatrix p = CMatrix::Zero(rho.rows(), rho.cols());
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
      if (es.eigenvalues()[k] > tol) p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    blocks.push_back(p);
  }
  return ProjectionElement(AlgebraElement(phi.parent, std::move(blocks)), 1e-7);
}

/// The vectorized identity of one atom, |db> = sum_k e_k (x) e_k.
inline CVector diagonal_vector(Eigen::Index n) {
  return vec_row(CMatrix::Identity(n, n));
}

/// The projection delta onto the diagonal relation: rank one on each block
/// (i,i), spanned by the vectorized identity, zero on mixed blocks.  With
/// first_op the ambient algebra is ell(X)^op (x) ell(X) instead of
/// ell(X) (x) ell(X)^op; the density blocks are the same either way.
inline ProjectionElement diagonal_projection(const QuantumSet& x, bool first_op = false) {
  const HAAlgebra alg = first_op ? op_tensor_algebra(ell_infty(x), ell_infty(x))
                                 : tensor_op_algebra(ell_infty(x), ell_infty(x));
  std::vector<CMatrix> blocks;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const Eigen::Index d = x.dim(i) * x.dim(j);
      if (i != j) {
        blocks.push_back(CMatrix::Zero(d, d));
        continue;
      }
      CVector db = diagonal_vector(x.dim(i));
      blocks.push_back(db * db.adjoint() / static_cast<double>(x.dim(i)));
    }
  }
  return ProjectionElement(AlgebraElement(alg, std::move(blocks)), 1e-9);
}

/// The extreme diagonal states on ell(X) (x) ell(X)^op: the i-th one sends
/// a (x) b to tr(a_i b_i) / n_i, with density equal to the i-th diagonal
/// projection block.
inline std::vector<State> extreme_diagonal_states(const QuantumSet& x, bool first_op = false) {
  const ProjectionElement delta = diagonal_projection(x, first_op);
  std::vector<State> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<CMatrix> dens;
    for (std::size_t a = 0; a < x.size(); ++a)
      for (std::size_t b = 0; b < x.size(); ++b) {
        std::size_t blk = a * x.size() + b;
        if (a == i && b == i)
          dens.push_back(delta.element.blocks[blk]);
        else
          dens.push_back(CMatrix::Zero(delta.element.blocks[blk].rows(),
                                       delta.element.blocks[blk].cols()));
      }
    out.emplace_back(delta.element.parent, std::move(dens));
  }
  return out;
}

/// Best approximation of a state on ell(X) (x) ell(X)^op by a convex
/// combination of the extreme diagonal states.  The residual measures how
/// far from diagonal the state is; callers decide what counts as diagonal.
struct DiagonalDecomposition {
  std::vector<double> weights;
  double residual = 0.0;

  bool is_diagonal(double tol = 1e-8) const { return residual <= tol; }
};

inline DiagonalDecomposition decompose_diagonal_state(const State& phi, const QuantumSet& x) {
  const ProjectionElement delta = diagonal_projection(x);
  if (!(phi.parent == delta.element.parent))
    throw InvalidArgument("state does not live on ell(X) (x) ell(X)^op");
  DiagonalDecomposition out;
  double resid_sq = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = 0; b < x.size(); ++b) {
      std::size_t blk = a * x.size() + b;
      CMatrix rest = phi.densities[blk];
      if (a == b) {
        const CMatrix& p = delta.element.blocks[blk];
        double c = std::real((rest * p).trace());
        out.weights.push_back(c);
        rest -= c * p;
      }
      resid_sq += rest.squaredNorm();
    }
  out.residual = std::sqrt(resid_sq);
  return out;
}

inline AlgebraElement random_projection_element(const HAAlgebra& alg, std::mt19937_64& rng,
                                                bool nonzero = true) {
  std::vector<CMatrix> blocks;
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < alg.size(); ++i) {
    const Eigen::Index n = alg.dim(i);
    std::uniform_int_distribution<Eigen::Index> rank_dist(0, n);
    Eigen::Index rank = rank_dist(rng);
    total += rank;
    blocks.push_back(rank == 0 ? CMatrix::Zero(n, n).eval() : random_projection(n, rank, rng));
  }
  if (nonzero && total == 0) {
    blocks[0] = random_projection(alg.dim(0), 1, rng);
  }
  return AlgebraElement(alg, std::move(blocks));
}

/// Sampling check of non-degeneracy: (p (x) p) delta is nonzero for every
/// nonzero projection p.  True for every finite HAAlgebra; implemented as a
/// randomized self-validation probe.
inline bool is_nondegenerate_diagonal(const QuantumSet& x, int samples, std::mt19937_64& rng,
                                      double tol = 1e-9) {
  const HAAlgebra alg = ell_infty(x);
  const AlgebraElement delta = diagonal_projection(x).element;
  for (int k = 0; k < samples; ++k) {
    AlgebraElement p = random_projection_element(alg, rng, true);
    AlgebraElement pp = embed_tensor(p, p, false, true);
    if ((pp * delta).norm() <= tol) return false;
  }
  return true;
}

/// Pullback of a normal positive functional along a linear map, via the
/// functional's coordinate row.
inline State pullback_state(const State& phi, const WStarMorphism& f, double tol = 1e-7) {
  if (!(phi.parent == f.target)) throw InvalidArgument("pullback_state: type mismatch");
  CVector row(phi.parent.coord_dim());
  Eigen::Index off = 0;
  for (const auto& rho : phi.densities) {
    row.segment(off, rho.size()) = vec_row(CMatrix(rho.transpose()));
    off += rho.size();
  }
  CVector pulled = (row.transpose() * f.action).transpose();
  std::vector<CMatrix> dens;
  for (std::size_t i = 0; i < f.source.size(); ++i) {
    const Eigen::Index n = f.source.dim(i);
    dens.push_back(
        unvec_row(pulled.segment(f.source.coord_offset(i), n * n), n, n).transpose());
  }
  return State(f.source, std::move(dens), tol);
}

/// Two unital normal *-homomorphisms f, g: M -> N agree exactly when
/// phi (f (x) g-op) is diagonal for every diagonal state phi on the target
/// side; by convexity the extreme diagonal states suffice.
inline bool morphisms_equal_via_diagonals(const WStarMorphism& f, const WStarMorphism& g,
                                          double tol = 1e-8) {
  if (!(f.source == g.source) || !(f.target == g.target))
    throw InvalidArgument("morphism comparison: type mismatch");
  const QuantumSet src = qset_of(f.source);
  const QuantumSet tgt = qset_of(f.target);
  WStarMorphism big = tensor_morphism(f, g, false, true, false, true);
  for (const State& phi : extreme_diagonal_states(tgt)) {
    State pulled = pullback_state(phi, big);
    if (!decompose_diagonal_state(pulled, src).is_diagonal(tol)) return false;
  }
  return true;
}

inline State random_state(const HAAlgebra& alg, std::mt19937_64& rng) {
  std::vector<CMatrix> dens;
  double total = 0.0;
  for (std::size_t i = 0; i < alg.size(); ++i) {
    CMatrix g = random_cmatrix(alg.dim(i), alg.dim(i), rng);
    CMatrix rho = g * g.adjoint();
    total += rho.real().trace();
    dens.push_back(std::move(rho));
  }
  for (auto& rho : dens) rho /= total;
  return State(alg, std::move(dens));
}

}  // namespace qrelkit

#endif  // QRELKIT_STATES_HPP
