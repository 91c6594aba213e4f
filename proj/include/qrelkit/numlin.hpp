#ifndef QRELKIT_NUMLIN_HPP
#define QRELKIT_NUMLIN_HPP

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

/// Dense complex linear algebra and operator-subspace arithmetic.
///
/// All matrices are finite-dimensional complex matrices; subspaces of
/// operator spaces are held as Hilbert-Schmidt-orthonormal bases.  Rank
/// decisions go through SVD with a relative threshold, so every operation
/// here is deterministic for fixed inputs.
namespace qrelkit {

using cxd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Absolute tolerance on unit-normalized data.
struct Tolerance {
  double value = 1e-9;
};

inline constexpr double kDefaultTol = 1e-9;

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotSelfAdjointAlgebra : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ToleranceBreakdown : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Row-major vectorization.  This convention is load-bearing: it identifies
/// L(X) with X (x) X^* so that the dual-basis vector corresponds to the
/// identity matrix.
inline CVector vec_row(const CMatrix& a) {
  CVector v(a.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) v[k++] = a(i, j);
  return v;
}

inline CMatrix unvec_row(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw ShapeMismatch("unvec_row: size mismatch");
  CMatrix a(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = v[k++];
  return a;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Hilbert-Schmidt inner product tr(a^* b).
inline cxd hs_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("hs_inner: shape mismatch");
  return (a.adjoint() * b).trace();
}

inline double hs_norm(const CMatrix& a) { return a.norm(); }

/// A subspace of L(C^dom_dim, C^cod_dim), stored as an HS-orthonormal basis
/// of cod_dim x dom_dim matrices.  The zero subspace has an empty basis.
struct OperatorSubspace {
  Eigen::Index dom_dim = 1;
  Eigen::Index cod_dim = 1;
  std::vector<CMatrix> basis;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
  bool is_zero() const { return basis.empty(); }
};

/// Orthonormal basis of the linear span, rank cut at singular values below
/// tol relative to the largest.
inline OperatorSubspace span(const std::vector<CMatrix>& mats, Eigen::Index dom_dim,
                             Eigen::Index cod_dim, double tol = kDefaultTol) {
  OperatorSubspace out;
  out.dom_dim = dom_dim;
  out.cod_dim = cod_dim;
  if (mats.empty()) return out;
  const Eigen::Index d = cod_dim * dom_dim;
  CMatrix stacked(d, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t k = 0; k < mats.size(); ++k) {
    if (mats[k].rows() != cod_dim || mats[k].cols() != dom_dim)
      throw ShapeMismatch("span: matrix shape mismatch");
    stacked.col(static_cast<Eigen::Index>(k)) = vec_row(mats[k]);
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return out;
  const double cut = tol * std::max(1.0, sv[0]);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cut)
      out.basis.push_back(unvec_row(svd.matrixU().col(i), cod_dim, dom_dim));
  }
  return out;
}

inline OperatorSubspace span(const std::vector<CMatrix>& mats, double tol = kDefaultTol) {
  if (mats.empty()) throw ShapeMismatch("span: cannot infer shape from empty list");
  return span(mats, mats[0].cols(), mats[0].rows(), tol);
}

inline OperatorSubspace zero_subspace(Eigen::Index dom_dim, Eigen::Index cod_dim) {
  return OperatorSubspace{dom_dim, cod_dim, {}};
}

inline OperatorSubspace full_subspace(Eigen::Index dom_dim, Eigen::Index cod_dim) {
  OperatorSubspace out{dom_dim, cod_dim, {}};
  for (Eigen::Index i = 0; i < cod_dim; ++i)
    for (Eigen::Index j = 0; j < dom_dim; ++j) {
      CMatrix e = CMatrix::Zero(cod_dim, dom_dim);
      e(i, j) = 1.0;
      out.basis.push_back(e);
    }
  return out;
}

/// Orthogonal projection of a onto the subspace s.
inline CMatrix project_onto(const OperatorSubspace& s, const CMatrix& a) {
  CMatrix p = CMatrix::Zero(s.cod_dim, s.dom_dim);
  for (const auto& b : s.basis) p += hs_inner(b, a) * b;
  return p;
}

/// Largest residual HS norm over s's basis after projection onto t.
inline double leq_residual(const OperatorSubspace& s, const OperatorSubspace& t) {
  if (s.dom_dim != t.dom_dim || s.cod_dim != t.cod_dim)
    throw ShapeMismatch("subspace_leq: shape mismatch");
  double worst = 0.0;
  for (const auto& b : s.basis) worst = std::max(worst, hs_norm(b - project_onto(t, b)));
  return worst;
}

inline bool subspace_leq(const OperatorSubspace& s, const OperatorSubspace& t,
                         double tol = kDefaultTol) {
  return leq_residual(s, t) <= tol;
}

inline bool subspace_eq(const OperatorSubspace& s, const OperatorSubspace& t,
                        double tol = kDefaultTol) {
  return subspace_leq(s, t, tol) && subspace_leq(t, s, tol);
}

/// Span of all pairwise products s_i t_j, for s <= L(Y,Z) and t <= L(X,Y).
inline OperatorSubspace subspace_product(const OperatorSubspace& s, const OperatorSubspace& t,
                                         double tol = kDefaultTol) {
  if (s.dom_dim != t.cod_dim) throw ShapeMismatch("subspace_product: inner dimension mismatch");
  std::vector<CMatrix> prods;
  prods.reserve(s.basis.size() * t.basis.size());
  for (const auto& a : s.basis)
    for (const auto& b : t.basis) prods.push_back(a * b);
  return span(prods, t.dom_dim, s.cod_dim, tol);
}

inline OperatorSubspace subspace_sum(const OperatorSubspace& s, const OperatorSubspace& t,
                                     double tol = kDefaultTol) {
  if (s.dom_dim != t.dom_dim || s.cod_dim != t.cod_dim)
    throw ShapeMismatch("subspace_sum: shape mismatch");
  std::vector<CMatrix> all = s.basis;
  all.insert(all.end(), t.basis.begin(), t.basis.end());
  return span(all, s.dom_dim, s.cod_dim, tol);
}

/// Intersection via the orthogonal complement of the sum of complements,
/// computed with SVD nullspaces on stacked coefficient constraints.
inline OperatorSubspace subspace_intersect(const OperatorSubspace& s, const OperatorSubspace& t,
                                           double tol = kDefaultTol) {
  if (s.dom_dim != t.dom_dim || s.cod_dim != t.cod_dim)
    throw ShapeMismatch("subspace_intersect: shape mismatch");
  if (s.is_zero() || t.is_zero()) return zero_subspace(s.dom_dim, s.cod_dim);
  // x in s with x = proj_t(x):  (I - P_t) S c = 0 over coefficients c.
  const Eigen::Index d = s.dom_dim * s.cod_dim;
  CMatrix S(d, s.dim());
  for (Eigen::Index k = 0; k < s.dim(); ++k) S.col(k) = vec_row(s.basis[k]);
  CMatrix T(d, t.dim());
  for (Eigen::Index k = 0; k < t.dim(); ++k) T.col(k) = vec_row(t.basis[k]);
  CMatrix residual_map = S - T * (T.adjoint() * S);
  Eigen::JacobiSVD<CMatrix> svd(residual_map, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<CMatrix> mats;
  for (Eigen::Index i = 0; i < svd.matrixV().cols(); ++i) {
    const bool in_null = (i >= sv.size()) || (sv.size() == 0) || (sv[0] <= 0.0) ||
                         (sv[i] <= tol * std::max(1.0, sv[0]));
    if (in_null) mats.push_back(unvec_row(S * svd.matrixV().col(i), s.cod_dim, s.dom_dim));
  }
  return span(mats, s.dom_dim, s.cod_dim, tol);
}

/// Minimal-norm least-squares solution of a x = b with its residual norm.
/// The system counts as inconsistent when residual > tol.
struct LinearSolution {
  CVector solution;
  double residual = 0.0;

  bool consistent(double tol = kDefaultTol) const { return residual <= tol; }
};

inline LinearSolution solve_linear(const CMatrix& a, const CVector& b) {
  LinearSolution out;
  if (a.size() == 0) {
    out.solution = CVector::Zero(a.cols());
    out.residual = b.norm();
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kDefaultTol);
  out.solution = svd.solve(b);
  out.residual = (a * out.solution - b).norm();
  return out;
}

/// Orthonormal basis of the nullspace of a.
inline std::vector<CVector> nullspace(const CMatrix& a, double tol = kDefaultTol) {
  std::vector<CVector> out;
  if (a.rows() == 0) {
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      CVector e = CVector::Zero(a.cols());
      e[i] = 1.0;
      out.push_back(e);
    }
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = (sv.size() > 0 && sv[0] > 0.0) ? tol * std::max(1.0, sv[0]) : 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    if (i >= sv.size() || sv[i] <= cut) out.push_back(svd.matrixV().col(i));
  }
  return out;
}

inline Eigen::Index matrix_rank(const CMatrix& a, double tol = kDefaultTol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  Eigen::Index r = 0;
  const double cut = tol * std::max(1.0, sv[0]);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++r;
  return r;
}

/// Orthogonal projection onto the joint column space of the given matrices.
inline CMatrix column_space_projection(const std::vector<CMatrix>& mats, Eigen::Index dim,
                                       double tol = kDefaultTol) {
  Eigen::Index total = 0;
  for (const auto& m : mats) total += m.cols();
  if (total == 0) return CMatrix::Zero(dim, dim);
  CMatrix stacked(dim, total);
  Eigen::Index c = 0;
  for (const auto& m : mats) {
    if (m.rows() != dim) throw ShapeMismatch("column_space_projection: row mismatch");
    stacked.middleCols(c, m.cols()) = m;
    c += m.cols();
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  CMatrix p = CMatrix::Zero(dim, dim);
  if (sv.size() == 0 || sv[0] <= 0.0) return p;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol * sv[0]) p += svd.matrixU().col(i) * svd.matrixU().col(i).adjoint();
  }
  return p;
}

namespace detail {

/// Cluster sorted eigenvalues by spectral gaps.  Gaps inside (tight, loose)
/// leave the clustering ambiguous at this tolerance.
inline std::vector<Eigen::Index> cluster_breaks(const Eigen::VectorXd& vals, double tight,
                                                double loose) {
  std::vector<Eigen::Index> breaks;
  for (Eigen::Index i = 0; i + 1 < vals.size(); ++i) {
    const double gap = vals[i + 1] - vals[i];
    if (gap > loose) {
      breaks.push_back(i + 1);
    } else if (gap > tight) {
      throw ToleranceBreakdown("spectral gap " + std::to_string(gap) +
                               " is too close to the rank tolerance");
    }
  }
  breaks.push_back(vals.size());
  return breaks;
}

}  // namespace detail

/// A concrete *-algebra in block-diagonal normal form: the block sizes of
/// the generated algebra and a *-isomorphism onto their direct sum.  `iso`
/// maps row-vectorized ambient matrices to the concatenated row-vectorized
/// blocks; it restricts to a bijection on the generated algebra.
struct WedderburnDecomposition {
  std::vector<Eigen::Index> block_dims;
  CMatrix iso;                       // (sum n_k^2) x (ambient^2)
  Eigen::Index ambient_dim = 0;
  std::vector<CMatrix> algebra_basis;  // HS-orthonormal basis of the algebra

  std::vector<CMatrix> apply(const CMatrix& x) const {
    CVector coords = iso * vec_row(x);
    std::vector<CMatrix> blocks;
    Eigen::Index off = 0;
    for (Eigen::Index n : block_dims) {
      blocks.push_back(unvec_row(coords.segment(off, n * n), n, n));
      off += n * n;
    }
    return blocks;
  }
};

namespace detail {

inline OperatorSubspace generated_algebra(const std::vector<CMatrix>& generators,
                                          const CMatrix& unit, double tol) {
  const Eigen::Index n = unit.rows();
  std::vector<CMatrix> seed = generators;
  for (const auto& g : generators) seed.push_back(g.adjoint());
  seed.push_back(unit);
  OperatorSubspace alg = span(seed, n, n, tol);
  for (;;) {
    std::vector<CMatrix> next = alg.basis;
    for (const auto& a : alg.basis)
      for (const auto& b : alg.basis) next.push_back(a * b);
    OperatorSubspace bigger = span(next, n, n, tol);
    if (bigger.dim() == alg.dim()) return bigger;
    alg = bigger;
  }
}

inline std::vector<CMatrix> center_basis(const OperatorSubspace& alg, double tol) {
  const Eigen::Index n = alg.cod_dim;
  const Eigen::Index k = alg.dim();
  CMatrix constraints(n * n * k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) {
      CMatrix comm = alg.basis[i] * alg.basis[j] - alg.basis[j] * alg.basis[i];
      constraints.block(j * n * n, i, n * n, 1) = vec_row(comm);
    }
  }
  std::vector<CVector> null = nullspace(constraints, tol);
  std::vector<CMatrix> out;
  for (const auto& c : null) {
    CMatrix z = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < k; ++i) z += c[i] * alg.basis[i];
    out.push_back(z);
  }
  return out;
}

/// Minimal projection of a factor given by an orthonormal basis acting on a
/// compressed space, via spectral splitting of a random self-adjoint element.
inline CMatrix minimal_projection(const std::vector<CMatrix>& factor_basis, Eigen::Index m,
                                  Eigen::Index block_dim, std::mt19937_64& rng, double tol) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 16; ++attempt) {
    CMatrix y = CMatrix::Zero(m, m);
    for (const auto& b : factor_basis) y += cxd(gauss(rng), gauss(rng)) * b;
    y = (y + y.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(y);
    try {
      std::vector<Eigen::Index> breaks = cluster_breaks(es.eigenvalues(), tol * 100, 1e-6);
      if (static_cast<Eigen::Index>(breaks.size()) != block_dim) continue;
      Eigen::Index first = breaks[0];
      CMatrix u = es.eigenvectors().leftCols(first);
      return u * u.adjoint();
    } catch (const ToleranceBreakdown&) {
      continue;
    }
  }
  throw ToleranceBreakdown("could not split a factor into minimal projections");
}

}  // namespace detail

/// Block decomposition of the *-algebra generated by `generators` (with the
/// given unit): center computation, then spectral splitting of a seeded
/// random self-adjoint central element, then explicit matrix units.
inline WedderburnDecomposition wedderburn_decompose(const std::vector<CMatrix>& generators,
                                                    const CMatrix& unit, double tol = kDefaultTol,
                                                    std::uint64_t seed = 20240101) {
  const Eigen::Index n = unit.rows();
  if (unit.cols() != n) throw ShapeMismatch("wedderburn_decompose: unit must be square");
  OperatorSubspace alg = detail::generated_algebra(generators, unit, tol);

  for (const auto& b : alg.basis) {
    if (hs_norm(b.adjoint() - project_onto(alg, b.adjoint())) > tol * 10)
      throw NotSelfAdjointAlgebra("generated algebra is not closed under adjoints");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<CMatrix> center = detail::center_basis(alg, tol);
  CMatrix z = CMatrix::Zero(n, n);
  for (const auto& c : center) z += cxd(gauss(rng), gauss(rng)) * c;
  z = (z + z.adjoint()).eval() / 2.0;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(z);
  std::vector<Eigen::Index> breaks = detail::cluster_breaks(es.eigenvalues(), tol * 100, 1e-6);
  if (static_cast<Eigen::Index>(breaks.size()) != static_cast<Eigen::Index>(center.size()))
    throw ToleranceBreakdown("central element failed to separate the blocks");

  WedderburnDecomposition out;
  out.ambient_dim = n;
  out.algebra_basis = alg.basis;
  std::vector<CMatrix> row_maps;  // one (n x n) "W_j W_i^*"-style functional per coordinate

  Eigen::Index start = 0;
  for (Eigen::Index stop : breaks) {
    const Eigen::Index m = stop - start;
    CMatrix u = es.eigenvectors().middleCols(start, m);
    start = stop;

    // Compress the algebra onto this central summand.
    std::vector<CMatrix> compressed;
    for (const auto& b : alg.basis) compressed.push_back(u.adjoint() * b * u);
    OperatorSubspace factor = span(compressed, m, m, tol);
    const auto block_dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(factor.dim()))));
    if (block_dim * block_dim != factor.dim())
      throw ToleranceBreakdown("central summand dimension is not a perfect square");
    const Eigen::Index mult = m / block_dim;
    if (mult * block_dim != m)
      throw ToleranceBreakdown("central summand multiplicity is not integral");

    CMatrix f1 = detail::minimal_projection(factor.basis, m, block_dim, rng, tol);

    // Partial isometries w_i with w_i^* w_i = f1 and orthogonal ranges.
    std::vector<CMatrix> isometries{f1};
    CMatrix covered = f1;
    std::size_t cursor = 0;
    while (static_cast<Eigen::Index>(isometries.size()) < block_dim) {
      if (cursor >= factor.basis.size())
        throw ToleranceBreakdown("failed to complete a matrix-unit system");
      CMatrix cand = (CMatrix::Identity(m, m) - covered) * factor.basis[cursor++] * f1;
      if (cand.norm() < 1e-6) continue;
      Eigen::JacobiSVD<CMatrix> svd(cand, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& sv = svd.singularValues();
      Eigen::Index r = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-8 * sv[0]) ++r;
      if (r != mult) continue;
      CMatrix w = svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).adjoint();
      isometries.push_back(w);
      covered += w * w.adjoint();
    }

    out.block_dims.push_back(block_dim);
    for (Eigen::Index i = 0; i < block_dim; ++i)
      for (Eigen::Index j = 0; j < block_dim; ++j)
        row_maps.push_back((u * isometries[j]) * (u * isometries[i]).adjoint() /
                           static_cast<double>(mult));
  }

  Eigen::Index total = 0;
  for (Eigen::Index d : out.block_dims) total += d * d;
  out.iso = CMatrix(total, n * n);
  for (Eigen::Index r = 0; r < total; ++r) {
    // phi(x)_{k,i,j} = tr(W_i^* x W_j) / mult = sum_{a,b} x[a,b] (W_j W_i^*)[b,a]
    const CMatrix& wm = row_maps[r];
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) out.iso(r, a * n + b) = wm(b, a);
  }
  return out;
}

/// Seeded gaussian complex matrix, for tests and sampling checks.
inline CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = cxd(gauss(rng), gauss(rng));
  return a;
}

inline CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  CMatrix a = random_cmatrix(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    cxd d = r(i, i);
    q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : cxd(1.0);
  }
  return q;
}

/// Random orthogonal projection of the given rank.
inline CMatrix random_projection(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng) {
  CMatrix u = random_unitary(n, rng);
  CMatrix p = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < rank; ++i) p += u.col(i) * u.col(i).adjoint();
  return p;
}

}  // namespace qrelkit

#endif  // QRELKIT_NUMLIN_HPP
