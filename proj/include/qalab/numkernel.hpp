#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qalab/common.hpp"
#include "qalab/errors.hpp"
#include "qalab/rng.hpp"

namespace qalab {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// sigma_min <= kSingularityRel * sigma_max is treated as singular.
inline constexpr double kSingularityRel = 1e-12;

inline void require_square_finite(const CMatrix& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw InvalidInput(std::string(who) + ": matrix must be square and nonempty");
  if (!m.allFinite())
    throw InvalidInput(std::string(who) + ": matrix has non-finite entries");
}

// ---------------------------------------------------------------------------
// Factorizations and norms
// ---------------------------------------------------------------------------

struct SvdResult {
  CMatrix left;              // unitary
  RVector singular_values;   // nonincreasing, >= 0
  CMatrix right;             // unitary; input = left * diag * right.adjoint()
};

inline SvdResult svd(const CMatrix& m) {
  require_square_finite(m, "svd");
  Eigen::JacobiSVD<CMatrix> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

/// Largest singular value.
inline double operator_norm(const CMatrix& m) {
  require_square_finite(m, "operator_norm");
  Eigen::JacobiSVD<CMatrix> dec(m);
  return dec.singularValues()(0);
}

/// Eigenvalues with multiplicity, in no particular order.
inline std::vector<cplx> eigenvalues(const CMatrix& m) {
  require_square_finite(m, "eigenvalues");
  Eigen::ComplexEigenSolver<CMatrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericFailure("eigenvalues: iteration failed to converge at dim " +
                         std::to_string(m.rows()));
  const auto& v = es.eigenvalues();
  return std::vector<cplx>(v.data(), v.data() + v.size());
}

inline CMatrix inverse(const CMatrix& m) {
  require_square_finite(m, "inverse");
  SvdResult s = svd(m);
  double smax = s.singular_values(0);
  double smin = s.singular_values(s.singular_values.size() - 1);
  if (smax <= 0.0 || smin <= kSingularityRel * smax)
    throw SingularMatrix("inverse: sigma_min = " + std::to_string(smin) +
                         " below singularity threshold");
  return s.right * s.singular_values.cwiseInverse().asDiagonal() * s.left.adjoint();
}

inline double hermitian_defect(const CMatrix& m) {
  return (m - m.adjoint()).norm();
}

/// Hermitian PSD square root. Eigenvalues in [-clamp_tol, 0) are clamped to
/// zero; anything below -clamp_tol is a hard error.
inline CMatrix psd_sqrt(const CMatrix& hm, double clamp_tol = 1e-10) {
  require_square_finite(hm, "psd_sqrt");
  double scale = 1.0 + hm.norm();
  if (hermitian_defect(hm) > 1e-8 * scale)
    throw NotHermitian("psd_sqrt: input is not Hermitian within tolerance");
  CMatrix h = 0.5 * (hm + hm.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw NumericFailure("psd_sqrt: eigendecomposition failed");
  RVector lam = es.eigenvalues();
  if (lam(0) < -clamp_tol)
    throw NotPsd("psd_sqrt: eigenvalue " + std::to_string(lam(0)) +
                 " below -clamp_tol = " + std::to_string(-clamp_tol));
  RVector root = lam.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

struct PolarResult {
  CMatrix unitary;
  CMatrix positive;  // (M* M)^{1/2}
};

/// M = unitary * positive. Requires invertible M; singular cross pairs go
/// through common_polar_unitary instead.
inline PolarResult polar(const CMatrix& m) {
  SvdResult s = svd(m);
  double smax = s.singular_values(0);
  double smin = s.singular_values(s.singular_values.size() - 1);
  if (smax <= 0.0 || smin <= kSingularityRel * smax)
    throw SingularMatrix("polar: input is singular; use common_polar_unitary");
  CMatrix u = s.left * s.right.adjoint();
  CMatrix a = s.right * s.singular_values.asDiagonal() * s.right.adjoint();
  return {u, a};
}

// ---------------------------------------------------------------------------
// Random matrices
// ---------------------------------------------------------------------------

inline CMatrix random_gaussian(int dim, Rng& rng) {
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
  return g;
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of the R diagonal folded into Q.
inline CMatrix random_unitary(int dim, Rng& rng) {
  if (dim < 1 || dim > kMaxDim)
    throw InvalidInput("random_unitary: dim must be in [1, " + std::to_string(kMaxDim) + "]");
  CMatrix g = random_gaussian(dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    cplx d = r(i, i);
    double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : cplx(1.0, 0.0);
  }
  return q;
}

inline CMatrix random_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(dim, rng);
}

// ---------------------------------------------------------------------------
// Common polar unitary for zero-product pairs
// ---------------------------------------------------------------------------

namespace detail {

/// Extends `cols` (orthonormal) to a full orthonormal basis by Gram-Schmidt
/// against the standard basis, taking the best-conditioned candidate each
/// round (a codimension-d subspace always leaves some e_i with residual at
/// least sqrt(d/n)). With no columns given this returns the identity, which
/// fixes the convention for fully degenerate inputs.
inline CMatrix complete_basis(const std::vector<CVector>& cols, int n) {
  CMatrix b(n, n);
  int k = 0;
  for (const auto& c : cols) b.col(k++) = c;
  std::vector<bool> used(size_t(n), false);
  while (k < n) {
    int best = -1;
    double best_norm = 0.0;
    CVector best_v;
    for (int e = 0; e < n; ++e) {
      if (used[size_t(e)]) continue;
      CVector v = CVector::Zero(n);
      v(e) = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < k; ++j) v -= (b.col(j).adjoint() * v)(0, 0) * b.col(j);
      double norm = v.norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = e;
        best_v = v;
      }
    }
    if (best < 0 || best_norm < 1e-8)
      throw ConstructionFailure("complete_basis: completion failed (rank mismatch)");
    used[size_t(best)] = true;
    b.col(k++) = best_v / best_norm;
  }
  return b;
}

}  // namespace detail

/// Unitary U with Z = U (Z*Z)^{1/2} and W = (W W*)^{1/2} U* for a pair with
/// ZW = WZ = 0. The partial isometries of the two factorizations act on
/// mutually orthogonal subspaces (forced by the zero products) and are glued
/// into one unitary; leftover dimensions are completed against the standard
/// basis, so Z = W = 0 yields the identity.
inline CMatrix common_polar_unitary(const CMatrix& z, const CMatrix& w, double tol = 1e-8) {
  require_square_finite(z, "common_polar_unitary");
  require_square_finite(w, "common_polar_unitary");
  if (z.rows() != w.rows())
    throw InvalidInput("common_polar_unitary: dimension mismatch");
  const int n = int(z.rows());
  double pzw = operator_norm(z * w);
  double pwz = operator_norm(w * z);
  if (pzw > tol || pwz > tol)
    throw NotACrossPair("common_polar_unitary: |ZW| = " + std::to_string(pzw) +
                        ", |WZ| = " + std::to_string(pwz) + " exceed tolerance");

  constexpr double rank_rel = 1e-10;
  std::vector<CVector> sources, targets;
  // Z = U |Z|: U maps right singular vectors of Z to left ones on the support.
  SvdResult sz = svd(z);
  for (int i = 0; i < n; ++i)
    if (sz.singular_values(i) > rank_rel * sz.singular_values(0)) {
      sources.push_back(sz.right.col(i));
      targets.push_back(sz.left.col(i));
    }
  // W* = U |W*|: U maps ran W onto ran W*.
  SvdResult sw = svd(CMatrix(w.adjoint()));
  for (int i = 0; i < n; ++i)
    if (sw.singular_values(i) > rank_rel * sw.singular_values(0)) {
      sources.push_back(sw.right.col(i));
      targets.push_back(sw.left.col(i));
    }
  if (int(sources.size()) > n)
    throw NotACrossPair("common_polar_unitary: rank Z + rank W exceeds dim");

  CMatrix src = detail::complete_basis(sources, n);
  CMatrix tgt = detail::complete_basis(targets, n);
  CMatrix u0 = tgt * src.adjoint();
  // Snap to the nearest exact unitary; u0 is off by at most the rounding of
  // the input's cross relations.
  SvdResult su = svd(u0);
  return su.left * su.right.adjoint();
}

// ---------------------------------------------------------------------------
// Spectral set comparisons
// ---------------------------------------------------------------------------

/// max over a in `from` of the distance to the nearest element of `to`.
inline double directed_spectral_distance(const std::vector<cplx>& from,
                                         const std::vector<cplx>& to) {
  if (from.empty()) return 0.0;
  if (to.empty()) throw InvalidInput("directed_spectral_distance: empty target set");
  double worst = 0.0;
  for (const cplx& a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& b : to) best = std::min(best, std::abs(a - b));
    worst = std::max(worst, best);
  }
  return worst;
}

/// Greedy nearest-match pairing of two equal-size multisets; returns the
/// largest matched distance. Closest global pairs are matched first.
inline double greedy_match_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size())
    throw InvalidInput("greedy_match_distance: size mismatch");
  const int n = int(a.size());
  struct Pair { double d; int i, j; };
  std::vector<Pair> pairs;
  pairs.reserve(size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pairs.push_back({std::abs(a[i] - b[j]), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.d != y.d) return x.d < y.d;
    if (x.i != y.i) return x.i < y.i;
    return x.j < y.j;
  });
  std::vector<bool> used_a(n, false), used_b(n, false);
  double worst = 0.0;
  int matched = 0;
  for (const Pair& p : pairs) {
    if (matched == n) break;
    if (used_a[p.i] || used_b[p.j]) continue;
    used_a[p.i] = used_b[p.j] = true;
    worst = std::max(worst, p.d);
    ++matched;
  }
  return worst;
}

}  // namespace qalab
