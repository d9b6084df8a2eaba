#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qalab/common.hpp"
#include "qalab/errors.hpp"
#include "qalab/numkernel.hpp"
#include "qalab/rng.hpp"

namespace qalab {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Pair (Z, W) with ZW = WZ = (1/r^2) I and contractive norms; r = inf
/// encodes the cross, ZW = WZ = 0.
struct HyperbolaPair {
  CMatrix Z;
  CMatrix W;
  double r = 2.0;
};

/// Invertible X with singular values in [1/(r - margin), r - margin].
struct AnnulusOperator {
  CMatrix X;
  double r = 2.0;
  double margin = 0.0;
};

struct Constraint {
  std::string name;
  double value;  // measured quantity
  double slack;  // bound - value; >= -tol when satisfied
  bool ok;
};

struct MembershipReport {
  bool ok = true;
  std::vector<Constraint> constraints;

  std::string summary() const {
    std::string s;
    for (const auto& c : constraints) {
      if (!s.empty()) s += ", ";
      s += c.name + "=" + std::to_string(c.value) + (c.ok ? "" : " [violated]");
    }
    return s;
  }
};

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

/// Evaluates the defining constraints with per-constraint slack. Open
/// conditions are tested against the closure within tol, so boundary pairs
/// produced by the dilation itself remain evaluable.
inline MembershipReport membership(const HyperbolaPair& h, double tol = 1e-10) {
  require_square_finite(h.Z, "membership");
  require_square_finite(h.W, "membership");
  if (h.Z.rows() != h.W.rows())
    throw InvalidInput("membership: Z and W dimension mismatch");
  if (!(h.r > 1.0))
    throw InvalidInput("membership: r must exceed 1 or be inf");
  MembershipReport rep;
  auto add = [&](const std::string& name, double value, double bound) {
    bool ok = value <= bound + tol;
    rep.constraints.push_back({name, value, bound - value, ok});
    rep.ok = rep.ok && ok;
  };
  add("norm_Z", operator_norm(h.Z), 1.0);
  add("norm_W", operator_norm(h.W), 1.0);
  double rr = std::isinf(h.r) ? 0.0 : 1.0 / (h.r * h.r);
  CMatrix target = rr * CMatrix::Identity(h.Z.rows(), h.Z.cols());
  add("prod_ZW", operator_norm(h.Z * h.W - target), 0.0);
  add("prod_WZ", operator_norm(h.W * h.Z - target), 0.0);
  return rep;
}

// ---------------------------------------------------------------------------
// Annulus <-> hyperbola correspondence
// ---------------------------------------------------------------------------

/// X -> (X/r, X^{-1}/r).
inline HyperbolaPair hyperbola_from_annulus(const AnnulusOperator& a) {
  require_square_finite(a.X, "hyperbola_from_annulus");
  if (!(a.r > 1.0) || std::isinf(a.r))
    throw InvalidInput("hyperbola_from_annulus: r must be finite and exceed 1");
  CMatrix xinv = inverse(a.X);  // throws SingularMatrix
  if (operator_norm(a.X) >= a.r || operator_norm(xinv) >= a.r)
    throw InvalidInput("hyperbola_from_annulus: operator not in the quantum annulus");
  return {a.X / a.r, xinv / a.r, a.r};
}

/// Inverse direction, X = r Z. The stored margin is the measured slack.
inline AnnulusOperator annulus_from_hyperbola(const HyperbolaPair& h) {
  if (std::isinf(h.r))
    throw Unsupported("annulus_from_hyperbola: the cross has no annulus model");
  require_square_finite(h.Z, "annulus_from_hyperbola");
  CMatrix x = h.r * h.Z;
  double m = std::min(h.r - operator_norm(x), h.r - operator_norm(inverse(x)));
  return {x, h.r, m};
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// Z = V1 diag(a) V2* with Haar V1, V2 and a_i uniform in
/// [1/r^2 + margin, 1 - margin]; W = (1/r^2) Z^{-1} assembled from the same
/// factors.
inline HyperbolaPair sample_quantum_hyperbola(int dim, double r, double margin,
                                              std::uint64_t seed) {
  if (dim < 1 || dim > kMaxDim)
    throw InvalidInput("sample_quantum_hyperbola: dim must be in [1, " +
                       std::to_string(kMaxDim) + "]");
  if (!(r > 1.0) || std::isinf(r))
    throw InvalidInput("sample_quantum_hyperbola: r must be finite and exceed 1");
  double rr = 1.0 / (r * r);
  if (!(margin > 0.0 && margin < 0.5 * (1.0 - rr)))
    throw InvalidInput("sample_quantum_hyperbola: need 0 < margin < (1 - 1/r^2)/2");
  Rng rng(seed);
  CMatrix v1 = random_unitary(dim, rng);
  CMatrix v2 = random_unitary(dim, rng);
  RVector a(dim), ainv(dim);
  for (int i = 0; i < dim; ++i) {
    a(i) = rng.uniform(rr + margin, 1.0 - margin);
    ainv(i) = rr / a(i);
  }
  CMatrix z = v1 * a.cast<cplx>().asDiagonal() * v2.adjoint();
  CMatrix w = v2 * ainv.cast<cplx>().asDiagonal() * v1.adjoint();
  return {z, w, r};
}

enum class CrossMode { structured, general };

namespace detail {

inline void rescale_to_norm(CMatrix& m, double target) {
  double n = operator_norm(m);
  if (n > 1e-14) m *= target / n;
}

/// rows x cols block with nonzero singular values in [floor, 1] of the top
/// one. Keeps the cross factorizations well conditioned on their supports;
/// a raw Gaussian block can carry arbitrarily small singular values, which
/// amplify roundoff in the downstream polar factorizations.
inline CMatrix conditioned_block(int rows, int cols, Rng& rng, double floor = 0.05) {
  int m = std::min(rows, cols);
  CMatrix u = random_unitary(rows, rng);
  CMatrix v = random_unitary(cols, rng);
  CMatrix block = CMatrix::Zero(rows, cols);
  for (int i = 0; i < m; ++i)
    block += rng.uniform(floor, 1.0) * u.col(i) * v.col(i).adjoint();
  return block;
}

}  // namespace detail

/// structured: Z and W both map a random corank subspace into its complement
/// (so Z^2 = W^2 = 0 alongside ZW = WZ = 0). general: Z is an arbitrary
/// rank-deficient contraction and W maps (ran Z)-perp into ker Z; this
/// reaches pairs with ran Z not inside ker Z, which structured cannot.
inline HyperbolaPair sample_quantum_cross(int dim, std::uint64_t seed,
                                          CrossMode mode = CrossMode::structured) {
  if (dim < 2 || dim > kMaxDim)
    throw InvalidInput("sample_quantum_cross: dim must be in [2, " +
                       std::to_string(kMaxDim) + "]");
  Rng rng(seed);
  if (mode == CrossMode::structured) {
    int k = rng.uniform_int(1, dim - 1);
    CMatrix z0 = CMatrix::Zero(dim, dim), w0 = CMatrix::Zero(dim, dim);
    z0.topRightCorner(k, dim - k) = detail::conditioned_block(k, dim - k, rng);
    w0.topRightCorner(k, dim - k) = detail::conditioned_block(k, dim - k, rng);
    CMatrix q = random_unitary(dim, rng);
    CMatrix z = q * z0 * q.adjoint();
    CMatrix w = q * w0 * q.adjoint();
    detail::rescale_to_norm(z, rng.uniform(0.2, 0.995));
    detail::rescale_to_norm(w, rng.uniform(0.2, 0.995));
    return {z, w, kInfiniteRadius};
  }
  int rank = rng.uniform_int(1, dim - 1);
  CMatrix v = random_unitary(dim, rng);
  CMatrix x = random_unitary(dim, rng);
  RVector sig = RVector::Zero(dim);
  for (int i = 0; i < rank; ++i) sig(i) = rng.uniform(0.05, 1.0);
  sig *= rng.uniform(0.2, 0.995) / sig.maxCoeff();
  CMatrix z = v * sig.cast<cplx>().asDiagonal() * x.adjoint();
  CMatrix ker = x.rightCols(dim - rank);        // ker Z
  CMatrix coran = v.rightCols(dim - rank);      // (ran Z)-perp
  CMatrix w = ker * detail::conditioned_block(dim - rank, dim - rank, rng) *
              coran.adjoint();
  detail::rescale_to_norm(w, rng.uniform(0.2, 0.995));
  return {z, w, kInfiniteRadius};
}

}  // namespace qalab
