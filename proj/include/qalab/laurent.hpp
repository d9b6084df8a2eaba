#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qalab/common.hpp"
#include "qalab/errors.hpp"
#include "qalab/rng.hpp"

namespace qalab {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Finitely supported Laurent series sum_{n=lo}^{hi} c_n zeta^n with
/// lo <= 0 <= hi.
struct LaurentPoly {
  int lo = 0;
  int hi = 0;
  std::vector<cplx> coeffs;  // coeffs[n - lo] = c_n

  LaurentPoly() : coeffs(1, cplx(0.0)) {}
  LaurentPoly(int lo_, int hi_) : lo(lo_), hi(hi_), coeffs(size_t(hi_ - lo_ + 1), cplx(0.0)) {}

  cplx coeff(int n) const {
    return (n < lo || n > hi) ? cplx(0.0) : coeffs[size_t(n - lo)];
  }
  cplx& at(int n) { return coeffs.at(size_t(n - lo)); }
};

inline void require_valid(const LaurentPoly& g, const char* who) {
  if (g.lo > 0 || g.hi < 0)
    throw InvalidInput(std::string(who) + ": need lo <= 0 <= hi");
  if (g.coeffs.size() != size_t(g.hi - g.lo + 1))
    throw InvalidInput(std::string(who) + ": coefficient storage size mismatch");
  for (const cplx& c : g.coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InvalidInput(std::string(who) + ": non-finite coefficient");
}

/// One-variable polynomial, p[k] multiplying z^k. Empty means zero.
using Polynomial = std::vector<cplx>;

/// f(z, w) = f_plus(z) z + a0 + w f_minus(w).
struct HyperbolaFunction {
  Polynomial f_plus;
  cplx a0 = 0.0;
  Polynomial f_minus;
};

/// Boundary-grid norm with a first-order Lipschitz certificate.
struct NormEstimate {
  double grid_max = 0.0;
  double certified_upper = 0.0;
  int grid_points = 0;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

inline cplx eval_poly(const Polynomial& p, cplx z) {
  cplx acc = 0.0;
  for (size_t k = p.size(); k-- > 0;) acc = acc * z + p[k];
  return acc;
}

/// Horner on the positive part plus Horner in 1/zeta on the negative part.
inline cplx eval_scalar(const LaurentPoly& g, cplx zeta) {
  require_valid(g, "eval_scalar");
  if (g.lo < 0 && zeta == cplx(0.0))
    throw ZeroArgument("eval_scalar: zeta = 0 with negative powers present");
  cplx pos = 0.0;
  for (int n = g.hi; n >= 0; --n) pos = pos * zeta + g.coeff(n);
  if (g.lo == 0) return pos;
  cplx inv = 1.0 / zeta;
  cplx neg = 0.0;
  for (int n = g.lo; n <= -1; ++n) neg = neg * inv + g.coeff(n);
  return pos + neg * inv;
}

// ---------------------------------------------------------------------------
// Certified sup norms on boundary circles
// ---------------------------------------------------------------------------

namespace detail {

struct CircleScan {
  double max_abs;
  double deriv_bound;  // bounds |d/dtheta g(rho e^{i theta})|
};

inline CircleScan scan_circle(const LaurentPoly& g, double rho, int grid) {
  double mx = 0.0;
  for (int j = 0; j < grid; ++j) {
    double theta = 2.0 * kPi * double(j) / double(grid);
    mx = std::max(mx, std::abs(eval_scalar(g, std::polar(rho, theta))));
  }
  // |zeta g'(zeta)| <= sum |n| |c_n| rho^n on |zeta| = rho.
  double d = 0.0;
  for (int n = g.lo; n <= g.hi; ++n)
    if (n != 0) d += std::abs(double(n)) * std::abs(g.coeff(n)) * std::pow(rho, n);
  return {mx, d};
}

inline void require_grid(int grid, const char* who) {
  if (grid < 64) throw InvalidInput(std::string(who) + ": grid must be >= 64");
}

}  // namespace detail

/// Sup of |g| over the annulus 1/r < |zeta| < r. The maximum principle puts
/// the sup on the two boundary circles; each is sampled on `grid` uniform
/// points and padded by half the angular spacing times a derivative bound.
inline NormEstimate annulus_sup_norm(const LaurentPoly& g, double r, int grid = 4096) {
  require_valid(g, "annulus_sup_norm");
  if (!(r > 1.0) || std::isinf(r))
    throw InvalidInput("annulus_sup_norm: r must be finite and exceed 1");
  detail::require_grid(grid, "annulus_sup_norm");
  NormEstimate ne;
  ne.grid_points = grid;
  for (double rho : {r, 1.0 / r}) {
    auto sc = detail::scan_circle(g, rho, grid);
    double pad = (kPi / double(grid)) * sc.deriv_bound;
    ne.grid_max = std::max(ne.grid_max, sc.max_abs);
    ne.certified_upper = std::max(ne.certified_upper, sc.max_abs + pad);
  }
  return ne;
}

/// As annulus_sup_norm, on the unit circle only.
inline NormEstimate disk_sup_norm(const Polynomial& p, int grid = 4096) {
  detail::require_grid(grid, "disk_sup_norm");
  double mx = 0.0;
  for (int j = 0; j < grid; ++j) {
    double theta = 2.0 * kPi * double(j) / double(grid);
    mx = std::max(mx, std::abs(eval_poly(p, std::polar(1.0, theta))));
  }
  double d = 0.0;
  for (size_t k = 1; k < p.size(); ++k) d += double(k) * std::abs(p[k]);
  return {mx, mx + (kPi / double(grid)) * d, grid};
}

// ---------------------------------------------------------------------------
// Annulus <-> hyperbola transport
// ---------------------------------------------------------------------------

/// Under zeta = r z, 1/zeta = r w the Laurent series becomes
/// f(z, w) = f_plus(z) z + a0 + w f_minus(w).
inline HyperbolaFunction to_hyperbola(const LaurentPoly& g, double r) {
  require_valid(g, "to_hyperbola");
  if (!(r > 1.0) || std::isinf(r))
    throw InvalidInput("to_hyperbola: r must be finite and exceed 1");
  HyperbolaFunction hf;
  hf.a0 = g.coeff(0);
  hf.f_plus.resize(size_t(g.hi));
  hf.f_minus.resize(size_t(-g.lo));
  double rp = 1.0;
  for (int n = 1; n <= g.hi; ++n) {
    rp *= r;
    hf.f_plus[size_t(n - 1)] = g.coeff(n) * rp;
  }
  rp = 1.0;
  for (int n = 1; n <= -g.lo; ++n) {
    rp *= r;
    hf.f_minus[size_t(n - 1)] = g.coeff(-n) * rp;
  }
  return hf;
}

inline LaurentPoly to_annulus(const HyperbolaFunction& hf, double r) {
  if (std::isinf(r))
    throw Unsupported("to_annulus: the cross has no annulus model");
  if (!(r > 1.0)) throw InvalidInput("to_annulus: r must exceed 1");
  LaurentPoly g(-int(hf.f_minus.size()), int(hf.f_plus.size()));
  g.at(0) = hf.a0;
  double rp = 1.0;
  for (int n = 1; n <= g.hi; ++n) {
    rp *= r;
    g.at(n) = hf.f_plus[size_t(n - 1)] / rp;
  }
  rp = 1.0;
  for (int n = 1; n <= -g.lo; ++n) {
    rp *= r;
    g.at(-n) = hf.f_minus[size_t(n - 1)] / rp;
  }
  return g;
}

/// Restriction of f to the branch {(z, 0)}: a0 + z f_plus(z).
inline Polynomial branch_z_poly(const HyperbolaFunction& hf) {
  Polynomial p(hf.f_plus.size() + 1);
  p[0] = hf.a0;
  for (size_t k = 0; k < hf.f_plus.size(); ++k) p[k + 1] = hf.f_plus[k];
  return p;
}

/// Restriction of f to the branch {(0, w)}: a0 + w f_minus(w).
inline Polynomial branch_w_poly(const HyperbolaFunction& hf) {
  Polynomial p(hf.f_minus.size() + 1);
  p[0] = hf.a0;
  for (size_t k = 0; k < hf.f_minus.size(); ++k) p[k + 1] = hf.f_minus[k];
  return p;
}

/// Finite r: the annulus scan of the transported series. r = inf: the cross
/// is the two coordinate disks glued at 0, so the sup is the larger of the
/// two branch norms.
inline NormEstimate hyperbola_sup_norm(const HyperbolaFunction& hf, double r, int grid = 4096) {
  if (std::isinf(r)) {
    NormEstimate a = disk_sup_norm(branch_z_poly(hf), grid);
    NormEstimate b = disk_sup_norm(branch_w_poly(hf), grid);
    return {std::max(a.grid_max, b.grid_max),
            std::max(a.certified_upper, b.certified_upper), grid};
  }
  return annulus_sup_norm(to_annulus(hf, r), r, grid);
}

// ---------------------------------------------------------------------------
// Cauchy constants
// ---------------------------------------------------------------------------

struct CauchyConstants {
  double k1;  // bounds |f+ z + a0|_D and |w f- + a0|_D against |f|_{H_r}
  double k2;  // bounds |f+|_D and |f-|_D against |f|_{H_r}
};

inline CauchyConstants cauchy_constants(double r) {
  if (std::isinf(r)) return {1.0, 1.0};
  if (!(r > 1.0)) throw InvalidInput("cauchy_constants: r must exceed 1");
  double r2 = r * r;
  return {r2 / (r2 - 1.0), (2.0 * r2 - 1.0) / (r2 - 1.0)};
}

// ---------------------------------------------------------------------------
// Random test functions
// ---------------------------------------------------------------------------

/// Gaussian coefficients scaled by r^{-|n|} so both boundary circles
/// contribute at comparable size.
inline LaurentPoly random_laurent(int lo, int hi, double r, std::uint64_t seed) {
  if (lo > 0 || hi < 0) throw InvalidInput("random_laurent: need lo <= 0 <= hi");
  if (lo < -kMaxLaurentDegree || hi > kMaxLaurentDegree)
    throw InvalidInput("random_laurent: degree cap is " + std::to_string(kMaxLaurentDegree));
  if (!(r > 1.0) || std::isinf(r))
    throw InvalidInput("random_laurent: r must be finite and exceed 1");
  Rng rng(seed);
  LaurentPoly g(lo, hi);
  for (int n = lo; n <= hi; ++n)
    g.at(n) = rng.cnormal() * std::pow(r, -std::abs(double(n)));
  return g;
}

/// Gaussian hyperbola-coordinate function of total degree <= deg; used for
/// cross trials and dilation probes where no annulus scaling applies.
inline HyperbolaFunction random_hyperbola_function(int deg, std::uint64_t seed) {
  if (deg < 0 || deg > kMaxLaurentDegree)
    throw InvalidInput("random_hyperbola_function: deg must be in [0, " +
                       std::to_string(kMaxLaurentDegree) + "]");
  Rng rng(seed);
  HyperbolaFunction hf;
  hf.a0 = rng.cnormal();
  hf.f_plus.resize(size_t(deg));
  hf.f_minus.resize(size_t(deg));
  for (auto& c : hf.f_plus) c = rng.cnormal();
  for (auto& c : hf.f_minus) c = rng.cnormal();
  return hf;
}

}  // namespace qalab
