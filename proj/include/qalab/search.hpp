#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "qalab/calculus.hpp"
#include "qalab/domains.hpp"
#include "qalab/estimate.hpp"
#include "qalab/laurent.hpp"
#include "qalab/parallel.hpp"

namespace qalab {

// ---------------------------------------------------------------------------
// Witnesses
// ---------------------------------------------------------------------------

/// A concrete (operator, function) pair certifying a lower bound on the
/// spectral constant, with enough metadata to replay it exactly.
struct Witness {
  double r = 2.0;
  bool is_cross = false;
  AnnulusOperator op;      // finite-r witness
  LaurentPoly fn;          //
  HyperbolaPair pair;      // cross witness
  HyperbolaFunction hfn;   //
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::int64_t iterations = 0;  // ratio evaluations spent
  int grid = 4096;

  double revalidate() const;
};

/// |g(X)| over the grid sup of |g| on the annulus boundary.
inline double ratio(const LaurentPoly& g, const AnnulusOperator& a, int grid = 4096) {
  NormEstimate ne = annulus_sup_norm(g, a.r, grid);
  if (!(ne.grid_max > 0.0)) throw ZeroArgument("ratio: zero function");
  return operator_norm(eval_on_operator(g, a.X)) / ne.grid_max;
}

inline double Witness::revalidate() const {
  if (is_cross) {
    NormEstimate ne = hyperbola_sup_norm(hfn, r, grid);
    if (!(ne.grid_max > 0.0)) throw ZeroArgument("revalidate: zero function");
    return operator_norm(eval_on_pair(hfn, pair)) / ne.grid_max;
  }
  return qalab::ratio(fn, op, grid);
}

/// The extremal cross example: Z = W = (1-eps) E_01 with f = z + w gives the
/// ratio 2(1-eps), approaching the exact cross constant as eps -> 0.
inline Witness cross_witness(double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw InvalidInput("cross_witness: eps must lie in [0, 1)");
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 1) = 1.0 - eps;
  Witness w;
  w.r = kInfiniteRadius;
  w.is_cross = true;
  w.pair = {z, z, kInfiniteRadius};
  w.hfn = {{cplx(1.0)}, 0.0, {cplx(1.0)}};
  w.ratio = 2.0 * (1.0 - eps);
  return w;
}

// ---------------------------------------------------------------------------
// Alternating maximization
// ---------------------------------------------------------------------------

namespace detail {

inline void project_singular_values(CMatrix& x, double r, double margin) {
  SvdResult s = svd(x);
  RVector sig = s.singular_values;
  double lo = 1.0 / (r - margin), hi = r - margin;
  for (int i = 0; i < sig.size(); ++i) sig(i) = std::clamp(sig(i), lo, hi);
  x = s.left * sig.cast<cplx>().asDiagonal() * s.right.adjoint();
}

struct RestartResult {
  double ratio = 0.0;
  LaurentPoly g;
  CMatrix x;
  std::int64_t evals = 0;
};

/// Leading singular pair of g(X).
struct LeadingPair {
  double sigma;
  CVector u, v;
};

inline LeadingPair leading_pair(const LaurentPoly& g, const CMatrix& x) {
  CMatrix gx = eval_on_operator(g, x);
  Eigen::JacobiSVD<CMatrix> dec(gx, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {dec.singularValues()(0), dec.matrixU().col(0), dec.matrixV().col(0)};
}

/// Boundary-grid sup of |g| together with the point attaining it; the point
/// feeds the sup-norm subgradient of the ratio objective.
struct SupArgmax {
  double value = 0.0;
  cplx at = 1.0;
};

inline SupArgmax sup_and_argmax(const LaurentPoly& g, double r, int grid) {
  SupArgmax best;
  best.value = -1.0;
  for (double rho : {r, 1.0 / r}) {
    for (int j = 0; j < grid; ++j) {
      cplx zeta = std::polar(rho, 2.0 * kPi * double(j) / double(grid));
      double v = std::abs(eval_scalar(g, zeta));
      if (v > best.value) {
        best.value = v;
        best.at = zeta;
      }
    }
  }
  return best;
}

/// Ascent direction for sigma_max(g(X)) in X, holding g and the leading
/// singular pair (u, v) fixed to first order: for each monomial c_n X^n the
/// derivative splits over the product rule, giving sums of rank-one terms
/// (X*)^j u ((X*)^{n-1-j} v)*; inverse powers contribute with a sign flip
/// through d(X^{-1}) = -X^{-1} dX X^{-1}.
inline CMatrix x_gradient(const LaurentPoly& g, const CMatrix& x, const CMatrix& xinv,
                          const CVector& u, const CVector& v) {
  const auto n = x.rows();
  CMatrix grad = CMatrix::Zero(n, n);
  int max_pos = g.hi, max_neg = -g.lo;
  std::vector<CVector> xu(size_t(std::max(max_pos, max_neg + 1)) + 1),
      xv(size_t(std::max(max_pos, max_neg + 1)) + 1);
  CMatrix xadj = x.adjoint();
  CMatrix yadj = xinv.adjoint();
  xu[0] = u;
  xv[0] = v;
  for (size_t k = 1; k < xu.size(); ++k) {
    xu[k] = xadj * xu[k - 1];
    xv[k] = xadj * xv[k - 1];
  }
  for (int m = 1; m <= max_pos; ++m) {
    cplx c = std::conj(g.coeff(m));
    if (c == cplx(0.0)) continue;
    for (int j = 0; j < m; ++j) grad += c * xu[size_t(j)] * xv[size_t(m - 1 - j)].adjoint();
  }
  if (max_neg > 0) {
    std::vector<CVector> yu(size_t(max_neg) + 1), yv(size_t(max_neg) + 1);
    yu[0] = u;
    yv[0] = v;
    for (int k = 1; k <= max_neg; ++k) {
      yu[size_t(k)] = yadj * yu[size_t(k - 1)];
      yv[size_t(k)] = yadj * yv[size_t(k - 1)];
    }
    for (int m = 1; m <= max_neg; ++m) {
      cplx c = std::conj(g.coeff(-m));
      if (c == cplx(0.0)) continue;
      for (int j = 0; j < m; ++j)
        grad -= c * yu[size_t(j + 1)] * yv[size_t(m - j)].adjoint();
    }
  }
  return grad;
}

/// Powers of zeta for n in [lo, hi], via repeated multiplication.
inline cplx int_power(cplx zeta, int n) {
  cplx acc = 1.0;
  cplx base = n >= 0 ? zeta : 1.0 / zeta;
  for (int k = std::abs(n); k > 0; --k) acc *= base;
  return acc;
}

/// One seeded ascent run on the objective sigma_max(g(X)) / sup|g|.
///
/// The f-step moves along the ratio subgradient: the sigma_max part is the
/// analytic gradient u* X^n v at the leading singular pair, the sup part is
/// the phase direction at the boundary argmax; components are preconditioned
/// by the balanced weights r^{-2|n|} so every degree moves its boundary
/// contribution at comparable speed. After each step g is renormalized to
/// unit grid sup, so sigma_max is the running ratio. The X-step alternates
/// gradient moves with random kicks, projecting singular values back into
/// [1/(r-margin), r-margin]. Even restarts begin from boundary operators
/// (singular values at the interval ends); odd ones from interior samples.
/// A coarse grid keeps the inner loop cheap; callers re-score the winner on
/// the full grid.
inline RestartResult ascend_once(double r, int dim, int deg, std::int64_t budget,
                                 std::uint64_t seed, double margin, int opt_grid) {
  Rng rng(seed);
  int dj = dim >= 2 ? rng.uniform_int(2, dim) : 1;
  CMatrix x;
  if (seed % 2 == 0 && dj >= 2) {
    RVector sig(dj);
    for (int i = 0; i < dj; ++i)
      sig(i) = rng.uniform() < 0.5 ? r - margin : 1.0 / (r - margin);
    CMatrix uu = random_unitary(dj, rng);
    CMatrix vv = random_unitary(dj, rng);
    x = uu * sig.cast<cplx>().asDiagonal() * vv.adjoint();
  } else {
    double sample_margin = std::min(1e-3, 0.25 * (1.0 - 1.0 / (r * r)));
    x = r * sample_quantum_hyperbola(dj, r, sample_margin, rng.next_u64()).Z;
  }
  LaurentPoly g = random_laurent(-deg, deg, r, rng.next_u64());

  std::vector<double> weight(size_t(2 * deg + 1));
  for (int n = -deg; n <= deg; ++n)
    weight[size_t(n + deg)] = std::pow(r, -2.0 * std::abs(double(n)));

  RestartResult res;

  // Normalize so the coarse denominator is 1; sigma_max is then the ratio.
  SupArgmax sup = sup_and_argmax(g, r, opt_grid);
  ++res.evals;
  double den = sup.value > 0.0 ? sup.value : 1.0;
  for (auto& c : g.coeffs) c /= den;
  double cur = leading_pair(g, x).sigma;
  res.ratio = cur;
  res.g = g;
  res.x = x;

  CMatrix xinv = inverse(x);
  double eta = 0.5;
  double delta = 0.2;
  const int f_steps = 10, x_steps = 5;

  while (res.evals < budget) {
    // ---- function ascent ----
    for (int t = 0; t < f_steps && res.evals < budget; ++t) {
      LeadingPair lp = leading_pair(g, x);
      // sup subgradient: the phase of g at its boundary argmax.
      cplx gz = eval_scalar(g, sup.at);
      cplx phase = std::abs(gz) > 0.0 ? gz / std::abs(gz) : cplx(1.0);
      std::vector<cplx> grad(size_t(g.hi - g.lo + 1));
      CVector p = lp.v;
      for (int n = 0; n <= g.hi; ++n) {
        cplx t_n = (lp.u.adjoint() * p)(0, 0);
        grad[size_t(n - g.lo)] = std::conj(t_n) - cur * phase * std::conj(int_power(sup.at, n));
        if (n < g.hi) p = x * p;
      }
      if (g.lo < 0) {
        CVector q = xinv * lp.v;
        for (int n = -1; n >= g.lo; --n) {
          cplx t_n = (lp.u.adjoint() * q)(0, 0);
          grad[size_t(n - g.lo)] = std::conj(t_n) - cur * phase * std::conj(int_power(sup.at, n));
          if (n > g.lo) q = xinv * q;
        }
      }
      LaurentPoly cand = g;
      for (int n = g.lo; n <= g.hi; ++n)
        cand.at(n) += eta * weight[size_t(n + deg)] * grad[size_t(n - g.lo)];
      SupArgmax csup = sup_and_argmax(cand, r, opt_grid);
      ++res.evals;
      if (!(csup.value > 0.0)) continue;
      for (auto& c : cand.coeffs) c /= csup.value;
      csup.value = 1.0;
      double cnum = leading_pair(cand, x).sigma;
      if (cnum > cur) {
        g = cand;
        sup = csup;
        cur = cnum;
        eta *= 1.2;
      } else {
        eta *= 0.5;
        if (eta < 1e-10) eta = 0.5;
      }
    }
    // ---- operator ascent: gradient move, with random kicks interleaved ----
    for (int t = 0; t < x_steps && res.evals < budget; ++t) {
      CMatrix step;
      if (t % 3 == 2) {
        step = random_gaussian(int(x.rows()), rng);
      } else {
        LeadingPair lp = leading_pair(g, x);
        step = x_gradient(g, x, xinv, lp.u, lp.v);
      }
      double sn = operator_norm(step);
      if (!(sn > 0.0)) continue;
      CMatrix xp = x + (delta * r / sn) * step;
      project_singular_values(xp, r, margin);
      double cnum = leading_pair(g, xp).sigma;  // denominator unchanged (= 1)
      ++res.evals;
      if (cnum > cur) {
        x = xp;
        xinv = inverse(x);
        cur = cnum;
        delta *= 1.3;
      } else {
        delta *= 0.6;
        if (delta < 1e-8) delta = 0.2;
      }
    }
    if (cur > res.ratio) {
      res.ratio = cur;
      res.g = g;
      res.x = x;
    }
  }
  return res;
}

}  // namespace detail

/// Alternating maximization with random restarts. Restarts run concurrently
/// on seeds derived from `seed`; the best witness wins with ties broken by
/// restart order, so parallel and serial runs agree bit for bit. The
/// returned ratio is re-scored on the full `grid`.
inline Witness optimize_lower_bound(double r, int dim, int deg, std::int64_t budget,
                                    int restarts, std::uint64_t seed, int grid = 4096,
                                    double margin = 1e-3) {
  if (!(r > 1.0) || std::isinf(r))
    throw InvalidInput("optimize_lower_bound: r must be finite and exceed 1");
  if (dim < 1 || dim > kMaxDim) throw InvalidInput("optimize_lower_bound: bad dim");
  if (deg < 0 || deg > kMaxLaurentDegree)
    throw InvalidInput("optimize_lower_bound: bad deg");
  if (budget < 1) throw InvalidInput("optimize_lower_bound: budget must be >= 1");
  if (restarts < 1) throw InvalidInput("optimize_lower_bound: restarts must be >= 1");
  if (!(margin > 0.0 && margin < r - 1.0))
    throw InvalidInput("optimize_lower_bound: margin must lie in (0, r - 1)");

  const int opt_grid = 512;
  std::vector<detail::RestartResult> runs(static_cast<size_t>(restarts));
  parallel_for(restarts, [&](int j) {
    std::int64_t share = budget / restarts + (j == 0 ? budget % restarts : 0);
    share = std::max<std::int64_t>(share, 1);
    runs[size_t(j)] = detail::ascend_once(r, dim, deg, share, derive_seed(seed, std::uint64_t(j)),
                                          margin, opt_grid);
  });

  Witness best;
  best.r = r;
  best.seed = seed;
  best.grid = grid;
  double best_full = -1.0;
  for (int j = 0; j < restarts; ++j) {
    const auto& run = runs[size_t(j)];
    best.iterations += run.evals;
    AnnulusOperator op{run.x, r,
                       std::min(r - operator_norm(run.x),
                                r - operator_norm(inverse(run.x)))};
    double full = ratio(run.g, op, grid);
    if (full > best_full) {
      best_full = full;
      best.op = op;
      best.fn = run.g;
    }
  }
  best.ratio = best_full;
  return best;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepRow {
  double r = 0.0;
  double C_r = 0.0;
  double best_ratio = 0.0;
  double gap = 0.0;
  int dim = 0;
  int deg = 0;
  std::int64_t budget = 0;
  std::uint64_t seed = 0;
};

inline std::vector<SweepRow> sweep(std::span<const double> r_values, int dim, int deg,
                                   std::int64_t budget, std::uint64_t seed,
                                   int restarts = 8, int grid = 4096) {
  std::vector<SweepRow> rows;
  rows.reserve(r_values.size());
  for (size_t i = 0; i < r_values.size(); ++i) {
    double r = r_values[i];
    std::uint64_t row_seed = derive_seed(seed, i);
    Witness w = optimize_lower_bound(r, dim, deg, budget, restarts, row_seed, grid);
    double c = bound_constant(r);
    rows.push_back({r, c, w.ratio, c - w.ratio, dim, deg, budget, row_seed});
  }
  return rows;
}

}  // namespace qalab
