#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qalab/calculus.hpp"
#include "qalab/dilation.hpp"
#include "qalab/domains.hpp"
#include "qalab/laurent.hpp"
#include "qalab/parallel.hpp"

namespace qalab {

// ---------------------------------------------------------------------------
// The bound constant
// ---------------------------------------------------------------------------

/// C(r) = 2 [ 1 + 2 r^2 / (r^4 - 1) ]; the limit at r = inf is 2.
inline double bound_constant(double r) {
  if (std::isinf(r)) return 2.0;
  if (!(r > 1.0)) throw InvalidInput("bound_constant: r must exceed 1 or be inf");
  double r2 = r * r;
  return 2.0 * (1.0 + 2.0 * r2 / (r2 * r2 - 1.0));
}

struct KnownBounds {
  double lower = 2.0;
  double upper = 0.0;
  std::string lower_source;
  std::string upper_source;
  double crossover = 0.0;  // radius where C(r) meets 1 + sqrt(2)
};

/// Radius at which C(r) drops below the classical 1 + sqrt(2); C is strictly
/// decreasing so bisection suffices.
inline double bound_crossover() {
  const double target = 1.0 + std::sqrt(2.0);
  double lo = 1.5, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (bound_constant(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline KnownBounds known_bounds(double r) {
  if (!std::isinf(r) && !(r > 1.0))
    throw InvalidInput("known_bounds: r must exceed 1 or be inf");
  const double classical = 1.0 + std::sqrt(2.0);
  double c = bound_constant(r);
  KnownBounds kb;
  kb.lower = 2.0;
  kb.lower_source = "nilpotent cross witness";
  if (c < classical) {
    kb.upper = c;
    kb.upper_source = "minidilation estimate C(r)";
  } else {
    kb.upper = classical;
    kb.upper_source = "classical 1+sqrt(2)";
  }
  kb.crossover = bound_crossover();
  return kb;
}

// ---------------------------------------------------------------------------
// The operator identity behind the estimate
// ---------------------------------------------------------------------------

/// With (Z, W, U) := (Z_hat, W_hat, U_big) the two sides of
///   c U f(Z,W) U* = U (f+(Z)Z + a0) Z* + W* (W f-(W) + a0) U*
///                   + (1/r^2) [ U f+(Z) + f-(W) U* ]
/// are returned; the 1/r^2 term drops out at the cross.
inline std::pair<CMatrix, CMatrix> identity_sides(const HyperbolaFunction& hf,
                                                  const DilationResult& d) {
  const CMatrix& z = d.Z_hat;
  const CMatrix& w = d.W_hat;
  const CMatrix& u = d.U_big;
  double rr = std::isinf(d.r) ? 0.0 : 1.0 / (d.r * d.r);
  CMatrix lhs = d.c * u * eval_on_pair(hf, d.dilated_pair()) * u.adjoint();
  CMatrix fpz = eval_poly_on(hf.f_plus, z);
  CMatrix fmw = eval_poly_on(hf.f_minus, w);
  CMatrix t1 = fpz * z;
  t1.diagonal().array() += hf.a0;
  CMatrix t2 = w * fmw;
  t2.diagonal().array() += hf.a0;
  CMatrix rhs = u * t1 * z.adjoint() + w.adjoint() * t2 * u.adjoint();
  if (rr != 0.0) rhs += rr * (u * fpz + fmw * u.adjoint());
  return {std::move(lhs), std::move(rhs)};
}

inline double identity_residual(const HyperbolaFunction& hf, const DilationResult& d) {
  auto [lhs, rhs] = identity_sides(hf, d);
  return operator_norm(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Randomized verification of the main bound
// ---------------------------------------------------------------------------

struct Violation {
  int trial = -1;
  std::uint64_t seed = 0;
  double ratio = 0.0;
  double allowed = 0.0;
};

struct BoundReport {
  double r = 2.0;
  double C_r = 0.0;
  int trials = 0;
  double max_ratio = 0.0;
  std::uint64_t max_ratio_seed = 0;
  int max_ratio_trial = -1;
  double max_identity_residual = 0.0;
  double max_pad_slack = 0.0;
  std::vector<Violation> violations;
};

/// Per trial: sample a pair and a random function, compare
/// |f(Z,W)| / grid_max against C(r) (1 + pad slack), and run the operator
/// identity on the dilated sample. Trials are independent, seeded by
/// derive_seed(seed, trial), and run concurrently.
inline BoundReport verify_estimate(double r, int dim, int deg, int trials,
                                   std::uint64_t seed, int grid = 4096) {
  if (!std::isinf(r) && !(r > 1.0))
    throw InvalidInput("verify_estimate: r must exceed 1 or be inf");
  if (dim < 1 || dim > kMaxDim) throw InvalidInput("verify_estimate: bad dim");
  if (deg < 0 || deg > kMaxLaurentDegree) throw InvalidInput("verify_estimate: bad deg");
  if (trials < 1) throw InvalidInput("verify_estimate: trials must be >= 1");

  BoundReport rep;
  rep.r = r;
  rep.C_r = bound_constant(r);
  rep.trials = trials;

  struct Trial {
    double ratio = 0.0, pad_slack = 0.0, idres = 0.0, allowed = 0.0;
    bool ok = true;
    std::uint64_t seed = 0;
  };
  std::vector<Trial> out(static_cast<size_t>(trials));

  parallel_for(trials, [&](int i) {
    std::uint64_t s = derive_seed(seed, std::uint64_t(i));
    Rng rng(s);
    HyperbolaPair pair;
    HyperbolaFunction hf;
    DilationResult d;
    if (std::isinf(r)) {
      int di = rng.uniform_int(2, std::max(2, dim));
      pair = sample_quantum_cross(di, derive_seed(s, 1),
                                  i % 2 ? CrossMode::general : CrossMode::structured);
      hf = random_hyperbola_function(deg > 0 ? rng.uniform_int(0, deg) : 0,
                                     derive_seed(s, 2));
      d = build_cross_dilation(pair);
    } else {
      int di = rng.uniform_int(1, dim);
      pair = sample_quantum_hyperbola(di, r, 1e-3, derive_seed(s, 1));
      int hi = deg > 0 ? rng.uniform_int(0, deg) : 0;
      int lo = deg > 0 ? -rng.uniform_int(0, deg) : 0;
      hf = to_hyperbola(random_laurent(lo, hi, r, derive_seed(s, 2)), r);
      d = build_dilation(pair);
    }
    NormEstimate ne = hyperbola_sup_norm(hf, r, grid);
    Trial t;
    t.seed = s;
    if (ne.grid_max > 0.0) {
      double num = operator_norm(eval_on_pair(hf, pair));
      t.ratio = num / ne.grid_max;
      t.pad_slack = (ne.certified_upper - ne.grid_max) / ne.grid_max;
    }
    t.allowed = rep.C_r * (1.0 + t.pad_slack) + 1e-12;
    t.ok = t.ratio <= t.allowed;
    t.idres = identity_residual(hf, d);
    out[size_t(i)] = t;
  });

  for (int i = 0; i < trials; ++i) {
    const Trial& t = out[size_t(i)];
    if (t.ratio > rep.max_ratio) {
      rep.max_ratio = t.ratio;
      rep.max_ratio_seed = t.seed;
      rep.max_ratio_trial = i;
    }
    rep.max_identity_residual = std::max(rep.max_identity_residual, t.idres);
    rep.max_pad_slack = std::max(rep.max_pad_slack, t.pad_slack);
    if (!t.ok) rep.violations.push_back({i, t.seed, t.ratio, t.allowed});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Asymptotics
// ---------------------------------------------------------------------------

struct AsymptoticRow {
  double r = 0.0;
  double c_minus_2 = 0.0;
  double envelope = 0.0;  // 4.3 / r^2
  bool ok = false;
};

/// C(r) - 2 = 4 r^2/(r^4 - 1) <= (4/r^2) max_{r>=2} r^4/(r^4-1) = (64/15)/r^2,
/// so 4.3/r^2 is an explicit O(1/r^2) envelope valid from r = 2 on.
inline std::vector<AsymptoticRow> asymptotic_check(std::span<const double> r_list) {
  std::vector<AsymptoticRow> rows;
  rows.reserve(r_list.size());
  for (double r : r_list) {
    if (!(r >= 2.0)) throw InvalidInput("asymptotic_check: requires r >= 2");
    double cm2 = bound_constant(r) - 2.0;
    double env = std::isinf(r) ? 0.0 : 4.3 / (r * r);
    rows.push_back({r, cm2, env, cm2 <= env});
  }
  return rows;
}

}  // namespace qalab
