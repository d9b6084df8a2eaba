#pragma once

#include "qalab/domains.hpp"
#include "qalab/laurent.hpp"
#include "qalab/numkernel.hpp"

namespace qalab {

/// Horner evaluation of a one-variable polynomial at a matrix argument.
inline CMatrix eval_poly_on(const Polynomial& p, const CMatrix& x) {
  require_square_finite(x, "eval_poly_on");
  const auto n = x.rows();
  CMatrix acc = CMatrix::Zero(n, n);
  for (size_t k = p.size(); k-- > 0;) {
    acc = acc * x;
    acc.diagonal().array() += p[k];
  }
  return acc;
}

/// sum_{n>=0} c_n X^n + sum_{n>=1} c_{-n} (X^{-1})^n; one inverse
/// factorization, Horner in X and in X^{-1}.
inline CMatrix eval_on_operator(const LaurentPoly& g, const CMatrix& x) {
  require_valid(g, "eval_on_operator");
  require_square_finite(x, "eval_on_operator");
  const auto n = x.rows();
  CMatrix acc = CMatrix::Zero(n, n);
  for (int k = g.hi; k >= 0; --k) {
    acc = acc * x;
    acc.diagonal().array() += g.coeff(k);
  }
  if (g.lo < 0) {
    CMatrix y;
    try {
      y = inverse(x);
    } catch (const SingularMatrix&) {
      throw SingularMatrix("eval_on_operator: negative powers require invertible X");
    }
    CMatrix neg = CMatrix::Zero(n, n);
    for (int k = g.lo; k <= -1; ++k) {
      neg = neg * y;
      neg.diagonal().array() += g.coeff(k);
    }
    acc += neg * y;
  }
  return acc;
}

/// f+(Z) Z + a0 I + W f-(W); valid for finite r and the cross alike.
inline CMatrix eval_on_pair(const HyperbolaFunction& hf, const HyperbolaPair& h,
                            double membership_tol = 1e-8) {
  MembershipReport rep = membership(h, membership_tol);
  if (!rep.ok)
    throw InvalidInput("eval_on_pair: pair fails membership (" + rep.summary() + ")");
  CMatrix out = eval_poly_on(hf.f_plus, h.Z) * h.Z;
  out.diagonal().array() += hf.a0;
  out += h.W * eval_poly_on(hf.f_minus, h.W);
  return out;
}

/// Leading k x k block.
inline CMatrix compression_top_left(const CMatrix& m, int k) {
  require_square_finite(m, "compression_top_left");
  if (k < 1 || k > m.rows())
    throw InvalidInput("compression_top_left: k out of range");
  return m.topLeftCorner(k, k);
}

}  // namespace qalab
