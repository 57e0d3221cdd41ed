#pragma once

// Classical orthogonal polynomials evaluated by their explicit finite sums.
//
// Explicit sums are used deliberately instead of three-term recurrences:
// the coefficient closed forms in the catalog instantiate these polynomials
// with parameters that depend on the degree (Jacobi with a = 2-beta-k) or
// that sit on degenerate values (Laguerre with alpha = -1), where the
// standard recurrences lose validity.

#include "stiefac/combinatorics.hpp"

namespace stiefac {

// Associated Laguerre polynomial
//   L_k^{(alpha)}(z) = sum_{j=0}^{k} C(k+alpha, k-j) (-z)^j / j!.
template <class S>
S laguerre_poly(unsigned k, const S& alpha, const S& z) {
  S acc = make_scalar<S>(0L);
  S zpow = make_scalar<S>(1L);  // (-z)^j
  for (unsigned j = 0; j <= k; ++j) {
    acc += binomial_general<S>(make_scalar<S>(static_cast<long>(k)) + alpha, k - j) *
           zpow / factorial<S>(j);
    zpow *= -z;
  }
  return acc;
}

// Jacobi polynomial
//   P_n^{(a,b)}(x) = sum_{j=0}^{n} C(n+a, n-j) C(n+b, j)
//                    ((x-1)/2)^j ((x+1)/2)^{n-j}.
template <class S>
S jacobi_poly_explicit(unsigned n, const S& a, const S& b, const S& x) {
  const S half = make_scalar<S>(1L) / make_scalar<S>(2L);
  const S um = (x - make_scalar<S>(1L)) * half;  // (x-1)/2
  const S up = (x + make_scalar<S>(1L)) * half;  // (x+1)/2
  const S n_s = make_scalar<S>(static_cast<long>(n));
  S acc = make_scalar<S>(0L);
  for (unsigned j = 0; j <= n; ++j) {
    S term = binomial_general<S>(n_s + a, n - j) * binomial_general<S>(n_s + b, j);
    // um^j * up^(n-j); small degrees only, direct powers are fine.
    for (unsigned i = 0; i < j; ++i) term *= um;
    for (unsigned i = 0; i < n - j; ++i) term *= up;
    acc += term;
  }
  return acc;
}

}  // namespace stiefac
