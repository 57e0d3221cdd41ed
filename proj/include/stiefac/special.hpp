#pragma once

// Special functions needed by the moment catalog and its oracles: Gamma for
// positive arguments, the exponential integral E1, and the complementary
// error function.  Each operation widens its internal working precision by a
// cancellation-derived guard amount and returns a value accurate to the
// context's requested digits.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stiefac/precision.hpp"

namespace stiefac {

inline Real sqrt_pi(const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real pi(0);
  mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
  return sqrt(pi);
}

// Gamma(x) for x > 0.  Integer and half-integer arguments go through exact
// closed forms — (n-1)! and (2n)! sqrt(pi) / (4^n n!) — so that the catalog's
// moment sequences are exact up to final rounding; other arguments delegate
// to MPFR's gamma, which meets the digit contract.
inline Real gamma_real(const Real& x, const PrecisionContext& ctx) {
  if (!(x > 0)) {
    throw std::domain_error("gamma_real: argument must be positive");
  }
  PrecisionScope scope(ctx);
  if (is_integer(x)) {
    unsigned long n = x.convert_to<unsigned long>();
    Real r(1);
    for (unsigned long i = 2; i + 1 <= n; ++i) r *= i;
    return r;
  }
  Real twox = x * 2;
  if (is_integer(twox)) {
    // x = n + 1/2:  Gamma(n + 1/2) = (2n)! / (4^n n!) * sqrt(pi).
    unsigned long n = (twox.convert_to<unsigned long>() - 1) / 2;
    Rational q(1);
    for (unsigned long i = 1; i <= 2 * n; ++i) q *= i;  // (2n)!
    for (unsigned long i = 1; i <= n; ++i) q /= 4 * i;  // 4^n n!
    return Real(q) * sqrt_pi(ctx);
  }
  Real r(0);
  mpfr_gamma(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

namespace detail {

// Power-series branch of E1, valid for any z > 0 but subject to alternating
// cancellation of about 0.44 z digits; the caller supplies guard digits.
//   E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!).
inline Real e1_series(const Real& z, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  // Re-register the argument at working precision (exact widening), so that
  // per-term quotients are not rounded at the caller's precision.
  Real zl(z, ctx.working_digits());
  Real acc = -ctx.euler_gamma() - log(zl);
  Real term(1);  // (-z)^k / k!
  Real eps = pow(Real(10), -static_cast<int>(ctx.working_digits()) - 2);
  for (unsigned k = 1; k < 100000; ++k) {
    term *= -zl / k;
    Real piece = term / k;
    acc -= piece;
    if (abs(piece) < eps * (abs(acc) + 1)) break;
  }
  return acc;
}

// Continued-fraction branch (modified Lentz) for large z:
//   E1(z) = e^{-z} / (z+1 - 1^2/(z+3 - 2^2/(z+5 - ...))).
inline Real e1_contfrac(const Real& z, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real zl(z, ctx.working_digits());
  Real tiny = pow(Real(10), -static_cast<int>(2 * ctx.working_digits()) - 30);
  Real eps = pow(Real(10), -static_cast<int>(ctx.working_digits()) - 2);
  Real b = zl + 1;
  Real f = b, c = b, d(0);
  for (unsigned k = 1; k < 100000; ++k) {
    Real a = -Real(k) * k;
    b += 2;
    d = b + a * d;
    if (d == 0) d = tiny;
    c = b + a / c;
    if (c == 0) c = tiny;
    d = 1 / d;
    Real delta = c * d;
    f *= delta;
    if (abs(delta - 1) < eps) break;
  }
  return exp(-zl) / f;
}

}  // namespace detail

// Exponential integral E1(z), z > 0.  The convergent series is used up to
// z = 32 (with ceil(0.44 z) + 12 guard digits to absorb its alternating
// cancellation); beyond that the continued fraction converges quickly and
// is immune to cancellation.  The switchover point is documented here and
// exercised from both sides by the test suite.
inline constexpr double kE1SeriesCutoff = 32.0;

inline Real exp_integral_e1(const Real& z, const PrecisionContext& ctx) {
  if (!(z > 0)) {
    throw std::domain_error("exp_integral_e1: argument must be positive");
  }
  Real result(0);
  if (z <= kE1SeriesCutoff) {
    unsigned guard = static_cast<unsigned>(std::ceil(0.44 * z.convert_to<double>())) + 12;
    result = detail::e1_series(z, ctx.widened(guard));
  } else {
    result = detail::e1_contfrac(z, ctx);
  }
  PrecisionScope scope(ctx);
  return Real(result, ctx.working_digits());
}

namespace detail {

// erf power series; cancellation costs about 0.87 x^2 digits when used for
// erfc = 1 - erf, which the caller's guard digits cover.
inline Real erfc_series(const Real& x, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real xl(x, ctx.working_digits());
  Real x2 = xl * xl;
  Real term = xl;  // x^{2k+1} / k!
  Real acc = xl;
  Real eps = pow(Real(10), -static_cast<int>(ctx.working_digits()) - 2);
  for (unsigned k = 1; k < 100000; ++k) {
    term *= -x2 / k;
    Real piece = term / (2 * k + 1);
    acc += piece;
    if (abs(piece) < eps * (abs(acc) + 1)) break;
  }
  Real pi(0);
  mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
  return 1 - acc * 2 / sqrt(pi);
}

// Continued fraction sqrt(pi) e^{x^2} erfc(x) = 1/(x + (1/2)/(x + (2/2)/(x + ...)))
// evaluated by modified Lentz; rapidly convergent for large x.
inline Real erfc_contfrac(const Real& x, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real xl(x, ctx.working_digits());
  Real tiny = pow(Real(10), -static_cast<int>(2 * ctx.working_digits()) - 30);
  Real eps = pow(Real(10), -static_cast<int>(ctx.working_digits()) - 2);
  Real f = xl, c = xl, d(0);
  for (unsigned k = 1; k < 100000; ++k) {
    Real a = Real(k) / 2;
    d = xl + a * d;
    if (d == 0) d = tiny;
    c = xl + a / c;
    if (c == 0) c = tiny;
    d = 1 / d;
    Real delta = c * d;
    f *= delta;
    if (abs(delta - 1) < eps) break;
  }
  Real pi(0);
  mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
  return exp(-xl * xl) / (f * sqrt(pi));
}

}  // namespace detail

// Complementary error function for x >= 0: Taylor series of erf below the
// cutoff (guarded against the e^{x^2} cancellation), continued fraction
// above it.
inline constexpr double kErfcSeriesCutoff = 8.0;

inline Real erfc_real(const Real& x, const PrecisionContext& ctx) {
  if (x < 0) {
    throw std::domain_error("erfc_real: argument must be non-negative");
  }
  Real result(0);
  if (x <= kErfcSeriesCutoff) {
    double xd = x.convert_to<double>();
    unsigned guard = static_cast<unsigned>(std::ceil(0.87 * xd * xd)) + 12;
    result = detail::erfc_series(x, ctx.widened(guard));
  } else {
    result = detail::erfc_contfrac(x, ctx);
  }
  PrecisionScope scope(ctx);
  return Real(result, ctx.working_digits());
}

}  // namespace stiefac
