#pragma once

// Inverse factorial series as a value type, together with its algebra:
// truncated evaluation, index shift, products, and the conversion from
// inverse-power expansions.  Everything here is generic over the scalar
// type S in {Rational, Real}; with Rational scalars all operations are
// exact and independent of any precision context.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stiefac/combinatorics.hpp"

namespace stiefac {

// Truncated inverse factorial series
//
//   value_K(m) = limit + sum_{k=0}^{K-1} k! c_k / (m+beta)_{k+1}.
//
// `beta` is the index shift of the expansion (>= -1/2; the half-integer
// value arises for measures with a t^{-1/2} density).  `limit` is the
// constant term, i.e. the m -> infinity value of the represented quantity.
// The truncation order K is first-class: these expansions are asymptotic
// objects and every consumer must know where the coefficient list stops.
template <class S>
struct FactorialSeries {
  S beta;
  S limit;
  std::vector<S> coeffs;
  // Set when the last coefficient absorbed a truncation artifact (index
  // shifts difference against a neighbor that no longer exists); evaluation
  // is then trustworthy only up to the last term's magnitude.
  bool last_truncation_affected = false;

  FactorialSeries(S beta_, S limit_, std::vector<S> coeffs_)
      : beta(std::move(beta_)), limit(std::move(limit_)), coeffs(std::move(coeffs_)) {
    if (beta < make_scalar<S>(Rational(-1, 2))) {
      throw std::domain_error("FactorialSeries: shift beta must be >= -1/2");
    }
  }
};

namespace detail {

// Guards the Pochhammer denominators (m+beta)_{k+1}, k < K: the series has
// simple poles where m+beta is zero or a negative integer.  Evaluation is
// restricted to m+beta > 0, and the error message distinguishes an exact
// pole hit from a plain domain violation.
template <class S>
void check_eval_base(const S& base, std::size_t K) {
  if (base > 0) return;
  if (is_integer(base)) {
    S low = make_scalar<S>(-static_cast<long>(K));
    if (base >= low) {
      throw std::domain_error(
          "factorial series evaluation: m+beta hits a Pochhammer pole "
          "(zero or negative integer within the summation range)");
    }
  }
  throw std::domain_error("factorial series evaluation requires m+beta > 0");
}

}  // namespace detail

// Evaluates the truncated series at index m.  The Pochhammer weights are
// built incrementally — p_0 = 1/(m+beta), p_{k+1} = p_k (k+1)/(m+beta+k+1) —
// never via naive factorial quotients, so no intermediate overflows or
// large-ratio roundings occur.
template <class S>
S eval_truncated(const FactorialSeries<S>& fs, const S& m) {
  const S base = m + fs.beta;
  detail::check_eval_base(base, fs.coeffs.size());
  S acc = fs.limit;
  S p = make_scalar<S>(1L) / base;  // k! / (m+beta)_{k+1} at k = 0
  for (std::size_t k = 0; k < fs.coeffs.size(); ++k) {
    acc += p * fs.coeffs[k];
    p *= make_scalar<S>(static_cast<long>(k + 1));
    p /= base + make_scalar<S>(static_cast<long>(k + 1));
  }
  return acc;
}

inline Real eval_truncated(const FactorialSeries<Real>& fs, const Real& m,
                           const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real ml(m, ctx.working_digits());
  return eval_truncated<Real>(fs, ml);
}

// |k! c_k / (m+beta)_{k+1}|: magnitude of the k-th term at index m.  For
// large k it scales like |c_k| O(k^{-(m+beta)}) (ratio-of-Gamma asymptotics),
// which is the diagnostic used for truncation-order selection.
template <class S>
S tail_magnitude(const FactorialSeries<S>& fs, const S& m, unsigned k) {
  if (k >= fs.coeffs.size()) {
    throw std::out_of_range("tail_magnitude: term index beyond stored coefficients");
  }
  const S base = m + fs.beta;
  detail::check_eval_base(base, k + 1);
  S p = make_scalar<S>(1L) / base;
  for (unsigned j = 0; j < k; ++j) {
    p *= make_scalar<S>(static_cast<long>(j + 1));
    p /= base + make_scalar<S>(static_cast<long>(j + 1));
  }
  return abs_scalar<S>(p * fs.coeffs[k]);
}

// Index advance: returns the series representing m |-> fs(m+1) over the same
// base (m+beta), via c'_0 = c_0 and c'_k = c_k - c_{k-1}.  The length is kept
// stable; the last output coefficient differences against a truncated
// neighbor and is flagged accordingly.
template <class S>
FactorialSeries<S> advance_index(const FactorialSeries<S>& fs) {
  std::vector<S> out = fs.coeffs;
  for (std::size_t k = fs.coeffs.size(); k-- > 1;) {
    out[k] = fs.coeffs[k] - fs.coeffs[k - 1];
  }
  FactorialSeries<S> result(fs.beta, fs.limit, std::move(out));
  result.last_truncation_affected = !fs.coeffs.empty();
  return result;
}

namespace detail {

template <class S>
const S& padded(const std::vector<S>& v, std::size_t i, const S& zero) {
  return i < v.size() ? v[i] : zero;
}

}  // namespace detail

enum class ProductVariant { primary, alternate };

// Single product coefficient d_k (k >= 1) of two factorial series with equal
// shift and zero limit term:
//
//   (sum k! b_k/(m)_{k+1}) (sum k! c_k/(m)_{k+1}) = sum_{k>=1} k! d_k/(m)_{k+1},
//
//   primary:    d_k = (1/k!) sum_{nu=0}^{k-1} sum_{mu=0}^{nu}
//                     nu! (mu+1)_{k-1-nu} b_{k-1-nu} c_{nu-mu}
//   alternate:  d_k = (1/k!) sum_{nu=0}^{k-1} sum_{lambda=0}^{nu}
//                     nu! (nu-lambda+1)_{k-1-nu} b_{k-1-nu} c_{lambda}
//
// The two index arrangements are algebraically identical; both are kept so
// the equivalence is testable.  Only c_0..c_{k-1} are touched, which is what
// makes the downstream coefficient recursion triangular.
template <class S>
S product_coeff(const std::vector<S>& b, const std::vector<S>& c, unsigned k,
                ProductVariant variant = ProductVariant::primary) {
  if (k == 0) return make_scalar<S>(0L);
  const S zero = make_scalar<S>(0L);
  S acc = zero;
  S nu_fact = make_scalar<S>(1L);  // nu!
  for (unsigned nu = 0; nu < k; ++nu) {
    if (nu > 0) nu_fact *= make_scalar<S>(static_cast<long>(nu));
    const S& bfac = detail::padded(b, k - 1 - nu, zero);
    if (bfac != 0) {
      S inner = zero;
      if (variant == ProductVariant::primary) {
        for (unsigned mu = 0; mu <= nu; ++mu) {
          inner += pochhammer<S>(make_scalar<S>(static_cast<long>(mu + 1)), k - 1 - nu) *
                   detail::padded(c, nu - mu, zero);
        }
      } else {
        for (unsigned lambda = 0; lambda <= nu; ++lambda) {
          inner += pochhammer<S>(make_scalar<S>(static_cast<long>(nu - lambda + 1)), k - 1 - nu) *
                   detail::padded(c, lambda, zero);
        }
      }
      acc += nu_fact * bfac * inner;
    }
  }
  return acc / factorial<S>(k);
}

// All product coefficients d_0..d_K, with the implicit d_0 = 0 included at
// index 0 so the result is directly usable as a coefficient list.
template <class S>
std::vector<S> product_coeffs(const std::vector<S>& b, const std::vector<S>& c,
                              unsigned K,
                              ProductVariant variant = ProductVariant::primary) {
  if (K < 1) {
    throw std::invalid_argument("product_coeffs: K must be >= 1");
  }
  std::vector<S> d;
  d.reserve(K + 1);
  d.push_back(make_scalar<S>(0L));
  for (unsigned k = 1; k <= K; ++k) {
    d.push_back(product_coeff<S>(b, c, k, variant));
  }
  return d;
}

// Inverse-power expansion rho_0 + sum_{k>=1} rho_k x^k of a moment-ratio
// sequence in x = 1/(m+shift); rho[i] stores rho_{i+1}.
template <class S>
struct PowerExpansion {
  S rho0;
  std::vector<S> rho;
};

// Stirling conversion of an inverse-power tail into inverse factorial terms:
//
//   b_k = ((-1)^k / k!) sum_{mu=0}^{k} (-1)^mu s(k,mu) rho_{mu+1},
//
// so that sum_k rho_{k+1}/M^{k+1} = sum_k k! b_k/(M)_{k+1} as formal
// expansions.  rho_0 is the limit part and passes through unchanged.
template <class S>
std::vector<S> power_to_factorial(const PowerExpansion<S>& pe, unsigned K) {
  if (K < 1) {
    throw std::invalid_argument("power_to_factorial: K must be >= 1");
  }
  if (pe.rho.size() < K) {
    throw std::invalid_argument(
        "power_to_factorial: need rho_1..rho_K, have only " +
        std::to_string(pe.rho.size()) + " entries for K=" + std::to_string(K));
  }
  auto rows = stirling_first_rows(K - 1);
  std::vector<S> b;
  b.reserve(K);
  for (unsigned k = 0; k < K; ++k) {
    S acc = make_scalar<S>(0L);
    for (unsigned mu = 0; mu <= k; ++mu) {
      S term = scalar_from_bigint<S>(rows[k][mu]) * pe.rho[mu];
      if (mu % 2 == 1) term = -term;
      acc += term;
    }
    if (k % 2 == 1) acc = -acc;
    b.push_back(acc / factorial<S>(k));
  }
  return b;
}

// Coefficients of the basic resolvent expansion 1/(z-w) = sum (w)_n/(z)_{n+1},
// i.e. b_n = (w)_n / n!; evaluating the resulting series at z with z - w > 0
// reproduces 1/(z-w) in the K -> infinity limit.
template <class S>
std::vector<S> waring_coeffs(const S& w, unsigned K) {
  std::vector<S> b;
  b.reserve(K);
  S p = make_scalar<S>(1L);  // (w)_n / n!
  for (unsigned n = 0; n < K; ++n) {
    b.push_back(p);
    p *= (w + make_scalar<S>(static_cast<long>(n)));
    p /= make_scalar<S>(static_cast<long>(n + 1));
  }
  return b;
}

}  // namespace stiefac
