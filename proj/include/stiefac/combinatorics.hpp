#pragma once

// Combinatorial kernels: factorials, Pochhammer symbols, generalized binomial
// coefficients, and signed Stirling numbers of the first kind.  All of them
// are generic over the scalar type (exact Rational or configurable-precision
// Real) except the Stirling numbers, which are integers by nature.

#include <stdexcept>
#include <vector>

#include "stiefac/precision.hpp"

namespace stiefac {

// k! as an exact integer.
inline BigInt factorial_int(unsigned k) {
  BigInt r = 1;
  for (unsigned i = 2; i <= k; ++i) r *= i;
  return r;
}

template <class S>
S factorial(unsigned k) {
  S r = make_scalar<S>(1L);
  for (unsigned i = 2; i <= k; ++i) r *= make_scalar<S>(static_cast<long>(i));
  return r;
}

// Pochhammer symbol (x)_k = x (x+1) ... (x+k-1); empty product for k = 0.
template <class S>
S pochhammer(const S& x, unsigned k) {
  S r = make_scalar<S>(1L);
  S t = x;
  for (unsigned i = 0; i < k; ++i) {
    r *= t;
    t += make_scalar<S>(1L);
  }
  return r;
}

// Generalized binomial coefficient C(a, j) = (a-j+1)_j / j! for arbitrary
// scalar a (negative and non-integer included) and integer j >= 0.
template <class S>
S binomial_general(const S& a, unsigned j) {
  S num = pochhammer<S>(a - make_scalar<S>(static_cast<long>(j)) + make_scalar<S>(1L), j);
  return num / factorial<S>(j);
}

// Exact binomial coefficient for integer arguments, 0 <= j <= n.
inline BigInt binomial_int(unsigned n, unsigned j) {
  if (j > n) return 0;
  if (j > n - j) j = n - j;
  BigInt r = 1;
  for (unsigned i = 0; i < j; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

// Signed Stirling numbers of the first kind, defined through the falling
// factorial x(x-1)...(x-k+1) = sum_mu s(k,mu) x^mu and generated by the
// recurrence s(k+1,mu) = s(k,mu-1) - k s(k,mu) with s(0,0) = 1.
//
// stirling_first_rows(K) returns rows 0..K; row k holds s(k,0..k).
inline std::vector<std::vector<BigInt>> stirling_first_rows(unsigned K) {
  std::vector<std::vector<BigInt>> rows;
  rows.reserve(K + 1);
  rows.push_back({BigInt(1)});
  for (unsigned k = 0; k < K; ++k) {
    const auto& prev = rows.back();
    std::vector<BigInt> next(k + 2, BigInt(0));
    for (unsigned mu = 0; mu <= k + 1; ++mu) {
      BigInt v = 0;
      if (mu >= 1) v += prev[mu - 1];
      if (mu <= k) v -= BigInt(k) * prev[mu];
      next[mu] = v;
    }
    rows.push_back(std::move(next));
  }
  return rows;
}

inline BigInt stirling_first(unsigned k, unsigned mu) {
  if (mu > k) {
    throw std::invalid_argument("stirling_first: require mu <= k");
  }
  return stirling_first_rows(k)[k][mu];
}

template <class S>
S scalar_from_bigint(const BigInt& n) {
  if constexpr (is_exact_scalar_v<S>) {
    return Rational(n);
  } else {
    return Real(n);
  }
}

}  // namespace stiefac
