#pragma once

// Scalar foundation: exact rationals (GMP) and configurable-precision reals
// (MPFR via Boost.Multiprecision).  Every approximate computation in this
// library is parameterized by a PrecisionContext; exact computations ignore it.
//
// Precision model
// ---------------
//   * A PrecisionContext carries the number of *requested* decimal digits.
//   * Internally the library works at digits + kGuardDigits so that results
//     are trustworthy to the requested digit count after rounding noise.
//   * Real is a variable-precision type: each value carries its own precision
//     and arithmetic results adopt the larger operand precision.  Leaf values
//     are created while a PrecisionScope is active, which pins the default
//     construction precision for the enclosing operation.  This makes every
//     public operation a pure function of (inputs, context): two evaluations
//     under the same context are bit-identical.

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace stiefac {

// Exact arbitrary-precision rational, always canonical (lowest terms,
// positive denominator) courtesy of GMP.  Division by zero is trapped by GMP
// and surfaces as an error rather than a value.  Expression templates are
// disabled on all three scalar types: temporaries get plain value semantics,
// and mixed expressions like m + 1 deduce cleanly in generic code.
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

// Arbitrary-size integer, used for combinatorial tables.
using BigInt =
    boost::multiprecision::number<boost::multiprecision::gmp_int,
                                  boost::multiprecision::et_off>;

// Variable-precision real.
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

class PrecisionContext;

namespace detail {
// Extra working digits on top of the requested count; absorbs rounding of the
// final few places in long summations.
inline constexpr unsigned kGuardDigits = 8;
}  // namespace detail

// Sets the default Real construction precision for the lifetime of the
// object.  Public operations open one of these before building any Real
// leaves, so intermediate temporaries inherit the context's working precision.
// The default lives in process-global state (Boost.Multiprecision); scopes
// with *different* contexts must not overlap across threads.  All library
// entry points are otherwise pure functions of (inputs, context).
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned working_digits10)
      : saved_(Real::default_precision()) {
    Real::default_precision(working_digits10);
  }
  explicit PrecisionScope(const PrecisionContext& ctx);
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;
  ~PrecisionScope() { Real::default_precision(saved_); }

 private:
  unsigned saved_;
};

// Carrier of the working precision for all approximate arithmetic.
// Immutable; the Euler-Mascheroni constant (needed by the exponential
// integral) is computed once at construction and cached.
class PrecisionContext {
 public:
  explicit PrecisionContext(unsigned digits) : digits_(digits) {
    if (digits < 16) {
      throw std::invalid_argument(
          "PrecisionContext: at least 16 decimal digits are required, got " +
          std::to_string(digits));
    }
    PrecisionScope scope(working_digits());
    euler_gamma_ = Real(0);
    mpfr_const_euler(euler_gamma_.backend().data(), MPFR_RNDN);
  }

  // Requested decimal digits; results are accurate to this count.
  unsigned digits() const { return digits_; }

  // Internal working precision in decimal digits.
  unsigned working_digits() const { return digits_ + detail::kGuardDigits; }

  // Euler-Mascheroni constant at working precision (cached).
  const Real& euler_gamma() const { return euler_gamma_; }

  // A context widened by additional guard digits, for cancellation-heavy
  // intermediates (see phi_oracle).
  PrecisionContext widened(unsigned extra_digits) const {
    return PrecisionContext(digits_ + extra_digits);
  }

 private:
  unsigned digits_;
  Real euler_gamma_;
};

inline PrecisionScope::PrecisionScope(const PrecisionContext& ctx)
    : PrecisionScope(ctx.working_digits()) {}

// ---------------------------------------------------------------------------
// Scalar traits: the coefficient algebra is generic over S in {Rational, Real}.
// Mixed-mode arithmetic promotes exact -> approximate only, via make_scalar /
// to_real below; the reverse direction is deliberately not provided.
// ---------------------------------------------------------------------------

template <class S>
inline constexpr bool is_exact_scalar_v = false;
template <>
inline constexpr bool is_exact_scalar_v<Rational> = true;

// Materializes a rational constant as scalar type S.  For S = Real the value
// is rounded at the precision of the active PrecisionScope.
template <class S>
S make_scalar(const Rational& q) {
  if constexpr (is_exact_scalar_v<S>) {
    return q;
  } else {
    return Real(q);
  }
}

template <class S>
S make_scalar(long n) {
  return S(n);
}

inline Real to_real(const Rational& q, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  return Real(q);
}

template <class S>
S abs_scalar(const S& x) {
  using boost::multiprecision::abs;
  return x < 0 ? S(-x) : x;
}

// True when x is an integer (exactly representable; used for pole detection
// in Pochhammer denominators).
inline bool is_integer(const Rational& x) { return denominator(x) == 1; }
inline bool is_integer(const Real& x) {
  return mpfr_integer_p(x.backend().data()) != 0;
}

// log10 of |x| as a machine double, for conditioning diagnostics only.
// Returns -inf for zero.
inline double log10_abs(const Real& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  // mpfr_get_exp is the binary exponent of the normalized significand.
  long e2 = mpfr_get_exp(x.backend().data());
  // Refine with the leading bits: |x| = m * 2^e2 with m in [1/2, 1).
  Real mant = x;
  mpfr_abs(mant.backend().data(), mant.backend().data(), MPFR_RNDN);
  mpfr_div_2si(mant.backend().data(), mant.backend().data(), e2, MPFR_RNDN);
  return static_cast<double>(e2) * 0.30102999566398119521 +
         std::log10(mant.template convert_to<double>());
}

inline double log10_abs(const Rational& q) {
  if (q == 0) return -std::numeric_limits<double>::infinity();
  PrecisionScope scope(32);
  return log10_abs(Real(q));
}

// Formats x with exactly `digits` significant decimal digits in scientific
// notation ("-d.ddd...e[+-]XX").  Locale-independent and trailing-zero
// preserving, which the CSV determinism contract requires; std::ostream
// formatting of MPFR values trims zeros, so this goes through mpfr_get_str.
inline std::string format_real(const Real& x, unsigned digits) {
  if (digits == 0) digits = 1;
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, digits, x.backend().data(),
                           MPFR_RNDN);
  if (raw == nullptr) throw std::runtime_error("format_real: mpfr_get_str failed");
  std::string mant(raw);
  mpfr_free_str(raw);

  bool negative = !mant.empty() && mant[0] == '-';
  std::string body = negative ? mant.substr(1) : mant;
  std::string out = negative ? "-" : "";
  if (mpfr_zero_p(x.backend().data())) {
    // mpfr reports exponent 0 for zero; normalize to 0.00...0e+00.
    out += "0";
    if (digits > 1) out += "." + std::string(digits - 1, '0');
    out += "e+00";
    return out;
  }
  out += body.substr(0, 1);
  if (body.size() > 1) out += "." + body.substr(1);
  // mpfr's exponent convention: x = 0.mant * 10^exp10, so the scientific
  // exponent (one digit before the point) is exp10 - 1.
  long e = static_cast<long>(exp10) - 1;
  out += "e";
  out += (e < 0 ? "-" : "+");
  unsigned long ea = static_cast<unsigned long>(e < 0 ? -e : e);
  std::string es = std::to_string(ea);
  if (es.size() < 2) es = "0" + es;
  return out + es;
}

}  // namespace stiefac
