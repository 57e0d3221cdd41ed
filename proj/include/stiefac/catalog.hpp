#pragma once

// The worked moment-model catalog: Euler's factorial series, the erfc
// asymptotic series, the logarithm (Madelung-type) series, and the Lerch
// transcendent family.  Each model supplies exact moments where they exist,
// high-precision moments and a reference F otherwise, the inverse-power
// expansion of its moment ratio, and — where known — closed forms for the
// factorial coefficients b_k and the converging-factor coefficients c_k.
//
// Model interface (duck-typed, consumed by stieltjes.hpp):
//   std::string id() const
//   bool exact_moments() const            — rational mu_m available
//   bool exact_ratio() const              — rational mu_m/mu_{m+1} available
//   template<S> S moment(long m, ctx)                — mu_m
//   template<S> S moment_ratio(long m, ctx)          — mu_m/mu_{m+1}
//   Rational rho0_q() const               — limit of the moment ratio
//   Rational base_shift_q() const         — Pochhammer base offset
//   template<S> vector<S> rho_expansion(K, beta)     — rho_1..rho_K
//   bool has_b_closed() const; template<S> vector<S> b_closed(K, beta)
//   bool has_closed_ck() const; template<S> S closed_ck(k, beta, z)
//   bool has_reference_F(z) const; Real reference_F(z, ctx)
//
// The rho expansion is taken in powers of 1/(m + beta + base_shift), i.e. in
// the same base the converging-factor series is evaluated on.

#include <string>
#include <variant>
#include <vector>

#include "stiefac/polynomials.hpp"
#include "stiefac/special.hpp"
#include "stiefac/facseries.hpp"

namespace stiefac {

namespace detail {

// Shared closed form of the moment-ratio factorial coefficients for the
// Euler / erfc / log models: the ratio tail is geometric in the expansion
// base, 1/(m+1) = sum_k (beta-1)^k/(m+beta)^{k+1}, whose Stirling conversion
// collapses to Pochhammer form
//
//   b_k = (beta-1)_k / k!.
//
// (The power-form variant (beta-1)^k/k!, which circulates as an equivalent
// writing of the same coefficients, actually agrees only for k <= 1 and at
// beta = 1; see EulerModel::b_power_form and the catalog tests.)
template <class S>
std::vector<S> geometric_b_closed(unsigned K, const S& beta) {
  std::vector<S> b;
  b.reserve(K);
  S p = make_scalar<S>(1L);  // (beta-1)_k / k!
  for (unsigned k = 0; k < K; ++k) {
    b.push_back(p);
    p *= beta - make_scalar<S>(1L) + make_scalar<S>(static_cast<long>(k));
    p /= make_scalar<S>(static_cast<long>(k + 1));
  }
  return b;
}

// rho_{k+1} = (beta-1)^k: the geometric inverse-power expansion of 1/(m+1)
// in the base (m + beta + base_shift) shared by the same three models.
template <class S>
std::vector<S> geometric_rho(unsigned K, const S& beta) {
  std::vector<S> rho;
  rho.reserve(K);
  S p = make_scalar<S>(1L);
  for (unsigned k = 0; k < K; ++k) {
    rho.push_back(p);
    p *= beta - make_scalar<S>(1L);
  }
  return rho;
}

}  // namespace detail

// Euler's series: moments mu_m = m!, the paradigm of factorial divergence.
// F(z) = e^z E1(z).
class EulerModel {
 public:
  std::string id() const { return "euler"; }
  bool exact_moments() const { return true; }
  bool exact_ratio() const { return true; }

  template <class S>
  S moment(long m, const PrecisionContext&) const {
    return factorial<S>(static_cast<unsigned>(m));
  }
  template <class S>
  S moment_ratio(long m, const PrecisionContext&) const {
    return make_scalar<S>(1L) / make_scalar<S>(m + 1);
  }

  Rational rho0_q() const { return 0; }
  Rational base_shift_q() const { return 0; }

  template <class S>
  std::vector<S> rho_expansion(unsigned K, const S& beta) const {
    return detail::geometric_rho<S>(K, beta);
  }

  bool has_b_closed() const { return true; }
  template <class S>
  std::vector<S> b_closed(unsigned K, const S& beta) const {
    return detail::geometric_b_closed<S>(K, beta);
  }

  // Power-form writing of the same coefficients, (beta-1)^k/k!.  Kept as a
  // documented alternate because it appears alongside the Pochhammer form in
  // the literature; it coincides with b_closed only for k <= 1 and at
  // beta = 1, and nothing in the pipeline consumes it.
  template <class S>
  std::vector<S> b_power_form(unsigned K, const S& beta) const {
    std::vector<S> b;
    b.reserve(K);
    S p = make_scalar<S>(1L);
    for (unsigned k = 0; k < K; ++k) {
      b.push_back(p / factorial<S>(k));
      p *= beta - make_scalar<S>(1L);
    }
    return b;
  }

  bool has_closed_ck() const { return true; }
  // c_k = L_k^{(beta-1)}(z).
  template <class S>
  S closed_ck(unsigned k, const S& beta, const S& z) const {
    return laguerre_poly<S>(k, beta - make_scalar<S>(1L), z);
  }

  bool has_reference_F(const Real& z) const { return z > 0; }
  Real reference_F(const Real& z, const PrecisionContext& ctx) const {
    PrecisionScope scope(ctx);
    Real zl(z, ctx.working_digits());
    return exp(zl) * exp_integral_e1(zl, ctx);
  }
};

// erfc asymptotic series: moments mu_m = Gamma(m+1/2).  The converging
// factor expansion runs over the half-integer-shifted base (m+beta-1/2) and
// shares Euler's coefficients.  F(z) = pi e^z erfc(sqrt z) / sqrt z.
class ErfcModel {
 public:
  std::string id() const { return "erfc"; }
  bool exact_moments() const { return false; }  // mu_m is sqrt(pi)-irrational
  bool exact_ratio() const { return true; }     // mu_m/mu_{m+1} = 1/(m+1/2)

  template <class S>
  S moment(long m, const PrecisionContext& ctx) const {
    if constexpr (is_exact_scalar_v<S>) {
      throw std::domain_error("erfc model: moments are not rational");
    } else {
      return gamma_real(Real(m) + Real(Rational(1, 2)), ctx);
    }
  }
  template <class S>
  S moment_ratio(long m, const PrecisionContext&) const {
    return make_scalar<S>(2L) / make_scalar<S>(2 * m + 1);
  }

  Rational rho0_q() const { return 0; }
  Rational base_shift_q() const { return Rational(-1, 2); }

  template <class S>
  std::vector<S> rho_expansion(unsigned K, const S& beta) const {
    // 1/(m+1/2) is geometric in the shifted base (m+beta-1/2), with the same
    // ratio (beta-1) as Euler's expansion.
    return detail::geometric_rho<S>(K, beta);
  }

  bool has_b_closed() const { return true; }
  template <class S>
  std::vector<S> b_closed(unsigned K, const S& beta) const {
    return detail::geometric_b_closed<S>(K, beta);
  }

  bool has_closed_ck() const { return false; }
  template <class S>
  S closed_ck(unsigned, const S&, const S&) const {
    throw std::domain_error("erfc model: no closed-form c_k is catalogued");
  }

  bool has_reference_F(const Real& z) const { return z > 0; }
  Real reference_F(const Real& z, const PrecisionContext& ctx) const {
    PrecisionScope scope(ctx);
    Real zl(z, ctx.working_digits());
    Real pi(0);
    mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
    Real rz = sqrt(zl);
    return pi * exp(zl) * erfc_real(rz, ctx) / rz;
  }
};

// Logarithm series: moments mu_m = 1/(m+1), F(z) = log(1 + 1/z).  The
// slowly convergent cousin of Euler's series, with rho0 = 1.
class LogModel {
 public:
  std::string id() const { return "log"; }
  bool exact_moments() const { return true; }
  bool exact_ratio() const { return true; }

  template <class S>
  S moment(long m, const PrecisionContext&) const {
    return make_scalar<S>(1L) / make_scalar<S>(m + 1);
  }
  template <class S>
  S moment_ratio(long m, const PrecisionContext&) const {
    return make_scalar<S>(m + 2) / make_scalar<S>(m + 1);
  }

  Rational rho0_q() const { return 1; }
  Rational base_shift_q() const { return 0; }

  template <class S>
  std::vector<S> rho_expansion(unsigned K, const S& beta) const {
    // mu_m/mu_{m+1} = 1 + 1/(m+1): same geometric tail as Euler past rho0.
    return detail::geometric_rho<S>(K, beta);
  }

  bool has_b_closed() const { return true; }
  template <class S>
  std::vector<S> b_closed(unsigned K, const S& beta) const {
    return detail::geometric_b_closed<S>(K, beta);
  }

  bool has_closed_ck() const { return true; }
  // c_k = (-1)^k/(1+z)^2 P_k^{(2-beta-k, beta-1)}((z-1)/(z+1)).  The first
  // Jacobi parameter depends on the degree k — this is why the polynomial
  // layer evaluates explicit sums instead of recurrences.
  template <class S>
  S closed_ck(unsigned k, const S& beta, const S& z) const {
    const S one = make_scalar<S>(1L);
    S a = make_scalar<S>(2L) - beta - make_scalar<S>(static_cast<long>(k));
    S b = beta - one;
    S x = (z - one) / (z + one);
    S val = jacobi_poly_explicit<S>(k, a, b, x) / ((one + z) * (one + z));
    return (k % 2 == 0) ? val : S(-val);
  }

  bool has_reference_F(const Real& z) const { return z > 0; }
  Real reference_F(const Real& z, const PrecisionContext& ctx) const {
    PrecisionScope scope(ctx);
    Real zl(z, ctx.working_digits());
    return log(1 + 1 / zl);
  }
};

// Lerch transcendent family: moments mu_m = 1/(m+alpha)^s with alpha > 0,
// s > 1.  No closed-form c_k is known; the reference F is the directly
// summed series, which converges only for z > 1 — other z are declared
// outside the validated domain rather than silently accelerated (oracles
// must stay independent of the machinery under test).
class LerchModel {
 public:
  LerchModel(const Rational& alpha, const Rational& s) : alpha_(alpha), s_(s) {
    if (!(alpha > 0)) {
      throw std::domain_error("lerch model: alpha must be > 0");
    }
    if (!(s > 1)) {
      throw std::domain_error("lerch model: s must be > 1");
    }
  }

  std::string id() const {
    return "lerch:alpha=" + alpha_.str() + ",s=" + s_.str();
  }
  const Rational& alpha() const { return alpha_; }
  const Rational& s() const { return s_; }

  bool exact_moments() const { return is_integer(s_); }
  bool exact_ratio() const { return is_integer(s_); }

  template <class S>
  S moment(long m, const PrecisionContext& ctx) const {
    if constexpr (is_exact_scalar_v<S>) {
      if (!exact_moments()) {
        throw std::domain_error("lerch model: moments are rational only for integer s");
      }
      Rational base = Rational(m) + alpha_;
      long si = numerator(s_).convert_to<long>();
      Rational p = 1;
      for (long i = 0; i < si; ++i) p *= base;
      return 1 / p;
    } else {
      PrecisionScope scope(ctx);
      Real base = Real(m) + Real(alpha_);
      return pow(base, -Real(s_));
    }
  }
  template <class S>
  S moment_ratio(long m, const PrecisionContext& ctx) const {
    return moment<S>(m, ctx) / moment<S>(m + 1, ctx);
  }

  Rational rho0_q() const { return 1; }
  Rational base_shift_q() const { return 0; }

  // Nested binomial expansion of (1 + 1/(m+alpha))^s in powers of
  // 1/(m+beta):  with a = alpha - beta,
  //   rho_j = sum_{i=1}^{j} C(s,i) C(-i, j-i) a^{j-i},        j >= 1,
  // using 1/(m+alpha)^i = sum_t C(-i,t) a^t (m+beta)^{-i-t}.  Exact for
  // rational s, alpha, beta; the general shift is the alpha -> alpha-beta
  // substitution.
  template <class S>
  std::vector<S> rho_expansion(unsigned K, const S& beta) const {
    const S a = make_scalar<S>(alpha_) - beta;
    const S s = make_scalar<S>(s_);
    std::vector<S> rho;
    rho.reserve(K);
    for (unsigned j = 1; j <= K; ++j) {
      S acc = make_scalar<S>(0L);
      for (unsigned i = 1; i <= j; ++i) {
        S apow = make_scalar<S>(1L);
        for (unsigned t = 0; t < j - i; ++t) apow *= a;
        acc += binomial_general<S>(s, i) *
               binomial_general<S>(make_scalar<S>(-static_cast<long>(i)), j - i) * apow;
      }
      rho.push_back(acc);
    }
    return rho;
  }

  bool has_b_closed() const { return false; }
  template <class S>
  std::vector<S> b_closed(unsigned, const S&) const {
    throw std::domain_error("lerch model: b_k has no catalogued closed form");
  }

  bool has_closed_ck() const { return false; }
  template <class S>
  S closed_ck(unsigned, const S&, const S&) const {
    throw std::domain_error("lerch model: no closed-form c_k is catalogued");
  }

  bool has_reference_F(const Real& z) const { return z > 1; }
  Real reference_F(const Real& z, const PrecisionContext& ctx) const {
    if (!has_reference_F(z)) {
      throw std::domain_error(
          "lerch model: reference F is validated only for z > 1 (direct sum)");
    }
    PrecisionScope scope(ctx);
    Real zl(z, ctx.working_digits());
    Real eps = pow(Real(10), -static_cast<int>(ctx.working_digits()) - 2);
    Real acc(0);
    Real zpow = 1 / zl;
    Real srl = Real(s_);
    Real al = Real(alpha_);
    for (long m = 0; m < 10000000; ++m) {
      Real term = pow(Real(m) + al, -srl) * zpow;
      acc += (m % 2 == 0) ? term : Real(-term);
      zpow /= zl;
      if (term < eps * (abs(acc) + 1)) break;
    }
    return acc;
  }

 private:
  Rational alpha_;
  Rational s_;
};

// Any catalogued model, for runtime dispatch (CLI and generic tables).
using AnyModel = std::variant<EulerModel, ErfcModel, LogModel, LerchModel>;

}  // namespace stiefac
