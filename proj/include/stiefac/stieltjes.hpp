#pragma once

// Stieltjes-series machinery: partial sums, converging factors, the
// triangular coefficient recursion producing their inverse-factorial
// expansion, reference-based oracles, and function-value reconstruction.
//
// A Stieltjes series  sum_m (-1)^m mu_m / z^{m+1}  with positive moments
// mu_m represents a function F(z); truncating after the (m-1)-th term and
// writing the remainder as  (-1)^m mu_m phi_m(z) / z^m  defines the
// converging factor phi_m, which satisfies
//
//   phi_{m+1} = (mu_m / mu_{m+1}) (1 - z phi_m),                 (recurrence)
//   phi_m     = phi_inf + sum_k k! c_k / (m+beta)_{k+1},         (expansion)
//
// with phi_inf = rho_0/(1+z rho_0) determined by the limit rho_0 of the
// moment ratio.  The c_k are produced by cf_coeffs below from the
// inverse-factorial coefficients b_k of the moment-ratio expansion.
//
// Moment models are duck-typed; see catalog.hpp for the concrete interface
// (moments, ratio, rho expansion, optional closed-form coefficients, and a
// reference implementation of F used by the oracles).

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stiefac/facseries.hpp"

namespace stiefac {

// phi_inf = rho0 / (1 + z rho0): the m -> infinity limit of the converging
// factor, i.e. the constant term of its factorial expansion.
template <class S>
S phi_infinity(const S& rho0, const S& z) {
  S u = make_scalar<S>(1L) + z * rho0;
  if (u == 0) {
    throw std::domain_error("phi_infinity: pole at 1 + z rho0 = 0");
  }
  return rho0 / u;
}

// The triangular coefficient recursion — the heart of the library.
// Given the factorial coefficients b_k of the moment-ratio expansion and the
// ratio limit rho0, it produces the c_k of the converging-factor expansion:
//
//   c_{-1} = 0,
//   c_0    = b_0 / (1+z rho0)^2,
//   c_k    = c_{k-1}/(1+z rho0) + b_k/(1+z rho0)^2 - z d_k/(1+z rho0),
//
// where d_k is the product coefficient of the b- and c-series.  d_k touches
// only c_0..c_{k-1}, so the recursion is triangular and needs no solver.
// For rho0 = 0 (factorially divergent series) the relation collapses to
// c_k = c_{k-1} + b_k - z d_k; that is the same code path with u = 1.
// With rational inputs the output is exact and context-independent.
template <class S>
std::vector<S> cf_coeffs(const std::vector<S>& b, const S& rho0, const S& z,
                         unsigned K) {
  if (K < 1) {
    throw std::invalid_argument("cf_coeffs: K must be >= 1");
  }
  if (b.size() < K) {
    throw std::invalid_argument("cf_coeffs: need K coefficients b_0..b_{K-1}");
  }
  const S u = make_scalar<S>(1L) + z * rho0;
  if (u == 0) {
    throw std::domain_error("cf_coeffs: pole at 1 + z rho0 = 0");
  }
  const S u2 = u * u;
  std::vector<S> c;
  c.reserve(K);
  c.push_back(b[0] / u2);
  for (unsigned k = 1; k < K; ++k) {
    S dk = product_coeff<S>(b, c, k);
    c.push_back(c[k - 1] / u + b[k] / u2 - z * dk / u);
  }
  return c;
}

// A converging-factor expansion bound to a model instantiation: the series
// carries shift beta + model.base_shift and limit phi_inf.
template <class S>
struct ConvergingFactorExpansion {
  std::string model_id;
  S z;
  S beta;  // requested shift, before the model's base adjustment
  FactorialSeries<S> series;
};

// Obtains b_k at shift beta (model closed form when present, otherwise the
// Stirling conversion of the model's inverse-power ratio expansion), runs the
// coefficient recursion, and assembles the converging-factor series.
template <class S, class Model>
ConvergingFactorExpansion<S> build_cf_series(const Model& model, const S& beta,
                                             const S& z, unsigned K) {
  if (!(z > 0)) {
    throw std::domain_error("build_cf_series: z must be positive");
  }
  if (beta < 0) {
    throw std::domain_error("build_cf_series: beta must be >= 0");
  }
  const S rho0 = make_scalar<S>(model.rho0_q());
  const S limit = phi_infinity<S>(rho0, z);
  const S shift = beta + make_scalar<S>(model.base_shift_q());
  if (K == 0) {
    // Degenerate truncation: the expansion reduces to its constant term.
    return {model.id(), z, beta, FactorialSeries<S>(shift, limit, {})};
  }
  std::vector<S> b = model.has_b_closed()
                         ? model.template b_closed<S>(K, beta)
                         : power_to_factorial<S>(
                               PowerExpansion<S>{rho0, model.template rho_expansion<S>(K, beta)}, K);
  std::vector<S> c = cf_coeffs<S>(b, rho0, z, K);
  return {model.id(), z, beta, FactorialSeries<S>(shift, limit, std::move(c))};
}

// Individual series terms a_m(z) = (-1)^m mu_m / z^{m+1} and partial sums
// s_n = sum_{m=0}^{n} a_m; s_{-1} = 0 by convention.
template <class S, class Model>
std::vector<S> series_terms(const Model& model, long n_max, const S& z,
                            const PrecisionContext& ctx) {
  std::vector<S> terms;
  if (n_max < 0) return terms;
  terms.reserve(static_cast<std::size_t>(n_max) + 1);
  S zpow = z;  // z^{m+1}
  for (long m = 0; m <= n_max; ++m) {
    S t = model.template moment<S>(m, ctx) / zpow;
    if (m % 2 == 1) t = -t;
    terms.push_back(t);
    zpow *= z;
  }
  return terms;
}

template <class S, class Model>
std::vector<S> partial_sums_upto(const Model& model, long n_max, const S& z,
                                 const PrecisionContext& ctx) {
  std::vector<S> terms = series_terms<S>(model, n_max, z, ctx);
  S acc = make_scalar<S>(0L);
  for (auto& t : terms) {
    acc += t;
    t = acc;  // reuse storage: terms[m] becomes s_m
  }
  return terms;
}

template <class S, class Model>
S partial_sum(const Model& model, long n, const S& z, const PrecisionContext& ctx) {
  if (n < 0) return make_scalar<S>(0L);
  auto sums = partial_sums_upto<S>(model, n, z, ctx);
  return sums.back();
}

// Forward iteration of the converging-factor recurrence from a supplied
// phi_0 = F(z)/mu_0.  Each step multiplies the inherited error by
// z mu_m/mu_{m+1}; the cumulative amplification factor is recorded and an
// accuracy-loss flag raised once it exceeds 10^{digits/2}.
struct PhiForwardResult {
  std::vector<Real> phi;            // phi_0..phi_M
  std::vector<Real> amplification;  // cumulative |d phi_m / d phi_0|
  long first_loss_index = -1;       // -1 when amplification stayed in bounds
  bool accuracy_loss = false;
};

template <class Model>
PhiForwardResult phi_forward(const Model& model, const Real& phi0, const Real& z,
                             long M, const PrecisionContext& ctx) {
  if (!(z > 0)) {
    throw std::domain_error("phi_forward: z must be positive");
  }
  PrecisionScope scope(ctx);
  PhiForwardResult out;
  out.phi.reserve(M + 1);
  out.amplification.reserve(M + 1);
  Real zl(z, ctx.working_digits());
  out.phi.push_back(Real(phi0, ctx.working_digits()));
  out.amplification.push_back(Real(1));
  Real threshold = pow(Real(10), static_cast<int>(ctx.digits() / 2));
  for (long m = 0; m < M; ++m) {
    Real ratio = model.template moment_ratio<Real>(m, ctx);
    out.phi.push_back(ratio * (1 - zl * out.phi.back()));
    Real amp = out.amplification.back() * zl * ratio;
    if (!out.accuracy_loss && amp > threshold) {
      out.accuracy_loss = true;
      out.first_loss_index = m + 1;
    }
    out.amplification.push_back(amp);
  }
  return out;
}

// Reference-based converging factor:
//
//   phi_m = (F(z) - s_{m-1}) (-1)^m z^m / mu_m,
//
// carried out with enough guard digits to absorb the cancellation between
// F and the partial sum: digits + ceil((m+2) log10 z + log10 mu_{m+1} + m),
// with the log10 contributions clamped at zero (negative values would
// narrow, not widen).  The result is accurate to ctx.digits.
template <class Model>
Real phi_oracle(const Model& model, long m, const Real& z,
                const PrecisionContext& ctx) {
  if (!(z > 0)) {
    throw std::domain_error("phi_oracle: z must be positive");
  }
  if (!model.has_reference_F(z)) {
    throw std::domain_error("phi_oracle: model '" + model.id() +
                            "' has no reference F at this z");
  }
  double lz = std::max(0.0, log10_abs(z));
  double lmu = std::max(0.0, log10_abs(model.template moment<Real>(m + 1, PrecisionContext(16))));
  unsigned guard =
      static_cast<unsigned>(std::ceil((m + 2) * lz + lmu + m)) + 8;
  PrecisionContext wide = ctx.widened(guard);
  PrecisionScope scope(wide);
  Real zl(z, wide.working_digits());
  Real F = model.reference_F(zl, wide);
  Real s = partial_sum<Real>(model, m - 1, zl, wide);
  Real mu = model.template moment<Real>(m, wide);
  Real phi = (F - s) * pow(zl, static_cast<unsigned>(m)) / mu;
  if (m % 2 == 1) phi = -phi;
  PrecisionScope narrow(ctx);
  return Real(phi, ctx.working_digits());
}

// Function-value reconstruction: partial sum plus first omitted term times
// the truncated converging-factor expansion,
//
//   F ~= s_n + (-1)^{n+1} mu_{n+1} z^{-(n+1)} phi_{n+1},
//
// with phi_{n+1} evaluated from the K-term factorial expansion at shift beta.
template <class Model>
Real reconstruct_F(const Model& model, long n, const Real& z, const Real& beta,
                   unsigned K, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real zl(z, ctx.working_digits());
  auto cf = build_cf_series<Real>(model, Real(beta, ctx.working_digits()), zl, K);
  Real phi = eval_truncated<Real>(cf.series, Real(n + 1));
  Real s = partial_sum<Real>(model, n, zl, ctx);
  Real mu = model.template moment<Real>(n + 1, ctx);
  Real corr = mu * phi / pow(zl, static_cast<unsigned>(n + 1));
  return (n % 2 == 0) ? s - corr : s + corr;
}

}  // namespace stiefac
