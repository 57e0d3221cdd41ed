#pragma once

// Sequence transformations: iterated forward differences, the
// factorial-shifted delta transformation, its exactness/annihilation
// structure, and the epsilon algorithm as a comparison baseline.
//
// The delta transformation of a sequence {s_n} with remainder estimates
// omega_n = Delta s_n is
//
//   delta_m^{(n)} = Delta^{m+1} [ (n+1)_{m+1} s_n / omega_n ]
//                   ---------------------------------------
//                   Delta^{m+1} [ (n+1)_{m+1} / omega_n ]
//
// computed here by the explicit binomial-sum form of Delta^{m+1} rather than
// the equivalent three-term recursive scheme: the explicit form is the one
// whose annihilation structure (Delta^{m+1} kills polynomials of degree m)
// is directly testable, and it is exact in rational arithmetic.

#include <optional>
#include <stdexcept>
#include <vector>

#include "stiefac/precision.hpp"
#include "stiefac/combinatorics.hpp"
#include "stiefac/facseries.hpp"

namespace stiefac {

// Signals a transformation breakdown (vanishing denominator / remainder
// estimate); tables catch this and flag the entry instead of aborting.
class BreakdownError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Delta^k f_n = (-1)^k sum_{j=0}^{k} (-1)^j C(k,j) f_{n+j}.
template <class S>
S forward_difference(const std::vector<S>& f, unsigned k, std::size_t n) {
  if (n + k >= f.size()) {
    throw std::out_of_range("forward_difference: needs entries n..n+k");
  }
  S acc = make_scalar<S>(0L);
  for (unsigned j = 0; j <= k; ++j) {
    S term = scalar_from_bigint<S>(binomial_int(k, j)) * f[n + j];
    if ((k + j) % 2 == 1) term = -term;
    acc += term;
  }
  return acc;
}

// One delta value plus its conditioning diagnostics.
template <class S>
struct DeltaEntry {
  S value;
  double denominator_log10 = 0.0;  // decimal magnitude of the denominator
  double cancellation_digits = 0.0;  // digits consumed by the denominator sum
  bool unreliable = false;  // cancellation exceeded ctx.digits - 8
};

// Partial sums and remainder estimates feeding the transformations.
// omega_n = Delta s_n = a_{n+1} (the first omitted term), which never
// vanishes for alternating Stieltjes partial sums at z > 0.
template <class S>
struct TransformTable {
  std::vector<S> s;
  std::vector<S> omega;

  static TransformTable from_sums(const std::vector<S>& sums) {
    TransformTable t;
    t.s = sums;
    if (!sums.empty()) {
      t.omega.reserve(sums.size() - 1);
      for (std::size_t i = 0; i + 1 < sums.size(); ++i) {
        t.omega.push_back(sums[i + 1] - sums[i]);
      }
    }
    return t;
  }
};

// delta_m^{(n)} from the table; requires s_n..s_{n+m+1} (and the matching
// omegas).  digits_budget drives the reliability flag: entries whose
// denominator lost more than digits_budget - 8 decimal digits to
// cancellation are marked unreliable.  Rational tables are exact, so the
// flag stays clear there.
template <class S>
DeltaEntry<S> weniger_delta(const TransformTable<S>& table, std::size_t n,
                            unsigned m, unsigned digits_budget) {
  if (m < 1) {
    throw std::invalid_argument("weniger_delta: m must be >= 1");
  }
  if (n + m + 1 >= table.s.size() || n + m + 1 >= table.omega.size()) {
    throw std::out_of_range(
        "weniger_delta: needs s_n..s_{n+m+1} and omega_n..omega_{n+m+1}");
  }
  // Sequences g_j = (n+j+1)_{m+1} s_{n+j} / omega_{n+j} and h_j likewise
  // without the s factor, j = 0..m+1.
  std::vector<S> g, h;
  g.reserve(m + 2);
  h.reserve(m + 2);
  for (unsigned j = 0; j <= m + 1; ++j) {
    const S& w = table.omega[n + j];
    if (w == 0) {
      throw BreakdownError("weniger_delta: zero remainder estimate omega");
    }
    S shift = pochhammer<S>(make_scalar<S>(static_cast<long>(n + j + 1)), m + 1);
    h.push_back(shift / w);
    g.push_back(h.back() * table.s[n + j]);
  }
  S num = forward_difference<S>(g, m + 1, 0);
  S den = forward_difference<S>(h, m + 1, 0);
  if (den == 0) {
    throw BreakdownError("weniger_delta: zero denominator (breakdown)");
  }
  DeltaEntry<S> entry{num / den};
  entry.denominator_log10 = log10_abs(den);
  if constexpr (!is_exact_scalar_v<S>) {
    // Magnitude of the unsigned binomial sum versus the signed result =
    // decimal digits cancelled when forming the denominator.
    Real gross(0);
    for (unsigned j = 0; j <= m + 1; ++j) {
      gross += abs_scalar<Real>(scalar_from_bigint<Real>(binomial_int(m + 1, j)) * h[j]);
    }
    entry.cancellation_digits = log10_abs(gross) - log10_abs(den);
    entry.unreliable =
        entry.cancellation_digits > static_cast<double>(digits_budget) - 8.0;
  }
  return entry;
}

// Residual of the annihilation lemma: Delta^{m+1} applied to
// (n+1)_{m+1} sum_{k=0}^{N} k! c_k/(n+1)_{k+1}, which is a polynomial of
// degree <= m in n and must difference to exactly zero for m >= N+1.
// Exact rational arithmetic only — the point is the identity, not a value.
inline Rational annihilation_residual(const std::vector<Rational>& c,
                                      std::size_t n, unsigned m) {
  if (m + 1 < c.size() + 1) {
    // m >= N+1 with N = c.size()-1 keeps the delta context; smaller m still
    // annihilates (the bracket has degree <= m either way) but is outside
    // the contract.
    throw std::invalid_argument("annihilation_residual: require m >= N+1");
  }
  std::vector<Rational> f;
  f.reserve(m + 2);
  for (unsigned j = 0; j <= m + 1; ++j) {
    Rational base(static_cast<long>(n + j + 1));
    Rational shift = pochhammer<Rational>(base, m + 1);
    Rational acc = 0;
    Rational p = 1 / base;  // k!/(n+j+1)_{k+1}
    for (std::size_t k = 0; k < c.size(); ++k) {
      acc += p * c[k];
      p *= Rational(static_cast<long>(k + 1));
      p /= base + Rational(static_cast<long>(k + 1));
    }
    f.push_back(shift * acc);
  }
  return forward_difference<Rational>(f, m + 1, 0);
}

// Row of a delta convergence table.
struct DeltaRow {
  unsigned m = 0;
  DeltaEntry<Real> entry;
  std::optional<Real> error;  // |delta - F| when a reference is available
};

struct DeltaScan {
  std::vector<Real> s;
  std::vector<Real> omega;
  std::optional<Real> reference;
  std::vector<DeltaRow> rows;
};

// Builds partial sums of the model's series at z, then fills
// delta_1^{(n)}..delta_{m_max}^{(n)} with per-row errors against the
// model's reference F when available.
template <class Model>
DeltaScan delta_table(const Model& model, const Real& z, std::size_t n,
                      unsigned m_max, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  Real zl(z, ctx.working_digits());
  DeltaScan scan;
  // delta_{m_max}^{(n)} consumes s_n..s_{n+m_max+1} plus the remainder
  // estimate omega_{n+m_max+1} = Delta s_{n+m_max+1}, hence one extra sum.
  long top = static_cast<long>(n) + static_cast<long>(m_max) + 2;
  scan.s = partial_sums_upto<Real>(model, top, zl, ctx);
  TransformTable<Real> table = TransformTable<Real>::from_sums(scan.s);
  scan.omega = table.omega;
  if (model.has_reference_F(zl)) {
    scan.reference = model.reference_F(zl, ctx);
  }
  for (unsigned m = 1; m <= m_max; ++m) {
    DeltaRow row;
    row.m = m;
    row.entry = weniger_delta<Real>(table, n, m, ctx.digits());
    if (scan.reference) {
      row.error = abs_scalar<Real>(row.entry.value - *scan.reference);
    }
    scan.rows.push_back(std::move(row));
  }
  return scan;
}

// Epsilon algorithm (comparison baseline):
//   eps_{-1}^{(n)} = 0,  eps_0^{(n)} = s_n,
//   eps_{k+1}^{(n)} = eps_{k-1}^{(n+1)} + 1/(eps_k^{(n+1)} - eps_k^{(n)}).
// Even columns accelerate; odd columns are scaffolding.  A vanishing
// difference marks the dependent entry invalid, and invalidity propagates —
// the recursion continues around flagged entries instead of aborting.
template <class S>
struct EpsilonTable {
  struct Entry {
    S value;
    bool valid = false;
  };
  // columns[k][n] holds eps_k^{(n)}, 0 <= k <= depth, 0 <= n <= depth-k.
  std::vector<std::vector<Entry>> columns;

  const Entry& at(unsigned k, std::size_t n) const { return columns[k][n]; }

  // Deepest even-column accelerant using s_0..s_L: eps_{2 floor(L/2)}^{(L mod 2)}.
  const Entry& best_even_at_depth(unsigned L) const {
    unsigned k = (L / 2) * 2;
    return columns[k][L - k];
  }
};

template <class S>
EpsilonTable<S> wynn_epsilon(const std::vector<S>& s) {
  if (s.size() < 3) {
    throw std::invalid_argument("wynn_epsilon: need at least 3 partial sums");
  }
  const std::size_t N = s.size() - 1;
  EpsilonTable<S> table;
  table.columns.resize(N + 1);
  auto& cols = table.columns;
  cols[0].resize(N + 1);
  for (std::size_t n = 0; n <= N; ++n) cols[0][n] = {s[n], true};
  for (unsigned k = 1; k <= N; ++k) {
    cols[k].resize(N + 1 - k);
    for (std::size_t n = 0; n + k <= N; ++n) {
      auto& out = cols[k][n];
      const auto& left = cols[k - 1][n + 1];   // eps_{k-1}^{(n+1)}
      const auto& up = cols[k - 1][n];         // eps_{k-1}^{(n)}
      // eps_{k-2}^{(n+1)} is 0 for k = 1 by convention.
      S prev = make_scalar<S>(0L);
      bool prev_valid = true;
      if (k >= 2) {
        prev = cols[k - 2][n + 1].value;
        prev_valid = cols[k - 2][n + 1].valid;
      }
      if (!left.valid || !up.valid || !prev_valid || left.value == up.value) {
        out.valid = false;
        out.value = make_scalar<S>(0L);
        continue;
      }
      out.value = prev + make_scalar<S>(1L) / (left.value - up.value);
      out.valid = true;
    }
  }
  return table;
}

}  // namespace stiefac
