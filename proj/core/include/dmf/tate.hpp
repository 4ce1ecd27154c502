#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dmf/series.hpp"

namespace dmf {

// Element of the Tate algebra over the ramified series ring: a list of
// t-coefficients that is either a genuine polynomial in t, or — when
// `truncated()` — a value known modulo t^known() only.  Truncation is
// sticky through arithmetic and shrinks like a precision window; the
// pi-adic precision of each coefficient is tracked by the coefficients
// themselves.
class TateSeries {
 public:
  TateSeries() = default;

  static TateSeries zero(Ctx ctx);                     // the zero polynomial
  static TateSeries zero_mod(Ctx ctx, std::size_t m);  // 0 + O(t^m)
  static TateSeries constant(RamifiedSeries c);
  static TateSeries t_power(Ctx ctx, std::size_t k);
  static TateSeries from_coeffs(Ctx ctx, std::vector<RamifiedSeries> c,
                                bool truncated);
  // a(t) with base-field coefficients lifted into the working field
  static TateSeries apoly_in_t(Ctx ctx, const APoly& a);

  const Ctx& ctx() const { return ctx_; }
  bool truncated() const { return truncated_; }
  // number of stored (known) t-coefficients
  std::size_t known() const { return c_.size(); }
  // polynomial degree in t (0 for the zero polynomial)
  std::size_t t_degree() const;
  // j-th coefficient; exact zero beyond the degree of a polynomial,
  // unreachable beyond the window of a truncated value
  RamifiedSeries coeff(std::size_t j) const;
  bool is_zero() const;  // every stored coefficient is zero to its precision

  TateSeries neg() const;
  TateSeries add(const TateSeries& o) const;
  TateSeries sub(const TateSeries& o) const;
  TateSeries mul(const TateSeries& o) const;
  TateSeries scalar_mul(const RamifiedSeries& s) const;
  TateSeries mul_t(std::size_t k) const;  // multiply by t^k
  // coefficient-wise Frobenius x -> x^{q^l}; t is untouched
  TateSeries twist(std::uint32_t l) const;
  // reciprocal to `len` t-coefficients; needs a unit constant term
  TateSeries inv(std::size_t len) const;
  TateSeries div(const TateSeries& o, std::size_t len) const {
    return mul(o.inv(len));
  }
  TateSeries truncate_t(std::size_t m) const;       // value modulo t^m
  TateSeries truncate_prec(std::int64_t p) const;   // cap coefficient precision
  // substitution t = x; the value must be a genuine polynomial in t
  RamifiedSeries eval(const RamifiedSeries& x) const;

  bool agrees_with(const TateSeries& o) const;
  // least discrepancy valuation over the joint coefficient window
  std::int64_t discrepancy(const TateSeries& o) const;

  std::string to_string() const;

 private:
  void canonicalize();

  Ctx ctx_;
  std::vector<RamifiedSeries> c_;
  bool truncated_ = false;
};

using TateMat = std::vector<std::vector<TateSeries>>;

TateSeries tate_mat_det(const TateMat& m);

TateMat tate_mat_mul(const TateMat& a, const TateMat& b);
// copy of m with row i and column j removed
TateMat tate_mat_submatrix(const TateMat& m, std::size_t i, std::size_t j);

// Witness that an infinite product was replaced by a finite one: the last
// refinement step moved the value only past `target`, observed at
// `agreement` (>= target).
struct StabilizationCert {
  std::int64_t factors = 0;
  std::int64_t target = 0;
  std::int64_t agreement = 0;
};

// omega(t) = (-theta)^{1/(q-1)} * prod_{i>=0} (1 - t/theta^{q^i})^{-1},
// stabilized adaptively and returned modulo t^t_len with coefficients
// capped at ctx->cap.  Satisfies twist(omega) = (t - theta) * omega.
TateSeries omega_series(const Ctx& ctx, std::size_t t_len,
                        StabilizationCert* cert = nullptr);

// The period pi~ = theta * (-theta)^{1/(q-1)} * prod_{i>=1} (1 - theta^{1-q^i})^{-1},
// of valuation -wq/(q-1), known modulo pi^cap.  The unit prefactor is theta
// times the pinned root (not the root's q-th power, which differs by the sign
// of theta in odd characteristic); this normalization makes
// -residue(omega at t = theta) equal to the period.
RamifiedSeries pi_tilde(const Ctx& ctx, StabilizationCert* cert = nullptr);

}  // namespace dmf
