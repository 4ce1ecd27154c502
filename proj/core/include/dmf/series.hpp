#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dmf/fq.hpp"

namespace dmf {

// Absolute precisions at or above this sentinel mean "the stored window is
// the whole value" (Laurent polynomials in the uniformizer: theta powers,
// polynomial evaluations, scalars).
inline constexpr std::int64_t kExactPrec = std::int64_t(1) << 58;

// Precision bookkeeping sum N + v.  An exact operand (or the valuation bound
// of an exact zero) makes the arm unconstraining.
inline std::int64_t sat_prec_add(std::int64_t a, std::int64_t b) {
  if (a >= kExactPrec || b >= kExactPrec) return kExactPrec;
  const std::int64_t s = a + b;
  return s >= kExactPrec ? kExactPrec - 1 : s;
}

struct SeriesContext;
using Ctx = std::shared_ptr<const SeriesContext>;

// Shared environment for series arithmetic over the totally ramified
// extension K_infinity(pi) with pi^w = -1/theta, i.e. pi^{-w} = -theta.
// The distinguished (q-1)-st root of -theta is pinned to the plain power
// pi^{-w/(q-1)}, which forces (q-1) | w and makes the root available without
// any constant-field extension.
//
// `cap` is the working absolute precision (in pi-units): constructions whose
// exact value has infinite support (inverses of non-monomials, stabilized
// infinite sums/products) are recorded modulo pi^cap.  Identities are then
// reported against thresholds derived from the caller's target precision,
// which should sit comfortably below cap.
struct SeriesContext {
  FieldDesc field;
  std::int64_t w = 1;
  std::int64_t cap = 64;
  // Guard against runaway exponents.  Lattice-exponential intermediates
  // legitimately reach valuations ~ -w q^{r(D+1)} D, so the floor is deep.
  std::int64_t val_floor = -(std::int64_t(1) << 40);

  std::int64_t root_exp() const { return -w / (field.base.q() - 1); }

  static Ctx create(std::uint32_t p, std::uint32_t e, std::int64_t w,
                    std::int64_t cap, std::uint32_t c = 1);
};

// Truncated Laurent series in pi over the working field: the value is
//     sum_{i=v}^{prec-1} coeff[i-v] * pi^i  +  O(pi^prec).
// Canonical form: coeff is empty exactly when nothing nonzero is known
// ("zero to precision prec", with v = prec); otherwise coeff.front() != 0
// and coeff.back() != 0 (absent trailing entries inside the window are
// known-zero coefficients).
//
// Values are immutable once built; every operation returns a fresh series
// with the pessimistic precision window:
//   add:  min(Nx, Ny)            mul:  min(Nx + vy, Ny + vx)
//   inv:  Nx - 2 vx              qpow(l): q^l * Nx   (Frobenius is exact)
class RamifiedSeries {
 public:
  RamifiedSeries() = default;

  static RamifiedSeries zero(Ctx ctx, std::int64_t prec = kExactPrec);
  static RamifiedSeries monomial(Ctx ctx, FqElem c, std::int64_t exp,
                                 std::int64_t prec = kExactPrec);
  static RamifiedSeries from_coeffs(Ctx ctx, std::int64_t v,
                                    std::vector<FqElem> coeff,
                                    std::int64_t prec);
  // theta = -pi^{-w} (exact)
  static RamifiedSeries theta(Ctx ctx);
  // theta^m for any integer m (exact monomial)
  static RamifiedSeries theta_pow(Ctx ctx, std::int64_t m);
  // the pinned root (-theta)^{1/(q-1)} = pi^{-w/(q-1)} (exact)
  static RamifiedSeries negtheta_root(Ctx ctx);
  // evaluation of a base-field polynomial at theta (exact)
  static RamifiedSeries apoly_at_theta(Ctx ctx, const APoly& a);
  // a(theta^{q^n}), computed as a(theta)^{q^n}
  static RamifiedSeries apoly_eval_twist(Ctx ctx, const APoly& a,
                                         std::uint32_t n);

  const Ctx& ctx() const { return ctx_; }
  std::int64_t leading_exp() const { return v_; }
  std::int64_t prec() const { return prec_; }
  bool exact() const { return prec_ >= kExactPrec; }
  const std::vector<FqElem>& coeff() const { return coeff_; }

  bool is_zero_to_prec() const { return coeff_.empty(); }
  // Lower bound for the valuation: the leading exponent if a nonzero
  // coefficient is known, otherwise the absolute precision.
  std::int64_t val_lb() const { return coeff_.empty() ? prec_ : v_; }

  FqElem coeff_at(std::int64_t exp) const;

  RamifiedSeries neg() const;
  RamifiedSeries add(const RamifiedSeries& o) const;
  RamifiedSeries sub(const RamifiedSeries& o) const;
  RamifiedSeries mul(const RamifiedSeries& o) const;
  RamifiedSeries inv() const;
  RamifiedSeries div(const RamifiedSeries& o) const { return mul(o.inv()); }
  // Frobenius power x^{q^l}; exact coefficient-wise, exponents scale by q^l.
  RamifiedSeries qpow(std::uint32_t l) const;
  // integer power (negative allowed for nonzero values)
  RamifiedSeries pow(std::int64_t k) const;
  RamifiedSeries scalar_mul(FqElem s) const;     // s in the working field
  RamifiedSeries shift(std::int64_t k) const;    // multiply by pi^k
  RamifiedSeries truncate(std::int64_t new_prec) const;

  bool identical(const RamifiedSeries& o) const {
    return v_ == o.v_ && prec_ == o.prec_ && coeff_ == o.coeff_;
  }
  // Equality of the two balls on their joint window.
  bool agrees_with(const RamifiedSeries& o) const {
    return sub(o).is_zero_to_prec();
  }

  std::string to_string() const;

 private:
  void canonicalize();

  Ctx ctx_;
  std::int64_t v_ = 0;
  std::int64_t prec_ = kExactPrec;
  std::vector<FqElem> coeff_;
};

// Valuation lower bound of a - b: the resolution at which the two values are
// distinguishable (or their joint precision when they are not).
std::int64_t discrepancy_val(const RamifiedSeries& a, const RamifiedSeries& b);

// Rebase to a refinement context with w' = m * w over the same field: pi_old
// = pi_new^m, exponents and precisions scale by m.
RamifiedSeries rebase(const Ctx& target, const RamifiedSeries& x);

void require_same_ctx(const Ctx& a, const Ctx& b);

}  // namespace dmf
