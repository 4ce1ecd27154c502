#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dmf/tate.hpp"

namespace dmf {

// F_q-linear polynomial / power series: x -> sum_n a[n] * x^{q^n}.
struct LinearPoly {
  std::vector<RamifiedSeries> a;

  RamifiedSeries eval(const RamifiedSeries& x) const;
  LinearPoly truncated(std::size_t n_terms) const;
};

// The standard evaluation point of rank r: z_i = pi^{-(r-i)} for i < r and
// z_r = 1, pairwise distinct valuations modulo w (needs w >= r for r >= 2).
// M shifts the first coordinate to pi^{-(r-1) - wM} for asymptotic sampling.
std::vector<RamifiedSeries> standard_point(const Ctx& ctx, std::uint32_t r,
                                           std::int64_t M = 0);

// Visit every element of L_D = { sum_i a_i(theta) b_i : deg a_i <= D },
// starting with 0; q^{size(basis)*(D+1)} elements (budget-guarded).
void for_each_lattice_element(
    const Ctx& ctx, const std::vector<RamifiedSeries>& basis, std::int64_t D,
    const std::function<void(const RamifiedSeries&)>& fn);

// Exponential of the truncated lattice L_D as a product over its elements:
//   e(X) = X * prod_{0 != lambda} (1 - X/lambda),
// expanded coefficient-by-coefficient; checks that every non-q-power
// coefficient vanishes exactly.  Exponential cost; cross-check use only.
LinearPoly lattice_exp_naive(const Ctx& ctx,
                             const std::vector<RamifiedSeries>& basis,
                             std::int64_t D);

// Truncated-lattice exponentials by the splitting recursion
//   e_{L + F_q v}(X) = e_L(X) - e_L(X)^q / e_L(v)^{q-1},
// extended one basis vector at a time and cached per depth D.
class LatticeExp {
 public:
  LatticeExp(Ctx ctx, std::vector<RamifiedSeries> basis);

  const Ctx& ctx() const { return ctx_; }
  std::size_t rank() const { return basis_.size(); }
  // exponential of L_D; dimension r(D+1), hence r(D+1)+1 coefficients
  const LinearPoly& exp_of(std::int64_t D);

 private:
  void extend_by(const RamifiedSeries& v);

  Ctx ctx_;
  std::vector<RamifiedSeries> basis_;
  LinearPoly current_;
  std::int64_t depth_ = -1;               // current_ covers L_depth_
  std::vector<LinearPoly> by_depth_;      // by_depth_[D] = exp of L_D
};

// Per-coefficient witness that deepening the lattice truncation stopped
// moving the exponential: agreement[n] is the discrepancy valuation of
// alpha_n between depths `depth - 1` and `depth`.
struct ExpStabilization {
  std::int64_t depth = 0;
  std::int64_t target = 0;
  std::vector<std::int64_t> agreement;
};

// First n_keep+1 coefficients of the exponential of the full lattice,
// deepened until consecutive depths agree past `goal` on every kept
// coefficient; each coefficient is reported modulo its witnessed agreement.
LinearPoly stable_exp(LatticeExp& tower, std::size_t n_keep, std::int64_t goal,
                      std::int64_t max_depth, ExpStabilization* cert = nullptr);

// A Drinfeld module phi_theta = sum_n g[n] tau^n recovered from its
// exponential via e(theta X) = phi_theta(e(X)), together with the logarithm
// (the inverse linear series).  g[0] = theta; for a lattice of rank r the
// coefficients g[n], n > r, vanish to within the exponential's accuracy.
struct ExpLogData {
  LinearPoly exp;
  LinearPoly log;
  std::vector<RamifiedSeries> g;
};

ExpLogData module_from_exp(const Ctx& ctx, const LinearPoly& exp_poly,
                           std::size_t n_max);

// Carlitz factorials and the rank-one data built from them:
//   D_0 = 1, D_n = (theta^{q^n} - theta) D_{n-1}^q      (exp_C: alpha_n = 1/D_n)
//   L_0 = 1, L_n = (theta^{q^n} - theta) L_{n-1}        (log_C: beta_n = (-1)^n/L_n)
// The logarithm here is produced by the generic inversion recursion; the
// closed form above is checked against it in the test suite.
struct CarlitzData {
  std::vector<RamifiedSeries> d;
  std::vector<RamifiedSeries> l;
  LinearPoly exp;
  LinearPoly log;
};

CarlitzData carlitz_data(const Ctx& ctx, std::size_t n_max);

// Generating function sum_n c[n] / (theta^{q^n} - t) attached to a point z
// and an exponential: c_n = alpha_n z^{q^n}.  The stored tail obeys the
// decay certificate val(c_n) + w q^n strictly increasing and ending past
// the requested goal, which bounds every truncation made here.
class AGF {
 public:
  static AGF build(const LinearPoly& exp_poly, const RamifiedSeries& z,
                   std::int64_t tail_goal);
  static AGF from_terms(Ctx ctx, std::vector<RamifiedSeries> c);

  const Ctx& ctx() const { return ctx_; }
  const std::vector<RamifiedSeries>& terms() const { return c_; }

  AGF neg() const;
  AGF add(const AGF& o) const;
  AGF sub(const AGF& o) const;
  AGF scalar_mul(const RamifiedSeries& s) const;
  // Frobenius twist: poles shift one step up, coefficients to the q-th power
  AGF twist(std::uint32_t l) const;

  // residue at t = theta^{q^n} (a simple pole): -c_n
  RamifiedSeries residue_at(std::size_t n) const;
  // expansion around t = 0 modulo t^t_len
  TateSeries to_tate(std::size_t t_len) const;
  // value at t = x away from the poles (PoleHit on collision)
  RamifiedSeries eval(const RamifiedSeries& x) const;

  // val(c_last) + w q^last, or exact when the term list is the whole
  // function (from_terms and its images under the arithmetic above)
  std::int64_t tail_bound() const;

 private:
  Ctx ctx_;
  std::vector<RamifiedSeries> c_;
  bool finite_ = false;
};

// Least discrepancy valuation of the functional equation
//   sum_i g_i s^{(i)} = t s + ez
// over the first t_len Tate coefficients.
std::int64_t agf_functional_discrepancy(const AGF& s,
                                        const std::vector<RamifiedSeries>& g,
                                        const RamifiedSeries& ez,
                                        std::size_t t_len);

// Goss polynomials G_1..G_{n_max} of the exponential (power-basis
// coefficients, index [n-1][k] for the X^k coefficient of G_n):
//   G_1 = X,  G_n = X * (G_{n-1} + sum_{q^i <= n} alpha_i G_{n-q^i}).
// They satisfy sum_{lambda} (x + lambda)^{-n} = G_n(1/e(x)).
std::vector<std::vector<RamifiedSeries>> goss_polys(const Ctx& ctx,
                                                    const LinearPoly& exp_poly,
                                                    std::size_t n_max);

// Brute force over the truncated lattice L_D spanned by the basis:
//   sum_{lambda in L_D} (x + lambda)^{-n},
// the reference value for G_n(1/e_{L_D}(x)).  Enumerates the whole space
// (budget-guarded); test oracle only.
RamifiedSeries goss_oracle(const Ctx& ctx,
                           const std::vector<RamifiedSeries>& basis,
                           std::int64_t D, std::int64_t n,
                           const RamifiedSeries& x);

// dense polynomial evaluation, coefficients low-to-high
RamifiedSeries poly_eval(const std::vector<RamifiedSeries>& coeffs,
                         const RamifiedSeries& x);

}  // namespace dmf
