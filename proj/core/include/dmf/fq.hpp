#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dmf/errors.hpp"

namespace dmf {

// Index of a field element.  The digits of the index in base p are the
// coefficients of the element written as a polynomial in the generator of
// F_{p^n} over F_p, lowest power first.
using FqElem = std::uint32_t;

namespace detail {
struct FqTables;
}

// Handle to a finite field F_{p^n} = F_p[x]/(m(x)) with m the
// lexicographically least monic irreducible of degree n.  The handle also
// remembers a base degree e | n, so that q = p^e and the field is read as
// F_{q^c} with c = n/e.  Frobenius powers are always taken relative to q.
//
// Constraints: p prime, p^e <= 2^16, e <= 4.  All arithmetic is table-driven
// (discrete exp/log against a fixed generator), so element operations are
// O(1); handles are cheap shared references to the tables.
class Fq {
 public:
  Fq() = default;

  // F_{p^{e*c}} viewed as F_{q^c} with q = p^e.
  static Fq make(std::uint32_t p, std::uint32_t e, std::uint32_t c = 1);

  std::uint32_t p() const;
  std::uint32_t e() const;          // base degree: q = p^e
  std::uint32_t c() const;          // extension degree over F_q
  std::uint32_t q() const;          // p^e
  std::uint32_t size() const;       // p^{e*c}
  const std::vector<std::uint32_t>& modulus() const;  // over F_p, monic

  FqElem zero() const { return 0; }
  FqElem one() const { return 1; }

  bool valid(FqElem a) const { return a < size(); }

  FqElem add(FqElem a, FqElem b) const;
  FqElem sub(FqElem a, FqElem b) const;
  FqElem neg(FqElem a) const;
  FqElem mul(FqElem a, FqElem b) const;
  FqElem inv(FqElem a) const;
  FqElem pow(FqElem a, std::int64_t m) const;
  // a^(q^l): the l-th Frobenius power relative to q.
  FqElem frob_q(FqElem a, std::uint32_t l) const;

  // Integer literal k (mod p for single digits; general k is read as an
  // element index modulo the field size).
  FqElem from_int(std::int64_t k) const;

  // Base-p digit decomposition of the index, length e*c.
  std::vector<std::uint32_t> digits(FqElem a) const;
  FqElem from_digits(const std::vector<std::uint32_t>& d) const;

  // Structural identity: same construction parameters give the same tables,
  // so two handles describe the same field iff these agree.
  bool same(const Fq& other) const {
    if (t_ == other.t_) return true;
    if (!t_ || !other.t_) return false;
    return p() == other.p() && e() == other.e() && c() == other.c();
  }
  explicit operator bool() const { return static_cast<bool>(t_); }

 private:
  std::shared_ptr<const detail::FqTables> t_;
};

// A base field together with an optional constant-field extension.  Series
// coefficients live in `work` = F_{q^c}; polynomial coefficients (APoly) live
// in `base` = F_q and are carried into `work` through `embed`.
struct FieldDesc {
  Fq base;
  Fq work;
  std::uint32_t c = 1;
  // embed[a] for a < q: image of the base-field element in `work`.
  std::vector<FqElem> embed;

  FqElem lift(FqElem a) const { return embed[a]; }
};

// Builds F_q = F_p[x]/(m) with m found by exhaustive search in lexicographic
// order, plus the degree-c constant-field extension (c = 1 if omitted).
FieldDesc fq_init(std::uint32_t p, std::uint32_t e, std::uint32_t c = 1);

// ---------------------------------------------------------------------------
// Polynomials over the base field in one variable (written T or θ in text
// form).  Coefficients are base-field element indices, lowest degree first,
// with no trailing zeros; the zero polynomial has an empty list.
struct APoly {
  std::vector<FqElem> coeff;

  bool is_zero() const { return coeff.empty(); }
  // degree, with deg 0 = -1 by convention
  std::int64_t degree() const {
    return static_cast<std::int64_t>(coeff.size()) - 1;
  }
  bool operator==(const APoly& o) const = default;
};

APoly apoly_zero();
APoly apoly_one();
APoly apoly_theta();                       // the variable itself
APoly apoly_const(FqElem a);
APoly apoly_monomial(FqElem a, std::size_t d);
void apoly_trim(APoly& a);

APoly apoly_add(const Fq& F, const APoly& a, const APoly& b);
APoly apoly_sub(const Fq& F, const APoly& a, const APoly& b);
APoly apoly_neg(const Fq& F, const APoly& a);
APoly apoly_mul(const Fq& F, const APoly& a, const APoly& b);
APoly apoly_scalar_mul(const Fq& F, FqElem s, const APoly& a);
// Quotient and remainder by a nonzero divisor.
std::pair<APoly, APoly> apoly_divmod(const Fq& F, const APoly& a,
                                     const APoly& b);
FqElem apoly_eval(const Fq& F, const APoly& a, FqElem x);
bool apoly_is_monic(const Fq& F, const APoly& a);

bool apoly_is_irreducible(const Fq& F, const APoly& a);
// All monic irreducibles of degree exactly d, lexicographic order; d <= 4.
std::vector<APoly> monic_irreducibles(const Fq& F, std::uint32_t d);

// Index <-> polynomial of degree <= maxdeg: digit i of the index in base q is
// the coefficient of T^i.  Used for canonical enumeration of tails/cosets.
APoly apoly_from_index(const Fq& F, std::uint64_t index, std::uint32_t maxdeg);

std::string apoly_to_string(const Fq& F, const APoly& a);
// Accepts either "T" or "θ" for the variable, "^" powers, integer
// coefficients (read as element indices), and "-" in odd characteristic.
APoly apoly_parse(const Fq& F, const std::string& text);

// Small exact matrix helpers over the polynomial ring (square, size <= 4).
using APolyMat = std::vector<std::vector<APoly>>;
APoly apoly_mat_det(const Fq& F, const APolyMat& m);
APolyMat apoly_mat_adjugate(const Fq& F, const APolyMat& m);
APolyMat apoly_mat_mul(const Fq& F, const APolyMat& a, const APolyMat& b);
APolyMat apoly_mat_identity(std::size_t r);

}  // namespace dmf
