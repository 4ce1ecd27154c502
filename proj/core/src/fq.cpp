#include "dmf/fq.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>

namespace dmf {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPrimeCharacteristic: return "NonPrimeCharacteristic";
    case ErrorCode::NoIrreducibleFound: return "NoIrreducibleFound";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::InversionOfZero: return "InversionOfZero";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::RamificationNotDivisible: return "RamificationNotDivisible";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::NoStabilization: return "NoStabilization";
    case ErrorCode::EnumerationBudgetExceeded:
      return "EnumerationBudgetExceeded";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::TailNotDecaying: return "TailNotDecaying";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::CollidingValuations: return "CollidingValuations";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::VanishingJ: return "VanishingJ";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NotMonic: return "NotMonic";
    case ErrorCode::NonPolynomialInverse: return "NonPolynomialInverse";
    case ErrorCode::DepthTooSmall: return "DepthTooSmall";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

namespace detail {

struct FqTables {
  std::uint32_t p = 0;
  std::uint32_t base_e = 0;  // q = p^base_e
  std::uint32_t n = 0;       // total degree over F_p
  std::uint32_t size = 0;    // p^n
  std::uint32_t q = 0;       // p^base_e
  std::vector<std::uint32_t> modulus;  // length n+1, monic, over F_p
  std::vector<FqElem> exp;             // length 2*(size-1), exp[i] = g^i
  std::vector<std::uint32_t> log;      // length size; log[0] unused
};

namespace {

using PVec = std::vector<std::uint32_t>;  // F_p coefficients, little-endian

void pv_trim(PVec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PVec pv_mul_mod(const PVec& a, const PVec& b, const PVec& mod,
                std::uint32_t p) {
  PVec prod(a.size() + b.size() ? a.size() + b.size() - 1 : 0, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = (prod[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p;
    }
  }
  // reduce modulo the monic polynomial `mod`
  const std::size_t d = mod.size() - 1;
  for (std::size_t k = prod.size(); k-- > d;) {
    std::uint32_t lead = prod[k];
    if (lead == 0) continue;
    prod[k] = 0;
    for (std::size_t j = 0; j < d; ++j) {
      std::uint64_t sub = static_cast<std::uint64_t>(lead) * mod[j] % p;
      prod[k - d + j] = (prod[k - d + j] + p - sub) % p;
    }
  }
  prod.resize(d, 0);
  return prod;
}

std::uint32_t pv_to_index(const PVec& a, std::uint32_t p) {
  std::uint64_t idx = 0;
  for (std::size_t i = a.size(); i-- > 0;) idx = idx * p + a[i];
  return static_cast<std::uint32_t>(idx);
}

PVec index_to_pv(std::uint32_t idx, std::uint32_t p, std::uint32_t len) {
  PVec a(len, 0);
  for (std::uint32_t i = 0; i < len; ++i) {
    a[i] = idx % p;
    idx /= p;
  }
  return a;
}

bool is_prime_u32(std::uint32_t v) {
  if (v < 2) return false;
  for (std::uint32_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

// Remainder of a by monic b, both over F_p.
PVec pv_rem(PVec a, const PVec& b, std::uint32_t p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    std::uint32_t lead = a.back();
    if (lead != 0) {
      const std::size_t shift = a.size() - 1 - db;
      for (std::size_t j = 0; j < b.size(); ++j) {
        std::uint64_t sub = static_cast<std::uint64_t>(lead) * b[j] % p;
        a[shift + j] = (a[shift + j] + p - sub) % p;
      }
    }
    a.pop_back();
    pv_trim(a);
    if (a.size() <= db) break;
  }
  return a;
}

bool pv_is_irreducible(const PVec& f, std::uint32_t p) {
  // trial division by all monic polynomials of degree 1..deg(f)/2
  const std::size_t df = f.size() - 1;
  if (df == 0) return false;
  if (df == 1) return true;
  for (std::size_t d = 1; 2 * d <= df; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      PVec g = index_to_pv(static_cast<std::uint32_t>(idx), p,
                           static_cast<std::uint32_t>(d));
      g.push_back(1);  // monic of degree d
      PVec r = pv_rem(f, g, p);
      if (r.empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t v) {
  std::vector<std::uint32_t> fs;
  for (std::uint32_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      fs.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) fs.push_back(v);
  return fs;
}

}  // namespace
}  // namespace detail

Fq Fq::make(std::uint32_t p, std::uint32_t e, std::uint32_t c) {
  using namespace detail;
  if (!is_prime_u32(p)) fail(ErrorCode::NonPrimeCharacteristic,
                             "p = " + std::to_string(p) + " is not prime");
  if (e == 0 || e > 4) fail(ErrorCode::ConfigInvalid, "need 1 <= e <= 4");
  if (c == 0) fail(ErrorCode::ConfigInvalid, "need c >= 1");
  std::uint64_t q64 = 1;
  for (std::uint32_t i = 0; i < e; ++i) q64 *= p;
  if (q64 > 65536) fail(ErrorCode::ConfigInvalid, "q = p^e exceeds 2^16");
  const std::uint32_t n = e * c;
  std::uint64_t size64 = 1;
  for (std::uint32_t i = 0; i < n; ++i) size64 *= p;
  if (size64 > 65536)
    fail(ErrorCode::ConfigInvalid, "field size p^(e*c) exceeds 2^16");

  auto t = std::make_shared<FqTables>();
  t->p = p;
  t->base_e = e;
  t->n = n;
  t->size = static_cast<std::uint32_t>(size64);
  t->q = static_cast<std::uint32_t>(q64);

  // lexicographically least monic irreducible of degree n over F_p
  if (n == 1) {
    t->modulus = {0, 1};  // x itself; F_p needs no quotient
  } else {
    bool found = false;
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < n; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count && !found; ++idx) {
      PVec f = index_to_pv(static_cast<std::uint32_t>(idx), p, n);
      f.push_back(1);
      if (pv_is_irreducible(f, p)) {
        t->modulus = f;
        found = true;
      }
    }
    if (!found) fail(ErrorCode::NoIrreducibleFound, "degree " +
                     std::to_string(n));  // unreachable for valid p, n
  }

  // multiplicative generator and exp/log tables
  const std::uint32_t Q = t->size;
  t->log.assign(Q, 0);
  if (Q == 2) {
    t->exp = {1, 1};
    t->log[1] = 0;
  } else {
    auto factors = prime_factors(Q - 1);
    std::uint32_t gen = 0;
    for (std::uint32_t cand = 2; cand < Q; ++cand) {
      PVec cv = index_to_pv(cand, p, n);
      bool ok = true;
      for (std::uint32_t f : factors) {
        // cand^((Q-1)/f) by square-and-multiply over F_p[x]/(modulus)
        std::uint32_t exp_left = (Q - 1) / f;
        PVec acc = index_to_pv(1, p, n);
        PVec base = cv;
        while (exp_left) {
          if (exp_left & 1) acc = pv_mul_mod(acc, base, t->modulus, p);
          base = pv_mul_mod(base, base, t->modulus, p);
          exp_left >>= 1;
        }
        if (pv_to_index(acc, p) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        gen = cand;
        break;
      }
    }
    if (gen == 0) fail(ErrorCode::Internal, "no multiplicative generator");
    t->exp.assign(2 * (Q - 1), 0);
    PVec cur = index_to_pv(1, p, n);
    PVec g = index_to_pv(gen, p, n);
    for (std::uint32_t i = 0; i < Q - 1; ++i) {
      std::uint32_t idx = pv_to_index(cur, p);
      t->exp[i] = idx;
      t->exp[i + Q - 1] = idx;
      t->log[idx] = i;
      cur = pv_mul_mod(cur, g, t->modulus, p);
    }
  }

  Fq F;
  F.t_ = std::move(t);
  return F;
}

std::uint32_t Fq::p() const { return t_->p; }
std::uint32_t Fq::e() const { return t_->base_e; }
std::uint32_t Fq::c() const { return t_->n / t_->base_e; }
std::uint32_t Fq::q() const { return t_->q; }
std::uint32_t Fq::size() const { return t_->size; }
const std::vector<std::uint32_t>& Fq::modulus() const { return t_->modulus; }

FqElem Fq::add(FqElem a, FqElem b) const {
  const std::uint32_t p = t_->p;
  if (p == 2) return a ^ b;
  FqElem out = 0;
  std::uint32_t mult = 1;
  for (std::uint32_t i = 0; i < t_->n; ++i) {
    out += (a % p + b % p) % p * mult;
    a /= p;
    b /= p;
    mult *= p;
  }
  return out;
}

FqElem Fq::neg(FqElem a) const {
  const std::uint32_t p = t_->p;
  if (p == 2) return a;
  FqElem out = 0;
  std::uint32_t mult = 1;
  for (std::uint32_t i = 0; i < t_->n; ++i) {
    out += (p - a % p) % p * mult;
    a /= p;
    mult *= p;
  }
  return out;
}

FqElem Fq::sub(FqElem a, FqElem b) const { return add(a, neg(b)); }

FqElem Fq::mul(FqElem a, FqElem b) const {
  if (a == 0 || b == 0) return 0;
  return t_->exp[t_->log[a] + t_->log[b]];
}

FqElem Fq::inv(FqElem a) const {
  if (a == 0) fail(ErrorCode::InversionOfZero, "field element");
  const std::uint32_t m = t_->size - 1;
  return t_->exp[(m - t_->log[a]) % m];
}

FqElem Fq::pow(FqElem a, std::int64_t m) const {
  const std::uint32_t ord = t_->size - 1;
  if (a == 0) {
    if (m > 0) return 0;
    if (m == 0) return 1;
    fail(ErrorCode::InversionOfZero, "0 to a negative power");
  }
  std::int64_t r = m % ord;
  if (r < 0) r += ord;
  return t_->exp[static_cast<std::uint64_t>(t_->log[a]) * r % ord];
}

FqElem Fq::frob_q(FqElem a, std::uint32_t l) const {
  if (a == 0 || a == 1) return a;
  const std::uint32_t ord = t_->size - 1;
  std::uint64_t qpow = 1;
  for (std::uint32_t i = 0; i < l; ++i) qpow = qpow * t_->q % ord;
  return t_->exp[t_->log[a] * qpow % ord];
}

FqElem Fq::from_int(std::int64_t k) const {
  if (k >= 0 && static_cast<std::uint64_t>(k) < t_->size)
    return static_cast<FqElem>(k);
  std::int64_t r = k % static_cast<std::int64_t>(t_->p);
  if (r < 0) r += t_->p;
  return static_cast<FqElem>(r);
}

std::vector<std::uint32_t> Fq::digits(FqElem a) const {
  return detail::index_to_pv(a, t_->p, t_->n);
}

FqElem Fq::from_digits(const std::vector<std::uint32_t>& d) const {
  std::uint64_t idx = 0;
  for (std::size_t i = d.size(); i-- > 0;) idx = idx * t_->p + d[i] % t_->p;
  if (idx >= t_->size) fail(ErrorCode::ConfigInvalid, "digit vector too long");
  return static_cast<FqElem>(idx);
}

FieldDesc fq_init(std::uint32_t p, std::uint32_t e, std::uint32_t c) {
  FieldDesc fd;
  fd.c = c;
  fd.work = Fq::make(p, e, c);
  if (c == 1) {
    fd.base = fd.work;
    fd.embed.resize(fd.base.size());
    for (std::uint32_t i = 0; i < fd.base.size(); ++i) fd.embed[i] = i;
    return fd;
  }
  fd.base = Fq::make(p, e, 1);
  // Lexicographically least root of the base modulus inside `work` gives the
  // embedding F_q -> F_{q^c}.
  const auto& m = fd.base.modulus();
  FqElem root = 0;
  bool found = false;
  for (std::uint32_t x = 0; x < fd.work.size() && !found; ++x) {
    FqElem acc = 0;
    for (std::size_t i = m.size(); i-- > 0;) {
      acc = fd.work.add(fd.work.mul(acc, x), m[i] % p);
    }
    if (acc == 0) {
      root = x;
      found = true;
    }
  }
  if (!found) fail(ErrorCode::Internal, "base modulus has no root upstairs");
  fd.embed.resize(fd.base.size());
  for (std::uint32_t a = 0; a < fd.base.size(); ++a) {
    auto d = fd.base.digits(a);
    FqElem acc = 0;
    for (std::size_t i = d.size(); i-- > 0;) {
      acc = fd.work.add(fd.work.mul(acc, root), d[i]);
    }
    fd.embed[a] = acc;
  }
  return fd;
}

// ---------------------------------------------------------------------------

APoly apoly_zero() { return {}; }
APoly apoly_one() { return {{1}}; }
APoly apoly_theta() { return {{0, 1}}; }
APoly apoly_const(FqElem a) {
  if (a == 0) return {};
  return {{a}};
}
APoly apoly_monomial(FqElem a, std::size_t d) {
  if (a == 0) return {};
  APoly out;
  out.coeff.assign(d + 1, 0);
  out.coeff[d] = a;
  return out;
}

void apoly_trim(APoly& a) {
  while (!a.coeff.empty() && a.coeff.back() == 0) a.coeff.pop_back();
}

APoly apoly_add(const Fq& F, const APoly& a, const APoly& b) {
  APoly out;
  out.coeff.resize(std::max(a.coeff.size(), b.coeff.size()), 0);
  for (std::size_t i = 0; i < out.coeff.size(); ++i) {
    FqElem x = i < a.coeff.size() ? a.coeff[i] : 0;
    FqElem y = i < b.coeff.size() ? b.coeff[i] : 0;
    out.coeff[i] = F.add(x, y);
  }
  apoly_trim(out);
  return out;
}

APoly apoly_neg(const Fq& F, const APoly& a) {
  APoly out = a;
  for (auto& x : out.coeff) x = F.neg(x);
  return out;
}

APoly apoly_sub(const Fq& F, const APoly& a, const APoly& b) {
  return apoly_add(F, a, apoly_neg(F, b));
}

APoly apoly_mul(const Fq& F, const APoly& a, const APoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  APoly out;
  out.coeff.assign(a.coeff.size() + b.coeff.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeff.size(); ++i) {
    if (a.coeff[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeff.size(); ++j) {
      out.coeff[i + j] = F.add(out.coeff[i + j], F.mul(a.coeff[i], b.coeff[j]));
    }
  }
  return out;
}

APoly apoly_scalar_mul(const Fq& F, FqElem s, const APoly& a) {
  if (s == 0) return {};
  APoly out = a;
  for (auto& x : out.coeff) x = F.mul(s, x);
  return out;
}

std::pair<APoly, APoly> apoly_divmod(const Fq& F, const APoly& a,
                                     const APoly& b) {
  if (b.is_zero()) fail(ErrorCode::InversionOfZero, "polynomial division by 0");
  APoly rem = a;
  APoly quot;
  const std::int64_t db = b.degree();
  const FqElem lead_inv = F.inv(b.coeff.back());
  if (rem.degree() >= db)
    quot.coeff.assign(static_cast<std::size_t>(rem.degree() - db) + 1, 0);
  while (rem.degree() >= db) {
    const std::size_t shift = static_cast<std::size_t>(rem.degree() - db);
    const FqElem f = F.mul(rem.coeff.back(), lead_inv);
    quot.coeff[shift] = f;
    for (std::size_t i = 0; i < b.coeff.size(); ++i) {
      rem.coeff[shift + i] =
          F.sub(rem.coeff[shift + i], F.mul(f, b.coeff[i]));
    }
    apoly_trim(rem);
  }
  apoly_trim(quot);
  return {quot, rem};
}

FqElem apoly_eval(const Fq& F, const APoly& a, FqElem x) {
  FqElem acc = 0;
  for (std::size_t i = a.coeff.size(); i-- > 0;)
    acc = F.add(F.mul(acc, x), a.coeff[i]);
  return acc;
}

bool apoly_is_monic(const Fq& F, const APoly& a) {
  (void)F;
  return !a.is_zero() && a.coeff.back() == 1;
}

bool apoly_is_irreducible(const Fq& F, const APoly& a) {
  const std::int64_t d = a.degree();
  if (d <= 0) return false;
  if (d == 1) return true;
  for (std::int64_t dd = 1; 2 * dd <= d; ++dd) {
    std::uint64_t count = 1;
    for (std::int64_t i = 0; i < dd; ++i) count *= F.q();
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      APoly g = apoly_from_index(F, idx, static_cast<std::uint32_t>(dd - 1));
      g.coeff.resize(static_cast<std::size_t>(dd) + 1, 0);
      g.coeff[static_cast<std::size_t>(dd)] = 1;
      if (apoly_divmod(F, a, g).second.is_zero()) return false;
    }
  }
  return true;
}

std::vector<APoly> monic_irreducibles(const Fq& F, std::uint32_t d) {
  if (d == 0 || d > 4)
    fail(ErrorCode::DegreeTooLarge, "monic_irreducibles needs 1 <= d <= 4");
  std::vector<APoly> out;
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < d; ++i) count *= F.q();
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    APoly g = apoly_from_index(F, idx, d > 0 ? d - 1 : 0);
    g.coeff.resize(d + 1, 0);
    g.coeff[d] = 1;
    if (apoly_is_irreducible(F, g)) out.push_back(g);
  }
  return out;
}

APoly apoly_from_index(const Fq& F, std::uint64_t index, std::uint32_t maxdeg) {
  APoly out;
  out.coeff.assign(maxdeg + 1, 0);
  for (std::uint32_t i = 0; i <= maxdeg; ++i) {
    out.coeff[i] = static_cast<FqElem>(index % F.q());
    index /= F.q();
  }
  if (index != 0) fail(ErrorCode::ConfigInvalid, "poly index out of range");
  apoly_trim(out);
  return out;
}

std::string apoly_to_string(const Fq& F, const APoly& a) {
  (void)F;
  if (a.is_zero()) return "0";
  std::string out;
  for (std::size_t i = a.coeff.size(); i-- > 0;) {
    const FqElem c = a.coeff[i];
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c);
    } else {
      if (c != 1) out += std::to_string(c) + "*";
      out += "T";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

namespace {

// one term of the text form: [coeff] [* ] [T [^k]]
struct TermParser {
  const std::string& s;
  std::size_t pos = 0;

  explicit TermParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  bool variable_here() {
    if (pos < s.size() && (s[pos] == 'T' || s[pos] == 't')) return true;
    // UTF-8 for the Greek letter theta
    return pos + 1 < s.size() && static_cast<unsigned char>(s[pos]) == 0xCE &&
           static_cast<unsigned char>(s[pos + 1]) == 0xB8;
  }

  void eat_variable() {
    pos += (s[pos] == 'T' || s[pos] == 't') ? 1 : 2;
  }
};

}  // namespace

APoly apoly_parse(const Fq& F, const std::string& text) {
  TermParser tp(text);
  APoly acc;
  bool any = false;
  tp.skip_ws();
  while (tp.pos < tp.s.size()) {
    bool negate = false;
    if (tp.s[tp.pos] == '+' || tp.s[tp.pos] == '-') {
      negate = tp.s[tp.pos] == '-';
      ++tp.pos;
      tp.skip_ws();
    } else if (any) {
      fail(ErrorCode::ParseError, "expected '+' or '-' in: " + text);
    }
    // coefficient
    std::int64_t coeff_int = -1;
    if (tp.pos < tp.s.size() &&
        std::isdigit(static_cast<unsigned char>(tp.s[tp.pos]))) {
      coeff_int = 0;
      while (tp.pos < tp.s.size() &&
             std::isdigit(static_cast<unsigned char>(tp.s[tp.pos]))) {
        coeff_int = coeff_int * 10 + (tp.s[tp.pos] - '0');
        ++tp.pos;
      }
      tp.skip_ws();
      if (tp.pos < tp.s.size() && tp.s[tp.pos] == '*') {
        ++tp.pos;
        tp.skip_ws();
      }
    }
    // variable and power
    std::size_t power = 0;
    if (tp.variable_here()) {
      tp.eat_variable();
      power = 1;
      tp.skip_ws();
      if (tp.pos < tp.s.size() && tp.s[tp.pos] == '^') {
        ++tp.pos;
        tp.skip_ws();
        if (tp.pos >= tp.s.size() ||
            !std::isdigit(static_cast<unsigned char>(tp.s[tp.pos])))
          fail(ErrorCode::ParseError, "missing exponent in: " + text);
        std::size_t pw = 0;
        while (tp.pos < tp.s.size() &&
               std::isdigit(static_cast<unsigned char>(tp.s[tp.pos]))) {
          pw = pw * 10 + static_cast<std::size_t>(tp.s[tp.pos] - '0');
          ++tp.pos;
        }
        power = pw;
      }
    } else if (coeff_int < 0) {
      fail(ErrorCode::ParseError, "expected term in: " + text);
    }
    FqElem c = coeff_int < 0 ? 1 : F.from_int(coeff_int);
    if (negate) c = F.neg(c);
    acc = apoly_add(F, acc, apoly_monomial(c, power));
    any = true;
    tp.skip_ws();
  }
  if (!any) fail(ErrorCode::ParseError, "empty polynomial text");
  return acc;
}

// ---------------------------------------------------------------------------

APolyMat apoly_mat_identity(std::size_t r) {
  APolyMat m(r, std::vector<APoly>(r));
  for (std::size_t i = 0; i < r; ++i) m[i][i] = apoly_one();
  return m;
}

APolyMat apoly_mat_mul(const Fq& F, const APolyMat& a, const APolyMat& b) {
  const std::size_t r = a.size();
  APolyMat out(r, std::vector<APoly>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k)
        out[i][j] = apoly_add(F, out[i][j], apoly_mul(F, a[i][k], b[k][j]));
  return out;
}

namespace {

APoly det_minor(const Fq& F, const APolyMat& m,
                const std::vector<std::size_t>& rows,
                const std::vector<std::size_t>& cols) {
  if (rows.size() == 1) return m[rows[0]][cols[0]];
  APoly acc;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (m[rows[0]][cols[k]].is_zero()) continue;
    std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
    std::vector<std::size_t> sub_cols;
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (j != k) sub_cols.push_back(cols[j]);
    APoly term =
        apoly_mul(F, m[rows[0]][cols[k]], det_minor(F, m, sub_rows, sub_cols));
    acc = (k % 2 == 0) ? apoly_add(F, acc, term) : apoly_sub(F, acc, term);
  }
  return acc;
}

}  // namespace

APoly apoly_mat_det(const Fq& F, const APolyMat& m) {
  if (m.empty()) return apoly_one();
  std::vector<std::size_t> idx(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) idx[i] = i;
  return det_minor(F, m, idx, idx);
}

APolyMat apoly_mat_adjugate(const Fq& F, const APolyMat& m) {
  const std::size_t r = m.size();
  APolyMat adj(r, std::vector<APoly>(r));
  if (r == 1) {
    adj[0][0] = apoly_one();
    return adj;
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      std::vector<std::size_t> rows, cols;
      for (std::size_t k = 0; k < r; ++k) {
        if (k != i) rows.push_back(k);
        if (k != j) cols.push_back(k);
      }
      APoly cof = det_minor(F, m, rows, cols);
      if ((i + j) % 2 == 1) cof = apoly_neg(F, cof);
      adj[j][i] = cof;  // transpose of the cofactor matrix
    }
  }
  return adj;
}

}  // namespace dmf
