#include "dmf/series.hpp"

#include <algorithm>
#include <sstream>

namespace dmf {

Ctx SeriesContext::create(std::uint32_t p, std::uint32_t e, std::int64_t w,
                          std::int64_t cap, std::uint32_t c) {
  auto ctx = std::make_shared<SeriesContext>();
  ctx->field = fq_init(p, e, c);
  const std::int64_t qm1 = ctx->field.base.q() - 1;
  if (w <= 0) fail(ErrorCode::ConfigInvalid, "ramification w must be positive");
  if (w % qm1 != 0)
    fail(ErrorCode::RamificationNotDivisible,
         "need (q-1) | w to pin the root of -theta; got q = " +
             std::to_string(ctx->field.base.q()) +
             ", w = " + std::to_string(w));
  if (cap <= 0 || cap >= kExactPrec / 4)
    fail(ErrorCode::ConfigInvalid, "unreasonable working precision cap");
  ctx->w = w;
  ctx->cap = cap;
  return ctx;
}

void require_same_ctx(const Ctx& a, const Ctx& b) {
  if (a.get() == b.get()) return;
  if (!a || !b) fail(ErrorCode::ContextMismatch, "missing series context");
  if (a->w != b->w || !a->field.work.same(b->field.work))
    fail(ErrorCode::ContextMismatch, "series from different contexts");
}

// --------------------------------------------------------------------------
// window kernels: dense coefficient vectors indexed from a base exponent

namespace {

// generic truncated convolution of windows, out_len entries
void window_mul(const Fq& F, const std::vector<FqElem>& a,
                const std::vector<FqElem>& b, std::size_t out_len,
                std::vector<FqElem>& out) {
  out.assign(out_len, 0);
  if (F.p() == 2 && F.size() == 2) {
    // pack to 64-bit words; carry-less multiply by shift-xor
    const std::size_t words = (out_len + 63) / 64;
    std::vector<std::uint64_t> bw(words + 1, 0), ow(words + 1, 0);
    // entries of b at or beyond out_len cannot reach the truncated window
    for (std::size_t j = 0; j < b.size() && j < out_len; ++j)
      if (b[j]) bw[j / 64] |= std::uint64_t(1) << (j % 64);
    for (std::size_t i = 0; i < a.size() && i < out_len; ++i) {
      if (!a[i]) continue;
      const std::size_t ws = i / 64, off = i % 64;
      if (off == 0) {
        for (std::size_t k = 0; k + ws < ow.size() && k < bw.size(); ++k)
          ow[k + ws] ^= bw[k];
      } else {
        for (std::size_t k = 0; k + ws < ow.size() && k < bw.size(); ++k) {
          ow[k + ws] ^= bw[k] << off;
          if (k + ws + 1 < ow.size()) ow[k + ws + 1] ^= bw[k] >> (64 - off);
        }
      }
    }
    for (std::size_t i = 0; i < out_len; ++i)
      out[i] = (ow[i / 64] >> (i % 64)) & 1;
    return;
  }
  if (F.c() == 1 && F.e() == 1) {
    // prime field: plain integer digits, delayed reduction
    const std::uint64_t p = F.p();
    for (std::size_t i = 0; i < out_len; ++i) {
      std::uint64_t acc = 0;
      const std::size_t jlo = i >= a.size() ? i - a.size() + 1 : 0;
      const std::size_t jhi = std::min(b.size(), i + 1);
      for (std::size_t j = jlo; j < jhi; ++j) {
        acc += std::uint64_t(a[i - j]) * b[j];
        if (acc >= (std::uint64_t(1) << 62)) acc %= p;
      }
      out[i] = static_cast<FqElem>(acc % p);
    }
    return;
  }
  for (std::size_t i = 0; i < a.size() && i < out_len; ++i) {
    if (!a[i]) continue;
    const std::size_t jmax = std::min(b.size(), out_len - i);
    for (std::size_t j = 0; j < jmax; ++j) {
      if (!b[j]) continue;
      out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
    }
  }
}

// inverse of a unit window (a[0] != 0) to `len` coefficients
void window_inv(const Fq& F, const std::vector<FqElem>& a, std::size_t len,
                std::vector<FqElem>& out) {
  out.assign(len, 0);
  if (len == 0) return;
  if (F.p() == 2 && F.size() == 2) {
    // Newton iteration b <- b + b*(1 + a*b), doubling the window
    std::vector<FqElem> b{1}, t, t2;
    std::size_t m = 1;
    while (m < len) {
      m = std::min(2 * m, len);
      std::vector<FqElem> am(a.begin(),
                             a.begin() + std::min(a.size(), m));
      window_mul(F, am, b, m, t);      // a*b = 1 + error
      t[0] ^= 1;                       // error
      window_mul(F, t, b, m, t2);      // b*error
      b.resize(m, 0);
      for (std::size_t i = 0; i < m; ++i) b[i] ^= t2[i];
    }
    out = std::move(b);
    out.resize(len, 0);
    return;
  }
  const FqElem inv0 = F.inv(a[0]);
  out[0] = inv0;
  for (std::size_t k = 1; k < len; ++k) {
    FqElem s = 0;
    const std::size_t imax = std::min(a.size(), k + 1);
    for (std::size_t i = 1; i < imax; ++i)
      s = F.add(s, F.mul(a[i], out[k - i]));
    out[k] = F.neg(F.mul(inv0, s));
  }
}

}  // namespace

// --------------------------------------------------------------------------

void RamifiedSeries::canonicalize() {
  std::size_t lead = 0;
  while (lead < coeff_.size() && coeff_[lead] == 0) ++lead;
  if (lead > 0) {
    coeff_.erase(coeff_.begin(), coeff_.begin() + lead);
    v_ += static_cast<std::int64_t>(lead);
  }
  // drop anything at or beyond the precision window
  if (!exact() && v_ + static_cast<std::int64_t>(coeff_.size()) > prec_) {
    const std::int64_t keep = prec_ - v_;
    coeff_.resize(keep > 0 ? static_cast<std::size_t>(keep) : 0);
  }
  while (!coeff_.empty() && coeff_.back() == 0) coeff_.pop_back();
  if (coeff_.empty()) v_ = prec_;
  if (ctx_ && v_ < ctx_->val_floor && !coeff_.empty())
    fail(ErrorCode::PrecisionExhausted,
         "valuation " + std::to_string(v_) + " fell below the context floor");
}

RamifiedSeries RamifiedSeries::zero(Ctx ctx, std::int64_t prec) {
  RamifiedSeries r;
  r.ctx_ = std::move(ctx);
  r.prec_ = prec;
  r.v_ = prec;
  return r;
}

RamifiedSeries RamifiedSeries::monomial(Ctx ctx, FqElem c, std::int64_t exp,
                                        std::int64_t prec) {
  RamifiedSeries r;
  r.ctx_ = std::move(ctx);
  r.prec_ = prec;
  r.v_ = exp;
  if (c != 0 && exp < prec) r.coeff_ = {c};
  r.canonicalize();
  return r;
}

RamifiedSeries RamifiedSeries::from_coeffs(Ctx ctx, std::int64_t v,
                                           std::vector<FqElem> coeff,
                                           std::int64_t prec) {
  RamifiedSeries r;
  r.ctx_ = std::move(ctx);
  r.v_ = v;
  r.prec_ = prec;
  r.coeff_ = std::move(coeff);
  r.canonicalize();
  return r;
}

RamifiedSeries RamifiedSeries::theta(Ctx ctx) {
  const FqElem m1 = ctx->field.work.neg(1);
  const std::int64_t w = ctx->w;
  return monomial(std::move(ctx), m1, -w);
}

RamifiedSeries RamifiedSeries::theta_pow(Ctx ctx, std::int64_t m) {
  const Fq& W = ctx->field.work;
  const FqElem c = (m % 2 == 0) ? 1 : W.neg(1);
  const std::int64_t w = ctx->w;
  return monomial(std::move(ctx), c, -m * w);
}

RamifiedSeries RamifiedSeries::negtheta_root(Ctx ctx) {
  const std::int64_t e = ctx->root_exp();
  return monomial(std::move(ctx), 1, e);
}

RamifiedSeries RamifiedSeries::apoly_at_theta(Ctx ctx, const APoly& a) {
  RamifiedSeries acc = zero(ctx);
  for (std::size_t m = 0; m < a.coeff.size(); ++m) {
    if (a.coeff[m] == 0) continue;
    const FqElem lifted = ctx->field.lift(a.coeff[m]);
    acc = acc.add(theta_pow(ctx, static_cast<std::int64_t>(m))
                      .scalar_mul(lifted));
  }
  return acc;
}

RamifiedSeries RamifiedSeries::apoly_eval_twist(Ctx ctx, const APoly& a,
                                                std::uint32_t n) {
  return apoly_at_theta(std::move(ctx), a).qpow(n);
}

FqElem RamifiedSeries::coeff_at(std::int64_t exp) const {
  if (coeff_.empty() || exp < v_) return 0;
  const std::int64_t off = exp - v_;
  if (off >= static_cast<std::int64_t>(coeff_.size())) return 0;
  return coeff_[static_cast<std::size_t>(off)];
}

RamifiedSeries RamifiedSeries::neg() const {
  RamifiedSeries r = *this;
  const Fq& W = ctx_->field.work;
  for (auto& c : r.coeff_) c = W.neg(c);
  return r;
}

RamifiedSeries RamifiedSeries::add(const RamifiedSeries& o) const {
  require_same_ctx(ctx_, o.ctx_);
  const std::int64_t prec = std::min(prec_, o.prec_);
  if (coeff_.empty() && o.coeff_.empty()) return zero(ctx_, prec);
  // empty windows contribute nothing: take bounds over the non-empty sides
  const std::int64_t v = std::min(coeff_.empty() ? o.v_ : v_,
                                  o.coeff_.empty() ? v_ : o.v_);
  const std::int64_t hi_x =
      coeff_.empty() ? v : v_ + static_cast<std::int64_t>(coeff_.size());
  const std::int64_t hi_y =
      o.coeff_.empty() ? v : o.v_ + static_cast<std::int64_t>(o.coeff_.size());
  const std::int64_t top = std::min(prec, std::max(hi_x, hi_y));
  if (top <= v) return zero(ctx_, prec);
  std::vector<FqElem> out(static_cast<std::size_t>(top - v), 0);
  const Fq& W = ctx_->field.work;
  for (std::size_t i = 0; i < coeff_.size(); ++i) {
    const std::int64_t e = v_ + static_cast<std::int64_t>(i);
    if (e >= top) break;
    out[static_cast<std::size_t>(e - v)] = coeff_[i];
  }
  for (std::size_t i = 0; i < o.coeff_.size(); ++i) {
    const std::int64_t e = o.v_ + static_cast<std::int64_t>(i);
    if (e >= top) break;
    auto& slot = out[static_cast<std::size_t>(e - v)];
    slot = W.add(slot, o.coeff_[i]);
  }
  return from_coeffs(ctx_, v, std::move(out), prec);
}

RamifiedSeries RamifiedSeries::sub(const RamifiedSeries& o) const {
  return add(o.neg());
}

RamifiedSeries RamifiedSeries::mul(const RamifiedSeries& o) const {
  require_same_ctx(ctx_, o.ctx_);
  const std::int64_t prec =
      std::min(sat_prec_add(prec_, o.val_lb()), sat_prec_add(o.prec_, val_lb()));
  if (coeff_.empty() || o.coeff_.empty()) return zero(ctx_, prec);
  const std::int64_t v = v_ + o.v_;
  std::int64_t len = static_cast<std::int64_t>(coeff_.size()) +
                     static_cast<std::int64_t>(o.coeff_.size()) - 1;
  if (prec < kExactPrec) len = std::min(len, prec - v);
  if (len <= 0) return zero(ctx_, prec);
  std::vector<FqElem> out;
  window_mul(ctx_->field.work, coeff_, o.coeff_,
             static_cast<std::size_t>(len), out);
  return from_coeffs(ctx_, v, std::move(out), prec);
}

RamifiedSeries RamifiedSeries::inv() const {
  if (coeff_.empty())
    fail(ErrorCode::InversionOfZero,
         "inverse of a series that is zero to its precision");
  std::int64_t res_prec;
  if (exact()) {
    if (coeff_.size() == 1) {
      // exact monomial: the inverse is again an exact monomial
      return monomial(ctx_, ctx_->field.work.inv(coeff_[0]), -v_);
    }
    res_prec = ctx_->cap + std::max<std::int64_t>(0, -v_);
  } else {
    res_prec = prec_ - 2 * v_;
  }
  const std::int64_t len = res_prec - (-v_);
  if (len <= 0)
    fail(ErrorCode::PrecisionExhausted, "inverse has an empty window");
  std::vector<FqElem> out;
  window_inv(ctx_->field.work, coeff_, static_cast<std::size_t>(len), out);
  return from_coeffs(ctx_, -v_, std::move(out), res_prec);
}

RamifiedSeries RamifiedSeries::qpow(std::uint32_t l) const {
  if (l == 0) return *this;
  const Fq& W = ctx_->field.work;
  std::int64_t qpow_l = 1;
  const std::int64_t q = W.q();
  for (std::uint32_t i = 0; i < l; ++i) {
    qpow_l *= q;
    if (qpow_l > (std::int64_t(1) << 40))
      fail(ErrorCode::ConfigInvalid, "Frobenius twist grows too large");
  }
  RamifiedSeries r;
  r.ctx_ = ctx_;
  r.v_ = v_ * qpow_l;
  r.prec_ = (exact() || prec_ > (kExactPrec - 1) / qpow_l)
                ? kExactPrec
                : prec_ * qpow_l;
  if (!exact() && r.prec_ >= kExactPrec) r.prec_ = kExactPrec - 1;
  if (!coeff_.empty()) {
    r.coeff_.assign(static_cast<std::size_t>(
                        (static_cast<std::int64_t>(coeff_.size()) - 1) *
                            qpow_l + 1),
                    0);
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
      if (coeff_[i] == 0) continue;
      r.coeff_[i * static_cast<std::size_t>(qpow_l)] = W.frob_q(coeff_[i], l);
    }
  }
  r.canonicalize();
  return r;
}

RamifiedSeries RamifiedSeries::pow(std::int64_t k) const {
  if (k < 0) return inv().pow(-k);
  RamifiedSeries acc = monomial(ctx_, 1, 0);
  RamifiedSeries base = *this;
  std::uint64_t e = static_cast<std::uint64_t>(k);
  while (e) {
    if (e & 1) acc = acc.mul(base);
    e >>= 1;
    if (e) base = base.mul(base);
  }
  return acc;
}

RamifiedSeries RamifiedSeries::scalar_mul(FqElem s) const {
  if (s == 0) return zero(ctx_, prec_);
  if (s == 1) return *this;
  RamifiedSeries r = *this;
  const Fq& W = ctx_->field.work;
  for (auto& c : r.coeff_) c = W.mul(s, c);
  return r;
}

RamifiedSeries RamifiedSeries::shift(std::int64_t k) const {
  RamifiedSeries r = *this;
  r.v_ += k;
  if (!r.exact()) r.prec_ += k;
  r.canonicalize();
  return r;
}

RamifiedSeries RamifiedSeries::truncate(std::int64_t new_prec) const {
  if (new_prec >= prec_) return *this;
  RamifiedSeries r = *this;
  r.prec_ = new_prec;
  if (r.coeff_.empty()) r.v_ = new_prec;
  r.canonicalize();
  return r;
}

std::string RamifiedSeries::to_string() const {
  if (coeff_.empty()) {
    if (exact()) return "0";
    return "O(pi^" + std::to_string(prec_) + ")";
  }
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeff_.size(); ++i) {
    if (coeff_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    const std::int64_t e = v_ + static_cast<std::int64_t>(i);
    if (coeff_[i] != 1 || e == 0) os << coeff_[i];
    if (e != 0) {
      if (coeff_[i] != 1) os << "*";
      os << "pi^" << e;
    }
  }
  if (!exact()) os << " + O(pi^" << prec_ << ")";
  return os.str();
}

std::int64_t discrepancy_val(const RamifiedSeries& a, const RamifiedSeries& b) {
  return a.sub(b).val_lb();
}

RamifiedSeries rebase(const Ctx& target, const RamifiedSeries& x) {
  const Ctx& src = x.ctx();
  if (!target || !src) fail(ErrorCode::ContextMismatch, "missing context");
  if (!target->field.work.same(src->field.work))
    fail(ErrorCode::ContextMismatch, "rebase across different fields");
  if (target->w % src->w != 0)
    fail(ErrorCode::RamificationNotDivisible,
         "rebase target w must be a multiple of the source w");
  const std::int64_t m = target->w / src->w;
  std::vector<FqElem> out;
  if (!x.coeff().empty()) {
    out.assign(static_cast<std::size_t>(
                   (static_cast<std::int64_t>(x.coeff().size()) - 1) * m + 1),
               0);
    for (std::size_t i = 0; i < x.coeff().size(); ++i)
      out[i * static_cast<std::size_t>(m)] = x.coeff()[i];
  }
  const std::int64_t prec =
      x.exact() ? kExactPrec : x.prec() * m;
  return RamifiedSeries::from_coeffs(target, x.leading_exp() * m,
                                     std::move(out), prec);
}

}  // namespace dmf
