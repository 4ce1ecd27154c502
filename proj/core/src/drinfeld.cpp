#include "dmf/drinfeld.hpp"

#include <algorithm>

namespace dmf {

namespace {

RamifiedSeries coeff_or_zero(const LinearPoly& p, std::size_t n) {
  if (n < p.a.size()) return p.a[n];
  // a Ctx is recoverable from any stored coefficient
  if (p.a.empty()) fail(ErrorCode::Internal, "empty linear polynomial");
  return RamifiedSeries::zero(p.a.front().ctx());
}

}  // namespace

RamifiedSeries LinearPoly::eval(const RamifiedSeries& x) const {
  if (a.empty()) fail(ErrorCode::Internal, "empty linear polynomial");
  RamifiedSeries acc = RamifiedSeries::zero(x.ctx());
  RamifiedSeries xq = x;  // x^{q^n}, advanced one Frobenius step at a time
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (n > 0) xq = xq.qpow(1);
    if (a[n].exact() && a[n].is_zero_to_prec()) continue;
    acc = acc.add(a[n].mul(xq));
  }
  return acc;
}

LinearPoly LinearPoly::truncated(std::size_t n_terms) const {
  LinearPoly r;
  r.a.assign(a.begin(), a.begin() + std::min(n_terms, a.size()));
  return r;
}

std::vector<RamifiedSeries> standard_point(const Ctx& ctx, std::uint32_t r,
                                           std::int64_t M) {
  if (r == 0) fail(ErrorCode::ConfigInvalid, "rank must be positive");
  if (r >= 2 && ctx->w < static_cast<std::int64_t>(r))
    fail(ErrorCode::ConfigInvalid,
         "the standard point needs w >= r so that the coordinate "
         "valuations are distinct modulo w");
  std::vector<RamifiedSeries> z;
  z.reserve(r);
  for (std::uint32_t i = 1; i <= r; ++i) {
    std::int64_t e = static_cast<std::int64_t>(r - i);
    if (i == 1) e += ctx->w * M;
    z.push_back(RamifiedSeries::monomial(ctx, 1, -e));
  }
  return z;
}

void for_each_lattice_element(
    const Ctx& ctx, const std::vector<RamifiedSeries>& basis, std::int64_t D,
    const std::function<void(const RamifiedSeries&)>& fn) {
  const std::uint64_t q = ctx->field.base.q();
  if (D < 0) {
    fn(RamifiedSeries::zero(ctx));
    return;
  }
  const std::size_t m = basis.size() * static_cast<std::size_t>(D + 1);
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < m; ++k) {
    count *= q;
    if (count > (std::uint64_t(1) << 24))
      fail(ErrorCode::EnumerationBudgetExceeded,
           "lattice truncation enumerates more than 2^24 elements");
  }
  // table[k][a]: the a-th base-field multiple of theta^{k % (D+1)} b_{k/(D+1)}
  std::vector<std::vector<RamifiedSeries>> table(m);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::int64_t deg = 0; deg <= D; ++deg) {
      const std::size_t k = i * static_cast<std::size_t>(D + 1) +
                            static_cast<std::size_t>(deg);
      RamifiedSeries b = basis[i].mul(RamifiedSeries::theta_pow(ctx, deg));
      table[k].reserve(q);
      table[k].push_back(RamifiedSeries::zero(ctx));
      for (FqElem a = 1; a < q; ++a)
        table[k].push_back(b.scalar_mul(ctx->field.lift(a)));
    }
  }
  std::vector<std::size_t> digit(m, 0);
  std::vector<RamifiedSeries> partial(m + 1, RamifiedSeries::zero(ctx));
  fn(partial[0]);
  for (std::uint64_t step = 1; step < count; ++step) {
    std::size_t k = 0;
    while (digit[k] == q - 1) digit[k++] = 0;
    ++digit[k];
    partial[k] = table[k][digit[k]].add(partial[k + 1]);
    for (std::size_t j = k; j-- > 0;) partial[j] = partial[k];
    fn(partial[0]);
  }
}

LinearPoly lattice_exp_naive(const Ctx& ctx,
                             const std::vector<RamifiedSeries>& basis,
                             std::int64_t D) {
  // p(X) = prod_{lambda != 0} (1 - X/lambda), dense in X
  std::vector<RamifiedSeries> p{RamifiedSeries::monomial(ctx, 1, 0)};
  for_each_lattice_element(ctx, basis, D, [&](const RamifiedSeries& lam) {
    if (lam.is_zero_to_prec()) return;
    const RamifiedSeries li = lam.inv();
    std::vector<RamifiedSeries> np(p.size() + 1, RamifiedSeries::zero(ctx));
    for (std::size_t k = 0; k < p.size(); ++k) {
      np[k] = np[k].add(p[k]);
      np[k + 1] = np[k + 1].sub(p[k].mul(li));
    }
    p = std::move(np);
  });
  // e(X) = X p(X) is F_q-linear: only q-power degrees may survive
  LinearPoly e;
  const std::uint64_t q = ctx->field.base.q();
  std::uint64_t next_qpow = 1;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k + 1 == next_qpow) {
      e.a.push_back(p[k]);
      next_qpow *= q;
    } else if (!p[k].is_zero_to_prec()) {
      fail(ErrorCode::Internal,
           "lattice product has a coefficient at a non-q-power degree");
    }
  }
  return e;
}

LatticeExp::LatticeExp(Ctx ctx, std::vector<RamifiedSeries> basis)
    : ctx_(std::move(ctx)), basis_(std::move(basis)) {
  if (basis_.empty()) fail(ErrorCode::ConfigInvalid, "empty lattice basis");
  current_.a = {RamifiedSeries::monomial(ctx_, 1, 0)};
}

void LatticeExp::extend_by(const RamifiedSeries& v) {
  const std::int64_t q = ctx_->field.base.q();
  const RamifiedSeries ev = current_.eval(v);
  const RamifiedSeries dinv = ev.pow(q - 1).inv();
  std::vector<RamifiedSeries> na;
  na.reserve(current_.a.size() + 1);
  for (std::size_t n = 0; n <= current_.a.size(); ++n) {
    RamifiedSeries an = n < current_.a.size() ? current_.a[n]
                                              : RamifiedSeries::zero(ctx_);
    if (n >= 1) an = an.sub(current_.a[n - 1].qpow(1).mul(dinv));
    na.push_back(std::move(an));
  }
  current_.a = std::move(na);
}

const LinearPoly& LatticeExp::exp_of(std::int64_t D) {
  if (D < 0) fail(ErrorCode::ConfigInvalid, "negative truncation depth");
  while (depth_ < D) {
    const std::int64_t d = depth_ + 1;
    for (const auto& b : basis_)
      extend_by(b.mul(RamifiedSeries::theta_pow(ctx_, d)));
    ++depth_;
    by_depth_.push_back(current_);
  }
  return by_depth_[static_cast<std::size_t>(D)];
}

LinearPoly stable_exp(LatticeExp& tower, std::size_t n_keep, std::int64_t goal,
                      std::int64_t max_depth, ExpStabilization* cert) {
  for (std::int64_t D = 1; D <= max_depth; ++D) {
    // deepen first: extending the tower invalidates cached references
    const LinearPoly a1 = tower.exp_of(D);
    const LinearPoly a0 = tower.exp_of(D - 1);
    std::vector<std::int64_t> agree(n_keep + 1, 0);
    std::int64_t worst = kExactPrec;
    for (std::size_t n = 0; n <= n_keep; ++n) {
      agree[n] = discrepancy_val(coeff_or_zero(a0, n), coeff_or_zero(a1, n));
      worst = std::min(worst, agree[n]);
    }
    if (worst >= goal) {
      LinearPoly out;
      out.a.reserve(n_keep + 1);
      // The witnessed agreement is kept in full even past ctx->cap: the
      // depth-D coefficients are exact, and consecutive-depth differences
      // shrink strictly, so the distance to the limit is at most the last
      // observed gap.
      for (std::size_t n = 0; n <= n_keep; ++n)
        out.a.push_back(coeff_or_zero(a1, n).truncate(agree[n]));
      if (cert) *cert = {D, goal, std::move(agree)};
      return out;
    }
  }
  fail(ErrorCode::NotConverged,
       "lattice exponential did not stabilize within the depth budget");
}

ExpLogData module_from_exp(const Ctx& ctx, const LinearPoly& exp_poly,
                           std::size_t n_max) {
  if (exp_poly.a.size() <= n_max)
    fail(ErrorCode::ConfigInvalid,
         "exponential carries too few coefficients for the requested order");
  ExpLogData out;
  out.exp = exp_poly;
  const RamifiedSeries th = RamifiedSeries::theta(ctx);
  out.g.push_back(th);
  for (std::size_t n = 1; n <= n_max; ++n) {
    RamifiedSeries gn = th.qpow(static_cast<std::uint32_t>(n))
                            .sub(th)
                            .mul(exp_poly.a[n]);
    for (std::size_t i = 1; i < n; ++i)
      gn = gn.sub(out.g[i].mul(
          exp_poly.a[n - i].qpow(static_cast<std::uint32_t>(i))));
    out.g.push_back(std::move(gn));
  }
  out.log.a.push_back(RamifiedSeries::monomial(ctx, 1, 0));
  for (std::size_t n = 1; n <= n_max; ++n) {
    RamifiedSeries bn = RamifiedSeries::zero(ctx);
    for (std::size_t i = 0; i < n; ++i)
      bn = bn.sub(out.log.a[i].mul(
          exp_poly.a[n - i].qpow(static_cast<std::uint32_t>(i))));
    out.log.a.push_back(std::move(bn));
  }
  return out;
}

CarlitzData carlitz_data(const Ctx& ctx, std::size_t n_max) {
  CarlitzData out;
  const RamifiedSeries one = RamifiedSeries::monomial(ctx, 1, 0);
  const RamifiedSeries th = RamifiedSeries::theta(ctx);
  out.d.push_back(one);
  out.l.push_back(one);
  out.exp.a.push_back(one);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const RamifiedSeries tq =
        th.qpow(static_cast<std::uint32_t>(n)).sub(th);
    out.d.push_back(tq.mul(out.d.back().qpow(1)));
    out.l.push_back(tq.mul(out.l.back()));
    out.exp.a.push_back(out.d.back().inv());
  }
  // the logarithm by generic inversion of the linear series
  out.log.a.push_back(one);
  for (std::size_t n = 1; n <= n_max; ++n) {
    RamifiedSeries bn = RamifiedSeries::zero(ctx);
    for (std::size_t i = 0; i < n; ++i)
      bn = bn.sub(out.log.a[i].mul(
          out.exp.a[n - i].qpow(static_cast<std::uint32_t>(i))));
    out.log.a.push_back(std::move(bn));
  }
  return out;
}

// --------------------------------------------------------------------------

AGF AGF::build(const LinearPoly& exp_poly, const RamifiedSeries& z,
               std::int64_t tail_goal) {
  const Ctx& ctx = z.ctx();
  const std::int64_t w = ctx->w;
  const std::int64_t q = ctx->field.base.q();
  AGF out;
  out.ctx_ = ctx;
  RamifiedSeries zq = z;  // z^{q^n}
  std::int64_t q_n = 1;
  std::int64_t prev_tail = -(std::int64_t(1) << 62);
  std::size_t rising = 0;  // consecutive strict tail increases seen so far
  for (std::size_t n = 0; n < exp_poly.a.size(); ++n) {
    if (n > 0) {
      zq = zq.qpow(1);
      q_n *= q;
    }
    out.c_.push_back(exp_poly.a[n].mul(zq));
    const std::int64_t tail = out.c_.back().val_lb() >= kExactPrec
                                  ? kExactPrec
                                  : out.c_.back().val_lb() + w * q_n;
    // A large argument pushes the early terms down before the Frobenius
    // growth of the exponential coefficients takes over, so the tail bound
    // may dip first; certify only once it has been strictly climbing for
    // two steps and has cleared the goal.
    rising = (tail > prev_tail || tail >= kExactPrec) ? rising + 1 : 0;
    prev_tail = tail;
    if (rising >= 2 && tail >= tail_goal) return out;
  }
  if (rising == 0)
    fail(ErrorCode::TailNotDecaying,
         "term bounds of the generating function fail to grow");
  fail(ErrorCode::NotConverged,
       "exponential carries too few coefficients to certify the tail");
}

AGF AGF::from_terms(Ctx ctx, std::vector<RamifiedSeries> c) {
  AGF out;
  out.ctx_ = std::move(ctx);
  out.c_ = std::move(c);
  out.finite_ = true;  // the listed terms are the whole function
  if (out.c_.empty())
    fail(ErrorCode::ConfigInvalid, "generating function needs a term");
  return out;
}

AGF AGF::neg() const {
  AGF out = *this;
  for (auto& x : out.c_) x = x.neg();
  return out;
}

AGF AGF::add(const AGF& o) const {
  require_same_ctx(ctx_, o.ctx_);
  AGF out;
  out.ctx_ = ctx_;
  out.finite_ = finite_ && o.finite_;
  const std::size_t n = std::max(c_.size(), o.c_.size());
  out.c_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RamifiedSeries a = i < c_.size() ? c_[i] : RamifiedSeries::zero(ctx_);
    RamifiedSeries b = i < o.c_.size() ? o.c_[i] : RamifiedSeries::zero(ctx_);
    out.c_.push_back(a.add(b));
  }
  return out;
}

AGF AGF::sub(const AGF& o) const { return add(o.neg()); }

AGF AGF::scalar_mul(const RamifiedSeries& s) const {
  AGF out = *this;
  for (auto& x : out.c_) x = x.mul(s);
  return out;
}

AGF AGF::twist(std::uint32_t l) const {
  AGF out;
  out.ctx_ = ctx_;
  out.finite_ = finite_;
  out.c_.assign(l, RamifiedSeries::zero(ctx_));
  for (const auto& x : c_) out.c_.push_back(x.qpow(l));
  return out;
}

RamifiedSeries AGF::residue_at(std::size_t n) const {
  if (n >= c_.size())
    fail(ErrorCode::Internal, "residue requested beyond the stored terms");
  return c_[n].neg();
}

std::int64_t AGF::tail_bound() const {
  if (finite_) return kExactPrec;
  const std::size_t last = c_.size() - 1;
  std::int64_t q_n = 1;
  for (std::size_t i = 0; i < last; ++i) q_n *= ctx_->field.base.q();
  const std::int64_t v = c_.back().val_lb();
  return v >= kExactPrec ? kExactPrec : v + ctx_->w * q_n;
}

TateSeries AGF::to_tate(std::size_t t_len) const {
  const std::int64_t q = ctx_->field.base.q();
  const std::int64_t tb = tail_bound();
  std::int64_t q_last1 = 1;  // q^{last+1}
  for (std::size_t i = 0; i < c_.size(); ++i) q_last1 *= q;
  std::vector<RamifiedSeries> out;
  out.reserve(t_len);
  for (std::size_t j = 0; j < t_len; ++j) {
    RamifiedSeries acc = RamifiedSeries::zero(ctx_);
    std::int64_t q_n = 1;
    for (std::size_t n = 0; n < c_.size(); ++n) {
      if (n > 0) q_n *= q;
      // 1/(theta^{q^n} - t) = sum_j theta^{-q^n (j+1)} t^j
      acc = acc.add(c_[n].mul(RamifiedSeries::theta_pow(
          ctx_, -q_n * static_cast<std::int64_t>(j + 1))));
    }
    std::int64_t prec = acc.prec();
    if (tb < kExactPrec)
      prec = std::min(prec,
                      tb + ctx_->w * q_last1 * static_cast<std::int64_t>(j));
    out.push_back(acc.truncate(prec));
  }
  return TateSeries::from_coeffs(ctx_, std::move(out), true);
}

RamifiedSeries AGF::eval(const RamifiedSeries& x) const {
  const RamifiedSeries th = RamifiedSeries::theta(ctx_);
  RamifiedSeries acc = RamifiedSeries::zero(ctx_);
  for (std::size_t n = 0; n < c_.size(); ++n) {
    // Twisting leaves exact-zero leading terms whose poles are spurious;
    // only a term that is actually present can collide with x.
    if (c_[n].exact() && c_[n].is_zero_to_prec()) continue;
    const RamifiedSeries den =
        th.qpow(static_cast<std::uint32_t>(n)).sub(x);
    if (den.is_zero_to_prec())
      fail(ErrorCode::PoleHit,
           "evaluation point collides with the pole at index " +
               std::to_string(n));
    acc = acc.add(c_[n].mul(den.inv()));
  }
  const std::int64_t tb = tail_bound();
  if (tb < kExactPrec) acc = acc.truncate(std::min(acc.prec(), tb));
  return acc;
}

std::int64_t agf_functional_discrepancy(const AGF& s,
                                        const std::vector<RamifiedSeries>& g,
                                        const RamifiedSeries& ez,
                                        std::size_t t_len) {
  AGF lhs = s.scalar_mul(g[0]);
  for (std::size_t i = 1; i < g.size(); ++i)
    lhs = lhs.add(s.twist(static_cast<std::uint32_t>(i)).scalar_mul(g[i]));
  TateSeries rhs =
      s.to_tate(t_len).mul_t(1).add(TateSeries::constant(ez));
  return lhs.to_tate(t_len).discrepancy(rhs);
}

std::vector<std::vector<RamifiedSeries>> goss_polys(const Ctx& ctx,
                                                    const LinearPoly& exp_poly,
                                                    std::size_t n_max) {
  if (n_max == 0) fail(ErrorCode::ConfigInvalid, "need n_max >= 1");
  const std::int64_t q = ctx->field.base.q();
  std::vector<std::vector<RamifiedSeries>> G;
  G.reserve(n_max);
  G.push_back({RamifiedSeries::zero(ctx), RamifiedSeries::monomial(ctx, 1, 0)});
  for (std::size_t n = 2; n <= n_max; ++n) {
    // tmp = G_{n-1} + sum_{i >= 1, q^i <= n} alpha_i G_{n - q^i}
    std::vector<RamifiedSeries> tmp = G[n - 2];
    std::int64_t q_i = q;
    for (std::size_t i = 1; q_i <= static_cast<std::int64_t>(n); ++i) {
      const std::size_t idx = n - static_cast<std::size_t>(q_i);
      if (idx >= 1 && i < exp_poly.a.size()) {
        const auto& Gi = G[idx - 1];
        if (tmp.size() < Gi.size())
          tmp.resize(Gi.size(), RamifiedSeries::zero(ctx));
        for (std::size_t k = 0; k < Gi.size(); ++k)
          tmp[k] = tmp[k].add(exp_poly.a[i].mul(Gi[k]));
      }
      q_i *= q;
    }
    std::vector<RamifiedSeries> gn(tmp.size() + 1, RamifiedSeries::zero(ctx));
    for (std::size_t k = 0; k < tmp.size(); ++k) gn[k + 1] = tmp[k];
    G.push_back(std::move(gn));
  }
  return G;
}

RamifiedSeries goss_oracle(const Ctx& ctx,
                           const std::vector<RamifiedSeries>& basis,
                           std::int64_t D, std::int64_t n,
                           const RamifiedSeries& x) {
  if (n < 1) fail(ErrorCode::ConfigInvalid, "need n >= 1");
  RamifiedSeries acc = RamifiedSeries::zero(ctx);
  for_each_lattice_element(ctx, basis, D, [&](const RamifiedSeries& lam) {
    const RamifiedSeries shifted = x.add(lam);
    if (shifted.is_zero_to_prec())
      fail(ErrorCode::PoleHit,
           "evaluation point lies in the space to working precision");
    acc = acc.add(shifted.pow(-n));
  });
  return acc;
}

RamifiedSeries poly_eval(const std::vector<RamifiedSeries>& coeffs,
                         const RamifiedSeries& x) {
  if (coeffs.empty()) fail(ErrorCode::Internal, "empty polynomial");
  RamifiedSeries acc = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;)
    acc = acc.mul(x).add(coeffs[i]);
  return acc;
}

}  // namespace dmf
