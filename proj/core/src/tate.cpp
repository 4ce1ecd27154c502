#include "dmf/tate.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace dmf {

namespace {

// leading coefficients that are certainly (exactly) zero shift the unknown
// region of a product outward
std::size_t certain_tval(const std::vector<RamifiedSeries>& c) {
  std::size_t k = 0;
  while (k < c.size() && c[k].exact() && c[k].is_zero_to_prec()) ++k;
  return k;
}

}  // namespace

void TateSeries::canonicalize() {
  if (!truncated_) {
    while (!c_.empty() && c_.back().exact() && c_.back().is_zero_to_prec())
      c_.pop_back();
  }
}

TateSeries TateSeries::zero(Ctx ctx) {
  TateSeries r;
  r.ctx_ = std::move(ctx);
  return r;
}

TateSeries TateSeries::zero_mod(Ctx ctx, std::size_t m) {
  TateSeries r;
  r.ctx_ = ctx;
  r.truncated_ = true;
  r.c_.assign(m, RamifiedSeries::zero(ctx));
  return r;
}

TateSeries TateSeries::constant(RamifiedSeries c) {
  TateSeries r;
  r.ctx_ = c.ctx();
  r.c_ = {std::move(c)};
  r.canonicalize();
  return r;
}

TateSeries TateSeries::t_power(Ctx ctx, std::size_t k) {
  TateSeries r;
  r.ctx_ = ctx;
  r.c_.assign(k + 1, RamifiedSeries::zero(ctx));
  r.c_.back() = RamifiedSeries::monomial(ctx, 1, 0);
  return r;
}

TateSeries TateSeries::from_coeffs(Ctx ctx, std::vector<RamifiedSeries> c,
                                   bool truncated) {
  TateSeries r;
  r.ctx_ = std::move(ctx);
  r.c_ = std::move(c);
  r.truncated_ = truncated;
  r.canonicalize();
  return r;
}

TateSeries TateSeries::apoly_in_t(Ctx ctx, const APoly& a) {
  std::vector<RamifiedSeries> c;
  c.reserve(a.coeff.size());
  for (FqElem x : a.coeff)
    c.push_back(RamifiedSeries::monomial(ctx, ctx->field.lift(x), 0));
  return from_coeffs(std::move(ctx), std::move(c), false);
}

std::size_t TateSeries::t_degree() const {
  if (truncated_)
    fail(ErrorCode::Internal, "degree of a t-truncated value is undefined");
  return c_.empty() ? 0 : c_.size() - 1;
}

RamifiedSeries TateSeries::coeff(std::size_t j) const {
  if (j < c_.size()) return c_[j];
  if (truncated_)
    fail(ErrorCode::Internal,
         "coefficient " + std::to_string(j) + " lies beyond the known window");
  return RamifiedSeries::zero(ctx_);
}

bool TateSeries::is_zero() const {
  for (const auto& x : c_)
    if (!x.is_zero_to_prec()) return false;
  return true;
}

TateSeries TateSeries::neg() const {
  TateSeries r = *this;
  for (auto& x : r.c_) x = x.neg();
  return r;
}

TateSeries TateSeries::add(const TateSeries& o) const {
  require_same_ctx(ctx_, o.ctx_);
  const bool tr = truncated_ || o.truncated_;
  std::size_t n;
  if (!tr) {
    n = std::max(c_.size(), o.c_.size());
  } else {
    n = std::numeric_limits<std::size_t>::max();
    if (truncated_) n = std::min(n, c_.size());
    if (o.truncated_) n = std::min(n, o.c_.size());
  }
  std::vector<RamifiedSeries> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    RamifiedSeries a =
        j < c_.size() ? c_[j] : RamifiedSeries::zero(ctx_);
    RamifiedSeries b =
        j < o.c_.size() ? o.c_[j] : RamifiedSeries::zero(ctx_);
    out.push_back(a.add(b));
  }
  return from_coeffs(ctx_, std::move(out), tr);
}

TateSeries TateSeries::sub(const TateSeries& o) const { return add(o.neg()); }

TateSeries TateSeries::mul(const TateSeries& o) const {
  require_same_ctx(ctx_, o.ctx_);
  // an exact zero polynomial annihilates even unknown coefficients
  if ((!truncated_ && c_.empty()) || (!o.truncated_ && o.c_.empty()))
    return zero(ctx_);
  const bool tr = truncated_ || o.truncated_;
  std::size_t n;
  if (!tr) {
    n = c_.size() + o.c_.size() - 1;
  } else {
    n = std::numeric_limits<std::size_t>::max();
    if (truncated_) n = std::min(n, c_.size() + certain_tval(o.c_));
    if (o.truncated_) n = std::min(n, o.c_.size() + certain_tval(c_));
  }
  std::vector<RamifiedSeries> out(n, RamifiedSeries::zero(ctx_));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].exact() && c_[i].is_zero_to_prec()) continue;
    for (std::size_t j = 0; j < o.c_.size() && i + j < n; ++j)
      out[i + j] = out[i + j].add(c_[i].mul(o.c_[j]));
  }
  return from_coeffs(ctx_, std::move(out), tr);
}

TateSeries TateSeries::scalar_mul(const RamifiedSeries& s) const {
  TateSeries r = *this;
  for (auto& x : r.c_) x = x.mul(s);
  r.canonicalize();
  return r;
}

TateSeries TateSeries::mul_t(std::size_t k) const {
  TateSeries r = *this;
  r.c_.insert(r.c_.begin(), k, RamifiedSeries::zero(ctx_));
  return r;
}

TateSeries TateSeries::twist(std::uint32_t l) const {
  TateSeries r = *this;
  for (auto& x : r.c_) x = x.qpow(l);
  return r;
}

TateSeries TateSeries::inv(std::size_t len) const {
  if (c_.empty() || c_[0].is_zero_to_prec())
    fail(ErrorCode::InversionOfZero,
         "Tate reciprocal needs a unit constant term");
  if (!truncated_ && c_.size() == 1) return constant(c_[0].inv());
  std::size_t n = len;
  if (truncated_) n = std::min(n, c_.size());
  if (n == 0) fail(ErrorCode::ConfigInvalid, "empty reciprocal window");
  const RamifiedSeries inv0 = c_[0].inv();
  std::vector<RamifiedSeries> b;
  b.reserve(n);
  b.push_back(inv0);
  for (std::size_t k = 1; k < n; ++k) {
    RamifiedSeries s = RamifiedSeries::zero(ctx_);
    const std::size_t imax = std::min(c_.size() - 1, k);
    for (std::size_t i = 1; i <= imax; ++i) s = s.add(c_[i].mul(b[k - i]));
    b.push_back(inv0.mul(s).neg());
  }
  return from_coeffs(ctx_, std::move(b), true);
}

TateSeries TateSeries::truncate_t(std::size_t m) const {
  TateSeries r = *this;
  r.truncated_ = true;
  if (r.c_.size() > m) {
    r.c_.resize(m, RamifiedSeries::zero(ctx_));
  } else if (!truncated_) {
    r.c_.resize(m, RamifiedSeries::zero(ctx_));
  }  // a truncated value cannot be re-extended
  return r;
}

TateSeries TateSeries::truncate_prec(std::int64_t p) const {
  TateSeries r = *this;
  for (auto& x : r.c_) x = x.truncate(p);
  r.canonicalize();
  return r;
}

RamifiedSeries TateSeries::eval(const RamifiedSeries& x) const {
  if (truncated_)
    fail(ErrorCode::Internal,
         "substitution into a t-truncated value is not defined");
  if (c_.empty()) return RamifiedSeries::zero(ctx_);
  RamifiedSeries acc = c_.back();
  for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc.mul(x).add(c_[i]);
  return acc;
}

std::int64_t TateSeries::discrepancy(const TateSeries& o) const {
  require_same_ctx(ctx_, o.ctx_);
  std::size_t n;
  if (truncated_ || o.truncated_) {
    n = std::numeric_limits<std::size_t>::max();
    if (truncated_) n = std::min(n, c_.size());
    if (o.truncated_) n = std::min(n, o.c_.size());
  } else {
    n = std::max(c_.size(), o.c_.size());
  }
  std::int64_t d = kExactPrec;
  for (std::size_t j = 0; j < n; ++j) {
    RamifiedSeries a = j < c_.size() ? c_[j] : RamifiedSeries::zero(ctx_);
    RamifiedSeries b = j < o.c_.size() ? o.c_[j] : RamifiedSeries::zero(ctx_);
    d = std::min(d, discrepancy_val(a, b));
  }
  return d;
}

bool TateSeries::agrees_with(const TateSeries& o) const {
  std::size_t n;
  if (truncated_ || o.truncated_) {
    n = std::numeric_limits<std::size_t>::max();
    if (truncated_) n = std::min(n, c_.size());
    if (o.truncated_) n = std::min(n, o.c_.size());
  } else {
    n = std::max(c_.size(), o.c_.size());
  }
  for (std::size_t j = 0; j < n; ++j) {
    RamifiedSeries a = j < c_.size() ? c_[j] : RamifiedSeries::zero(ctx_);
    RamifiedSeries b = j < o.c_.size() ? o.c_[j] : RamifiedSeries::zero(ctx_);
    if (!a.agrees_with(b)) return false;
  }
  return true;
}

std::string TateSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (c_[j].exact() && c_[j].is_zero_to_prec()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c_[j].to_string() << ")";
    if (j == 1) os << "*t";
    if (j > 1) os << "*t^" << j;
  }
  if (first) os << "0";
  if (truncated_) os << " + O(t^" << c_.size() << ")";
  return os.str();
}

// --------------------------------------------------------------------------

TateSeries tate_mat_det(const TateMat& m) {
  const std::size_t r = m.size();
  if (r == 0) fail(ErrorCode::Internal, "determinant of an empty matrix");
  for (const auto& row : m)
    if (row.size() != r) fail(ErrorCode::Internal, "non-square matrix");
  if (r == 1) return m[0][0];
  TateSeries acc = TateSeries::zero(m[0][0].ctx());
  for (std::size_t j = 0; j < r; ++j) {
    TateSeries term = m[0][j].mul(tate_mat_det(tate_mat_submatrix(m, 0, j)));
    acc = (j % 2 == 0) ? acc.add(term) : acc.sub(term);
  }
  return acc;
}

TateMat tate_mat_mul(const TateMat& a, const TateMat& b) {
  const std::size_t r = a.size();
  if (r == 0 || b.size() != a[0].size())
    fail(ErrorCode::Internal, "matrix product shape mismatch");
  const std::size_t k = b.size();
  const std::size_t c = b[0].size();
  TateMat out(r);
  for (std::size_t i = 0; i < r; ++i) {
    out[i].reserve(c);
    for (std::size_t j = 0; j < c; ++j) {
      TateSeries acc = a[i][0].mul(b[0][j]);
      for (std::size_t l = 1; l < k; ++l) acc = acc.add(a[i][l].mul(b[l][j]));
      out[i].push_back(std::move(acc));
    }
  }
  return out;
}

TateMat tate_mat_submatrix(const TateMat& m, std::size_t i, std::size_t j) {
  TateMat out;
  out.reserve(m.size() - 1);
  for (std::size_t a = 0; a < m.size(); ++a) {
    if (a == i) continue;
    std::vector<TateSeries> row;
    row.reserve(m.size() - 1);
    for (std::size_t b = 0; b < m[a].size(); ++b) {
      if (b == j) continue;
      row.push_back(m[a][b]);
    }
    out.push_back(std::move(row));
  }
  return out;
}

// --------------------------------------------------------------------------

namespace {

// (1 - t/theta^{q^i})^{-1} = sum_j theta^{-j q^i} t^j, modulo t^t_len
TateSeries omega_factor(const Ctx& ctx, std::int64_t q_i, std::size_t t_len) {
  std::vector<RamifiedSeries> c;
  c.reserve(t_len);
  for (std::size_t j = 0; j < t_len; ++j)
    c.push_back(RamifiedSeries::theta_pow(
        ctx, -static_cast<std::int64_t>(j) * q_i));
  return TateSeries::from_coeffs(ctx, std::move(c), true);
}

}  // namespace

TateSeries omega_series(const Ctx& ctx, std::size_t t_len,
                        StabilizationCert* cert) {
  if (t_len == 0)
    fail(ErrorCode::ConfigInvalid, "need at least one t-coefficient");
  const std::int64_t q = ctx->field.base.q();
  const std::int64_t target = ctx->cap - ctx->root_exp();

  // past factors with w q^i >= target the product moves below the target
  std::int64_t i0 = 1, q_pow = q;
  while (ctx->w * q_pow < target && i0 < 60) {
    q_pow *= q;
    ++i0;
  }

  TateSeries prod = omega_factor(ctx, 1, t_len);
  std::int64_t q_i = q;
  for (std::int64_t i = 1; i < i0; ++i) {
    prod = prod.mul(omega_factor(ctx, q_i, t_len));
    q_i *= q;
  }
  for (std::int64_t attempts = 0; attempts < 8; ++attempts) {
    TateSeries next = prod.mul(omega_factor(ctx, q_i, t_len));
    const std::int64_t d = prod.discrepancy(next);
    if (d >= target) {
      if (cert) *cert = {i0 + attempts + 1, target, d};
      return next.scalar_mul(RamifiedSeries::negtheta_root(ctx))
          .truncate_prec(ctx->cap);
    }
    prod = next;
    q_i *= q;
  }
  fail(ErrorCode::NoStabilization,
       "omega product did not settle below the working precision");
}

RamifiedSeries pi_tilde(const Ctx& ctx, StabilizationCert* cert) {
  const std::int64_t q = ctx->field.base.q();
  const RamifiedSeries one = RamifiedSeries::monomial(ctx, 1, 0);
  // the unit prefactor theta*root has valuation wq/(q-1), which it costs
  // from the working precision at the very end
  const std::int64_t target = ctx->cap - q * ctx->root_exp();

  auto factor = [&](std::int64_t q_i) {
    return one.sub(RamifiedSeries::theta_pow(ctx, 1 - q_i))
        .truncate(target)
        .inv();
  };

  std::int64_t i0 = 1, q_pow = q;
  while (ctx->w * (q_pow - 1) < target && i0 < 60) {
    q_pow *= q;
    ++i0;
  }

  RamifiedSeries prod = one.truncate(target);
  std::int64_t q_i = q;
  for (std::int64_t i = 1; i <= i0; ++i) {
    prod = prod.mul(factor(q_i));
    q_i *= q;
  }
  for (std::int64_t attempts = 0; attempts < 8; ++attempts) {
    RamifiedSeries next = prod.mul(factor(q_i));
    const std::int64_t d = discrepancy_val(prod, next);
    if (d >= target) {
      if (cert) *cert = {i0 + attempts + 1, target, d};
      // prefactor theta * root, not root^q: the two differ by the sign of
      // theta, and only the former makes -residue(omega at t = theta) equal
      // to the period itself
      const RamifiedSeries pre =
          RamifiedSeries::theta_pow(ctx, 1).mul(RamifiedSeries::negtheta_root(ctx));
      return pre.mul(next).truncate(ctx->cap);
    }
    prod = next;
    q_i *= q;
  }
  fail(ErrorCode::NoStabilization,
       "period product did not settle below the working precision");
}

}  // namespace dmf
