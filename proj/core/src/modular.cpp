#include "dmf/modular.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

namespace dmf {

namespace {

constexpr std::uint64_t kDefaultBudget = std::uint64_t(1) << 22;

std::uint64_t sat_pow_u64(std::uint64_t b, std::uint64_t e) {
  const std::uint64_t lim = std::uint64_t(1) << 62;
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (b == 0 || r > lim / b) return lim;
    r *= b;
  }
  return r;
}

std::int64_t q_power(std::int64_t q, std::int64_t n) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < n; ++i) {
    if (r > (std::int64_t(1) << 40))
      fail(ErrorCode::ConfigInvalid, "q-power exponent grows too large");
    r *= q;
  }
  return r;
}

// ---------------------------------------------------------------------------
// The full rank-one lattice A u.  The kernel of the Carlitz exponential
// e_C(x) = sum x^{q^n}/D_n is pi~ A, so A u = (u/pi~)(pi~ A) and
//   e_{A u}(x) = (u/pi~) e_C(pi~ x / u).
// With s = pi~/u this reads 1/e_{A u}(x) = s / e_C(s x); no stabilization
// tower is needed.  Evaluation is adaptive: terms are added until their
// valuations have risen twice in a row past the accumulated window.

class Rank1Lattice {
 public:
  Rank1Lattice(Ctx ctx, const RamifiedSeries& u)
      : ctx_(std::move(ctx)), s_(pi_tilde(ctx_).mul(u.inv())) {
    cd_ = carlitz_data(ctx_, 8);
  }

  RamifiedSeries inv_exp(const RamifiedSeries& x) {
    const RamifiedSeries e = carlitz_eval(x.mul(s_));
    if (e.is_zero_to_prec())
      fail(ErrorCode::PoleHit,
           "argument of the rank-one exponential lies in the lattice to "
           "working precision");
    return e.inv().mul(s_);
  }

  // exponential coefficients of A u: alpha_n = s^{q^n - 1} / D_n
  LinearPoly exp_prefix(std::size_t n_terms) {
    while (cd_.exp.a.size() < n_terms) grow();
    LinearPoly out;
    out.a.reserve(n_terms);
    std::int64_t q_n = 1;
    const std::int64_t q = ctx_->field.base.q();
    for (std::size_t n = 0; n < n_terms; ++n) {
      out.a.push_back(n == 0 ? cd_.exp.a[0]
                             : cd_.exp.a[n].mul(s_.pow(q_n - 1)));
      q_n *= q;
    }
    return out;
  }

 private:
  void grow() { cd_ = carlitz_data(ctx_, 2 * cd_.exp.a.size()); }

  RamifiedSeries carlitz_eval(const RamifiedSeries& y) {
    RamifiedSeries acc = RamifiedSeries::zero(ctx_);
    RamifiedSeries yq = y;
    std::int64_t prev = std::numeric_limits<std::int64_t>::min();
    std::size_t rising = 0;
    for (std::size_t n = 0; n < 50; ++n) {
      if (n + 1 >= cd_.exp.a.size()) grow();
      if (n > 0) yq = yq.qpow(1);
      // The result only carries a cap-sized window, so the (exact, widely
      // spread) Frobenius powers of the argument can be clipped first.
      const RamifiedSeries term = cd_.exp.a[n].mul(
          yq.truncate(sat_prec_add(yq.val_lb(), ctx_->cap)));
      acc = acc.add(term);
      const std::int64_t tv = term.val_lb();
      rising = (tv > prev || tv >= kExactPrec) ? rising + 1 : 0;
      prev = tv;
      if (rising >= 2 && tv >= acc.prec()) return acc;
    }
    fail(ErrorCode::NotConverged,
         "rank-one exponential refuses to converge at this argument");
  }

  Ctx ctx_;
  RamifiedSeries s_;
  CarlitzData cd_;
};

// ---------------------------------------------------------------------------
// Shell-by-shell enumeration of tuples of polynomials.  Shell d holds the
// tuples whose maximal coordinate degree is exactly d (represented through
// base-q digit indices: coordinate index in [q^d, q^{d+1}) puts the tuple in
// shell d).  `add` folds one tuple into the caller's accumulator and returns
// a valuation lower bound for the contribution; the enumeration stops once
// the per-shell bounds have strictly risen twice in a row and cleared the
// goal at depth >= d_init.

OuterTailCert shell_sum(
    const Fq& F, std::uint32_t n_coords, bool include_zero,
    std::int64_t d_init, std::int64_t goal, std::uint64_t budget,
    const std::function<std::int64_t(const std::vector<APoly>&)>& add) {
  if (n_coords == 0)
    fail(ErrorCode::Internal, "shell enumeration needs at least one tuple slot");
  OuterTailCert cert;
  cert.goal = goal;
  std::int64_t prev = std::numeric_limits<std::int64_t>::min();
  std::size_t rising = 0;
  for (std::int64_t d = 0; d <= 60; ++d) {
    const std::uint64_t per = sat_pow_u64(F.q(), static_cast<std::uint64_t>(d + 1));
    const std::uint64_t lo = (d == 0) ? 0 : sat_pow_u64(F.q(), static_cast<std::uint64_t>(d));
    if (sat_pow_u64(per, n_coords) > budget)
      fail(ErrorCode::EnumerationBudgetExceeded,
           "outer tuple enumeration exceeds the configured budget");
    std::int64_t shell_min = kExactPrec;
    std::vector<std::uint64_t> idx(n_coords, 0);
    std::vector<APoly> tup(n_coords);
    while (true) {
      std::uint64_t mx = 0;
      for (std::uint64_t v : idx) mx = std::max(mx, v);
      const bool in_shell = (d == 0) || mx >= lo;
      if (in_shell && (mx != 0 || (include_zero && d == 0))) {
        for (std::uint32_t j = 0; j < n_coords; ++j)
          tup[j] = apoly_from_index(F, idx[j], static_cast<std::uint32_t>(d));
        ++cert.tuples;
        shell_min = std::min(shell_min, add(tup));
      }
      std::size_t pos = 0;
      while (pos < n_coords && ++idx[pos] == per) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos == n_coords) break;
    }
    rising = (shell_min > prev || shell_min >= kExactPrec) ? rising + 1 : 0;
    prev = shell_min;
    cert.depth = d;
    cert.shell_val = shell_min;
    if (d >= d_init && rising >= 2 && shell_min >= goal) return cert;
  }
  fail(ErrorCode::NoStabilization,
       "outer shells refuse to certify the truncation tail");
}

RamifiedSeries tuple_dot(const Ctx& ctx, const std::vector<APoly>& a,
                         const std::vector<RamifiedSeries>& basis) {
  RamifiedSeries c = RamifiedSeries::zero(ctx);
  for (std::size_t j = 0; j < a.size(); ++j)
    if (!a[j].is_zero())
      c = c.add(RamifiedSeries::apoly_at_theta(ctx, a[j]).mul(basis[j]));
  return c;
}

// one collapse pass of the Eisenstein matrix: inner coordinate m (1-based),
// numerator coordinates `is`; fills acc[j][ii][d'] with the coefficient of
// t^{d'} of E^{[is[ii]]}_{q^j} restricted to the enumerated outer tuples
OuterTailCert eis_pass(const OmegaPoint& z, std::uint32_t m,
                       const std::vector<std::uint32_t>& is, std::size_t T,
                       std::int64_t goal, std::int64_t d_init,
                       std::uint64_t budget,
                       std::vector<std::vector<std::vector<RamifiedSeries>>>& acc) {
  const Ctx& ctx = z.ctx();
  const std::uint32_t r = z.r;
  Rank1Lattice lat(ctx, z.z[m - 1]);
  std::vector<RamifiedSeries> basis;
  std::vector<std::size_t> slot_of(is.size());
  std::size_t slot = 0;
  for (std::uint32_t j = 1; j <= r; ++j) {
    if (j == m) continue;
    for (std::size_t ii = 0; ii < is.size(); ++ii)
      if (is[ii] == j) slot_of[ii] = slot;
    basis.push_back(z.z[j - 1]);
    ++slot;
  }
  auto add = [&](const std::vector<APoly>& a) -> std::int64_t {
    const RamifiedSeries inv = lat.inv_exp(tuple_dot(ctx, a, basis));
    std::vector<RamifiedSeries> p(r);
    p[0] = inv;
    for (std::uint32_t j = 1; j < r; ++j) p[j] = p[j - 1].qpow(1);
    for (std::size_t ii = 0; ii < is.size(); ++ii) {
      const APoly& ai = a[slot_of[ii]];
      const std::size_t dmax = std::min(ai.coeff.size(), T);
      for (std::size_t dd = 0; dd < dmax; ++dd) {
        if (ai.coeff[dd] == 0) continue;
        const FqElem c = ctx->field.lift(ai.coeff[dd]);
        for (std::uint32_t j = 0; j < r; ++j)
          acc[j][ii][dd] = acc[j][ii][dd].add(p[j].scalar_mul(c));
      }
    }
    return inv.val_lb();
  };
  return shell_sum(ctx->field.base, r - 1, /*include_zero=*/false, d_init,
                   goal, budget, add);
}

TateSeries coeffs_to_tate(const Ctx& ctx, std::vector<RamifiedSeries> c,
                          std::int64_t bound) {
  for (auto& x : c) x = x.truncate(bound);
  return TateSeries::from_coeffs(ctx, std::move(c), /*truncated=*/true);
}

void require_point(const OmegaPoint& z) {
  if (z.r == 0 || z.z.size() != z.r)
    fail(ErrorCode::ConfigInvalid, "malformed period-domain point");
}

std::string exps_to_string(const std::vector<std::int64_t>& e) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
  os << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

OmegaPoint omega_point_standard(const Ctx& ctx,
                                const std::vector<std::int64_t>& exponents) {
  const std::uint32_t r = static_cast<std::uint32_t>(exponents.size());
  if (r == 0) fail(ErrorCode::ConfigInvalid, "a point needs at least rank 1");
  if (exponents.back() != 0)
    fail(ErrorCode::ConfigInvalid, "the last exponent must be 0 (z_r = 1)");
  const std::int64_t w = ctx->w;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      if (((exponents[i] - exponents[j]) % w) == 0)
        fail(ErrorCode::CollidingValuations,
             "coordinate exponents collide modulo the ramification index");
  OmegaPoint out;
  out.r = r;
  out.z.reserve(r);
  for (std::size_t i = 0; i < r; ++i)
    out.z.push_back(RamifiedSeries::monomial(ctx, 1, -exponents[i]));
  out.certificate = OmegaPoint::Certificate::DistinctValuations;
  out.provenance = "standard point, pi-exponents " + exps_to_string(exponents);
  return out;
}

std::pair<OmegaPoint, RamifiedSeries> gl_action(const APolyMat& gamma,
                                                const OmegaPoint& z) {
  require_point(z);
  const Ctx& ctx = z.ctx();
  const std::uint32_t r = z.r;
  if (gamma.size() != r)
    fail(ErrorCode::ConfigInvalid, "matrix rank does not match the point");
  for (const auto& row : gamma)
    if (row.size() != r)
      fail(ErrorCode::ConfigInvalid, "matrix rank does not match the point");
  if (apoly_mat_det(ctx->field.base, gamma).is_zero())
    fail(ErrorCode::SingularMatrix, "the acting matrix is singular");
  auto rowdot = [&](std::size_t i) {
    RamifiedSeries acc = RamifiedSeries::zero(ctx);
    for (std::size_t k = 0; k < r; ++k)
      if (!gamma[i][k].is_zero())
        acc = acc.add(
            RamifiedSeries::apoly_at_theta(ctx, gamma[i][k]).mul(z.z[k]));
    return acc;
  };
  const RamifiedSeries j = rowdot(r - 1);
  if (j.is_zero_to_prec())
    fail(ErrorCode::VanishingJ,
         "the automorphy factor vanishes to working precision");
  const RamifiedSeries jinv = j.inv();
  OmegaPoint out;
  out.r = r;
  out.z.reserve(r);
  for (std::size_t i = 0; i + 1 < r; ++i) out.z.push_back(rowdot(i).mul(jinv));
  out.z.push_back(RamifiedSeries::monomial(ctx, 1, 0));
  bool distinct = true;
  const std::int64_t w = ctx->w;
  for (std::size_t i = 0; i < r && distinct; ++i) {
    if (out.z[i].is_zero_to_prec()) distinct = false;
    for (std::size_t k = i + 1; k < r && distinct; ++k)
      if (!out.z[k].is_zero_to_prec() &&
          ((out.z[i].leading_exp() - out.z[k].leading_exp()) % w) == 0)
        distinct = false;
  }
  out.certificate = distinct ? OmegaPoint::Certificate::DistinctValuations
                             : OmegaPoint::Certificate::MatrixImage;
  out.provenance = "matrix image of: " + z.provenance;
  return {std::move(out), j};
}

APolyMat random_gl(const Fq& F, std::uint32_t r, std::uint64_t seed,
                   std::uint32_t n_factors, std::uint32_t max_deg) {
  std::mt19937_64 rng(seed);
  APolyMat m = apoly_mat_identity(r);
  for (std::uint32_t f = 0; f < n_factors; ++f) {
    if (r >= 2 && rng() % 4 != 0) {
      std::uint32_t i = static_cast<std::uint32_t>(rng() % r);
      std::uint32_t j = static_cast<std::uint32_t>(rng() % (r - 1));
      if (j >= i) ++j;  // j != i
      APoly a;
      const std::uint32_t deg = static_cast<std::uint32_t>(rng() % (max_deg + 1));
      for (std::uint32_t d = 0; d <= deg; ++d)
        a.coeff.push_back(static_cast<FqElem>(rng() % F.size()));
      apoly_trim(a);
      for (std::uint32_t c = 0; c < r; ++c)
        m[i][c] = apoly_add(F, m[i][c], apoly_mul(F, a, m[j][c]));
    } else {
      const std::uint32_t i = static_cast<std::uint32_t>(rng() % r);
      const FqElem u = static_cast<FqElem>(1 + rng() % (F.q() - 1));
      for (std::uint32_t c = 0; c < r; ++c)
        m[i][c] = apoly_scalar_mul(F, u, m[i][c]);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

TateSeries eisenstein_twisted(const OmegaPoint& z, std::int64_t k,
                              std::uint32_t i, std::size_t T,
                              std::int64_t goal, std::int64_t d_init,
                              OuterTailCert* cert) {
  require_point(z);
  const Ctx& ctx = z.ctx();
  const std::uint32_t r = z.r;
  const std::int64_t q = ctx->field.base.q();
  if (k < 1 || i < 1 || i > r || T < 1)
    fail(ErrorCode::ConfigInvalid, "invalid Eisenstein parameters");
  if (((k - 1) % (q - 1)) != 0) {
    // scaling a tuple by F_q^x multiplies the term by c^{1-k}; the orbit sums
    // vanish identically, at every truncation
    if (cert) *cert = {0, kExactPrec, goal, 0};
    return TateSeries::zero(ctx);
  }

  if (r == 1) {
    // no coordinate to collapse over: enumerate monic representatives
    // directly (the F_q^x orbit of each contributes q-1 = -1 times it)
    const Fq& F = ctx->field.base;
    std::vector<RamifiedSeries> acc(T, RamifiedSeries::zero(ctx));
    OuterTailCert oc;
    oc.goal = goal;
    std::int64_t prev = std::numeric_limits<std::int64_t>::min();
    std::size_t rising = 0;
    bool done = false;
    for (std::int64_t d = 0; d <= 60 && !done; ++d) {
      const std::uint64_t count = sat_pow_u64(F.q(), static_cast<std::uint64_t>(d));
      if (count > (std::uint64_t(1) << 22))
        fail(ErrorCode::EnumerationBudgetExceeded,
             "rank-one Eisenstein enumeration exceeds the budget");
      std::int64_t shell_min = kExactPrec;
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        APoly a = apoly_from_index(F, idx, static_cast<std::uint32_t>(d));
        while (a.coeff.size() < static_cast<std::size_t>(d) + 1)
          a.coeff.push_back(0);
        a.coeff[static_cast<std::size_t>(d)] = F.one();  // monic of degree d
        const RamifiedSeries val =
            RamifiedSeries::apoly_at_theta(ctx, a).mul(z.z[0]).pow(-k).neg();
        shell_min = std::min(shell_min, val.val_lb());
        ++oc.tuples;
        const std::size_t dmax = std::min(a.coeff.size(), T);
        for (std::size_t dd = 0; dd < dmax; ++dd)
          if (a.coeff[dd] != 0)
            acc[dd] = acc[dd].add(val.scalar_mul(ctx->field.lift(a.coeff[dd])));
      }
      rising = (shell_min > prev || shell_min >= kExactPrec) ? rising + 1 : 0;
      prev = shell_min;
      oc.depth = d;
      oc.shell_val = shell_min;
      done = d >= d_init && rising >= 2 && shell_min >= goal;
    }
    if (!done)
      fail(ErrorCode::NoStabilization,
           "rank-one Eisenstein shells refuse to certify the tail");
    if (cert) *cert = oc;
    return coeffs_to_tate(ctx, std::move(acc), goal);
  }

  const std::uint32_t m = (i == r) ? 1 : r;
  Rank1Lattice lat(ctx, z.z[m - 1]);
  // Goss data: for k = q^l the polynomial is X^{q^l} and a Frobenius power
  // suffices; otherwise evaluate the recursion's k-th polynomial
  std::uint32_t l = 0;
  std::int64_t p = 1;
  while (p < k) {
    p *= q;
    ++l;
  }
  const bool k_is_q_power = (p == k);
  std::vector<RamifiedSeries> gk;
  if (!k_is_q_power) {
    std::size_t need = 1;
    std::int64_t pp = 1;
    while (pp * q <= k) {
      pp *= q;
      ++need;
    }
    gk = goss_polys(ctx, lat.exp_prefix(need + 1),
                    static_cast<std::size_t>(k))[static_cast<std::size_t>(k) - 1];
  }
  std::vector<RamifiedSeries> basis;
  std::size_t ipos = 0;
  std::size_t slot = 0;
  for (std::uint32_t jj = 1; jj <= r; ++jj) {
    if (jj == m) continue;
    if (jj == i) ipos = slot;
    basis.push_back(z.z[jj - 1]);
    ++slot;
  }
  std::vector<RamifiedSeries> acc(T, RamifiedSeries::zero(ctx));
  auto add = [&](const std::vector<APoly>& a) -> std::int64_t {
    if (a[ipos].is_zero()) return kExactPrec;  // numerator kills the tuple
    const RamifiedSeries inv = lat.inv_exp(tuple_dot(ctx, a, basis));
    const RamifiedSeries g = k_is_q_power ? inv.qpow(l) : poly_eval(gk, inv);
    const std::size_t dmax = std::min(a[ipos].coeff.size(), T);
    for (std::size_t dd = 0; dd < dmax; ++dd)
      if (a[ipos].coeff[dd] != 0)
        acc[dd] = acc[dd].add(g.scalar_mul(ctx->field.lift(a[ipos].coeff[dd])));
    return g.val_lb();
  };
  OuterTailCert oc = shell_sum(ctx->field.base, r - 1, /*include_zero=*/false,
                               d_init, goal, kDefaultBudget, add);
  if (cert) *cert = oc;
  return coeffs_to_tate(ctx, std::move(acc), goal);
}

TateSeries eisenstein_depth_sum(const OmegaPoint& z, std::int64_t k,
                                std::uint32_t i, std::int64_t D,
                                std::size_t T) {
  require_point(z);
  const Ctx& ctx = z.ctx();
  const std::uint32_t r = z.r;
  const std::int64_t q = ctx->field.base.q();
  if (k < 1 || i < 1 || i > r || T < 1 || D < 0)
    fail(ErrorCode::ConfigInvalid, "invalid Eisenstein parameters");
  if (((k - 1) % (q - 1)) != 0) return TateSeries::zero(ctx);
  if (r == 1) {
    // literal box: nonzero a of degree <= D
    std::vector<RamifiedSeries> acc(T, RamifiedSeries::zero(ctx));
    const std::uint64_t count = sat_pow_u64(q, static_cast<std::uint64_t>(D + 1));
    if (count > (std::uint64_t(1) << 22))
      fail(ErrorCode::EnumerationBudgetExceeded, "depth box too large");
    for (std::uint64_t idx = 1; idx < count; ++idx) {
      const APoly a =
          apoly_from_index(ctx->field.base, idx, static_cast<std::uint32_t>(D));
      const RamifiedSeries val =
          RamifiedSeries::apoly_at_theta(ctx, a).mul(z.z[0]).pow(-k);
      const std::size_t dmax = std::min(a.coeff.size(), T);
      for (std::size_t dd = 0; dd < dmax; ++dd)
        if (a.coeff[dd] != 0)
          acc[dd] = acc[dd].add(val.scalar_mul(ctx->field.lift(a.coeff[dd])));
    }
    return TateSeries::from_coeffs(ctx, std::move(acc), /*truncated=*/true);
  }
  // collapse the m coordinate over the finite truncated lattice
  // L = { a z_m : deg a <= D }: summing 1/(c + lambda)^k over lambda in L,
  // including 0, is G_{k,L}(1/e_L(c)) for the Goss polynomials of e_L.
  // Tuples with all other coordinates zero contribute nothing because the
  // numerator coordinate i differs from m.
  const std::uint32_t m = (i == r) ? 1 : r;
  LatticeExp tower(ctx, {z.z[m - 1]});
  const LinearPoly eL = tower.exp_of(D);
  const std::vector<RamifiedSeries> gk =
      goss_polys(ctx, eL, static_cast<std::size_t>(k))[static_cast<std::size_t>(k) - 1];
  std::vector<RamifiedSeries> basis;
  std::size_t ipos = 0;
  std::size_t slot = 0;
  for (std::uint32_t jj = 1; jj <= r; ++jj) {
    if (jj == m) continue;
    if (jj == i) ipos = slot;
    basis.push_back(z.z[jj - 1]);
    ++slot;
  }
  std::vector<RamifiedSeries> acc(T, RamifiedSeries::zero(ctx));
  const std::uint64_t per = sat_pow_u64(q, static_cast<std::uint64_t>(D + 1));
  if (sat_pow_u64(per, r - 1) > (std::uint64_t(1) << 22))
    fail(ErrorCode::EnumerationBudgetExceeded, "depth box too large");
  std::vector<std::uint64_t> idx(r - 1, 0);
  std::vector<APoly> tup(r - 1);
  while (true) {
    std::uint64_t mx = 0;
    for (std::uint64_t v : idx) mx = std::max(mx, v);
    if (mx != 0 && idx[ipos] != 0) {
      for (std::uint32_t jj = 0; jj + 1 < r; ++jj)
        tup[jj] = apoly_from_index(ctx->field.base, idx[jj],
                                   static_cast<std::uint32_t>(D));
      const RamifiedSeries ec = eL.eval(tuple_dot(ctx, tup, basis));
      if (ec.is_zero_to_prec())
        fail(ErrorCode::PoleHit, "truncated-lattice exponential vanished");
      const RamifiedSeries g = poly_eval(gk, ec.inv());
      const std::size_t dmax = std::min(tup[ipos].coeff.size(), T);
      for (std::size_t dd = 0; dd < dmax; ++dd)
        if (tup[ipos].coeff[dd] != 0)
          acc[dd] =
              acc[dd].add(g.scalar_mul(ctx->field.lift(tup[ipos].coeff[dd])));
    }
    std::size_t pos = 0;
    while (pos + 1 < r && ++idx[pos] == per) {
      idx[pos] = 0;
      ++pos;
    }
    if (pos + 1 == r) break;
  }
  return TateSeries::from_coeffs(ctx, std::move(acc), /*truncated=*/true);
}

RamifiedSeries eis_nu(const OmegaPoint& z, const std::vector<FqElem>& nu,
                      std::int64_t goal, std::int64_t d_init,
                      OuterTailCert* cert) {
  require_point(z);
  const Ctx& ctx = z.ctx();
  const std::uint32_t r = z.r;
  if (nu.size() != r)
    fail(ErrorCode::ConfigInvalid, "congruence class has the wrong length");
  bool nonzero = false;
  for (FqElem v : nu) nonzero = nonzero || v != 0;
  if (!nonzero)
    fail(ErrorCode::ConfigInvalid, "congruence class must be nonzero");
  RamifiedSeries o = RamifiedSeries::zero(ctx);
  for (std::size_t j = 0; j < r; ++j)
    if (nu[j] != 0) o = o.add(z.z[j].scalar_mul(ctx->field.lift(nu[j])));
  o = o.mul(RamifiedSeries::theta_pow(ctx, -1));
  Rank1Lattice lat(ctx, z.z[r - 1]);
  if (r == 1) {
    // the congruence class collapses in one stroke: sum over b in A of
    // 1/(o + b) = 1/e_{A}(o)
    if (cert) *cert = {0, kExactPrec, goal, 1};
    return lat.inv_exp(o);
  }
  std::vector<RamifiedSeries> basis(z.z.begin(), z.z.end() - 1);
  RamifiedSeries acc = RamifiedSeries::zero(ctx);
  auto add = [&](const std::vector<APoly>& a) -> std::int64_t {
    const RamifiedSeries v = lat.inv_exp(o.add(tuple_dot(ctx, a, basis)));
    acc = acc.add(v);
    return v.val_lb();
  };
  OuterTailCert oc = shell_sum(ctx->field.base, r - 1, /*include_zero=*/true,
                               d_init, goal, kDefaultBudget, add);
  if (cert) *cert = oc;
  return acc.truncate(goal);
}

ModularValue h_function(const OmegaPoint& z, std::int64_t goal,
                        std::int64_t d_init, OuterTailCert* cert) {
  require_point(z);
  const Ctx& ctx = z.ctx();
  const std::uint32_t r = z.r;
  const std::int64_t q = ctx->field.base.q();
  ModularValue out;
  out.weight = (q_power(q, r) - 1) / (q - 1);
  out.type = 1;
  out.provenance = "h_" + std::to_string(r) + " at " + z.provenance;
  if (r == 1) {
    out.value = RamifiedSeries::monomial(ctx, ctx->field.work.neg(1), 0);
    if (cert) *cert = {0, kExactPrec, goal, 0};
    return out;
  }
  OuterTailCert worst;
  worst.shell_val = kExactPrec;
  worst.goal = goal;
  RamifiedSeries acc = pi_tilde(ctx)
                           .pow((1 - q_power(q, r)) / (q - 1))
                           .mul(RamifiedSeries::negtheta_root(ctx));
  // monic classes: last nonzero entry 1, positions below it free
  for (std::uint32_t L = 1; L <= r; ++L) {
    const std::uint64_t count = sat_pow_u64(q, L - 1);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<FqElem> nu(r, 0);
      std::uint64_t rest = idx;
      for (std::uint32_t j = 0; j + 1 < L; ++j) {
        nu[j] = static_cast<FqElem>(rest % q);
        rest /= q;
      }
      nu[L - 1] = ctx->field.base.one();
      OuterTailCert oc;
      acc = acc.mul(eis_nu(z, nu, goal, d_init, &oc));
      worst.tuples += oc.tuples;
      if (oc.shell_val < worst.shell_val) {
        worst.depth = oc.depth;
        worst.shell_val = oc.shell_val;
      }
    }
  }
  if (acc.is_zero_to_prec())
    fail(ErrorCode::Internal,
         "the h-function vanished to precision; it is nowhere zero");
  out.value = acc;
  if (cert) *cert = worst;
  return out;
}

// ---------------------------------------------------------------------------

ModularData build_matrices(const OmegaPoint& z, std::size_t T,
                           std::int64_t goal, std::size_t n_keep,
                           std::int64_t d_init) {
  require_point(z);
  const Ctx& ctx = z.ctx();
  const std::uint32_t r = z.r;
  const std::int64_t q = ctx->field.base.q();
  const std::int64_t w = ctx->w;
  if (T < 1 || n_keep < r)
    fail(ErrorCode::ConfigInvalid, "matrix build needs T >= 1 and n_keep >= r");

  ModularData md;
  md.z = z;
  md.T = T;
  md.goal = goal;
  md.pi = pi_tilde(ctx);
  md.omega = omega_series(ctx, T, &md.omega_cert);

  // exponential of A^r z: deepen the stabilization until every
  // generating-function term survives the Tate expansion with `goal` digits
  // (the theta^{-q^n (j+1)} factors add w q^n (j+1) to each term valuation,
  // so the j = 0 column is the binding one)
  LatticeExp tower(ctx, z.z);
  std::int64_t depth_budget = 1;
  while (sat_pow_u64(q, static_cast<std::uint64_t>(r) *
                            (static_cast<std::uint64_t>(depth_budget) + 2)) <=
         (std::uint64_t(1) << 24))
    ++depth_budget;
  std::int64_t goal_stab = goal;
  LinearPoly e;
  for (int attempt = 0;; ++attempt) {
    e = stable_exp(tower, n_keep, goal_stab, depth_budget, &md.exp_cert);
    md.s.clear();
    std::int64_t deficit = 0;
    for (std::uint32_t i = 0; i < r; ++i) {
      AGF s = AGF::build(e, z.z[i], goal);
      std::int64_t q_n = 1;
      for (const RamifiedSeries& c : s.terms()) {
        if (c.prec() < kExactPrec)
          deficit = std::max(deficit, goal - (c.prec() + w * q_n));
        q_n *= q;
      }
      md.s.push_back(std::move(s));
    }
    if (deficit <= 0) break;
    if (attempt >= 3)
      fail(ErrorCode::NotConverged,
           "lattice exponential cannot deliver the requested precision");
    goal_stab += deficit + w;
  }
  md.mod = module_from_exp(ctx, e, n_keep);

  md.h = h_function(z, goal, d_init, &md.h_cert).value;

  // the Eisenstein matrix in two collapse passes
  md.E.assign(r, std::vector<TateSeries>(r));
  {
    std::vector<std::uint32_t> is;
    for (std::uint32_t i = 1; i + 1 <= r; ++i)
      if (r >= 2) is.push_back(i);
    std::vector<std::vector<std::vector<RamifiedSeries>>> acc;
    if (r >= 2) {
      acc.assign(r, std::vector<std::vector<RamifiedSeries>>(
                        is.size(),
                        std::vector<RamifiedSeries>(T, RamifiedSeries::zero(ctx))));
      md.eis_cert =
          eis_pass(z, r, is, T, goal, d_init, kDefaultBudget, acc);
      for (std::uint32_t j = 0; j < r; ++j)
        for (std::size_t ii = 0; ii < is.size(); ++ii)
          md.E[j][is[ii] - 1] = coeffs_to_tate(
              ctx, std::move(acc[j][ii]), goal * q_power(q, j));
      // second pass for the last column, collapsing the first coordinate
      std::vector<std::uint32_t> is2{r};
      acc.assign(r, std::vector<std::vector<RamifiedSeries>>(
                        1, std::vector<RamifiedSeries>(T, RamifiedSeries::zero(ctx))));
      OuterTailCert c2 = eis_pass(z, 1, is2, T, goal, d_init, kDefaultBudget, acc);
      if (c2.shell_val < md.eis_cert.shell_val) md.eis_cert = c2;
      for (std::uint32_t j = 0; j < r; ++j)
        md.E[j][r - 1] =
            coeffs_to_tate(ctx, std::move(acc[j][0]), goal * q_power(q, j));
    } else {
      for (std::uint32_t j = 0; j < r; ++j)
        md.E[j][0] = eisenstein_twisted(z, q_power(q, j), 1, T, goal, d_init,
                                        &md.eis_cert);
    }
  }

  // F[i][j] = s_{i+1}^{(j)}
  md.F.assign(r, std::vector<TateSeries>(r));
  for (std::uint32_t i = 0; i < r; ++i)
    for (std::uint32_t j = 0; j < r; ++j)
      md.F[i][j] = (j == 0 ? md.s[i] : md.s[i].twist(j)).to_tate(T);

  // C[i][j] = c_{q^{i-j}-1}^{(j)} below and on the diagonal
  md.C.assign(r, std::vector<TateSeries>(r));
  for (std::uint32_t i = 0; i < r; ++i)
    for (std::uint32_t j = 0; j < r; ++j) {
      if (i < j) {
        md.C[i][j] = TateSeries::zero(ctx);
        continue;
      }
      const std::uint32_t l = i - j;
      std::vector<RamifiedSeries> terms;
      terms.reserve(l + 1);
      for (std::uint32_t n = 0; n <= l; ++n)
        terms.push_back(md.mod.exp.a[n].mul(md.mod.log.a[l - n].qpow(n)));
      const AGF c = AGF::from_terms(ctx, std::move(terms));
      md.C[i][j] = (j == 0 ? c : c.twist(j)).to_tate(T);
    }

  return md;
}

// ---------------------------------------------------------------------------

HSeriesResult H_series(const ModularData& md) {
  const Ctx& ctx = md.z.ctx();
  const std::uint32_t r = md.z.r;
  const std::int64_t q = ctx->field.base.q();
  const std::int64_t k_h = (q_power(q, r) - 1) / (q - 1);
  HSeriesResult out;
  const RamifiedSeries factor = md.pi.pow(k_h).mul(md.h);
  const TateSeries s_tw =
      (r == 1 ? md.s[r - 1] : md.s[r - 1].twist(r - 1)).to_tate(md.T);
  const TateSeries w_tw = (r == 1 ? md.omega : md.omega.twist(r - 1));
  out.closed = s_tw.scalar_mul(factor).div(w_tw, md.T);
  if (r == 1) {
    out.det_route = out.closed;
    out.agreement = kExactPrec;
    return out;
  }
  out.det_route = tate_mat_det(tate_mat_submatrix(md.E, r - 1, r - 1));
  out.agreement = out.closed.discrepancy(out.det_route);
  return out;
}

HAtResult H_at(const ModularData& md, std::int64_t n) {
  const Ctx& ctx = md.z.ctx();
  const std::uint32_t r = md.z.r;
  const std::int64_t q = ctx->field.base.q();
  if (n < r - 1)
    fail(ErrorCode::ConfigInvalid,
         "the special values start at the q^{r-1} pole");
  const std::size_t idx = static_cast<std::size_t>(n - (r - 1));
  if (idx >= md.mod.exp.a.size())
    fail(ErrorCode::DepthTooSmall,
         "module exponential carries too few coefficients for this value");
  const CarlitzData cd =
      carlitz_data(ctx, std::max<std::size_t>(static_cast<std::size_t>(n) + 1, 10));
  const std::int64_t k_h = (q_power(q, r) - 1) / (q - 1);
  const std::int64_t q_n = q_power(q, n);

  HAtResult out;
  out.closed.weight = (q_power(q, r - 1) - 1) / (q - 1) + q_n;
  out.closed.type = 1;
  out.closed.provenance =
      "H_" + std::to_string(r) + "(z, theta^{q^" + std::to_string(n) + "})";
  out.closed.value = md.pi.pow(k_h - q_n)
                         .mul(cd.d[idx].qpow(r - 1))
                         .mul(md.h)
                         .mul(md.mod.exp.a[idx].qpow(r - 1));

  // residue route: both s_r^{(r-1)} and omega^{(r-1)} have a simple pole at
  // t = theta^{q^n}; their ratio there equals H_r / (pi~^{k_h} h_r)
  const AGF s_tw = (r == 1) ? md.s[r - 1] : md.s[r - 1].twist(r - 1);
  const AGF omega_agf = AGF::build(cd.exp, md.pi, md.goal);
  const AGF omega_tw = (r == 1) ? omega_agf : omega_agf.twist(r - 1);
  const RamifiedSeries res_s = s_tw.residue_at(static_cast<std::size_t>(n));
  const RamifiedSeries res_o = omega_tw.residue_at(static_cast<std::size_t>(n));
  out.pole_ratio = md.pi.pow(k_h).mul(md.h).mul(res_s).mul(res_o.inv());
  out.agreement = discrepancy_val(out.closed.value, out.pole_ratio);
  return out;
}

std::vector<TateSeries> vectorial_G(const ModularData& md, std::uint32_t i) {
  const Ctx& ctx = md.z.ctx();
  const std::uint32_t r = md.z.r;
  const std::int64_t q = ctx->field.base.q();
  if (i < 1 || i > r)
    fail(ErrorCode::ConfigInvalid, "vector index out of range");
  const std::int64_t k_h = (q_power(q, r) - 1) / (q - 1);
  const RamifiedSeries factor = md.pi.pow(k_h).mul(md.h);
  const TateSeries w_inv =
      (r == 1 ? md.omega : md.omega.twist(r - 1)).inv(md.T);
  std::vector<TateSeries> out;
  out.reserve(r);
  for (std::uint32_t j = 0; j < r; ++j)
    out.push_back((i == 1 ? md.s[j] : md.s[j].twist(i - 1))
                      .to_tate(md.T)
                      .scalar_mul(factor)
                      .mul(w_inv));
  return out;
}

// ---------------------------------------------------------------------------

ChiData build_chi_data(const OmegaPoint& zt, std::size_t T, std::int64_t goal,
                       std::size_t n_keep, std::int64_t d_init) {
  // the chi apparatus needs exactly the closed-form data of the base point
  ModularData md = build_matrices(zt, T, goal, n_keep, d_init);
  ChiData out;
  out.zt = std::move(md.z);
  out.T = T;
  out.goal = goal;
  out.mod = std::move(md.mod);
  out.exp_cert = std::move(md.exp_cert);
  out.s = std::move(md.s);
  out.omega = std::move(md.omega);
  out.pi = std::move(md.pi);
  out.h = std::move(md.h);
  out.h_cert = md.h_cert;
  return out;
}

TateSeries chi(const ChiData& cd, const RamifiedSeries& z1, std::uint32_t mu) {
  const Ctx& ctx = cd.zt.ctx();
  const std::uint32_t rt = cd.zt.r;  // ambient rank is rt + 1
  const std::int64_t q = ctx->field.base.q();
  if (mu < 1 || mu > rt)
    fail(ErrorCode::ConfigInvalid, "minor column index out of range");
  // the generating-function vector (s(z1), s(zt_1), ..., s(zt_rt)), all with
  // respect to the module of A^{rt} zt
  std::vector<AGF> v;
  v.reserve(rt + 1);
  v.push_back(AGF::build(cd.mod.exp, z1, cd.goal));
  for (const AGF& s : cd.s) v.push_back(s);
  // minor: delete row 1 of the full array (the indeterminates) and column
  // mu+1; the remaining rows are the twists 0..rt-1
  TateMat m(rt, std::vector<TateSeries>(rt));
  for (std::uint32_t l = 0; l < rt; ++l) {
    std::size_t col = 0;
    for (std::uint32_t c = 0; c <= rt; ++c) {
      if (c == mu) continue;
      m[l][col] = (l == 0 ? v[c] : v[c].twist(l)).to_tate(cd.T);
      ++col;
    }
  }
  const std::int64_t k_h = (q_power(q, rt) - 1) / (q - 1);
  TateSeries out = tate_mat_det(m)
                       .scalar_mul(cd.pi.pow(k_h).mul(cd.h))
                       .div(cd.omega, cd.T);
  if (mu % 2 == 0) out = out.neg();  // (-1)^{mu-1}
  return out;
}

// ---------------------------------------------------------------------------

RamifiedSeries uniformizer_u(const OmegaPoint& z, std::int64_t D) {
  require_point(z);
  if (z.r < 2)
    fail(ErrorCode::ConfigInvalid, "the uniformizer needs rank >= 2");
  const Ctx& ctx = z.ctx();
  const RamifiedSeries pi = pi_tilde(ctx);
  std::vector<RamifiedSeries> basis;
  basis.reserve(z.r - 1);
  for (std::size_t i = 1; i < z.r; ++i) basis.push_back(pi.mul(z.z[i]));
  LatticeExp lat(ctx, std::move(basis));
  const RamifiedSeries e = lat.exp_of(D).eval(pi.mul(z.z[0]));
  if (e.is_zero_to_prec())
    fail(ErrorCode::PoleHit, "uniformizer argument hit the truncated lattice");
  return e.inv();
}

RamifiedSeries uniformizer_u_a(const OmegaPoint& z, const APoly& a,
                               std::int64_t D) {
  require_point(z);
  if (z.r < 2)
    fail(ErrorCode::ConfigInvalid, "the uniformizer needs rank >= 2");
  if (a.is_zero())
    fail(ErrorCode::ConfigInvalid, "the scaling polynomial must be nonzero");
  const Ctx& ctx = z.ctx();
  std::vector<RamifiedSeries> basis(z.z.begin() + 1, z.z.end());
  LatticeExp lat(ctx, std::move(basis));
  const RamifiedSeries e =
      lat.exp_of(D).eval(RamifiedSeries::apoly_at_theta(ctx, a).mul(z.z[0]));
  if (e.is_zero_to_prec())
    fail(ErrorCode::PoleHit, "uniformizer argument hit the truncated lattice");
  return e.inv();
}

}  // namespace dmf
