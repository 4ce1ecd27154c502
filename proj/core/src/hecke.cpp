#include "dmf/hecke.hpp"

#include <utility>

namespace dmf {

namespace {

constexpr std::uint64_t kCosetBudget = std::uint64_t(1) << 22;

std::uint64_t sat_pow_u64(std::uint64_t b, std::uint64_t e) {
  const std::uint64_t lim = std::uint64_t(1) << 62;
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (b == 0 || r > lim / b) return lim;
    r *= b;
  }
  return r;
}

APoly apoly_pow(const Fq& F, const APoly& a, std::int64_t e) {
  APoly r = apoly_one();
  for (std::int64_t i = 0; i < e; ++i) r = apoly_mul(F, r, a);
  return r;
}

void validate_prime(const Fq& F, const APoly& p) {
  if (!apoly_is_monic(F, p))
    fail(ErrorCode::NotMonic, "Hecke primes must be monic");
  if (p.degree() < 1 || !apoly_is_irreducible(F, p))
    fail(ErrorCode::NotIrreducible,
         "Hecke primes must be irreducible of positive degree");
}

void validate_rank(std::uint32_t r) {
  if (r < 1 || r > 4)
    fail(ErrorCode::ConfigInvalid, "coset rank must be between 1 and 4");
}

// deg b_i < deg p for every supplied free entry
void validate_shifts(const std::vector<APoly>& b, const APoly& p) {
  for (const APoly& bi : b)
    if (bi.degree() >= p.degree())
      fail(ErrorCode::ConfigInvalid,
           "free coset entries must have degree below deg p");
}

RamifiedSeries lift_at_theta(const Ctx& ctx, const APoly& a) {
  return RamifiedSeries::apoly_at_theta(ctx, a);
}

}  // namespace

std::vector<CosetRep> coset_reps(const Fq& F, const APoly& p, std::uint32_t r) {
  validate_prime(F, p);
  validate_rank(r);
  const std::uint32_t d = static_cast<std::uint32_t>(p.degree());
  const std::uint64_t per = sat_pow_u64(F.q(), d);  // choices per free entry

  std::vector<CosetRep> out;
  for (std::uint32_t ell = 1; ell <= r; ++ell) {
    const std::uint64_t block = sat_pow_u64(per, ell - 1);
    if (block > kCosetBudget)
      fail(ErrorCode::EnumerationBudgetExceeded,
           "too many coset representatives for this prime and rank");
    for (std::uint64_t index = 0; index < block; ++index) {
      CosetRep rep;
      rep.ell = ell;
      rep.column.assign(r, apoly_zero());
      std::uint64_t rest = index;
      for (std::uint32_t i = 0; i + 1 < ell; ++i) {
        rep.column[i] = apoly_from_index(F, rest % per, d - 1);
        rest /= per;
      }
      rep.column[ell - 1] = p;

      rep.matrix.assign(r, std::vector<APoly>(r, apoly_zero()));
      for (std::uint32_t i = 0; i < r; ++i) rep.matrix[i][i] = apoly_one();
      for (std::uint32_t i = 0; i < r; ++i) rep.matrix[i][ell - 1] = rep.column[i];
      out.push_back(std::move(rep));
    }
  }
  return out;
}

RamifiedSeries slash_scalar(const ScalarForm& f, std::int64_t k,
                            const APolyMat& gamma, const OmegaPoint& z) {
  const auto [gz, j] = gl_action(gamma, z);
  return f(gz).mul(j.pow(-k));
}

RamifiedSeries hecke_scalar(const ScalarForm& f, std::int64_t k, const APoly& p,
                            const OmegaPoint& z) {
  const Ctx& ctx = z.ctx();
  const std::vector<CosetRep> reps = coset_reps(ctx->field.base, p, z.r);
  RamifiedSeries acc = RamifiedSeries::zero(ctx);
  for (const CosetRep& rep : reps)
    acc = acc.add(slash_scalar(f, k, rep.matrix, z));
  return acc.mul(lift_at_theta(ctx, p).pow(k));
}

std::vector<TateSeries> slash_vectorial(const VectorForm& P, std::int64_t k,
                                        std::int64_t m, const APolyMat& gamma,
                                        const OmegaPoint& z) {
  const Ctx& ctx = z.ctx();
  const Fq& F = ctx->field.base;
  const auto [gz, j] = gl_action(gamma, z);
  const std::vector<TateSeries> pg = P(gz);
  if (pg.size() != z.r)
    fail(ErrorCode::ConfigInvalid, "vector form has the wrong rank");

  const APoly det = apoly_mat_det(F, gamma);
  APolyMat mat = apoly_mat_adjugate(F, gamma);
  if (m >= 1) {
    const APoly scale = apoly_pow(F, det, m - 1);
    for (auto& row : mat)
      for (APoly& a : row) a = apoly_mul(F, scale, a);
  } else {
    if (det.degree() != 0)
      fail(ErrorCode::NonPolynomialInverse,
           "negative determinant powers need a unit determinant: p(t) is not "
           "invertible in the Tate algebra");
    const std::int64_t qm1 = F.q() - 1;
    std::int64_t e = (m - 1) % qm1;
    if (e < 0) e += qm1;
    const FqElem scale = F.pow(det.coeff[0], e);
    for (auto& row : mat)
      for (APoly& a : row) a = apoly_scalar_mul(F, scale, a);
  }

  const RamifiedSeries jpow = j.pow(-k);
  std::vector<TateSeries> out;
  out.reserve(z.r);
  for (std::uint32_t i = 0; i < z.r; ++i) {
    TateSeries acc = TateSeries::zero(ctx);
    for (std::uint32_t jj = 0; jj < z.r; ++jj)
      acc = acc.add(TateSeries::apoly_in_t(ctx, mat[i][jj]).mul(pg[jj]));
    out.push_back(acc.scalar_mul(jpow));
  }
  return out;
}

std::vector<TateSeries> hecke_vectorial(const VectorForm& P, std::int64_t k,
                                        std::int64_t m, const APoly& p,
                                        const OmegaPoint& z) {
  const Ctx& ctx = z.ctx();
  const std::vector<CosetRep> reps = coset_reps(ctx->field.base, p, z.r);
  std::vector<TateSeries> acc(z.r, TateSeries::zero(ctx));
  for (const CosetRep& rep : reps) {
    const std::vector<TateSeries> term =
        slash_vectorial(P, k, m, rep.matrix, z);
    for (std::uint32_t i = 0; i < z.r; ++i) acc[i] = acc[i].add(term[i]);
  }
  const RamifiedSeries pk = lift_at_theta(ctx, p).pow(k);
  for (TateSeries& c : acc) c = c.scalar_mul(pk);
  return acc;
}

APoly hecke_eigenvalue(const Fq& F, const APoly& p, std::uint32_t r) {
  validate_prime(F, p);
  validate_rank(r);
  std::int64_t exponent = 0;
  std::int64_t qi = 1;
  for (std::uint32_t i = 0; i + 1 < r; ++i) {
    exponent += qi;
    qi *= F.q();
  }
  return apoly_pow(F, p, exponent);
}

HeckeReport hecke_report(std::string op, const Fq& F, const APoly& prime,
                         std::uint32_t rank, std::int64_t weight,
                         std::int64_t m, std::string point,
                         std::int64_t discrepancy, std::int64_t threshold) {
  HeckeReport rep;
  rep.op = std::move(op);
  rep.prime = prime;
  rep.rank = rank;
  rep.weight = weight;
  rep.m = m;
  rep.point = std::move(point);
  rep.eigenvalue = hecke_eigenvalue(F, prime, rank);
  rep.discrepancy = discrepancy;
  rep.threshold = threshold;
  rep.pass = discrepancy >= threshold;
  return rep;
}

std::int64_t sum2_check(const OmegaPoint& z, const APoly& p, std::uint32_t ell,
                        std::int64_t D, const std::vector<APoly>& b) {
  const Ctx& ctx = z.ctx();
  const Fq& F = ctx->field.base;
  validate_prime(F, p);
  if (ell < 2 || ell + 1 > z.r)
    fail(ErrorCode::ConfigInvalid, "the b_1-collapse needs 2 <= l <= r-1");
  if (b.size() + 2 != ell)
    fail(ErrorCode::ConfigInvalid, "need exactly l-2 free entries b_2..b_{l-1}");
  validate_shifts(b, p);

  const RamifiedSeries& zl = z.z[ell - 1];
  const RamifiedSeries ptheta = lift_at_theta(ctx, p);

  std::vector<RamifiedSeries> fine;  // L': the l-column sublattice
  for (std::uint32_t i = 2; i < ell; ++i)
    fine.push_back(z.z[i - 1].add(lift_at_theta(ctx, b[i - 2]).mul(zl)));
  fine.push_back(ptheta.mul(zl));
  for (std::uint32_t i = ell + 1; i <= z.r; ++i) fine.push_back(z.z[i - 1]);

  std::vector<RamifiedSeries> coarse(z.z.begin() + 1, z.z.end());  // L

  LatticeExp fine_tower(ctx, std::move(fine));
  const LinearPoly& ef = fine_tower.exp_of(D);
  const std::uint32_t d = static_cast<std::uint32_t>(p.degree());
  const std::uint64_t nb = sat_pow_u64(F.q(), d);

  RamifiedSeries lhs = RamifiedSeries::zero(ctx);
  for (std::uint64_t index = 0; index < nb; ++index) {
    const APoly b1 = apoly_from_index(F, index, d - 1);
    const RamifiedSeries arg = z.z[0].add(lift_at_theta(ctx, b1).mul(zl));
    const RamifiedSeries v = ef.eval(arg);
    if (v.is_zero_to_prec())
      fail(ErrorCode::PoleHit, "sublattice exponential vanished at a shift");
    lhs = lhs.add(v.inv());
  }

  LatticeExp coarse_tower(ctx, std::move(coarse));
  const RamifiedSeries vc = coarse_tower.exp_of(D).eval(z.z[0]);
  if (vc.is_zero_to_prec())
    fail(ErrorCode::PoleHit, "tail lattice exponential vanished at z_1");
  return discrepancy_val(lhs, vc.inv());
}

std::int64_t rel1_check(const OmegaPoint& z, const APoly& p,
                        const std::vector<APoly>& b, std::int64_t D) {
  const Ctx& ctx = z.ctx();
  const Fq& F = ctx->field.base;
  validate_prime(F, p);
  if (z.r < 2) fail(ErrorCode::ConfigInvalid, "the l = r variant needs rank >= 2");
  if (b.size() + 1 != z.r)
    fail(ErrorCode::ConfigInvalid, "need exactly r-1 shift entries b_1..b_{r-1}");
  validate_shifts(b, p);

  const RamifiedSeries ptheta = lift_at_theta(ctx, p);
  const RamifiedSeries pinv = ptheta.inv();

  // p L' is assembled exactly; L' = p^{-1} (p L').
  std::vector<RamifiedSeries> scaled;
  for (std::uint32_t i = 2; i < z.r; ++i)
    scaled.push_back(z.z[i - 1].add(lift_at_theta(ctx, b[i - 1])));
  scaled.push_back(ptheta.mul(z.z[z.r - 1]));
  std::vector<RamifiedSeries> base;
  for (const RamifiedSeries& g : scaled) base.push_back(g.mul(pinv));

  const RamifiedSeries px = z.z[0].add(lift_at_theta(ctx, b[0]));
  const RamifiedSeries x = px.mul(pinv);

  LatticeExp scaled_tower(ctx, std::move(scaled));
  LatticeExp base_tower(ctx, std::move(base));
  const RamifiedSeries lhs = scaled_tower.exp_of(D).eval(px);
  const RamifiedSeries rhs = ptheta.mul(base_tower.exp_of(D).eval(x));
  return discrepancy_val(lhs, rhs);
}

}  // namespace dmf
