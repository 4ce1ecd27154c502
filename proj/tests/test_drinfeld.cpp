#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "dmf/drinfeld.hpp"
#include "doctest.h"

using namespace dmf;

namespace {

RamifiedSeries one_s(const Ctx& ctx) {
  return RamifiedSeries::monomial(ctx, 1, 0);
}

// (f o g)(X): coefficients sum_{i+j=n} f_i g_j^{q^i}
LinearPoly compose(const Ctx& ctx, const LinearPoly& f, const LinearPoly& g) {
  LinearPoly out;
  const std::size_t n_max = f.a.size() + g.a.size() - 2;
  for (std::size_t n = 0; n <= n_max; ++n) {
    RamifiedSeries acc = RamifiedSeries::zero(ctx);
    for (std::size_t i = 0; i < f.a.size(); ++i) {
      if (n < i || n - i >= g.a.size()) continue;
      acc = acc.add(
          f.a[i].mul(g.a[n - i].qpow(static_cast<std::uint32_t>(i))));
    }
    out.a.push_back(acc);
  }
  return out;
}

}  // namespace

TEST_CASE("standard points have staggered exponents") {
  auto ctx = SeriesContext::create(3, 1, 2, 40);
  auto z = standard_point(ctx, 2);
  REQUIRE(z.size() == 2);
  CHECK(z[0].leading_exp() == -1);
  CHECK(z[1].leading_exp() == 0);
  CHECK(standard_point(ctx, 2, 3)[0].leading_exp() == -7);  // shifted by wM

  CHECK_THROWS_AS(standard_point(ctx, 3), Error);  // needs w >= r
  auto ctx3 = SeriesContext::create(2, 1, 3, 40);
  auto z3 = standard_point(ctx3, 3);
  CHECK(z3[0].leading_exp() == -2);
  CHECK(z3[1].leading_exp() == -1);
  CHECK(z3[2].leading_exp() == 0);
}

TEST_CASE("lattice enumeration covers every element once") {
  auto ctx = SeriesContext::create(2, 1, 2, 40);
  auto z = standard_point(ctx, 2);
  int count = 0;
  bool first_zero = false;
  std::vector<std::string> seen;
  for_each_lattice_element(ctx, z, 1, [&](const RamifiedSeries& lam) {
    if (count == 0) first_zero = lam.is_zero_to_prec();
    seen.push_back(lam.to_string());
    ++count;
  });
  CHECK(count == 16);  // q^{r(D+1)} = 2^4
  CHECK(first_zero);
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());

  CHECK_THROWS_AS(
      for_each_lattice_element(ctx, z, 12, [](const RamifiedSeries&) {}),
      Error);  // 2^26 elements exceed the enumeration budget
}

TEST_CASE("product form and splitting recursion give the same exponential") {
  for (auto [p, w, r, D] :
       {std::tuple<std::uint32_t, std::int64_t, std::uint32_t, std::int64_t>{
            2, 2, 2, 0},
        {2, 2, 2, 1},
        {3, 2, 1, 1},
        {3, 2, 2, 0}}) {
    auto ctx = SeriesContext::create(p, 1, w, 40);
    auto z = standard_point(ctx, r);
    auto naive = lattice_exp_naive(ctx, z, D);
    LatticeExp tower(ctx, z);
    const LinearPoly& rec = tower.exp_of(D);
    REQUIRE(naive.a.size() == rec.a.size());
    for (std::size_t n = 0; n < naive.a.size(); ++n)
      CHECK(naive.a[n].agrees_with(rec.a[n]));
    CHECK(rec.a[0].agrees_with(one_s(ctx)));
  }
}

TEST_CASE("the exponential annihilates exactly its own lattice") {
  auto ctx = SeriesContext::create(2, 1, 2, 40);
  auto z = standard_point(ctx, 2);
  LatticeExp tower(ctx, z);
  const LinearPoly& e1 = tower.exp_of(1);
  for_each_lattice_element(ctx, z, 1, [&](const RamifiedSeries& lam) {
    CHECK(e1.eval(lam).is_zero_to_prec());
  });
  // a point outside the lattice is not annihilated
  CHECK_FALSE(e1.eval(RamifiedSeries::monomial(ctx, 1, 1)).is_zero_to_prec());
}

TEST_CASE("exponential and logarithm invert each other on both sides") {
  auto ctx = SeriesContext::create(3, 1, 2, 40);
  auto cd = carlitz_data(ctx, 4);
  auto lg_ex = compose(ctx, cd.log, cd.exp);
  auto ex_lg = compose(ctx, cd.exp, cd.log);
  CHECK(lg_ex.a[0].agrees_with(one_s(ctx)));
  CHECK(ex_lg.a[0].agrees_with(one_s(ctx)));
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(lg_ex.a[n].is_zero_to_prec());
    CHECK(ex_lg.a[n].is_zero_to_prec());
  }
}

TEST_CASE("Carlitz logarithm matches its closed form") {
  for (auto [p, w] :
       {std::pair<std::uint32_t, std::int64_t>{2, 1}, {3, 2}, {5, 4}}) {
    auto ctx = SeriesContext::create(p, 1, w, 40);
    auto cd = carlitz_data(ctx, 4);
    const Fq& W = ctx->field.work;
    for (std::size_t n = 1; n <= 4; ++n) {
      // beta_n = (-1)^n / L_n
      RamifiedSeries expect = cd.l[n].inv();
      if (n % 2 == 1) expect = expect.neg();
      CHECK(cd.log.a[n].agrees_with(expect));
    }
    // D_n and L_n share the leading factor and diverge at n = 2
    CHECK(cd.d[1].agrees_with(cd.l[1]));
    CHECK_FALSE(W.size() == 0);
  }
}

TEST_CASE("Carlitz data recovers phi_theta = theta + tau") {
  auto ctx = SeriesContext::create(3, 1, 2, 48);
  auto cd = carlitz_data(ctx, 5);
  auto eld = module_from_exp(ctx, cd.exp, 4);
  CHECK(eld.g[0].identical(RamifiedSeries::theta(ctx)));
  CHECK(eld.g[1].agrees_with(one_s(ctx)));
  CHECK(eld.g[1].sub(one_s(ctx)).val_lb() >= 40);
  for (std::size_t n = 2; n <= 4; ++n) {
    CHECK(eld.g[n].is_zero_to_prec());
    CHECK(eld.g[n].val_lb() >= 40);
  }
}

TEST_CASE("deepening the truncation stabilizes the exponential monotonically") {
  auto ctx = SeriesContext::create(2, 1, 2, 96);
  auto z = standard_point(ctx, 2);
  LatticeExp tower(ctx, z);
  std::vector<std::int64_t> steps;
  for (std::int64_t D = 1; D <= 3; ++D) {
    const LinearPoly a0 = tower.exp_of(D - 1);
    const LinearPoly a1 = tower.exp_of(D);
    std::int64_t worst = kExactPrec;
    for (std::size_t n = 0; n <= 4 && n < a0.a.size(); ++n)
      worst = std::min(worst, discrepancy_val(a0.a[n], a1.a[n]));
    steps.push_back(worst);
  }
  CHECK(steps[0] < steps[1]);
  CHECK(steps[1] < steps[2]);
  CHECK(steps[0] > 0);

  ExpStabilization cert;
  auto st = stable_exp(tower, 5, 72, 10, &cert);
  CHECK(st.a.size() == 6);
  for (std::int64_t a : cert.agreement) CHECK(a >= 72);
  CHECK(st.a[0].agrees_with(one_s(ctx)));

  // a rank-2 lattice produces a module with g_n = 0 beyond n = 2; recovering
  // g_4 costs w*q^4 = 32 digits of precision against theta^{q^4}, so the
  // stabilization goal of 72 leaves at least 40 digits on the residue
  auto eld = module_from_exp(ctx, st, 4);
  CHECK_FALSE(eld.g[1].is_zero_to_prec());
  CHECK_FALSE(eld.g[2].is_zero_to_prec());
  CHECK(eld.g[3].val_lb() >= 30);
  CHECK(eld.g[4].val_lb() >= 30);
}

TEST_CASE("the Carlitz generating function at the period recovers omega") {
  for (auto [p, w] : {std::pair<std::uint32_t, std::int64_t>{2, 1}, {3, 2}}) {
    auto ctx = SeriesContext::create(p, 1, w, 48);
    auto cd = carlitz_data(ctx, 8);
    auto pt = pi_tilde(ctx);
    auto s = AGF::build(cd.exp, pt, ctx->cap);
    auto om = omega_series(ctx, 4);
    CHECK(s.to_tate(4).agrees_with(om));
    CHECK(s.to_tate(4).discrepancy(om) >= 40);
    // the residue at the first pole is minus the period
    CHECK(s.residue_at(0).agrees_with(pt.neg()));
  }
}

TEST_CASE("generating functions obey the module functional equation") {
  // Carlitz case: g = (theta, 1)
  auto ctx = SeriesContext::create(3, 1, 2, 48);
  auto cd = carlitz_data(ctx, 8);
  auto pt = pi_tilde(ctx);
  auto s = AGF::build(cd.exp, pt, ctx->cap);
  std::vector<RamifiedSeries> g{RamifiedSeries::theta(ctx), one_s(ctx)};
  // e(pi~) = 0: the period generates the Carlitz lattice
  auto ez = RamifiedSeries::zero(ctx);
  CHECK(agf_functional_discrepancy(s, g, ez, 4) >= 36);

  // rank-2 case at the standard point
  auto ctx2 = SeriesContext::create(2, 1, 2, 48);
  auto z = standard_point(ctx2, 2);
  LatticeExp tower(ctx2, z);
  auto st = stable_exp(tower, 7, 40, 10);
  auto eld = module_from_exp(ctx2, st, 3);
  std::vector<RamifiedSeries> g2{eld.g[0], eld.g[1], eld.g[2]};
  auto s2 = AGF::build(st, z[0], 40);
  auto ez2 = RamifiedSeries::zero(ctx2);  // z_1 lies in the lattice
  CHECK(agf_functional_discrepancy(s2, g2, ez2, 4) >= 30);

  // a generic point z not in the lattice needs the e(z) source term
  auto zz = RamifiedSeries::monomial(ctx2, 1, 1);
  auto s3 = AGF::build(st, zz, 40);
  auto ez3 = st.eval(zz);
  CHECK(agf_functional_discrepancy(s3, g2, ez3, 4) >= 30);
  CHECK(agf_functional_discrepancy(s3, g2, RamifiedSeries::zero(ctx2), 4) <
        10);
}

TEST_CASE("twisting commutes with the Tate expansion") {
  auto ctx = SeriesContext::create(3, 1, 2, 48);
  auto cd = carlitz_data(ctx, 8);
  auto s = AGF::build(cd.exp, pi_tilde(ctx), ctx->cap);
  CHECK(s.twist(1).to_tate(3).agrees_with(s.to_tate(3).twist(1)));
}

TEST_CASE("generating function evaluation away from poles") {
  auto ctx = SeriesContext::create(3, 1, 2, 48);
  auto cd = carlitz_data(ctx, 8);
  auto s = AGF::build(cd.exp, pi_tilde(ctx), ctx->cap);
  // t = 0 reproduces the constant Tate coefficient
  CHECK(s.eval(RamifiedSeries::zero(ctx)).agrees_with(s.to_tate(1).coeff(0)));
  // hitting a pole is refused
  CHECK_THROWS_AS(s.eval(RamifiedSeries::theta(ctx)), Error);
  try {
    s.eval(RamifiedSeries::theta(ctx).qpow(1));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleHit);
  }
}

TEST_CASE("tail certificates reject bad generating functions") {
  auto ctx = SeriesContext::create(2, 1, 2, 40);
  LinearPoly bad;
  bad.a = {one_s(ctx), RamifiedSeries::theta_pow(ctx, 2)};
  try {
    AGF::build(bad, one_s(ctx), 30);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TailNotDecaying);
  }
  LinearPoly short_exp;
  short_exp.a = {one_s(ctx), one_s(ctx), one_s(ctx)};
  try {
    AGF::build(short_exp, one_s(ctx), 1 << 20);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotConverged);
  }
}

TEST_CASE("Goss polynomials: small cases and the inverse-power identity") {
  auto ctx = SeriesContext::create(2, 1, 2, 48);
  auto z = standard_point(ctx, 2);
  LatticeExp tower(ctx, z);
  const LinearPoly e1 = tower.exp_of(1);
  auto G = goss_polys(ctx, e1, 6);

  // G_1 = X and G_n = X^n for n <= q
  CHECK(G[0].size() == 2);
  CHECK(G[0][1].agrees_with(one_s(ctx)));
  CHECK(G[1].size() == 3);
  CHECK(G[1][2].agrees_with(one_s(ctx)));
  CHECK(G[1][1].is_zero_to_prec());
  // no constant or linear part from n = 2 on
  for (std::size_t n = 2; n <= 6; ++n) {
    CHECK(G[n - 1][0].is_zero_to_prec());
    CHECK(G[n - 1][1].is_zero_to_prec());
  }

  // sum_{lambda in L_D} (x + lambda)^{-n} = G_n(1/e(x)) on the nose
  for (std::int64_t k : {1, 2, 5}) {
    const RamifiedSeries x = RamifiedSeries::monomial(ctx, 1, k);
    const RamifiedSeries gex = e1.eval(x).inv();
    for (std::size_t n = 1; n <= 5; ++n) {
      const RamifiedSeries lhs =
          goss_oracle(ctx, z, 1, static_cast<std::int64_t>(n), x);
      const RamifiedSeries rhs = poly_eval(G[n - 1], gex);
      CHECK(lhs.agrees_with(rhs));
      if (n == 1) CHECK(lhs.agrees_with(e1.eval(x).inv()));
    }
  }

  // the trivial space {0}: plain inverse powers
  const RamifiedSeries x0 = RamifiedSeries::monomial(ctx, 1, 3);
  CHECK(goss_oracle(ctx, {}, 0, 4, x0).agrees_with(x0.pow(-4)));

  // evaluation on a lattice point is a pole
  CHECK_THROWS_AS(goss_oracle(ctx, z, 1, 2, z[0].neg()), Error);
  CHECK_THROWS_AS(goss_oracle(ctx, z, 1, 0, x0), Error);
}
