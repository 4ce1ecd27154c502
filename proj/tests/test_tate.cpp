#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "dmf/tate.hpp"
#include "doctest.h"

using namespace dmf;

namespace {

RamifiedSeries one_s(const Ctx& ctx) {
  return RamifiedSeries::monomial(ctx, 1, 0);
}

}  // namespace

TEST_CASE("Tate polynomials multiply like polynomials") {
  auto ctx = SeriesContext::create(3, 1, 2, 40);
  // (1 + t)(1 - t) = 1 - t^2
  auto a = TateSeries::from_coeffs(ctx, {one_s(ctx), one_s(ctx)}, false);
  auto b = TateSeries::from_coeffs(ctx, {one_s(ctx), one_s(ctx).neg()}, false);
  auto p = a.mul(b);
  CHECK_FALSE(p.truncated());
  CHECK(p.t_degree() == 2);
  CHECK(p.coeff(0).agrees_with(one_s(ctx)));
  CHECK(p.coeff(1).is_zero_to_prec());
  CHECK(p.coeff(2).agrees_with(one_s(ctx).neg()));
  CHECK(p.coeff(7).is_zero_to_prec());  // beyond the degree of a polynomial

  auto tp = TateSeries::t_power(ctx, 3);
  CHECK(tp.t_degree() == 3);
  CHECK(tp.coeff(3).agrees_with(one_s(ctx)));
  CHECK(a.mul_t(2).coeff(2).agrees_with(one_s(ctx)));

  APoly pa{{1, 0, 2}};  // 2t^2 + 1
  auto q = TateSeries::apoly_in_t(ctx, pa);
  CHECK(q.t_degree() == 2);
  CHECK(q.coeff(2).coeff_at(0) == 2);
}

TEST_CASE("t-truncation is sticky and shifts under known zeros") {
  auto ctx = SeriesContext::create(3, 1, 2, 40);
  auto z5 = TateSeries::zero_mod(ctx, 5);
  CHECK(z5.truncated());
  CHECK(z5.known() == 5);
  CHECK(z5.is_zero());

  auto poly = TateSeries::from_coeffs(ctx, {one_s(ctx), one_s(ctx)}, false);
  CHECK(poly.add(z5).truncated());
  CHECK(poly.add(z5).known() == 5);
  // multiplying by t^2 pushes the unknown region out by two
  CHECK(TateSeries::t_power(ctx, 2).mul(z5).known() == 7);
  CHECK(poly.mul(z5).known() == 5);
  // the exact zero polynomial annihilates everything
  CHECK_FALSE(TateSeries::zero(ctx).mul(z5).truncated());
  CHECK(TateSeries::zero(ctx).mul(z5).known() == 0);

  CHECK(poly.truncate_t(4).known() == 4);
  CHECK(poly.truncate_t(4).truncated());
  CHECK(poly.truncate_t(1).known() == 1);

  CHECK_THROWS_AS(z5.coeff(5), Error);
  CHECK_THROWS_AS(z5.eval(one_s(ctx)), Error);
  CHECK_THROWS_AS(z5.t_degree(), Error);
}

TEST_CASE("Tate reciprocal against the geometric series") {
  auto ctx = SeriesContext::create(3, 1, 2, 40);
  auto one_minus_t =
      TateSeries::from_coeffs(ctx, {one_s(ctx), one_s(ctx).neg()}, false);
  auto g = one_minus_t.inv(6);
  CHECK(g.truncated());
  CHECK(g.known() == 6);
  for (std::size_t j = 0; j < 6; ++j) CHECK(g.coeff(j).agrees_with(one_s(ctx)));
  CHECK(g.mul(one_minus_t).agrees_with(TateSeries::constant(one_s(ctx))));

  // reciprocal of a nontrivial unit round-trips
  auto u = TateSeries::from_coeffs(
      ctx, {RamifiedSeries::theta(ctx), one_s(ctx), one_s(ctx).neg()}, false);
  auto ui = u.inv(5);
  CHECK(ui.mul(u).sub(TateSeries::constant(one_s(ctx))).is_zero());

  CHECK_THROWS_AS(TateSeries::zero(ctx).inv(3), Error);
  CHECK_THROWS_AS(TateSeries::t_power(ctx, 1).inv(3), Error);
}

TEST_CASE("substitution of a series value for t") {
  auto ctx = SeriesContext::create(2, 1, 1, 40);
  auto th = RamifiedSeries::theta(ctx);
  // f(t) = t^2 + theta evaluated at t = theta
  auto f = TateSeries::from_coeffs(
      ctx, {th, RamifiedSeries::zero(ctx), one_s(ctx)}, false);
  CHECK(f.eval(th).identical(th.mul(th).add(th)));
}

TEST_CASE("coefficient-wise Frobenius respects products") {
  auto ctx = SeriesContext::create(3, 1, 2, 40);
  auto th = RamifiedSeries::theta(ctx);
  auto f = TateSeries::from_coeffs(ctx, {th, one_s(ctx)}, false);
  auto g = TateSeries::from_coeffs(ctx, {one_s(ctx), th.mul(th)}, false);
  CHECK(f.mul(g).twist(1).agrees_with(f.twist(1).mul(g.twist(1))));
  CHECK(TateSeries::constant(th).twist(1).coeff(0).identical(th.qpow(1)));
}

TEST_CASE("omega coefficients match the hand-expanded product, q = 2") {
  auto ctx = SeriesContext::create(2, 1, 1, 40);
  StabilizationCert cert;
  auto om = omega_series(ctx, 3, &cert);
  CHECK(cert.agreement >= cert.target);
  CHECK(cert.target == ctx->cap + 1);
  CHECK(om.truncated());
  CHECK(om.known() == 3);

  // t^0: the root (-theta)^{1/(q-1)} = pi^{-1}
  CHECK(om.coeff(0).leading_exp() == -1);
  CHECK(om.coeff(0).coeff_at(-1) == 1);
  for (std::int64_t e = 0; e < 39; ++e) CHECK(om.coeff(0).coeff_at(e) == 0);

  // t^1: root * sum_i theta^{-q^i} = sum_i pi^{2^i - 1}
  for (std::int64_t e = -1; e < 39; ++e) {
    const bool hit = e == 0 || e == 1 || e == 3 || e == 7 || e == 15 || e == 31;
    CHECK(om.coeff(1).coeff_at(e) == (hit ? 1 : 0));
  }
}

TEST_CASE("omega coefficients match the hand-expanded product, q = 3") {
  auto ctx = SeriesContext::create(3, 1, 2, 40);
  auto om = omega_series(ctx, 3);
  CHECK(om.coeff(0).leading_exp() == -1);
  CHECK(om.coeff(0).coeff_at(-1) == 1);
  // t^1: root * sum_i theta^{-q^i} = -(pi^1 + pi^5 + pi^17 + ...)
  for (std::int64_t e = -1; e < 39; ++e) {
    const bool hit = e == 1 || e == 5 || e == 17;
    CHECK(om.coeff(1).coeff_at(e) == (hit ? 2 : 0));
  }
}

TEST_CASE("omega satisfies its Frobenius functional equation") {
  for (auto [p, e, w] : {std::tuple<std::uint32_t, std::uint32_t, std::int64_t>{
                             2, 1, 1},
                         {3, 1, 2},
                         {2, 2, 3}}) {
    auto ctx = SeriesContext::create(p, e, w, 48);
    auto om = omega_series(ctx, 5);
    auto t_minus_theta = TateSeries::t_power(ctx, 1).sub(
        TateSeries::constant(RamifiedSeries::theta(ctx)));
    auto lhs = om.twist(1);
    auto rhs = t_minus_theta.mul(om);
    CHECK(lhs.agrees_with(rhs));
    CHECK(lhs.discrepancy(rhs) >= ctx->cap - ctx->w);
  }
}

TEST_CASE("the period starts as the hand-expanded product, q = 2") {
  auto ctx = SeriesContext::create(2, 1, 1, 40);
  StabilizationCert cert;
  auto pt = pi_tilde(ctx, &cert);
  CHECK(cert.agreement >= cert.target);
  CHECK(pt.leading_exp() == -2);  // valuation -wq/(q-1)
  CHECK(pt.prec() == ctx->cap);
  // pi^{-2} * [(1+pi)(1+pi^3)(1+pi^7)...]^{-1} = pi^{-2}(1+pi+pi^2+pi^6+...)
  CHECK(pt.coeff_at(-2) == 1);
  CHECK(pt.coeff_at(-1) == 1);
  CHECK(pt.coeff_at(0) == 1);
  CHECK(pt.coeff_at(1) == 0);
  CHECK(pt.coeff_at(2) == 0);
  CHECK(pt.coeff_at(3) == 0);
  CHECK(pt.coeff_at(4) == 1);
}

TEST_CASE("the period starts as the hand-expanded product, q = 3") {
  auto ctx = SeriesContext::create(3, 1, 2, 40);
  auto pt = pi_tilde(ctx);
  CHECK(pt.leading_exp() == -3);  // valuation -wq/(q-1) = -3
  // -pi^{-3} * prod_{i>=1}(1 - pi^{2(3^i-1)})^{-1}: the coefficient at
  // pi^{4m-3} is 2*(floor(m/4)+1) mod 3 below the i=3 factor at pi^52
  for (std::int64_t m = 0; m <= 10; ++m) {
    const std::uint32_t expect =
        static_cast<std::uint32_t>(2 * (m / 4 + 1) % 3);
    CHECK(pt.coeff_at(4 * m - 3) == expect);
  }
  // everything off the 4Z - 3 grid vanishes
  for (std::int64_t k : {-2, -1, 0, 2, 3, 4, 6, 7, 8}) {
    CHECK(pt.coeff_at(k) == 0);
  }
}

TEST_CASE("determinants over the Tate ring expand by cofactors") {
  auto ctx = SeriesContext::create(3, 1, 2, 40);
  auto th = RamifiedSeries::theta(ctx);
  auto t1 = TateSeries::t_power(ctx, 1);
  auto c1 = TateSeries::constant(one_s(ctx));
  auto cth = TateSeries::constant(th);
  // det [[1, t], [theta, t^2]] = t^2 - theta t
  TateMat m{{c1, t1}, {cth, t1.mul(t1)}};
  auto d = tate_mat_det(m);
  CHECK(d.agrees_with(t1.mul(t1).sub(t1.mul(cth))));
  // 2x2 submatrix extraction drops the right row and column
  TateMat s = tate_mat_submatrix(m, 0, 1);
  CHECK(s.size() == 1);
  CHECK(s[0][0].agrees_with(cth));

  // det of a triangular 3x3 is the diagonal product
  auto z = TateSeries::zero(ctx);
  TateMat tri{{c1, t1, cth}, {z, cth, t1}, {z, z, t1}};
  CHECK(tate_mat_det(tri).agrees_with(c1.mul(cth).mul(t1)));
}
