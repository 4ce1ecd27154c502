#include "dmf/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <future>
#include <random>

#include "dmf/drinfeld.hpp"
#include "dmf/errors.hpp"
#include "dmf/hecke.hpp"
#include "dmf/modular.hpp"
#include "dmf/tate.hpp"

namespace dmf {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ipow(std::int64_t b, std::uint32_t e) {
  std::int64_t v = 1;
  for (std::uint32_t i = 0; i < e; ++i) v *= b;
  return v;
}

// (q^r - 1)/(q - 1): the weight of h_r and the pi~ exponent of the
// determinant identities.
std::int64_t weight_h(std::uint64_t q, std::uint32_t r) {
  std::int64_t v = 0, p = 1;
  for (std::uint32_t i = 0; i < r; ++i) {
    v += p;
    p *= static_cast<std::int64_t>(q);
  }
  return v;
}

// Builders certify their tails past this; `prec` itself is the reporting
// threshold base, so a small pad keeps honest windows clear of it.
std::int64_t builder_goal(const RunConfig& cfg) { return cfg.prec + 12; }

// Coefficient cap for the point suites.  The determinant and Hecke
// assemblies pass through values of valuation about -w q (q^r-1)/(q-1)^2
// (pi~ powers and twisted omega inverses); tripling that and padding keeps
// the cap from ever being the binding constraint.
std::int64_t heavy_cap(const RunConfig& cfg) {
  return builder_goal(cfg) + 16 + 6 * cfg.w * weight_h(cfg.q(), cfg.r);
}

// The boundary suite also inverts lattice exponentials of large arguments
// (the uniformizer), whose intermediate valuations grow with the sample
// magnitude; give it extra room on top of the heavy cap.
std::int64_t boundary_cap(const RunConfig& cfg) {
  return heavy_cap(cfg) + 40 * cfg.w;
}

// The rank-one Eisenstein sum enumerates q^d monic shells under a hard
// per-shell budget of 2^22 polynomials, and its slowest entry gains only w
// per shell at a unit base point, so the deepest tail it can certify is
// about w * (log_q 2^22 - 2).  Builders applied to rank-one points clamp
// their goal to that; the affected checks keep honest (lower) windows.
std::int64_t rank1_goal(const RunConfig& cfg) {
  std::int64_t d = 0;
  std::uint64_t reach = 1;
  while (reach * cfg.q() <= (std::uint64_t(1) << 22)) {
    reach *= cfg.q();
    ++d;
  }
  return std::min(builder_goal(cfg), cfg.w * std::max<std::int64_t>(d - 2, 1));
}

std::int64_t lattice_seed_depth(const RunConfig& cfg) {
  return std::max<std::int64_t>(1, cfg.deg_bound);
}

// Collects the records of one suite; every check is timed and isolated, so
// a computational error becomes a failed record instead of aborting the
// suite.
struct Ledger {
  const RunConfig* cfg = nullptr;
  std::string suite;
  std::vector<CheckRecord> out;

  void add(const std::string& name, const std::string& identity,
           std::int64_t threshold, const std::function<std::int64_t()>& fn) {
    CheckRecord rec;
    rec.suite = suite;
    rec.name = name;
    rec.identity = identity;
    rec.threshold = threshold;
    const auto t0 = Clock::now();
    try {
      rec.discrepancy = fn();
      rec.pass = rec.discrepancy >= rec.threshold;
    } catch (const Error& err) {
      rec.error = err.what();
    } catch (const std::exception& ex) {
      rec.error = ex.what();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0)
                      .count();
    out.push_back(std::move(rec));
  }

  void add(const std::string& name, const std::string& identity,
           const std::function<std::int64_t()>& fn) {
    add(name, identity, cfg->threshold(), fn);
  }

  // A suite whose shared setup failed still reports: one failed record
  // carrying the reason.
  void setup_failed(const std::string& what) {
    CheckRecord rec;
    rec.suite = suite;
    rec.name = "setup";
    rec.identity = "suite setup";
    rec.threshold = cfg->threshold();
    rec.error = what;
    out.push_back(std::move(rec));
  }
};

RamifiedSeries one_s(const Ctx& ctx) {
  return RamifiedSeries::monomial(ctx, 1, 0);
}

// Random exact series with valuation in [-2w, 2w] and a nonzero leading
// coefficient; the fixed generator keeps reports reproducible.
RamifiedSeries random_series(const Ctx& ctx, std::mt19937& rng) {
  const std::uint32_t n = ctx->field.work.size();
  std::vector<FqElem> c(10);
  for (auto& x : c) x = static_cast<FqElem>(rng() % n);
  if (c[0] == 0) c[0] = 1;
  const std::int64_t v =
      static_cast<std::int64_t>(rng() % (4 * ctx->w + 1)) - 2 * ctx->w;
  return RamifiedSeries::from_coeffs(ctx, v, std::move(c), kExactPrec);
}

// ---------------------------------------------------------------------------
// kernel: exact-arithmetic identities of the coefficient layer.

void suite_kernel(Ledger& led) {
  const RunConfig& cfg = *led.cfg;
  auto ctx = SeriesContext::create(cfg.p, cfg.e, cfg.w, cfg.prec + 8);
  const std::uint32_t q = ctx->field.base.q();

  led.add("theta against the uniformizer", "theta*pi^w = -1", [&] {
    const RamifiedSeries lhs =
        RamifiedSeries::theta(ctx).mul(RamifiedSeries::monomial(ctx, 1, ctx->w));
    return discrepancy_val(lhs, one_s(ctx).neg());
  });

  led.add("pinned root of -theta", "root^(q-1) = -theta", [&] {
    return discrepancy_val(RamifiedSeries::negtheta_root(ctx).pow(q - 1),
                           RamifiedSeries::theta(ctx).neg());
  });

  led.add("frobenius additivity", "(x+y)^q = x^q + y^q", [&] {
    std::mt19937 rng(17);
    std::int64_t worst = kExactPrec;
    for (int i = 0; i < 8; ++i) {
      const RamifiedSeries x = random_series(ctx, rng);
      const RamifiedSeries y = random_series(ctx, rng);
      worst = std::min(worst, discrepancy_val(x.add(y).qpow(1),
                                              x.qpow(1).add(y.qpow(1))));
    }
    return worst;
  });

  led.add("inverse roundtrip", "x*inv(x) = 1", [&] {
    std::mt19937 rng(23);
    std::int64_t worst = kExactPrec;
    for (int i = 0; i < 8; ++i) {
      const RamifiedSeries x = random_series(ctx, rng);
      worst = std::min(worst, discrepancy_val(x.mul(x.inv()), one_s(ctx)));
    }
    return worst;
  });

  led.add("valuation laws", "ultrametric valuation", [&] {
    std::mt19937 rng(29);
    for (int i = 0; i < 20; ++i) {
      const RamifiedSeries x = random_series(ctx, rng);
      const RamifiedSeries y = random_series(ctx, rng);
      if (x.mul(y).leading_exp() != x.leading_exp() + y.leading_exp())
        return kNoDiscrepancy;
      const RamifiedSeries s = x.add(y);
      const std::int64_t lo = std::min(x.leading_exp(), y.leading_exp());
      if (!s.is_zero_to_prec() && s.leading_exp() < lo) return kNoDiscrepancy;
      if (x.leading_exp() != y.leading_exp() &&
          (s.is_zero_to_prec() || s.leading_exp() != lo))
        return kNoDiscrepancy;
    }
    return kExactPrec;
  });
}

// ---------------------------------------------------------------------------
// omega: the Anderson-Thakur function from the product route.

void suite_omega(Ledger& led) {
  const RunConfig& cfg = *led.cfg;
  auto ctx = SeriesContext::create(cfg.p, cfg.e, cfg.w, cfg.prec + 8);
  const std::size_t T = static_cast<std::size_t>(cfg.t_trunc);
  const TateSeries omega = omega_series(ctx, T);

  led.add("functional equation", "(t-theta)*omega = omega^(1)", [&] {
    const TateSeries lhs =
        omega.mul_t(1).sub(omega.scalar_mul(RamifiedSeries::theta(ctx)));
    return lhs.discrepancy(omega.twist(1));
  });

  led.add("value at the origin", "omega(0) = (-theta)^(1/(q-1))", [&] {
    return discrepancy_val(omega.coeff(0), RamifiedSeries::negtheta_root(ctx));
  });
}

// ---------------------------------------------------------------------------
// carlitz: factorials, the rank-one module, and the period.

void suite_carlitz(Ledger& led) {
  const RunConfig& cfg = *led.cfg;
  const std::int64_t goal = builder_goal(cfg);
  auto ctx =
      SeriesContext::create(cfg.p, cfg.e, cfg.w, goal + 16 + 6 * cfg.w);
  const std::size_t T = static_cast<std::size_t>(cfg.t_trunc);

  const CarlitzData cd = carlitz_data(ctx, 4);
  const RamifiedSeries pi = pi_tilde(ctx);
  const AGF s = AGF::build(cd.exp, pi, goal);

  led.add("generating function matches the product route",
          "omega = sum_n pi~^(q^n)/(D_n (theta^(q^n)-t))", [&] {
            return s.to_tate(T).discrepancy(omega_series(ctx, T));
          });

  led.add("residue at the first pole recovers the period",
          "pi~ = -res_(t=theta) omega", [&] {
            return discrepancy_val(s.residue_at(0).neg(), pi);
          });

  led.add("lattice tower over the period recovers the factorials",
          "alpha_n(pi~ A) = 1/D_n", [&] {
            LatticeExp tower(ctx, {pi});
            const LinearPoly e = stable_exp(tower, 3, goal, 14);
            std::int64_t worst = kExactPrec;
            for (std::size_t n = 0; n <= 3; ++n)
              worst = std::min(worst, discrepancy_val(e.a[n], cd.exp.a[n]));
            return worst;
          });

  led.add("logarithm closed form", "beta_n = (-1)^n/L_n", [&] {
    std::int64_t worst = kExactPrec;
    for (std::size_t n = 0; n <= 4; ++n) {
      RamifiedSeries closed = cd.l[n].inv();
      if (n % 2 == 1) closed = closed.neg();
      worst = std::min(worst, discrepancy_val(cd.log.a[n], closed));
    }
    return worst;
  });
}

// ---------------------------------------------------------------------------
// mainid: the matrix product and determinant identities at the point.

void suite_mainid(Ledger& led) {
  const RunConfig& cfg = *led.cfg;
  const std::int64_t goal = builder_goal(cfg);
  auto ctx = SeriesContext::create(cfg.p, cfg.e, cfg.w, heavy_cap(cfg));
  const std::size_t T = static_cast<std::size_t>(cfg.t_trunc);
  const std::int64_t k_h = weight_h(cfg.q(), cfg.r);

  const OmegaPoint z = omega_point_standard(ctx, cfg.point_exponents());
  const ModularData md =
      build_matrices(z, T, goal, static_cast<std::size_t>(cfg.agf_cutoff),
                     lattice_seed_depth(cfg));

  led.add("matrix product closes entrywise", "E*F = -C", [&] {
    const TateMat EF = tate_mat_mul(md.E, md.F);
    std::int64_t worst = kExactPrec;
    for (std::size_t i = 0; i < cfg.r; ++i)
      for (std::size_t j = 0; j < cfg.r; ++j)
        worst = std::min(worst, EF[i][j].discrepancy(md.C[i][j].neg()));
    return worst;
  });

  const RamifiedSeries factor = md.pi.pow(k_h).mul(md.h);

  led.add("first determinant identity", "det(F)*pi~^k_h*h = omega", [&] {
    return tate_mat_det(md.F).scalar_mul(factor).discrepancy(md.omega);
  });

  led.add("second determinant identity", "det(E) = pi~^k_h*h/omega^(r)", [&] {
    return tate_mat_det(md.E).discrepancy(
        TateSeries::constant(factor).div(md.omega.twist(cfg.r), T));
  });
}

// ---------------------------------------------------------------------------
// funcH: the determinant form against its closed form and special values.

void suite_funcH(Ledger& led) {
  const RunConfig& cfg = *led.cfg;
  const std::int64_t goal = builder_goal(cfg);
  auto ctx = SeriesContext::create(cfg.p, cfg.e, cfg.w, heavy_cap(cfg));
  const std::size_t T = static_cast<std::size_t>(cfg.t_trunc);
  const std::int64_t k_low = weight_h(cfg.q(), cfg.r - 1);

  const OmegaPoint z = omega_point_standard(ctx, cfg.point_exponents());
  const ModularData md =
      build_matrices(z, T, goal, static_cast<std::size_t>(cfg.agf_cutoff),
                     lattice_seed_depth(cfg));

  led.add("determinant route agrees with the closed form",
          "det minor(E) = pi~^k_h h s_r^((r-1))/omega^((r-1))",
          [&] { return H_series(md).agreement; });

  led.add("boundary specialization collapses to h",
          "H(theta^(q^(r-1))) = pi~^((q^(r-1)-1)/(q-1))*h", [&] {
            return discrepancy_val(H_at(md, cfg.r - 1).closed.value,
                                   md.pi.pow(k_low).mul(md.h));
          });

  led.add("residue and closed routes agree one pole in",
          "H(theta^(q^r)) via D_1, alpha_1",
          [&] { return H_at(md, cfg.r).agreement; });
}

// ---------------------------------------------------------------------------
// hecke-scalar: the eigenform property of h and the specialized
// determinant form under the configured prime.

void suite_hecke_scalar(Ledger& led) {
  const RunConfig& cfg = *led.cfg;
  const std::int64_t goal = builder_goal(cfg);
  auto ctx = SeriesContext::create(cfg.p, cfg.e, cfg.w, heavy_cap(cfg));
  const Fq& F = ctx->field.base;
  const std::int64_t q = static_cast<std::int64_t>(cfg.q());
  const std::int64_t k_h = weight_h(cfg.q(), cfg.r);
  const std::int64_t k_low = weight_h(cfg.q(), cfg.r - 1);
  const std::size_t n_keep = static_cast<std::size_t>(cfg.agf_cutoff);
  const std::int64_t d_init = lattice_seed_depth(cfg);

  const OmegaPoint z = omega_point_standard(ctx, cfg.point_exponents());
  const APoly prime = apoly_parse(F, cfg.prime);
  const RamifiedSeries eig = RamifiedSeries::apoly_at_theta(
      ctx, hecke_eigenvalue(F, prime, cfg.r));

  const ScalarForm h_form = [goal, d_init](const OmegaPoint& pt) {
    return h_function(pt, goal, d_init).value;
  };

  led.add("h is an eigenform", "T_p h = p^(1+q+...+q^(r-2)) h", [&] {
    return discrepancy_val(hecke_scalar(h_form, k_h, prime, z),
                           h_form(z).mul(eig));
  });

  for (const std::int64_t n :
       {static_cast<std::int64_t>(cfg.r) - 1, static_cast<std::int64_t>(cfg.r)}) {
    const ScalarForm f = [goal, d_init, n_keep, n](const OmegaPoint& pt) {
      // only the closed special value is needed, so one t-coefficient does
      return H_at(build_matrices(pt, 1, goal, n_keep, d_init), n).closed.value;
    };
    const std::int64_t k = k_low + ipow(q, static_cast<std::uint32_t>(n));
    led.add("specialized determinant form is an eigenform (n = " +
                std::to_string(n) + ")",
            "T_p H(.,theta^(q^n)) = p^(1+q+...+q^(r-2)) H(.,theta^(q^n))", [&] {
              return discrepancy_val(hecke_scalar(f, k, prime, z),
                                     f(z).mul(eig));
            });
  }
}

// ---------------------------------------------------------------------------
// hecke-vectorial: the weight-lowered vector of generating functions.

void suite_hecke_vectorial(Ledger& led) {
  const RunConfig& cfg = *led.cfg;
  const std::int64_t goal = builder_goal(cfg);
  auto ctx = SeriesContext::create(cfg.p, cfg.e, cfg.w, heavy_cap(cfg));
  const Fq& F = ctx->field.base;
  const std::size_t T = static_cast<std::size_t>(cfg.t_trunc);
  const std::int64_t k_low = weight_h(cfg.q(), cfg.r - 1);
  const std::size_t n_keep = static_cast<std::size_t>(cfg.agf_cutoff);
  const std::int64_t d_init = lattice_seed_depth(cfg);

  const OmegaPoint z = omega_point_standard(ctx, cfg.point_exponents());
  const APoly prime = apoly_parse(F, cfg.prime);
  const RamifiedSeries eig = RamifiedSeries::apoly_at_theta(
      ctx, hecke_eigenvalue(F, prime, cfg.r));
  const ModularData md =
      build_matrices(z, T, goal, n_keep, d_init);
  const std::vector<TateSeries> base = vectorial_G(md, cfg.r);

  led.add("the vector of generating functions is an eigenform",
          "T_p G_r = p^(1+q+...+q^(r-2)) G_r", [&] {
            const std::uint32_t r = cfg.r;
            const VectorForm Gf = [goal, n_keep, d_init, T,
                                   r](const OmegaPoint& pt) {
              return vectorial_G(build_matrices(pt, T, goal, n_keep, d_init),
                                 r);
            };
            const std::vector<TateSeries> TG =
                hecke_vectorial(Gf, k_low, 1, prime, z);
            std::int64_t worst = kExactPrec;
            for (std::size_t i = 0; i < TG.size(); ++i)
              worst = std::min(worst,
                               TG[i].discrepancy(base[i].scalar_mul(eig)));
            return worst;
          });

  led.add("last coordinate is the determinant form", "G_r[r] = H", [&] {
    return base[cfg.r - 1].discrepancy(H_series(md).closed);
  });
}

// ---------------------------------------------------------------------------
// goss: the polynomial recursion against brute-force lattice sums.

void suite_goss(Ledger& led) {
  const RunConfig& cfg = *led.cfg;
  // dimension-2 samples need two valuation classes; a w = 1 run (only
  // possible at q = 2) widens its own uniformizer, which does not change
  // the identity being tested
  const std::int64_t wg = cfg.w == 1 ? 2 : cfg.w;
  const std::uint32_t q = static_cast<std::uint32_t>(cfg.q());
  const std::size_t n_max = static_cast<std::size_t>(q) * q;
  // inverse powers x^(-n) anchor their window at the cap minus (n-1) times
  // the valuation of x; sample valuations reach 3, so the cap has to absorb
  // 3 (n_max - 1) of decay on top of the reporting threshold
  auto ctx = SeriesContext::create(
      cfg.p, cfg.e, wg,
      cfg.prec + 16 + 3 * static_cast<std::int64_t>(n_max + 2));

  const auto sample_points = [&](std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::vector<RamifiedSeries> xs;
    for (int i = 0; i < 20; ++i) {
      std::vector<FqElem> c(8);
      for (auto& x : c)
        x = static_cast<FqElem>(rng() % ctx->field.work.size());
      if (c[0] == 0) c[0] = 1;
      const std::int64_t v = 1 + static_cast<std::int64_t>(rng() % 3);
      xs.push_back(RamifiedSeries::from_coeffs(ctx, v, std::move(c), kExactPrec));
    }
    return xs;
  };

  const auto agreement = [&](const std::vector<RamifiedSeries>& basis,
                             std::uint32_t seed) {
    const LinearPoly e = lattice_exp_naive(ctx, basis, 1);
    const auto gp = goss_polys(ctx, e, n_max);
    std::int64_t worst = kExactPrec;
    for (const RamifiedSeries& x : sample_points(seed)) {
      const RamifiedSeries einv = e.eval(x).inv();
      for (std::size_t n = 1; n <= n_max; ++n)
        worst = std::min(
            worst, discrepancy_val(poly_eval(gp[n - 1], einv),
                                   goss_oracle(ctx, basis, 1, n, x)));
    }
    return worst;
  };

  led.add("recursion matches the brute-force sums, dimension 1",
          "sum_lambda (x+lambda)^(-n) = G_n(1/e(x))", [&] {
            return agreement({RamifiedSeries::monomial(ctx, 1, -wg)}, 41);
          });

  led.add("recursion matches the brute-force sums, dimension 2",
          "sum_lambda (x+lambda)^(-n) = G_n(1/e(x))", [&] {
            return agreement({RamifiedSeries::monomial(ctx, 1, -wg - 1),
                              RamifiedSeries::monomial(ctx, 1, -wg)},
                             43);
          });

  led.add("no constant or linear terms from the second index on",
          "G_n = O(X^2) for n >= 2", [&] {
            const LinearPoly e = lattice_exp_naive(
                ctx,
                {RamifiedSeries::monomial(ctx, 1, -wg - 1),
                 RamifiedSeries::monomial(ctx, 1, -wg)},
                1);
            const auto gp = goss_polys(ctx, e, n_max);
            std::int64_t worst = kExactPrec;
            const RamifiedSeries zero = RamifiedSeries::zero(ctx);
            for (std::size_t n = 2; n <= n_max; ++n)
              for (std::size_t k = 0; k < 2 && k < gp[n - 1].size(); ++k)
                worst =
                    std::min(worst, discrepancy_val(gp[n - 1][k], zero));
            return worst;
          });
}

// ---------------------------------------------------------------------------
// chi: the interpolation of lattice shifts and the equivariance of the
// generating functions.

// Exponential and generating functions of A^r z without the full matrix
// apparatus (enough for the equivariance law, much cheaper).
std::vector<AGF> point_agfs(const OmegaPoint& pt, std::size_t n_keep,
                            std::int64_t goal) {
  LatticeExp tower(pt.ctx(), pt.z);
  const LinearPoly e = stable_exp(tower, n_keep, goal, 12);
  std::vector<AGF> out;
  out.reserve(pt.z.size());
  for (const RamifiedSeries& zi : pt.z) out.push_back(AGF::build(e, zi, goal));
  return out;
}

void suite_chi(Ledger& led) {
  const RunConfig& cfg = *led.cfg;
  const std::int64_t goal = builder_goal(cfg);
  auto ctx = SeriesContext::create(cfg.p, cfg.e, cfg.w, heavy_cap(cfg));
  const Fq& F = ctx->field.base;
  const std::uint64_t q = cfg.q();
  const std::size_t T = static_cast<std::size_t>(cfg.t_trunc);
  const std::size_t n_keep = static_cast<std::size_t>(cfg.agf_cutoff);

  const auto exps = cfg.point_exponents();
  const std::vector<std::int64_t> tail_exps(exps.begin() + 1, exps.end());
  const OmegaPoint zt = omega_point_standard(ctx, tail_exps);
  const std::int64_t tail_goal = cfg.r == 2 ? rank1_goal(cfg) : goal;
  const ChiData cd =
      build_chi_data(zt, T, tail_goal, n_keep, lattice_seed_depth(cfg));
  const RamifiedSeries z1 = RamifiedSeries::monomial(ctx, 1, -exps[0]);

  led.add("shift law on 10 random translations",
          "chi_mu(z1 + sum a_nu zt_nu) = chi_mu(z1) + a_mu(t)", [&] {
            std::mt19937 rng(7);
            const std::uint64_t per = q * q * q;
            std::int64_t worst = kExactPrec;
            for (int inst = 0; inst < 10; ++inst) {
              const std::uint32_t mu = 1 + rng() % (cfg.r - 1);
              std::vector<APoly> a(cfg.r - 1);
              RamifiedSeries shift = RamifiedSeries::zero(ctx);
              for (std::uint32_t nu = 0; nu + 1 < cfg.r; ++nu) {
                a[nu] = apoly_from_index(F, rng() % per, 2);
                shift = shift.add(
                    RamifiedSeries::apoly_at_theta(ctx, a[nu]).mul(zt.z[nu]));
              }
              const TateSeries base = chi(cd, z1, mu);
              const TateSeries moved = chi(cd, z1.add(shift), mu);
              worst = std::min(
                  worst, moved.discrepancy(base.add(
                             TateSeries::apoly_in_t(ctx, a[mu - 1]))));
            }
            return worst;
          });

  led.add("generating functions transform on 10 random group elements",
          "s(gamma z) = j^(-1) gamma(t) s(z)", [&] {
            const OmegaPoint z = omega_point_standard(ctx, exps);
            const std::vector<AGF> base = point_agfs(z, n_keep, goal);
            std::vector<TateSeries> base_t;
            for (const AGF& s : base) base_t.push_back(s.to_tate(T));

            std::int64_t worst = kExactPrec;
            int used = 0;
            for (std::uint64_t seed = 1; seed <= 40 && used < 10; ++seed) {
              const APolyMat gamma = random_gl(F, cfg.r, seed, 6, 1);
              if (gamma == apoly_mat_identity(cfg.r)) continue;
              try {
                const auto [zg, j] = gl_action(gamma, z);
                const std::vector<AGF> img = point_agfs(zg, n_keep, goal);
                const RamifiedSeries jinv = j.inv();
                for (std::uint32_t i = 0; i < cfg.r; ++i) {
                  TateSeries rhs = TateSeries::zero(ctx);
                  for (std::uint32_t l = 0; l < cfg.r; ++l)
                    rhs = rhs.add(TateSeries::apoly_in_t(ctx, gamma[i][l])
                                      .mul(base_t[l]));
                  worst = std::min(worst, img[i].to_tate(T).discrepancy(
                                              rhs.scalar_mul(jinv)));
                }
                ++used;
              } catch (const Error&) {
                // some images land within working precision of a lattice
                // vector and their exponentials cannot be certified; skip
                // those draws, the law is checked on certifiable ones
                continue;
              }
            }
            if (used < 10)
              fail(ErrorCode::Internal,
                   "fewer than 10 certifiable group elements in 40 draws");
            return worst;
          });
}

// ---------------------------------------------------------------------------
// uexp-leading: boundary behavior of h, the determinant form, and the
// scaled generating function as the first coordinate grows through three
// magnitudes.  Each family reports one record per sample with the previous
// sample's discrepancy plus one as its threshold, which encodes "strictly
// increasing and positive".

void suite_uexp(Ledger& led) {
  const RunConfig& cfg = *led.cfg;
  const std::int64_t goal = builder_goal(cfg);
  auto ctx = SeriesContext::create(cfg.p, cfg.e, cfg.w, boundary_cap(cfg));
  const std::size_t T = std::min<std::size_t>(cfg.t_trunc, 3);
  const std::size_t n_keep = static_cast<std::size_t>(cfg.agf_cutoff);
  const std::int64_t d_init = lattice_seed_depth(cfg);
  const bool odd_rank = cfg.r % 2 == 1;

  const auto exps = cfg.point_exponents();
  const std::vector<std::int64_t> tail_exps(exps.begin() + 1, exps.end());

  std::int64_t disc_h[3], disc_H[3], disc_s[3];
  std::string setup_error;
  try {
    const OmegaPoint zt = omega_point_standard(ctx, tail_exps);
    const RamifiedSeries pi = pi_tilde(ctx);
    const std::int64_t tail_goal = cfg.r == 2 ? rank1_goal(cfg) : goal;

    // (-1)^r h_{r-1}(zt)^q
    RamifiedSeries target_h = h_function(zt, goal, d_init).value.qpow(1);
    if (odd_rank) target_h = target_h.neg();

    // (-1)^r pi~ H_{r-1}^{(1)}(zt, t)
    const ModularData mdt = build_matrices(zt, T, tail_goal, n_keep, d_init);
    TateSeries target_H =
        H_series(mdt).closed.twist(1).scalar_mul(odd_rank ? pi.neg() : pi);

    // 1/(pi~ g~_{r-1}(zt)): the top module coefficient of A^{r-1} zt
    LatticeExp tail_tower(ctx, zt.z);
    const LinearPoly tail_exp = stable_exp(tail_tower, cfg.r - 1, goal, 12);
    const RamifiedSeries g_top =
        module_from_exp(ctx, tail_exp, cfg.r - 1).g[cfg.r - 1];
    const RamifiedSeries target_s = pi.mul(g_top).inv();

    for (std::int64_t M = 0; M <= 2; ++M) {
      auto sample_exps = exps;
      sample_exps[0] += M * cfg.w;
      const OmegaPoint z = omega_point_standard(ctx, sample_exps);
      const ModularData md = build_matrices(z, T, goal, n_keep, d_init);
      const std::int64_t depth = std::max<std::int64_t>(3, d_init + 2) + M;
      const RamifiedSeries u = uniformizer_u(z, depth);
      const RamifiedSeries u_inv = u.inv();

      disc_h[M] = discrepancy_val(md.h.mul(u_inv), target_h);
      disc_H[M] =
          H_series(md).closed.scalar_mul(u_inv).discrepancy(target_H);
      disc_s[M] = discrepancy_val(
          u.mul(md.s[0].twist(cfg.r - 1).eval(RamifiedSeries::theta(ctx))),
          target_s);
    }
  } catch (const Error& err) {
    setup_error = err.what();
  } catch (const std::exception& ex) {
    setup_error = ex.what();
  }
  if (!setup_error.empty()) {
    led.setup_failed(setup_error);
    return;
  }

  struct Family {
    const char* name;
    const char* identity;
    const std::int64_t* disc;
  };
  const Family families[] = {
      {"h over the uniformizer", "h/u -> (-1)^r h_(r-1)(zt)^q", disc_h},
      {"determinant form over the uniformizer",
       "H/u -> (-1)^r pi~ H_(r-1)^((1))(zt,t)", disc_H},
      {"scaled first generating function at theta",
       "u*s_1^((r-1))(theta) -> 1/(pi~ g~_(r-1)(zt))", disc_s},
  };
  for (const Family& fam : families) {
    for (std::int64_t M = 0; M <= 2; ++M) {
      const std::int64_t thr = M == 0 ? 1 : fam.disc[M - 1] + 1;
      const std::int64_t d = fam.disc[M];
      led.add(std::string(fam.name) + " (sample " + std::to_string(M) + ")",
              fam.identity, thr, [d] { return d; });
    }
  }
}

// ---------------------------------------------------------------------------

struct SuiteEntry {
  const char* name;
  void (*fn)(Ledger&);
};

const SuiteEntry kSuites[] = {
    {"kernel", suite_kernel},
    {"omega", suite_omega},
    {"carlitz", suite_carlitz},
    {"mainid", suite_mainid},
    {"funcH", suite_funcH},
    {"hecke-scalar", suite_hecke_scalar},
    {"hecke-vectorial", suite_hecke_vectorial},
    {"goss", suite_goss},
    {"chi", suite_chi},
    {"uexp-leading", suite_uexp},
};

std::vector<CheckRecord> run_named(const std::string& name,
                                   const RunConfig& cfg) {
  for (const SuiteEntry& entry : kSuites) {
    if (name != entry.name) continue;
    Ledger led;
    led.cfg = &cfg;
    led.suite = name;
    try {
      entry.fn(led);
    } catch (const Error& err) {
      led.setup_failed(err.what());
    } catch (const std::exception& ex) {
      led.setup_failed(ex.what());
    }
    return std::move(led.out);
  }
  fail(ErrorCode::ConfigInvalid, "unknown suite: " + name);
}

}  // namespace

std::vector<CheckRecord> run_suite(const std::string& name,
                                   const RunConfig& cfg) {
  validate_config(cfg);
  return run_named(name, cfg);
}

SuiteReport run_suites(const RunConfig& cfg) {
  validate_config(cfg);
  const auto selected = cfg.suite_names();

  // launch in canonical order (which also deduplicates the selection)
  std::vector<std::future<std::vector<CheckRecord>>> workers;
  for (const SuiteEntry& entry : kSuites) {
    if (std::find(selected.begin(), selected.end(), entry.name) ==
        selected.end())
      continue;
    workers.push_back(std::async(std::launch::async, run_named,
                                 std::string(entry.name), cfg));
  }

  SuiteReport rep;
  rep.config = cfg;
  rep.version = library_version();
  for (auto& w : workers)
    for (CheckRecord& rec : w.get()) rep.checks.push_back(std::move(rec));
  rep.finalize();
  return rep;
}

}  // namespace dmf
