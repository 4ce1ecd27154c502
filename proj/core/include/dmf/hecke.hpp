#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dmf/modular.hpp"

namespace dmf {

// ---------------------------------------------------------------------------
// Coset representatives.  For a monic irreducible p, the classes of the
// degree-p sublattices are represented by the upper-triangular matrices
// beta_{l,b}: the identity with column l replaced by
//     (b_1, ..., b_{l-1}, p, 0, ..., 0)^T,   deg b_i < deg p,
// so det(beta_{l,b}) = p.  There are q^{(l-1) deg p} choices for each l.

struct CosetRep {
  std::uint32_t ell = 0;      // 1-based index of the replaced column
  std::vector<APoly> column;  // the full column: b_1..b_{l-1}, p, zeros
  APolyMat matrix;
};

// All representatives for l = 1..r in canonical order: l ascending, then the
// free entries by index with b_1 varying fastest.  Count (budget-guarded):
// sum_{l=1}^{r} q^{(l-1) deg p}.
std::vector<CosetRep> coset_reps(const Fq& F, const APoly& p, std::uint32_t r);

// ---------------------------------------------------------------------------
// Slash operators and the Hecke sums.  Forms are passed as black-box
// evaluators so one engine serves the scalar forms (h_r and the closed
// specializations of H_r) and the vectorial generating functions alike.

using ScalarForm = std::function<RamifiedSeries(const OmegaPoint&)>;
using VectorForm = std::function<std::vector<TateSeries>(const OmegaPoint&)>;

// (f |_k gamma)(z) = j(gamma; z)^{-k} f(gamma . z)
RamifiedSeries slash_scalar(const ScalarForm& f, std::int64_t k,
                            const APolyMat& gamma, const OmegaPoint& z);

// T_{p,r}(f)(z) = p(theta)^k sum over the coset representatives of f |_k beta
RamifiedSeries hecke_scalar(const ScalarForm& f, std::int64_t k, const APoly& p,
                            const OmegaPoint& z);

// (P ||_{k,m} gamma)(z) = j^{-k} det(gbar)^{m-1} adj(gbar) P(gamma . z),
// where gbar renames theta to t in the entries of gamma.  The adjugate form
// keeps every matrix coefficient polynomial in t: det(gbar)^{-1} itself would
// not exist for the coset representatives, whose determinant p(t) has its
// roots inside the closed unit disk.  m < 1 therefore requires a unit
// determinant.
std::vector<TateSeries> slash_vectorial(const VectorForm& P, std::int64_t k,
                                        std::int64_t m, const APolyMat& gamma,
                                        const OmegaPoint& z);

// T_{p,r}(P)(z) = p(theta)^k sum over the coset representatives of
// P ||_{k,m} beta
std::vector<TateSeries> hecke_vectorial(const VectorForm& P, std::int64_t k,
                                        std::int64_t m, const APoly& p,
                                        const OmegaPoint& z);

// p^{1 + q + ... + q^{r-2}}, the eigenvalue of the rank-r eigenforms
// (h_r, the closed H_r values, and G_r entrywise); 1 at rank 1.
APoly hecke_eigenvalue(const Fq& F, const APoly& p, std::uint32_t r);

// ---------------------------------------------------------------------------
// Eigenform verification artifact.

struct HeckeReport {
  std::string op;  // "scalar" | "vectorial"
  APoly prime;
  std::uint32_t rank = 0;
  std::int64_t weight = 0;
  std::int64_t m = 0;  // type (scalar) / representation index (vectorial)
  std::string point;   // provenance of the evaluation point
  APoly eigenvalue;
  std::int64_t discrepancy = 0;
  std::int64_t threshold = 0;
  bool pass = false;  // pass <=> discrepancy >= threshold
};

HeckeReport hecke_report(std::string op, const Fq& F, const APoly& prime,
                         std::uint32_t rank, std::int64_t weight,
                         std::int64_t m, std::string point,
                         std::int64_t discrepancy, std::int64_t threshold);

// ---------------------------------------------------------------------------
// Lattice identities behind the coset sums, on depth-D truncated lattices.
//
// sum2_check, for 2 <= l <= r-1: valuation of
//   sum_{b_1 : deg b_1 < deg p} 1/e_{L'}(z_1 + b_1 z_l)  -  1/e_{L}(z_1)
// where L  is generated by z_2, ..., z_r and
//       L' by z_2 + b_2 z_l, ..., z_{l-1} + b_{l-1} z_l, p z_l, z_{l+1},
//       ..., z_r
// (the b_1-shifts sweep the cosets of L' in L).  b supplies b_2..b_{l-1}
// and must have l-2 entries.  The two truncations do not cancel exactly,
// so the discrepancy grows with D instead of saturating.
std::int64_t sum2_check(const OmegaPoint& z, const APoly& p, std::uint32_t ell,
                        std::int64_t D, const std::vector<APoly>& b = {});

// rel1_check, the l = r variant: with L' generated by (z_i + b_i)/p for
// i = 2..r-1 together with z_r, and x = (z_1 + b_1)/p, the scaling identity
//   e_{pL'}(p x) = p e_{L'}(x)
// holds exactly on depth-D truncations (lambda -> p lambda is a bijection of
// the truncated lattices), so the returned valuation saturates at working
// precision.  b supplies b_1..b_{r-1}.
std::int64_t rel1_check(const OmegaPoint& z, const APoly& p,
                        const std::vector<APoly>& b, std::int64_t D);

}  // namespace dmf
