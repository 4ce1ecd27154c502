#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dmf/drinfeld.hpp"

namespace dmf {

// ---------------------------------------------------------------------------
// Points of the rank-r period domain, normalized to last coordinate 1.

struct OmegaPoint {
  // How K_infinity-linear independence of the coordinates is witnessed:
  // either the valuations are pairwise distinct modulo w (checked directly),
  // or the point is the recorded image of a certified point under an
  // invertible matrix over A (which preserves independence exactly).
  enum class Certificate { DistinctValuations, MatrixImage };

  std::uint32_t r = 0;
  std::vector<RamifiedSeries> z;  // z[r-1] = 1 exactly
  Certificate certificate = Certificate::DistinctValuations;
  std::string provenance;

  const Ctx& ctx() const { return z.front().ctx(); }
};

// z_i = pi^{-e_i} for exponents e_1, ..., e_r with e_i pairwise distinct
// modulo w and e_r = 0; the distinctness forces independence.
OmegaPoint omega_point_standard(const Ctx& ctx,
                                const std::vector<std::int64_t>& exponents);

// (gamma . z, j(gamma; z)): j is the last row of gamma applied to z, the
// image has coordinates (row_i . z)/j and last coordinate exactly 1.
std::pair<OmegaPoint, RamifiedSeries> gl_action(const APolyMat& gamma,
                                                const OmegaPoint& z);

// Seeded product of elementary row operations and unit row scalings:
// an invertible r x r matrix over A with determinant in F_q^x.
APolyMat random_gl(const Fq& F, std::uint32_t r, std::uint64_t seed,
                   std::uint32_t n_factors = 12, std::uint32_t max_deg = 2);

// ---------------------------------------------------------------------------
// Eisenstein sums.  Infinite sums over tuples of polynomials are grouped by
// the outermost coordinate degree ("shells"); a sum is accepted once the
// per-shell term valuations have been strictly rising for two consecutive
// degrees and have cleared the goal, mirroring the tail certificates of the
// series kernel.

struct OuterTailCert {
  std::int64_t depth = 0;      // last shell degree that was added
  std::int64_t shell_val = 0;  // valuation lower bound of that shell
  std::int64_t goal = 0;
  std::uint64_t tuples = 0;    // total tuples enumerated
};

// E_k^{[i]}(z, t) = sum over nonzero a in A^r of a_i(t) / (a . z)^k, as a
// t-expansion modulo t^T; a_i(t) reads the coefficients of a_i against
// powers of t.  Exactly zero whenever k is not 1 modulo q-1 (scaling the
// tuple by F_q^x permutes the sum).  For r >= 2 the sum over the collapse
// coordinate a_m (m = r, or 1 when i = r) runs over all of A at once through
// the Goss polynomials of the rank-one lattice A z_m, so only the outer
// r-1 coordinates are enumerated, with shells certified from degree d_init
// on; rank 1 falls back to direct shell enumeration (budget-guarded).
TateSeries eisenstein_twisted(const OmegaPoint& z, std::int64_t k,
                              std::uint32_t i, std::size_t T,
                              std::int64_t goal, std::int64_t d_init = 1,
                              OuterTailCert* cert = nullptr);

// Literal truncation of the same sum to deg a_j <= D for every coordinate
// (the full finite box, nothing adaptive).  The inner coordinate is summed
// through the Goss polynomials of the depth-D truncated lattice, which
// regroups the box sum exactly.  Exponential in D; cross-check use only.
TateSeries eisenstein_depth_sum(const OmegaPoint& z, std::int64_t k,
                                std::uint32_t i, std::int64_t D,
                                std::size_t T);

// Eisenstein value with a congruence condition: for nu in F_q^r,
//   Eis_nu(z) = sum over a = theta^{-1} nu + b, b in A^r, of 1/(a . z),
// collapsed over b_r and certified shell by shell as above.
RamifiedSeries eis_nu(const OmegaPoint& z, const std::vector<FqElem>& nu,
                      std::int64_t goal, std::int64_t d_init = 1,
                      OuterTailCert* cert = nullptr);

// A scalar form value with its weight and type bookkeeping.
struct ModularValue {
  RamifiedSeries value;
  std::int64_t weight = 0;
  std::int64_t type = 0;  // residue modulo q-1
  std::string provenance;
};

// h_r(z) = pi~^{(1-q^r)/(q-1)} (-theta)^{1/(q-1)} prod over monic nu in
// F_q^r of Eis_nu(z); weight (q^r-1)/(q-1), type 1, never vanishing.
// Rank 1 is the constant -1 by convention.
ModularValue h_function(const OmegaPoint& z, std::int64_t goal,
                        std::int64_t d_init = 1,
                        OuterTailCert* cert = nullptr);

// ---------------------------------------------------------------------------
// The matrix apparatus at a point: the module of A^r z, the generating
// functions s_i of the coordinates, omega, pi~, h_r, and the matrices
//   E[j-1][i-1] = E^{[i]}_{q^{j-1}}(z, t)
//   F[i-1][j-1] = s_i^{(j-1)}(z, t)
//   C[i-1][j-1] = c_{q^{i-j}-1}^{(j-1)}(z, t) for i >= j, zero above,
// with c_{q^l-1}(z, t) = sum_{n=0}^{l} alpha_n beta_{l-n}^{q^n}/(theta^{q^n}-t)
// built from the exponential and logarithm coefficients of the module.
// They satisfy E F = -C entrywise, det F = omega/(pi~^{(q^r-1)/(q-1)} h_r)
// and det E = pi~^{(q^r-1)/(q-1)} h_r / omega^{(r)}.

struct ModularData {
  OmegaPoint z;
  std::size_t T = 0;
  std::int64_t goal = 0;

  ExpLogData mod;  // exponential/logarithm/module coefficients of A^r z
  ExpStabilization exp_cert;
  std::vector<AGF> s;  // s[i-1] = generating function of z_i
  TateSeries omega;    // t-expansion modulo t^T
  StabilizationCert omega_cert;
  RamifiedSeries pi;  // pi~
  RamifiedSeries h;   // h_r(z)
  OuterTailCert h_cert;

  TateMat E, F, C;
  OuterTailCert eis_cert;  // weakest shell certificate among the E entries
};

ModularData build_matrices(const OmegaPoint& z, std::size_t T,
                           std::int64_t goal, std::size_t n_keep,
                           std::int64_t d_init = 1);

// ---------------------------------------------------------------------------
// H_r(z, t), by two routes:
//   closed:    pi~^{(q^r-1)/(q-1)} h_r s_r^{(r-1)} / omega^{(r-1)}
//   det_route: determinant of the top-left (r-1) x (r-1) block of E
// (rank 1 has only the closed route, with h_1 = -1).
struct HSeriesResult {
  TateSeries closed;
  TateSeries det_route;
  std::int64_t agreement = 0;  // kExactPrec at rank 1
};
HSeriesResult H_series(const ModularData& md);

// H_r(z, theta^{q^n}) for n >= r-1, by two routes: the closed form
//   pi~^{(q^r-1)/(q-1)-q^n} D_{n-(r-1)}^{q^{r-1}} h_r(z) alpha_{n-(r-1)}^{q^{r-1}}
// and the ratio of the residues of s_r^{(r-1)} and omega^{(r-1)} at the
// shared simple pole (direct substitution of theta^{q^n} into the
// t-expansion is out of the disk of convergence, hence refused by design).
// Weight (q^{r-1}-1)/(q-1) + q^n, type 1.
struct HAtResult {
  ModularValue closed;
  RamifiedSeries pole_ratio;
  std::int64_t agreement = 0;
};
HAtResult H_at(const ModularData& md, std::int64_t n);

// G_i(z, t) = (pi~^{(q^r-1)/(q-1)} h_r / omega^{(r-1)}) (s_1^{(i-1)}, ...,
// s_r^{(i-1)})^T; the last entry of G_r is H_r(z, t).
std::vector<TateSeries> vectorial_G(const ModularData& md, std::uint32_t i);

// ---------------------------------------------------------------------------
// The chi apparatus over a rank r-1 base point zt: shared data and
//   chi_mu(z1, t) = (-1)^{mu-1} (pi~^{(q^{r-1}-1)/(q-1)} h_{r-1}(zt)/omega)
//                   * minor(D; row 1, column mu+1)
// where the rows of D below the first are the twists 0..r-2 of the vector
// (s(z1, t), s_1(zt, t), ..., s_{r-1}(zt, t)) of generating functions with
// respect to the module of A^{r-1} zt.  chi_mu shifts by a_mu|_{theta=t}
// when z1 shifts by a_1 zt_1 + ... + a_{r-1} zt_{r-1}.
struct ChiData {
  OmegaPoint zt;  // rank r-1
  std::size_t T = 0;
  std::int64_t goal = 0;

  ExpLogData mod;  // module of A^{r-1} zt
  ExpStabilization exp_cert;
  std::vector<AGF> s;  // generating functions of the zt coordinates
  TateSeries omega;
  RamifiedSeries pi;
  RamifiedSeries h;  // h_{r-1}(zt)
  OuterTailCert h_cert;
};

ChiData build_chi_data(const OmegaPoint& zt, std::size_t T, std::int64_t goal,
                       std::size_t n_keep, std::int64_t d_init = 1);

TateSeries chi(const ChiData& cd, const RamifiedSeries& z1, std::uint32_t mu);

// ---------------------------------------------------------------------------
// Uniformizers at infinity.  Both invert a truncated-lattice exponential of
// the tail point zt = (z_2, ..., z_r); they deliberately use different
// lattices and are not reconciled:
//   u(z)   = 1 / e_{A^{r-1} pi~ zt}(pi~ z_1)     (pi~-scaled basis)
//   u_a(z) = 1 / e_{A^{r-1} zt}(a(theta) z_1)    (unscaled basis)
// The truncation depth D must dominate the argument: every omitted lattice
// element has to exceed z_1 in absolute value, so D grows with |z_1|.
RamifiedSeries uniformizer_u(const OmegaPoint& z, std::int64_t D);
RamifiedSeries uniformizer_u_a(const OmegaPoint& z, const APoly& a,
                               std::int64_t D);

}  // namespace dmf
