#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmf/fq.hpp"
#include "dmf/series.hpp"
#include "dmf/tate.hpp"

namespace dmf {

// ---------------------------------------------------------------------------
// A verification run: the ground field, the rank, the uniformizer
// ramification, precision and truncation budgets, the Hecke prime, the base
// point, and which suites to run.  Everything a run needs is in here, so two
// runs with equal configs are reproducible coefficient for coefficient.

struct RunConfig {
  std::uint32_t p = 2;  // q = p^e
  std::uint32_t e = 1;
  std::uint32_t r = 2;          // rank, 2..4
  std::int64_t w = 2;           // pi^w = 1/theta; must be a multiple of q-1
  std::int64_t prec = 40;       // absolute precision target N (pi-units)
  std::int64_t t_trunc = 4;     // number of t-coefficients kept
  std::int64_t deg_bound = 1;   // starting depth for lattice/shell sums
  std::int64_t agf_cutoff = 6;  // exponential coefficients kept per module
  std::string prime = "T";      // Hecke prime as text ("T" or "θ" variable)

  // Exponents e_1, ..., e_r of the base point z_i = pi^{-e_i}; empty means
  // the descending default (r-1, ..., 1, 0).  The last entry must be 0 and
  // the exponents pairwise distinct modulo w (so suites that evaluate at a
  // point need w >= r; suites that never build a point do not care).
  std::vector<std::int64_t> point;

  std::vector<std::string> suites;  // empty means every suite
  std::int64_t slack = -1;          // threshold slack; negative means 3w

  std::uint64_t q() const;
  std::int64_t effective_slack() const { return slack < 0 ? 3 * w : slack; }
  // every check passes iff its discrepancy valuation reaches this
  std::int64_t threshold() const { return prec - effective_slack(); }
  std::vector<std::int64_t> point_exponents() const;  // resolved default
  std::vector<std::string> suite_names() const;       // resolved default
};

// Canonical suite order; selection and report assembly both follow it.
const std::vector<std::string>& all_suites();

// Structural validation: p prime and the field constructible, r in 2..4,
// positive budgets, (q-1) | w, the prime monic irreducible, a well-formed
// point when one is given, and the enumeration guard q^{r(D+1)} <= 2^24.
// Throws ConfigInvalid (or NotMonic / NotIrreducible / ParseError for the
// prime) on violation.
void validate_config(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Reports.  One record per executed check; a check passes iff its
// discrepancy valuation reaches its threshold.  A check that failed to
// compute at all carries the error text and kNoDiscrepancy.

inline constexpr std::int64_t kNoDiscrepancy = -kExactPrec;

struct CheckRecord {
  std::string suite;
  std::string name;      // what was checked, human-readable
  std::string identity;  // slug of the identity or property under test
  std::int64_t discrepancy = kNoDiscrepancy;  // valuation; kExactPrec = exact
  std::int64_t threshold = 0;
  bool pass = false;
  double wall_ms = 0.0;
  std::string error;  // nonempty when the check raised instead of measuring
};

struct SuiteReport {
  RunConfig config;
  std::string version;  // library version that produced the report
  std::vector<CheckRecord> checks;
  bool pass = false;  // conjunction of the per-check flags

  // recompute `pass` from the records
  void finalize();
};

std::string library_version();

// Deterministic JSON rendering (insertion-ordered keys, resolved config
// echo).  Timing fields are the only run-dependent content; leaving them out
// makes equal configs produce byte-identical documents.
std::string report_to_json(const SuiteReport& rep, bool include_timing = true);

// Fixed-width human-readable table of the same content.
std::string render_table(const SuiteReport& rep);

// ---------------------------------------------------------------------------
// Value serialization for the compute command.

// {"w": ..., "v": ..., "abs_prec": ..., "coeffs": [[F_p digits], ...]}:
// coefficient digits of pi^v, pi^{v+1}, ... up to the precision window.
std::string series_to_json(const RamifiedSeries& x);
// little-endian coefficient list of base-field element indices
std::string apoly_to_json(const APoly& a);
// {"truncated": ..., "coeffs": [series, ...]} with t^j coefficients in order
std::string tate_to_json(const TateSeries& f);

// ---------------------------------------------------------------------------
// Report schema.  The canonical text is compiled into the library and a
// byte-identical copy ships in share/report.schema.json; a test pins the two
// together.  The validator covers exactly the keywords the schema uses
// (type, enum, required, properties, additionalProperties, items,
// minimum, minItems) and rejects schemas that stray outside that subset, so
// the shipped document cannot silently outgrow the checker.

const std::string& report_schema();

// Throws ParseError naming the offending path on mismatch or malformed JSON.
void validate_json_against_schema(const std::string& json_text,
                                  const std::string& schema_text);

}  // namespace dmf
