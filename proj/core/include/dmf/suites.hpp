#pragma once

#include <string>
#include <vector>

#include "dmf/report.hpp"

namespace dmf {

// Runs one named verification suite against the configured field, rank,
// precision and point, and returns its check records in execution order.
// A check that throws is recorded as a failed check carrying the error
// text; only configuration errors escape as exceptions.
std::vector<CheckRecord> run_suite(const std::string& name,
                                   const RunConfig& cfg);

// Runs the configured suite selection, one concurrent worker per suite, and
// assembles the records in the canonical suite order regardless of the
// selection order.  The returned report echoes the resolved config and the
// library version and has `pass` folded over all records.
SuiteReport run_suites(const RunConfig& cfg);

}  // namespace dmf
