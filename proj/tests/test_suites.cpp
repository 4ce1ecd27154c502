#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "dmf/suites.hpp"
#include "doctest.h"

using namespace dmf;

namespace {

RunConfig base_config() {
  RunConfig cfg;
  cfg.p = 2;
  cfg.e = 1;
  cfg.r = 2;
  cfg.w = 2;
  cfg.prec = 40;
  cfg.t_trunc = 4;
  cfg.deg_bound = 1;
  cfg.agf_cutoff = 6;
  cfg.prime = "T";
  return cfg;
}

void expect_all_pass(const std::vector<CheckRecord>& recs,
                     const std::string& suite) {
  REQUIRE(!recs.empty());
  for (const auto& rec : recs) {
    CAPTURE(rec.name);
    CAPTURE(rec.error);
    CAPTURE(rec.discrepancy);
    CAPTURE(rec.threshold);
    CHECK(rec.suite == suite);
    CHECK(rec.error.empty());
    CHECK(rec.pass);
  }
}

}  // namespace

TEST_CASE("arithmetic suites pass over the prime fields") {
  for (const std::uint32_t p : {2u, 3u}) {
    RunConfig cfg = base_config();
    cfg.p = p;
    for (const char* name : {"kernel", "omega", "carlitz", "goss"}) {
      CAPTURE(p);
      CAPTURE(name);
      expect_all_pass(run_suite(name, cfg), name);
    }
  }
}

TEST_CASE("arithmetic suites pass over the degree-two extension") {
  RunConfig cfg = base_config();
  cfg.p = 2;
  cfg.e = 2;  // q = 4
  cfg.w = 3;
  for (const char* name : {"kernel", "omega", "goss"}) {
    CAPTURE(name);
    expect_all_pass(run_suite(name, cfg), name);
  }
}

TEST_CASE("the omega run at unit ramification meets its pinned floor") {
  RunConfig cfg = base_config();
  cfg.w = 1;
  cfg.prec = 40;
  cfg.t_trunc = 8;
  cfg.suites = {"omega"};
  const auto recs = run_suite("omega", cfg);
  expect_all_pass(recs, "omega");
  const auto it =
      std::find_if(recs.begin(), recs.end(), [](const CheckRecord& rec) {
        return rec.name == "functional equation";
      });
  REQUIRE(it != recs.end());
  CHECK(it->discrepancy >= 39);
}

TEST_CASE("matrix suites pass at the rank-two default point") {
  const RunConfig cfg = base_config();
  for (const char* name : {"mainid", "funcH"}) {
    CAPTURE(name);
    expect_all_pass(run_suite(name, cfg), name);
  }
}

TEST_CASE("hecke suites pass at the rank-two default point") {
  const RunConfig cfg = base_config();
  for (const char* name : {"hecke-scalar", "hecke-vectorial"}) {
    CAPTURE(name);
    expect_all_pass(run_suite(name, cfg), name);
  }
}

TEST_CASE("chi and boundary suites pass at the rank-two default point") {
  const RunConfig cfg = base_config();
  for (const char* name : {"chi", "uexp-leading"}) {
    CAPTURE(name);
    expect_all_pass(run_suite(name, cfg), name);
  }
}

TEST_CASE("a point that cannot be certified becomes a failed record") {
  RunConfig cfg = base_config();
  cfg.r = 3;  // default exponents {2,1,0} collide modulo w = 2
  cfg.suites = {"mainid"};
  const SuiteReport rep = run_suites(cfg);
  CHECK(!rep.pass);
  REQUIRE(!rep.checks.empty());
  CHECK(rep.checks.front().name == "setup");
  CHECK(!rep.checks.front().error.empty());
  CHECK(!rep.checks.front().pass);
}

TEST_CASE("suite selection is validated") {
  RunConfig cfg = base_config();
  CHECK_THROWS_AS(run_suite("nonesuch", cfg), Error);
  cfg.suites = {"nonesuch"};
  CHECK_THROWS_AS(run_suites(cfg), Error);
}

TEST_CASE("reports are canonical, deterministic, and schema-valid") {
  RunConfig cfg = base_config();
  cfg.suites = {"goss", "omega", "kernel"};  // deliberately out of order

  const SuiteReport rep = run_suites(cfg);
  CHECK(rep.pass);
  CHECK(rep.version == library_version());

  // canonical assembly order regardless of the selection order
  REQUIRE(!rep.checks.empty());
  CHECK(rep.checks.front().suite == "kernel");
  CHECK(rep.checks.back().suite == "goss");
  std::vector<std::string> seen;
  for (const auto& rec : rep.checks)
    if (seen.empty() || seen.back() != rec.suite) seen.push_back(rec.suite);
  CHECK(seen == std::vector<std::string>{"kernel", "omega", "goss"});

  // byte-identical reruns modulo timing
  const SuiteReport rep2 = run_suites(cfg);
  CHECK(report_to_json(rep, false) == report_to_json(rep2, false));

  // the emitted document matches the shipped schema, timing included or not
  CHECK_NOTHROW(
      validate_json_against_schema(report_to_json(rep, true), report_schema()));
  CHECK_NOTHROW(validate_json_against_schema(report_to_json(rep, false),
                                             report_schema()));
}
