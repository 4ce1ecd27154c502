#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>
#include <sstream>

#include "dmf/report.hpp"
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

CheckRecord sample_check(std::string suite, std::string name, std::int64_t disc,
                         std::int64_t thr) {
  CheckRecord c;
  c.suite = std::move(suite);
  c.name = std::move(name);
  c.identity = "sample";
  c.discrepancy = disc;
  c.threshold = thr;
  c.pass = disc >= thr;
  c.wall_ms = 1.5;
  return c;
}

bool code_is(const Error& err, ErrorCode c) { return err.code() == c; }

}  // namespace

TEST_CASE("configs resolve their defaults") {
  RunConfig cfg = base_config();
  CHECK(cfg.q() == 2);
  CHECK(cfg.effective_slack() == 6);
  CHECK(cfg.threshold() == 34);
  CHECK(cfg.point_exponents() == std::vector<std::int64_t>{1, 0});
  CHECK(cfg.suite_names() == all_suites());
  CHECK(all_suites().front() == "kernel");
  CHECK(all_suites().back() == "uexp-leading");

  cfg.r = 3;
  cfg.slack = 4;
  cfg.point = {5, 1, 0};
  cfg.suites = {"omega", "goss"};
  CHECK(cfg.effective_slack() == 4);
  CHECK(cfg.threshold() == 36);
  CHECK(cfg.point_exponents() == std::vector<std::int64_t>{5, 1, 0});
  CHECK(cfg.suite_names() == std::vector<std::string>{"omega", "goss"});

  RunConfig wide = base_config();
  wide.p = 3;
  wide.e = 2;
  CHECK(wide.q() == 9);
}

TEST_CASE("config validation accepts the working shapes") {
  CHECK_NOTHROW(validate_config(base_config()));

  RunConfig odd = base_config();
  odd.p = 3;
  odd.w = 2;
  odd.prime = "T+1";
  CHECK_NOTHROW(validate_config(odd));

  // a point-free selection does not need w >= r, only (q-1) | w
  RunConfig flat = base_config();
  flat.w = 1;
  flat.prec = 40;
  flat.t_trunc = 8;
  flat.suites = {"omega"};
  CHECK_NOTHROW(validate_config(flat));

  RunConfig ext = base_config();
  ext.p = 2;
  ext.e = 2;  // q = 4
  ext.w = 3;
  ext.prime = "T^2+T+1";  // reducibility is taken over F_4: stays irreducible?
  // T^2+T+1 factors over F_4; use a degree-1 prime instead
  ext.prime = "T";
  CHECK_NOTHROW(validate_config(ext));
}

TEST_CASE("config validation rejects each malformed field") {
  auto expect = [](RunConfig cfg, ErrorCode code) {
    try {
      validate_config(cfg);
      FAIL_CHECK("expected a validation error");
    } catch (const Error& err) {
      CHECK(code_is(err, code));
    }
  };

  RunConfig cfg = base_config();
  cfg.p = 3;
  cfg.w = 1;  // q-1 = 2 does not divide 1
  expect(cfg, ErrorCode::ConfigInvalid);

  cfg = base_config();
  cfg.r = 1;
  expect(cfg, ErrorCode::ConfigInvalid);
  cfg.r = 5;
  expect(cfg, ErrorCode::ConfigInvalid);

  cfg = base_config();
  cfg.prec = 0;
  expect(cfg, ErrorCode::ConfigInvalid);

  cfg = base_config();
  cfg.t_trunc = 0;
  expect(cfg, ErrorCode::ConfigInvalid);

  cfg = base_config();
  cfg.agf_cutoff = 1;
  expect(cfg, ErrorCode::ConfigInvalid);

  cfg = base_config();
  cfg.slack = 40;  // threshold would be zero
  expect(cfg, ErrorCode::ConfigInvalid);

  cfg = base_config();
  cfg.prime = "T^2+1";  // (T+1)^2 over F_2
  expect(cfg, ErrorCode::NotIrreducible);
  cfg.prime = "1";
  expect(cfg, ErrorCode::NotIrreducible);

  cfg = base_config();
  cfg.p = 3;
  cfg.prime = "2T";
  expect(cfg, ErrorCode::NotMonic);

  cfg = base_config();
  cfg.prime = "T+%";
  expect(cfg, ErrorCode::ParseError);

  cfg = base_config();
  cfg.point = {1, 2, 0};  // wrong arity for rank 2
  expect(cfg, ErrorCode::ConfigInvalid);
  cfg.point = {2, 1};  // last exponent nonzero
  expect(cfg, ErrorCode::ConfigInvalid);
  cfg.point = {2, 0};  // collides with 0 modulo w = 2
  expect(cfg, ErrorCode::ConfigInvalid);

  cfg = base_config();
  cfg.p = 3;
  cfg.w = 2;
  cfg.r = 4;
  cfg.deg_bound = 3;  // 3^16 > 2^24
  expect(cfg, ErrorCode::ConfigInvalid);

  cfg = base_config();
  cfg.suites = {"omega", "nonesuch"};
  expect(cfg, ErrorCode::ConfigInvalid);
}

TEST_CASE("reports serialize deterministically and echo the config") {
  SuiteReport rep;
  rep.config = base_config();
  rep.version = library_version();
  rep.checks.push_back(sample_check("omega", "functional equation", 59, 34));
  rep.checks.push_back(sample_check("kernel", "inverse roundtrip", kExactPrec, 34));
  rep.finalize();
  CHECK(rep.pass);

  const std::string a = report_to_json(rep, false);
  const std::string b = report_to_json(rep, false);
  CHECK(a == b);
  CHECK(a.find("wall_ms") == std::string::npos);
  CHECK(report_to_json(rep, true).find("wall_ms") != std::string::npos);
  CHECK(a.find("\"threshold\": 34") != std::string::npos);
  CHECK(a.find("\"point\": [") != std::string::npos);
  CHECK(a.find("\"pass\": true") != std::string::npos);

  // a failing check flips the aggregate
  rep.checks.push_back(sample_check("omega", "too strict", 10, 34));
  rep.finalize();
  CHECK(!rep.pass);
  CHECK(report_to_json(rep, false).find("\"pass\": false") != std::string::npos);

  // error-carrying records keep their message
  CheckRecord broken;
  broken.suite = "chi";
  broken.name = "shift law";
  broken.identity = "sample";
  broken.threshold = 34;
  broken.error = "PoleHit: lattice point";
  rep.checks.push_back(broken);
  rep.finalize();
  const std::string with_err = report_to_json(rep, false);
  CHECK(with_err.find("PoleHit: lattice point") != std::string::npos);

  const std::string table = render_table(rep);
  CHECK(table.find("overall: FAIL") != std::string::npos);
  CHECK(table.find("exact") != std::string::npos);
  CHECK(table.find("omega: functional equation") != std::string::npos);
}

TEST_CASE("the shipped schema file matches the compiled text") {
  std::ifstream in(DMF_SCHEMA_FILE, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == report_schema());
}

TEST_CASE("reports validate against the schema and corruption is caught") {
  SuiteReport rep;
  rep.config = base_config();
  rep.version = library_version();
  rep.checks.push_back(sample_check("omega", "functional equation", 59, 34));
  rep.finalize();

  for (const bool timing : {false, true})
    CHECK_NOTHROW(
        validate_json_against_schema(report_to_json(rep, timing), report_schema()));

  auto expect_reject = [](const std::string& text) {
    try {
      validate_json_against_schema(text, report_schema());
      FAIL_CHECK("expected a schema violation");
    } catch (const Error& err) {
      CHECK(code_is(err, ErrorCode::ParseError));
    }
  };

  const std::string good = report_to_json(rep, false);

  // not JSON at all
  expect_reject("{ nope");

  // wrong tool constant
  std::string bad = good;
  bad.replace(bad.find("\"dmf\""), 5, "\"oof\"");
  expect_reject(bad);

  // missing required field
  bad = good;
  const auto pos = bad.find("  \"version\"");
  bad.erase(pos, bad.find('\n', pos) - pos + 1);
  expect_reject(bad);

  // type violation: pass as string
  bad = good;
  bad.replace(bad.rfind("\"pass\": true"), 12, "\"pass\": \"yes\"");
  expect_reject(bad);

  // unexpected property
  bad = good;
  bad.replace(bad.find("\"tool\""), 6, "\"tool2\"");
  expect_reject(bad);

  // schemas outside the supported keyword subset are refused loudly
  try {
    validate_json_against_schema("{}", "{\"patternProperties\": {}}");
    FAIL_CHECK("expected an unsupported-keyword error");
  } catch (const Error& err) {
    CHECK(code_is(err, ErrorCode::Internal));
  }
}

TEST_CASE("values serialize with digit-level coefficients") {
  auto ctx3 = SeriesContext::create(3, 1, 2, 30);
  const RamifiedSeries x =
      RamifiedSeries::from_coeffs(ctx3, -3, {1, 0, 2}, 5);
  CHECK(series_to_json(x) ==
        "{\"w\":2,\"v\":-3,\"abs_prec\":5,\"coeffs\":[[1],[0],[2]]}");

  APoly a;
  a.coeff = {2, 0, 1};  // T^2 + 2
  CHECK(apoly_to_json(a) == "[2,0,1]");

  const TateSeries f = TateSeries::apoly_in_t(ctx3, a);
  const std::string ser = tate_to_json(f);
  CHECK(ser.find("\"truncated\":false") != std::string::npos);
  CHECK(ser.find("\"coeffs\":[") != std::string::npos);

  // extension coefficients surface as digit lists
  auto ctx4 = SeriesContext::create(2, 2, 3, 30);
  const Fq& W = ctx4->field.work;
  const FqElem g = W.from_digits({0, 1});
  const RamifiedSeries y = RamifiedSeries::monomial(ctx4, g, 0, 2);
  CHECK(series_to_json(y) ==
        "{\"w\":3,\"v\":0,\"abs_prec\":2,\"coeffs\":[[0,1]]}");
}
