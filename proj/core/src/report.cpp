#include "dmf/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "dmf/errors.hpp"
#include "json.hpp"

namespace dmf {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// RunConfig

std::uint64_t RunConfig::q() const {
  std::uint64_t v = 1;
  for (std::uint32_t i = 0; i < e; ++i) v *= p;
  return v;
}

std::vector<std::int64_t> RunConfig::point_exponents() const {
  if (!point.empty()) return point;
  std::vector<std::int64_t> exps(r);
  for (std::uint32_t i = 0; i < r; ++i) exps[i] = static_cast<std::int64_t>(r - 1 - i);
  return exps;
}

std::vector<std::string> RunConfig::suite_names() const {
  if (!suites.empty()) return suites;
  return all_suites();
}

const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> names = {
      "kernel",       "omega",          "carlitz", "mainid", "funcH",
      "hecke-scalar", "hecke-vectorial", "goss",    "chi",    "uexp-leading",
  };
  return names;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.r < 2 || cfg.r > 4)
    fail(ErrorCode::ConfigInvalid, "rank must be between 2 and 4");
  if (cfg.w < 1) fail(ErrorCode::ConfigInvalid, "ramification must be positive");
  if (cfg.prec < 1) fail(ErrorCode::ConfigInvalid, "precision must be positive");
  if (cfg.t_trunc < 1)
    fail(ErrorCode::ConfigInvalid, "t-truncation must be positive");
  if (cfg.deg_bound < 0)
    fail(ErrorCode::ConfigInvalid, "degree bound must be nonnegative");
  if (cfg.agf_cutoff < 2)
    fail(ErrorCode::ConfigInvalid, "generating-function cutoff must be at least 2");
  if (cfg.threshold() < 1)
    fail(ErrorCode::ConfigInvalid, "slack leaves no positive pass threshold");

  // validates p prime and p^e within table range
  const FieldDesc F = fq_init(cfg.p, cfg.e);
  const std::uint64_t q = cfg.q();
  if (cfg.w % static_cast<std::int64_t>(q - 1) != 0)
    fail(ErrorCode::ConfigInvalid, "q-1 must divide the ramification w");

  // prime: parseable, monic, irreducible
  const APoly prime = apoly_parse(F.base, cfg.prime);
  if (!apoly_is_monic(F.base, prime))
    fail(ErrorCode::NotMonic, "configured prime is not monic");
  if (prime.degree() < 1 || !apoly_is_irreducible(F.base, prime))
    fail(ErrorCode::NotIrreducible, "configured prime is not irreducible");

  if (!cfg.point.empty()) {
    if (cfg.point.size() != cfg.r)
      fail(ErrorCode::ConfigInvalid, "point must list one exponent per rank");
    if (cfg.point.back() != 0)
      fail(ErrorCode::ConfigInvalid, "last point exponent must be 0");
    for (std::size_t i = 0; i < cfg.point.size(); ++i)
      for (std::size_t j = i + 1; j < cfg.point.size(); ++j) {
        const std::int64_t d = (cfg.point[i] - cfg.point[j]) % cfg.w;
        if (d == 0)
          fail(ErrorCode::ConfigInvalid,
               "point exponents must be pairwise distinct modulo w");
      }
  }

  // enumeration budget: q^{r(D+1)} <= 2^24
  const std::int64_t dims = static_cast<std::int64_t>(cfg.r) * (cfg.deg_bound + 1);
  std::uint64_t space = 1;
  for (std::int64_t i = 0; i < dims; ++i) {
    space *= q;
    if (space > (std::uint64_t(1) << 24))
      fail(ErrorCode::ConfigInvalid,
           "lattice budget exceeded: q^{r(D+1)} must stay within 2^24");
  }

  for (const auto& s : cfg.suites) {
    const auto& all = all_suites();
    if (std::find(all.begin(), all.end(), s) == all.end())
      fail(ErrorCode::ConfigInvalid, "unknown suite: " + s);
  }
}

// ---------------------------------------------------------------------------
// Reports

void SuiteReport::finalize() {
  pass = true;
  for (const auto& c : checks) pass = pass && c.pass;
}

std::string library_version() {
#ifdef DMF_VERSION_STRING
  return DMF_VERSION_STRING;
#else
  return "0.0.0";
#endif
}

namespace {

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["p"] = cfg.p;
  j["e"] = cfg.e;
  j["q"] = cfg.q();
  j["rank"] = cfg.r;
  j["ramification"] = cfg.w;
  j["prec"] = cfg.prec;
  j["t_trunc"] = cfg.t_trunc;
  j["deg_bound"] = cfg.deg_bound;
  j["agf_cutoff"] = cfg.agf_cutoff;
  j["prime"] = cfg.prime;
  j["point"] = cfg.point_exponents();
  j["suites"] = cfg.suite_names();
  j["slack"] = cfg.effective_slack();
  j["threshold"] = cfg.threshold();
  return j;
}

ordered_json check_json(const CheckRecord& c, bool include_timing) {
  ordered_json j;
  j["suite"] = c.suite;
  j["name"] = c.name;
  j["identity"] = c.identity;
  j["discrepancy"] = c.discrepancy;
  j["threshold"] = c.threshold;
  j["pass"] = c.pass;
  if (include_timing) j["wall_ms"] = c.wall_ms;
  if (!c.error.empty()) j["error"] = c.error;
  return j;
}

}  // namespace

std::string report_to_json(const SuiteReport& rep, bool include_timing) {
  ordered_json j;
  j["tool"] = "dmf";
  j["version"] = rep.version;
  j["config"] = config_json(rep.config);
  j["checks"] = ordered_json::array();
  for (const auto& c : rep.checks) j["checks"].push_back(check_json(c, include_timing));
  j["pass"] = rep.pass;
  return j.dump(2) + "\n";
}

namespace {

std::string disc_text(const CheckRecord& c) {
  if (!c.error.empty()) return "-";
  if (c.discrepancy >= kExactPrec) return "exact";
  return std::to_string(c.discrepancy);
}

}  // namespace

std::string render_table(const SuiteReport& rep) {
  const RunConfig& cfg = rep.config;
  std::ostringstream out;
  out << "verification report (library " << rep.version << ")\n";
  out << "q = " << cfg.q() << " (p = " << cfg.p << ", e = " << cfg.e
      << ")  rank = " << cfg.r << "  w = " << cfg.w << "  prec = " << cfg.prec
      << "  t-trunc = " << cfg.t_trunc << "\n";
  out << "deg-bound = " << cfg.deg_bound << "  agf-cutoff = " << cfg.agf_cutoff
      << "  prime = " << cfg.prime << "  point = [";
  const auto exps = cfg.point_exponents();
  for (std::size_t i = 0; i < exps.size(); ++i)
    out << (i ? "," : "") << exps[i];
  out << "]  slack = " << cfg.effective_slack() << "  threshold = "
      << cfg.threshold() << "\n\n";

  std::size_t name_w = 4;
  for (const auto& c : rep.checks)
    name_w = std::max(name_w, c.suite.size() + c.name.size() + 2);
  out << std::left << std::setw(static_cast<int>(name_w) + 2) << "check"
      << std::right << std::setw(12) << "disc" << std::setw(8) << "thr"
      << std::setw(10) << "ms" << "  result\n";
  for (const auto& c : rep.checks) {
    out << std::left << std::setw(static_cast<int>(name_w) + 2)
        << (c.suite + ": " + c.name) << std::right << std::setw(12)
        << disc_text(c) << std::setw(8) << c.threshold << std::setw(10)
        << std::fixed << std::setprecision(1) << c.wall_ms
        << (c.pass ? "  pass" : "  FAIL");
    if (!c.error.empty()) out << "  [" << c.error << "]";
    out << "\n";
  }
  out << "\noverall: " << (rep.pass ? "PASS" : "FAIL") << " (" << rep.checks.size()
      << " checks)\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Value serialization

std::string series_to_json(const RamifiedSeries& x) {
  const Fq& W = x.ctx()->field.work;
  ordered_json j;
  j["w"] = x.ctx()->w;
  j["v"] = x.leading_exp();
  j["abs_prec"] = x.prec();
  j["coeffs"] = ordered_json::array();
  for (const FqElem c : x.coeff()) j["coeffs"].push_back(W.digits(c));
  return j.dump();
}

std::string apoly_to_json(const APoly& a) {
  return ordered_json(a.coeff).dump();
}

std::string tate_to_json(const TateSeries& f) {
  ordered_json j;
  j["truncated"] = f.truncated();
  j["coeffs"] = ordered_json::array();
  for (std::size_t k = 0; k < f.known(); ++k)
    j["coeffs"].push_back(ordered_json::parse(series_to_json(f.coeff(k))));
  return j.dump();
}

// ---------------------------------------------------------------------------
// Schema

const std::string& report_schema() {
  static const std::string text = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "verification report",
  "type": "object",
  "required": ["tool", "version", "config", "checks", "pass"],
  "additionalProperties": false,
  "properties": {
    "tool": {"type": "string", "enum": ["dmf"]},
    "version": {"type": "string"},
    "config": {
      "type": "object",
      "required": ["p", "e", "q", "rank", "ramification", "prec", "t_trunc",
                   "deg_bound", "agf_cutoff", "prime", "point", "suites",
                   "slack", "threshold"],
      "additionalProperties": false,
      "properties": {
        "p": {"type": "integer", "minimum": 2},
        "e": {"type": "integer", "minimum": 1},
        "q": {"type": "integer", "minimum": 2},
        "rank": {"type": "integer", "minimum": 2},
        "ramification": {"type": "integer", "minimum": 1},
        "prec": {"type": "integer", "minimum": 1},
        "t_trunc": {"type": "integer", "minimum": 1},
        "deg_bound": {"type": "integer", "minimum": 0},
        "agf_cutoff": {"type": "integer", "minimum": 2},
        "prime": {"type": "string"},
        "point": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        "suites": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "slack": {"type": "integer", "minimum": 0},
        "threshold": {"type": "integer"}
      }
    },
    "checks": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["suite", "name", "identity", "discrepancy", "threshold",
                     "pass"],
        "additionalProperties": false,
        "properties": {
          "suite": {"type": "string"},
          "name": {"type": "string"},
          "identity": {"type": "string"},
          "discrepancy": {"type": "integer"},
          "threshold": {"type": "integer"},
          "pass": {"type": "boolean"},
          "wall_ms": {"type": "number", "minimum": 0},
          "error": {"type": "string"}
        }
      }
    },
    "pass": {"type": "boolean"}
  }
}
)";
  return text;
}

namespace {

using json = nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  fail(ErrorCode::ParseError, "schema violation at " + path + ": " + what);
}

void check_node(const json& schema, const json& value, const std::string& path) {
  static const char* known[] = {"$schema",    "title",      "description",
                                "type",       "enum",       "required",
                                "properties", "additionalProperties",
                                "items",      "minimum",    "minItems"};
  for (auto it = schema.begin(); it != schema.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok)
      fail(ErrorCode::Internal,
           "schema keyword outside the supported subset: " + it.key());
  }

  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    bool ok = false;
    if (t == "object") ok = value.is_object();
    else if (t == "array") ok = value.is_array();
    else if (t == "string") ok = value.is_string();
    else if (t == "integer") ok = value.is_number_integer();
    else if (t == "number") ok = value.is_number();
    else if (t == "boolean") ok = value.is_boolean();
    else fail(ErrorCode::Internal, "schema type outside the supported subset: " + t);
    if (!ok) schema_fail(path, "expected " + t);
  }

  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& cand : schema["enum"]) ok = ok || cand == value;
    if (!ok) schema_fail(path, "value not among the allowed constants");
  }

  if (schema.contains("minimum") && value.is_number()) {
    if (value.get<double>() < schema["minimum"].get<double>())
      schema_fail(path, "value below minimum");
  }

  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>()))
          schema_fail(path, "missing required property " + key.get<std::string>());
    const json props =
        schema.contains("properties") ? schema["properties"] : json::object();
    for (auto it = value.begin(); it != value.end(); ++it) {
      if (props.contains(it.key())) {
        check_node(props[it.key()], it.value(), path + "/" + it.key());
      } else if (schema.contains("additionalProperties") &&
                 schema["additionalProperties"].is_boolean() &&
                 !schema["additionalProperties"].get<bool>()) {
        schema_fail(path, "unexpected property " + it.key());
      }
    }
  }

  if (value.is_array()) {
    if (schema.contains("minItems") &&
        value.size() < schema["minItems"].get<std::size_t>())
      schema_fail(path, "array shorter than minItems");
    if (schema.contains("items"))
      for (std::size_t i = 0; i < value.size(); ++i)
        check_node(schema["items"], value[i], path + "/" + std::to_string(i));
  }
}

}  // namespace

void validate_json_against_schema(const std::string& json_text,
                                  const std::string& schema_text) {
  json value, schema;
  try {
    value = json::parse(json_text);
  } catch (const std::exception& ex) {
    fail(ErrorCode::ParseError, std::string("report is not valid JSON: ") + ex.what());
  }
  try {
    schema = json::parse(schema_text);
  } catch (const std::exception& ex) {
    fail(ErrorCode::ParseError, std::string("schema is not valid JSON: ") + ex.what());
  }
  check_node(schema, value, "");
}

}  // namespace dmf
