#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmch/report.hpp"

using namespace cmch;

TEST_CASE("reports and the schema round-trip through serialize/parse") {
  EnvConfig cfg;
  cfg.N = 0;
  cfg.mode = Mode::Base;
  cfg.seed = 81;
  auto env = build_environment<Exact>(cfg);
  json rep = run_suites(env, {"b2c2", "detZ", "keyformula"}, "exact");
  CHECK(rep["pass"].get<bool>());
  json back = json::parse(rep.dump());
  CHECK(back == rep);
  json schema = report_schema();
  CHECK(json::parse(schema.dump()) == schema);
  // identical configs give byte-identical reports
  auto env2 = build_environment<Exact>(cfg);
  json rep2 = run_suites(env2, {"b2c2", "detZ", "keyformula"}, "exact");
  CHECK(rep.dump() == rep2.dump());
}

TEST_CASE("series and matrix serialization surfaces") {
  EnvConfig cfg;
  cfg.N = 0;
  cfg.mode = Mode::Base;
  cfg.seed = 82;
  auto env = build_environment<Exact>(cfg);
  json s = series_to_json(env.h.Y.e12.val);
  CHECK(s.contains("window"));
  CHECK(s.contains("parity"));
  CHECK(s["parity"] == "odd");
  CHECK(s["window"][0].is_null());  // bounded-below series
  json m = matrix_to_json(env.h.Y);
  CHECK(m["trace_free"].get<bool>());
  CHECK(m["twisted"].get<bool>());
}

TEST_CASE("float backend runs the same surfaces under a tolerance") {
  EnvConfig cfg;
  cfg.N = 0;
  cfg.mode = Mode::Base;
  cfg.seed = 83;
  cfg.tol = 1e-8;
  auto env = build_environment<Fp>(cfg);
  json rep = run_suites(env, {"b2c2", "YVV", "detZ", "keyformula"}, "float");
  CHECK(rep["pass"].get<bool>());
}
