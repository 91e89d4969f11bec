#pragma once

// JSON report and serialization surfaces. Reports are deterministic for
// a fixed config and seed on the exact backend.

#include <json.hpp>

#include "cmch/suites.hpp"

namespace cmch {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchema = 1;

using json = nlohmann::ordered_json;

template <class K>
json series_to_json(const LaurentSeries<K>& s) {
  json j;
  j["window"] = json::array();
  j["window"].push_back(s.lo == NEG_INF ? json(nullptr) : json(s.lo));
  j["window"].push_back(s.hi == POS_INF ? json(nullptr) : json(s.hi));
  j["parity"] = parity_name(s.parity());
  json coeffs = json::object();
  for (auto& [d, c] : s.coeffs) coeffs[std::to_string(d)] = ScalarOps<K>::str(c);
  j["coeffs"] = std::move(coeffs);
  return j;
}

template <class K>
json matrix_to_json(const LoopMatrix<K>& m) {
  json j;
  j["entries"] = {{series_to_json(m.e11.val), series_to_json(m.e12.val)},
                  {series_to_json(m.e21.val), series_to_json(m.e22.val)}};
  j["trace_free"] = m.trace_free_on_window();
  j["twisted"] = m.twisted_pattern();
  return j;
}

inline json check_to_json(const Check& c) {
  json j;
  j["identity"] = c.label;
  j["pass"] = c.pass;
  j["coverage"] = json::array();
  j["coverage"].push_back(c.cov_lo == NEG_INF ? json(nullptr) : json(c.cov_lo));
  j["coverage"].push_back(c.cov_hi == POS_INF ? json(nullptr) : json(c.cov_hi));
  j["entries"] = c.entries;
  j["max_magnitude"] = c.max_mag;
  json rows = json::array();
  for (auto& r : c.bad) {
    json row;
    row["direction"] = r.where;
    row["degree"] = r.degree;
    row["magnitude"] = r.magnitude;
    row["value"] = r.value;
    rows.push_back(std::move(row));
  }
  j["failures"] = std::move(rows);
  return j;
}

template <class K>
json config_to_json(const EnvConfig& cfg, const char* backend) {
  json j;
  j["N"] = cfg.N;
  j["K"] = cfg.Kvir;
  j["vir_lo"] = cfg.vir_lo;
  j["mode"] = mode_name(cfg.mode);
  j["window"] = {cfg.rep_lo, cfg.rep_hi};
  j["seed"] = cfg.seed;
  j["backend"] = backend;
  j["order"] = cfg.order;
  j["tolerance"] = cfg.tol;
  j["sign_flip"] = cfg.sign_flip;
  return j;
}

inline json report_schema() {
  json j;
  j["schema"] = kSchema;
  j["version"] = kVersion;
  j["report"] = {
      {"config",
       "run configuration: N, K, vir_lo, mode, window, seed, backend, order, "
       "tolerance, sign_flip"},
      {"suites",
       json::array(
           {json{{"suite", "name (equation tag)"},
                 {"pass", "bool"},
                 {"checks",
                  json::array(
                      {json{{"identity", "identity label"},
                            {"pass", "bool"},
                            {"coverage", "certified degree interval [lo, hi], null = unbounded"},
                            {"entries", "number of residual entries evaluated"},
                            {"max_magnitude", "largest offending |coefficient|"},
                            {"failures",
                             json::array({json{{"direction", "coframe label or pair"},
                                               {"degree", "lambda degree"},
                                               {"magnitude", "|coefficient|"},
                                               {"value", "exact offender"}}})}}})}}})},
      {"pass", "bool"}};
  return j;
}

template <class K>
json run_suites(const Environment<K>& env, const std::vector<std::string>& names,
                const char* backend) {
  auto reg = suite_registry<K>();
  Checker<K> ck(env.cf, env.cfg.rep_lo, env.cfg.rep_hi, env.cfg.tol);
  json out;
  out["schema"] = kSchema;
  out["version"] = kVersion;
  out["config"] = config_to_json<K>(env.cfg, backend);
  json suites = json::array();
  bool all_pass = true;
  for (auto& def : reg) {
    if (!names.empty() &&
        std::find(names.begin(), names.end(), def.name) == names.end())
      continue;
    if (!(def.modes & mode_bit(env.cfg.mode))) {
      if (!names.empty()) {
        json js;
        js["suite"] = def.name;
        js["skipped"] = std::string("not applicable in mode ") + mode_name(env.cfg.mode);
        suites.push_back(std::move(js));
      }
      continue;
    }
    json js;
    js["suite"] = def.name;
    js["description"] = def.desc;
    bool pass = true;
    json checks = json::array();
    try {
      for (auto& c : def.fn(env, ck)) {
        pass = pass && c.pass;
        checks.push_back(check_to_json(c));
      }
    } catch (const SeriesError& err) {
      pass = false;
      js["error"] = err.what();
    }
    js["pass"] = pass;
    js["checks"] = std::move(checks);
    all_pass = all_pass && pass;
    suites.push_back(std::move(js));
  }
  out["suites"] = std::move(suites);
  out["pass"] = all_pass;
  return out;
}

}  // namespace cmch
