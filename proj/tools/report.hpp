#pragma once

// JSON reports. Every report carries schema 1, the worm parameters with their
// predicted thresholds, grid metadata, and a `verdicts` array of
// {name, measured, expected, pass} records.

#include <string>
#include <vector>

#include <json.hpp>

#include <wormszego/checks.hpp>

namespace wormszego::report {

using json = nlohmann::ordered_json;

inline json params_json(const WormParams &w)
{
  return {{"beta", w.beta},
          {"nu", w.nu},
          {"sheet_height", w.sheet_height},
          {"lp_interval", {w.lp_lower, w.lp_upper}},
          {"sobolev_l2_sup", w.sobolev_l2_sup}};
}

inline json grid_json(const Grid2 &g)
{
  return {{"x_min", g.x.x_min}, {"x_max", g.x.x_max}, {"n", g.x.n}, {"M", g.theta.m_count}};
}

inline json base(const std::string &command, const WormParams &w)
{
  json j;
  j["schema"] = 1;
  j["command"] = command;
  j["params"] = params_json(w);
  j["verdicts"] = json::array();
  return j;
}

inline void add_verdict(json &rep, const std::string &name, const json &measured, const json &expected, bool pass)
{
  rep["verdicts"].push_back({{"name", name}, {"measured", measured}, {"expected", expected}, {"pass", pass}});
}

inline void add_check(json &rep, const checks::Result &r)
{
  json m = r.measured;
  add_verdict(rep, r.name, m, {{"below", r.tolerance}}, r.pass);
  if (!r.detail.empty())
    rep["verdicts"].back()["detail"] = r.detail;
}

// Collects the names of failed verdicts; returns true when none failed.
inline bool finalize(json &rep)
{
  json failures = json::array();
  for (const auto &v : rep["verdicts"])
    if (!v["pass"].get<bool>())
      failures.push_back(v["name"]);
  const bool ok = failures.empty();
  rep["failures"] = failures;
  rep["pass"] = ok;
  return ok;
}

inline json fit_json(const PowerFit &f) { return {{"exponent", f.exponent}, {"r2", f.r2}}; }

inline json slope_json(const SlopeFit &s)
{
  return {{"rho", s.rho}, {"values", s.values}, {"fit", fit_json(s.fit)}, {"predicted", s.predicted}, {"pass", s.pass}};
}

inline json decay_json(const DecayReport &r)
{
  json j = {{"grid", grid_json(r.grid)},
            {"rescale_log", r.rescale_log},
            {"tolerance", r.tolerance},
            {"pipeline", {{"infinity", slope_json(r.pipeline_infinity)}, {"origin", slope_json(r.pipeline_origin)}}}};
  if (r.oracle_run) {
    j["oracle"] = {{"infinity", slope_json(r.oracle_infinity)}, {"origin", slope_json(r.oracle_origin)}};
    j["constant_only"] = {{"fitted_constant", r.fitted_constant},
                          {"max_pointwise_deviation", r.constant_max_deviation},
                          {"threshold", r.constant_tolerance},
                          {"holds", r.constant_only_holds},
                          {"range_log_rho", {-4.0, 4.0}}};
  }
  return j;
}

inline void decay_verdicts(json &rep, const DecayReport &r)
{
  add_verdict(rep, "slope at infinity", r.pipeline_infinity.fit.exponent,
              {{"value", r.pipeline_infinity.predicted}, {"tolerance", r.tolerance}}, r.pipeline_infinity.pass);
  add_verdict(rep, "slope at origin", r.pipeline_origin.fit.exponent,
              {{"value", r.pipeline_origin.predicted}, {"tolerance", r.tolerance}}, r.pipeline_origin.pass);
  if (r.oracle_run)
    add_verdict(rep, "oracle exponents match pipeline",
                {r.oracle_infinity.fit.exponent, r.oracle_origin.fit.exponent},
                {{"tolerance", r.tolerance}}, r.exponents_match);
}

inline json side_json(const SideResult &s)
{
  return {{"side", s.side},
          {"truncation", s.truncation},
          {"increments", s.increments},
          {"fit", fit_json(s.fit)},
          {"predicted_exponent", s.predicted_exponent},
          {"verdict", to_string(s.verdict)},
          {"predicted", to_string(s.predicted)},
          {"exponent_ok", s.exponent_ok}};
}

inline json sweep_json(const SweepReport &r)
{
  json entries = json::array();
  for (const auto &e : r.entries) {
    json je = {{"label", e.label},
               {"p", e.p},
               {"s", e.s},
               {"origin", side_json(e.origin)},
               {"infinity", side_json(e.infinity)},
               {"verdict", to_string(e.verdict)},
               {"predicted", to_string(e.predicted)},
               {"pass", e.pass}};
    if (r.kind == "lp")
      je["doubling_change_2^10_to_2^11"] = e.doubling_change;
    entries.push_back(je);
  }
  return {{"kind", r.kind},
          {"grid", grid_json(r.grid)},
          {"rescale_log", r.rescale_log},
          {"ladder_log_R", r.ladder},
          {"rule",
           {{"threshold", r.rule.threshold}, {"min_r2", r.rule.min_r2}, {"exponent_tolerance", r.rule.exponent_tolerance}}},
          {"entries", entries}};
}

inline void sweep_verdicts(json &rep, const SweepReport &r)
{
  for (const auto &e : r.entries)
    add_verdict(rep, r.kind + " " + e.label, to_string(e.verdict), to_string(e.predicted), e.pass);
}

} // namespace wormszego::report
