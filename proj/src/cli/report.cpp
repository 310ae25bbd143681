#include "torusfold/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "torusfold/error.hpp"

namespace torusfold {

namespace {

// JSON has no infinity; unbounded quantities are written as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Json to_json(const NormEstimate& e) {
  return Json{{"value", number(e.value)},
              {"rel_error", number(e.rel_error)},
              {"lower", number(e.lower())},
              {"upper", number(e.upper())},
              {"grid", e.grid}};
}

Json to_json(const LemmaCheck& c) {
  Json ctx = Json::object();
  for (const auto& [k, v] : c.context) ctx[k] = number(v);
  return Json{{"measured_lhs", number(c.measured_lhs)},
              {"bound_rhs", number(c.bound_rhs)},
              {"slack", number(c.slack)},
              {"tolerance", number(c.tolerance)},
              {"passed", c.passed},
              {"vacuous", c.vacuous},
              {"context", ctx}};
}

Json to_json(const ChainReport& r) {
  Json norms = Json::array();
  for (const auto& e : r.norms) norms.push_back(to_json(e));
  Json kds = Json::array();
  for (std::size_t i = 0; i < r.kds.size(); ++i) {
    kds.push_back(Json{{"d", i + 1},
                       {"numerator", to_string(r.kds[i].numerator)},
                       {"denominator", to_string(r.kds[i].denominator)},
                       {"value", number(r.k_values[i])}});
  }
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    steps.push_back(Json{{"d", s.d},
                         {"lhs", number(s.lhs)},
                         {"rhs", number(s.rhs)},
                         {"tolerance", number(s.tolerance)},
                         {"passed", s.passed}});
  }
  return Json{{"n", r.n},
              {"eps", r.eps},
              {"norms", norms},
              {"f_norm", to_json(r.f_norm)},
              {"k", kds},
              {"lower", number(r.lower)},
              {"upper", number(r.upper)},
              {"ratio", number(r.ratio)},
              {"tolerance", number(r.tolerance)},
              {"k_final", number(r.k_final)},
              {"vacuous", r.vacuous},
              {"ratio_ok", r.ratio_ok},
              {"steps_ok", r.steps_ok},
              {"steps", steps},
              {"wn_residual", number(r.wn_residual)},
              {"wn_ok", r.wn_ok},
              {"weak_bound_ok", r.weak_bound_ok},
              {"passed", r.passed}};
}

Json config_json(const ExperimentConfig& cfg) {
  Json j{{"a", cfg.a},
         {"tau", cfg.tau},
         {"tau_target", cfg.tau_target ? Json(*cfg.tau_target) : Json(nullptr)},
         {"distribution", cfg.distribution},
         {"sparse_k", cfg.sparse_k},
         {"seed", cfg.seed},
         {"draws", cfg.draws},
         {"eps", cfg.eps},
         {"cap", cfg.cap},
         {"cb", cfg.cb},
         {"max_grid_points", cfg.max_grid_points},
         {"mc_samples", cfg.mc_samples},
         {"poly", cfg.poly},
         {"lemma_dim", cfg.lemma_dim},
         {"lemma_degree", cfg.lemma_degree},
         {"lemma_samples", cfg.lemma_samples},
         {"lemma_parts", cfg.lemma_parts}};
  return j;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json make_report(const std::string& command, const ExperimentConfig& cfg, Json records,
                 Json summary) {
  return Json{{"tool", "torusfold"},
              {"version", "0.1.0"},
              {"command", command},
              {"timestamp", utc_timestamp()},
              {"constants",
               {{"certification_constant", kTwoPi}, {"bound_constant", cfg.bound_constant()}}},
              {"config", config_json(cfg)},
              {"records", std::move(records)},
              {"summary", std::move(summary)}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

void write_report(const std::string& path, const Json& report) {
  write_text_file(path, report.dump(2) + "\n");
}

}  // namespace torusfold
