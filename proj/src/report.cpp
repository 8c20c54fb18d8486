#include "uncert/report.hpp"

#include <cmath>

#ifndef UNCERT_VERSION
#define UNCERT_VERSION "0.0.0"
#endif

namespace uncert {

using nlohmann::json;

const char* version() { return UNCERT_VERSION; }

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json optional_num(const std::optional<T>& v) {
  return v ? num(*v) : json(nullptr);
}

std::string branch_name(AbsBranch b) {
  switch (b) {
    case AbsBranch::kPlus:
      return "w>=0";
    case AbsBranch::kMinus:
      return "w<=0";
    case AbsBranch::kNone:
      break;
  }
  return "none";
}

json to_json(const SheetSummary& s) {
  return {{"n", s.n},
          {"branch", branch_name(s.branch)},
          {"dimension", std::string(to_string(s.dimension))},
          {"points", s.points},
          {"rejected", s.rejected},
          {"samples", s.samples},
          {"seeds_tried", s.seeds_tried},
          {"seeds_converged", s.seeds_converged},
          {"min_value", optional_num(s.min_value)},
          {"value_spread", optional_num(s.value_spread)},
          {"notes", s.notes}};
}

json to_json(const WitnessPath& w) {
  json points = json::array();
  for (std::size_t i = 0; i < w.moments.size(); ++i)
    points.push_back({{"x", num(w.moments[i].x)},
                      {"y", num(w.moments[i].y)},
                      {"w", num(w.moments[i].w)},
                      {"f", num(w.values[i])}});
  return {{"path", w.label}, {"points", points}};
}

}  // namespace

json to_json(const Moments3& m) { return {{"x", num(m.x)}, {"y", num(m.y)}, {"w", num(m.w)}}; }

json to_json(const ComplexSqueeze& cs) {
  return {{"r", num(cs.r)}, {"theta", num(cs.theta)}, {"chi", num(cs.chi)}};
}

json to_json(const OracleResult& r) {
  json out = {{"method", r.method},
              {"value", num(r.value)},
              {"moments", to_json(r.moments)},
              {"restarts", r.restarts},
              {"converged", r.converged}};
  if (r.method == "parametric") {
    out["sheet"] = r.sheet;
    if (r.params) out["params"] = {{"b", num(r.params->b)}, {"gamma", num(r.params->gamma)}};
  }
  if (!r.coefficients.empty()) {
    json c = json::array();
    for (const auto& z : r.coefficients) c.push_back({num(z.real()), num(z.imag())});
    out["coefficients"] = c;
  }
  return out;
}

json to_json(const SolverConfig& c) {
  return {{"nmax", c.nmax},
          {"seeds_b", c.seeds_b},
          {"seeds_gamma", c.seeds_gamma},
          {"b_max", c.b_max},
          {"gamma_max", c.gamma_max},
          {"max_iterations", c.max_iterations},
          {"max_halvings", c.max_halvings},
          {"residual_tol", c.residual_tol},
          {"dedup_rel", c.dedup_rel},
          {"rank_rel", c.rank_rel},
          {"continuation_step", c.continuation_step},
          {"continuation_samples", c.continuation_samples}};
}

json to_json(const CertifyConfig& c) {
  return {{"solver", to_json(c.solver)},
          {"run_oracles", c.run_oracles},
          {"parametric",
           {{"grid_b", c.parametric.grid_b},
            {"grid_gamma", c.parametric.grid_gamma},
            {"b_max", c.parametric.b_max},
            {"gamma_max", c.parametric.gamma_max},
            {"refine_starts", c.parametric.refine_starts},
            {"min_step", c.parametric.min_step}}},
          {"fock",
           {{"dim", c.fock.dim},
            {"restarts", c.fock.restarts},
            {"seed", c.fock.seed},
            {"max_iterations", c.fock.max_iterations}}},
          {"probe_points", c.probe_points},
          {"probe_tail", c.probe_tail}};
}

json report_document(const BoundReport& r, const Functional& f, const CertifyConfig& cfg,
                     const std::string& name, const Expectation* expected) {
  json doc;
  doc["functional"] = {{"name", name.empty() ? json(nullptr) : json(name)},
                       {"expression", f.source()},
                       {"canonical", f.to_string()}};
  json params = json::object();
  for (const auto& [k, v] : f.params()) params[k] = num(v);
  doc["params"] = params;
  doc["hbar"] = num(f.hbar());
  doc["verdict"] = std::string(to_string(r.verdict));
  doc["bound"] = num(r.bound);
  doc["critical_value"] = optional_num(r.critical_value);
  doc["sheet"] = r.sheet;

  if (r.minimizer) {
    const Moments3& m = r.minimizer->moments;
    const MomentPoint p = to_uvw(m);
    json mz = {{"x", num(m.x)}, {"y", num(m.y)}, {"w", num(m.w)}, {"u", num(p.u)}, {"v", num(p.v)},
               {"value", num(r.minimizer->value)},
               {"set_dimension", std::string(to_string(r.minimizer->dimension))},
               {"branch", branch_name(r.minimizer->branch)}};
    mz["b"] = r.params ? num(r.params->b) : json(nullptr);
    mz["gamma"] = r.params ? num(r.params->gamma) : json(nullptr);
    mz["r"] = r.complex_params ? num(r.complex_params->r) : json(nullptr);
    mz["theta"] = r.complex_params ? num(r.complex_params->theta) : json(nullptr);
    mz["chi"] = r.complex_params ? num(r.complex_params->chi) : json(nullptr);
    mz["fixed_point_error"] = optional_num(r.fixed_point_error);
    doc["minimizer"] = mz;
  } else {
    doc["minimizer"] = nullptr;
  }

  json sheets = json::array();
  for (const auto& s : r.sheets) sheets.push_back(to_json(s));
  doc["sheets"] = sheets;
  doc["sheets_monotone"] = r.sheets_monotone;
  doc["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  doc["probe_minimum"] = optional_num(r.probe_minimum);

  doc["oracle"] = {
      {"parametric", r.oracle.parametric ? to_json(*r.oracle.parametric) : json(nullptr)},
      {"fock", r.oracle.fock ? to_json(*r.oracle.fock) : json(nullptr)},
      {"parametric_consistent", r.oracle.parametric_consistent},
      {"fock_consistent", r.oracle.fock_consistent}};

  if (expected) {
    json e;
    e["verdict"] = expected->verdict ? json(std::string(to_string(*expected->verdict))) : json(nullptr);
    e["bound"] = optional_num(expected->bound);
    e["critical_value"] = optional_num(expected->critical_value);
    e["b"] = expected->params ? num(expected->params->b) : json(nullptr);
    e["gamma"] = expected->params ? num(expected->params->gamma) : json(nullptr);
    e["notes"] = expected->notes;
    e["matches"] = matches(r, *expected);
    doc["expected"] = e;
  }

  doc["diagnostics"] = r.diagnostics;
  doc["config"] = to_json(cfg);
  doc["tolerances"] = {{"residual", cfg.solver.residual_tol},
                       {"tie_rel", cfg.tie_rel},
                       {"constancy", cfg.constancy_tol},
                       {"fixed_point", cfg.fixed_point_tol},
                       {"fock_soundness", cfg.fock_soundness},
                       {"parametric_soundness", cfg.parametric_soundness}};
  doc["version"] = version();
  return doc;
}

}  // namespace uncert
