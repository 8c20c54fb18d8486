#include "uncert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "uncert/error.hpp"

namespace uncert {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kBounded:
      return "BOUNDED";
    case Verdict::kUnbounded:
      return "UNBOUNDED";
    case Verdict::kInfimumNotAttained:
      return "INFIMUM_NOT_ATTAINED";
    case Verdict::kInconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

double vertex_distance2(const Moments3& m, const SheetIndex& sheet) {
  const double e = sheet.energy();
  return (m.x - e) * (m.x - e) + (m.y - e) * (m.y - e) + m.w * m.w;
}

std::optional<double> safe_value(const Functional& f, const Moments3& m) {
  try {
    const double v = f.evaluate(m);
    if (std::isfinite(v)) return v;
  } catch (const Error&) {
  }
  return std::nullopt;
}

struct PathAnalysis {
  bool escaping = false;
  bool converging = false;
  double final_value = 0.0;
  double estimate = 0.0;
  std::size_t suffix_begin = 0;
  std::size_t suffix_end = 0;
};

PathAnalysis analyze(const WitnessPath& path, std::optional<double> candidate,
                     const CertifyConfig& cfg) {
  PathAnalysis a;
  const auto& v = path.values;
  std::size_t end = v.size();
  // Trailing changes at rounding level mean the ray has run out of precision.
  bool stagnated = false;
  while (end >= 2 && std::abs(v[end - 1] - v[end - 2]) <= 1e-13 * (1.0 + std::abs(v[end - 1]))) {
    --end;
    stagnated = true;
  }
  if (end == 0) return a;
  std::size_t begin = end - 1;
  while (begin > 0 && v[begin - 1] > v[begin]) --begin;
  a.suffix_begin = begin;
  a.suffix_end = end;
  a.final_value = v[end - 1];
  const std::size_t tail = static_cast<std::size_t>(std::max(cfg.probe_tail, 3));
  if (end - begin < tail) return a;

  if (candidate) {
    if (!(a.final_value < *candidate - 1e-9 * (1.0 + std::abs(*candidate)))) return a;
  }
  a.escaping = true;

  bool ratios_small = true;
  for (std::size_t k = end - tail + 2; k < end; ++k) {
    const double d_prev = v[k - 2] - v[k - 1];
    const double d_next = v[k - 1] - v[k];
    if (!(d_next < cfg.converge_ratio * d_prev)) ratios_small = false;
  }
  a.converging = stagnated || ratios_small;

  a.estimate = a.final_value;
  if (a.converging && !stagnated) {
    const double f0 = v[end - 3], f1 = v[end - 2], f2 = v[end - 1];
    const double denom = (f2 - f1) - (f1 - f0);
    if (denom != 0.0) {
      const double aitken = f2 - (f2 - f1) * (f2 - f1) / denom;
      if (std::isfinite(aitken)) a.estimate = std::min(a.final_value, aitken);
    }
  }
  return a;
}

WitnessPath suffix_of(const WitnessPath& path, const PathAnalysis& a) {
  WitnessPath out;
  out.label = path.label;
  const auto b = static_cast<std::ptrdiff_t>(a.suffix_begin);
  const auto e = static_cast<std::ptrdiff_t>(a.suffix_end);
  out.moments.assign(path.moments.begin() + b, path.moments.begin() + e);
  out.values.assign(path.values.begin() + b, path.values.begin() + e);
  return out;
}

}  // namespace

Candidate minimize_over_extrema(const std::vector<ExtremalSet>& sets, const Functional& f,
                                double tie_rel) {
  std::optional<Candidate> best;
  double best_dist = 0.0;
  auto offer = [&](const ExtremalSet& set, const Moments3& m, Definiteness def) {
    const auto value = safe_value(f, m);
    if (!value) return;
    const double dist = vertex_distance2(m, set.sheet);
    bool take = !best;
    if (best) {
      const double tol = tie_rel * (1.0 + std::abs(best->value));
      if (*value < best->value - tol) {
        take = true;
      } else if (*value <= best->value + tol) {
        take = set.sheet.n < best->sheet || (set.sheet.n == best->sheet && dist < best_dist);
      }
    }
    if (take) {
      best = Candidate{*value, m, set.sheet.n, set.branch, def, set.dimension};
      best_dist = dist;
    }
  };
  for (const auto& set : sets) {
    for (const auto& p : set.points) offer(set, p.moments, p.definiteness);
    for (const auto& m : set.manifold_samples) offer(set, m, Definiteness::kPosDef);
  }
  if (!best) throw Error("no admissible extremal point on any sheet");
  return *best;
}

void attach_minimizer_params(BoundReport& report, const Functional& f, double tol) {
  if (report.verdict != Verdict::kBounded || !report.minimizer) return;
  const Candidate& c = *report.minimizer;
  const Functional g = c.branch == AbsBranch::kNone ? f : f.with_abs_branch(c.branch);
  try {
    const FMatrix F = f_matrix(g.gradient(c.moments));
    const WilliamsonResult wr = williamson_params(F);
    report.params = wr.params;
    report.complex_params = bch_convert(wr.params);
    const Moments3 back = squeezed_moments(SheetIndex{c.sheet, f.hbar()}, wr.params);
    const double scale =
        1.0 + std::max({std::abs(c.moments.x), std::abs(c.moments.y), std::abs(c.moments.w)});
    const double err = std::max({std::abs(back.x - c.moments.x), std::abs(back.y - c.moments.y),
                                 std::abs(back.w - c.moments.w)}) /
                       scale;
    report.fixed_point_error = err;
    if (!(err <= tol)) {
      report.verdict = Verdict::kInconclusive;
      report.diagnostics.push_back(
          format("squeezed state from (b, gamma) misses the minimizer by %.3g (tolerance %.3g)",
                 err, tol));
    }
  } catch (const Error& e) {
    report.verdict = Verdict::kInconclusive;
    report.diagnostics.push_back(std::string("squeeze parameters unavailable: ") + e.what());
  }
}

std::vector<WitnessPath> witness_probes(const Functional& f, int points) {
  const SheetIndex ground{0, f.hbar()};
  const double e = ground.energy();
  const int np = std::max(points, 3);
  std::vector<WitnessPath> paths;

  auto run = [&](std::string label, auto&& moments_at) {
    WitnessPath path;
    path.label = std::move(label);
    for (int k = 0; k < np; ++k) {
      Moments3 m;
      try {
        m = moments_at(k);
      } catch (const Error&) {
        break;
      }
      if (!std::isfinite(m.x) || !std::isfinite(m.y) || !std::isfinite(m.w)) break;
      const auto value = safe_value(f, m);
      if (!value) break;
      // Far out, cancellation can swamp f; stop once rounding noise (estimated
      // from the gradient) is no longer small against f.
      double spread = std::abs(*value);
      try {
        const Grad3 g = f.gradient(m);
        spread += std::abs(m.x * g.f_x) + std::abs(m.y * g.f_y) + std::abs(m.w * g.f_w);
      } catch (const Error&) {
      }
      if (8.0 * std::numeric_limits<double>::epsilon() * spread > 1e-9 * (1.0 + std::abs(*value)))
        break;
      path.moments.push_back(m);
      path.values.push_back(*value);
    }
    paths.push_back(std::move(path));
  };
  auto linear = [np](double top, int k) { return top * k / (np - 1); };

  char label[96];
  for (int i = -8; i <= 8; ++i) {
    const double b0 = 0.5 * i;
    for (int sign : {1, -1}) {
      std::snprintf(label, sizeof label, "sheet 0, b = %g, gamma -> %s", b0, sign > 0 ? "+inf" : "-inf");
      run(label, [&](int k) {
        return squeezed_moments(ground, {b0, sign * linear(20.0, k)});
      });
    }
  }
  for (int i = -2; i <= 2; ++i) {
    const double g0 = i;
    for (int sign : {1, -1}) {
      std::snprintf(label, sizeof label, "sheet 0, gamma = %g, b -> %s", g0, sign > 0 ? "+inf" : "-inf");
      run(label, [&](int k) {
        return squeezed_moments(ground, {sign * linear(200.0, k), g0});
      });
    }
  }
  // Rays leaving the vertex (e, 0, 0) in (u, v, w); all stay inside the region.
  auto t_at = [np](int k) { return std::pow(10.0, -2.0 + 10.0 * k / (np - 1)); };
  run("u axis", [&](int k) { return from_uvw({e + t_at(k), 0.0, 0.0}, f.hbar()); });
  for (double rho : {0.5, 0.9, 1.0}) {
    for (int j = 0; j < 12; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / 12.0;
      const double cv = std::cos(phi), sw = std::sin(phi);
      std::snprintf(label, sizeof label, "vertex ray, slope %g, angle %d deg", rho, 30 * j);
      run(label, [&](int k) {
        const double t = t_at(k);
        return from_uvw({e + t, rho * t * cv, rho * t * sw}, f.hbar());
      });
    }
  }
  return paths;
}

void cross_check(BoundReport& report, const Functional& f, const CertifyConfig& cfg) {
  const bool has_bound = std::isfinite(report.bound);
  try {
    report.oracle.parametric = parametric_search(f, SheetIndex{report.sheet, f.hbar()}, cfg.parametric);
    if (has_bound && report.oracle.parametric->value < report.bound - cfg.parametric_soundness) {
      report.oracle.parametric_consistent = false;
      report.diagnostics.push_back(format("parametric search found %.17g below the bound %.17g",
                                          report.oracle.parametric->value, report.bound));
    }
  } catch (const Error& e) {
    report.diagnostics.push_back(std::string("parametric search failed: ") + e.what());
  }
  try {
    report.oracle.fock = fock_minimize(f, cfg.fock);
    if (has_bound && report.oracle.fock->value < report.bound - cfg.fock_soundness) {
      report.oracle.fock_consistent = false;
      report.diagnostics.push_back(format("Fock-space search found %.17g below the bound %.17g",
                                          report.oracle.fock->value, report.bound));
    }
  } catch (const Error& e) {
    report.diagnostics.push_back(std::string("Fock-space search failed: ") + e.what());
  }
}

BoundReport certify(const Functional& f, const CertifyConfig& cfg) {
  BoundReport report;
  report.bound = std::numeric_limits<double>::quiet_NaN();

  std::vector<AbsBranch> branches{AbsBranch::kNone};
  if (f.uses_abs_w()) branches = {AbsBranch::kPlus, AbsBranch::kMinus};

  std::vector<ExtremalSet> sets;
  std::size_t rejected = 0;
  for (int n = 0; n <= cfg.solver.nmax; ++n) {
    for (AbsBranch branch : branches) {
      const SheetIndex sheet{n, f.hbar()};
      SheetSummary summary;
      summary.n = n;
      summary.branch = branch;
      ExtremalSet set;
      try {
        const Functional g = branch == AbsBranch::kNone ? f : f.with_abs_branch(branch);
        set = solve_sheet(g, sheet, cfg.solver);
      } catch (const Error& e) {
        summary.notes.push_back(std::string("solver failed: ") + e.what());
        report.sheets.push_back(std::move(summary));
        continue;
      }
      set.branch = branch;
      summary.dimension = set.dimension;
      summary.points = set.points.size();
      summary.rejected = set.rejected.size();
      summary.samples = set.manifold_samples.size();
      summary.seeds_tried = set.seeds_tried;
      summary.seeds_converged = set.seeds_converged;
      summary.notes = set.notes;
      rejected += set.rejected.size();

      std::vector<double> values;
      for (const auto& p : set.points)
        if (auto v = safe_value(f, p.moments)) values.push_back(*v);
      std::vector<double> sampled;
      for (const auto& m : set.manifold_samples)
        if (auto v = safe_value(f, m)) sampled.push_back(*v);
      values.insert(values.end(), sampled.begin(), sampled.end());
      if (!values.empty()) {
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        summary.min_value = *lo;
        if (!sampled.empty()) {
          summary.value_spread = *hi - *lo;
          if (*hi - *lo > cfg.constancy_tol * (1.0 + std::abs(*lo)))
            summary.notes.push_back(
                format("f is not constant along the extremal manifold (spread %.3g); the sampled "
                       "minimum is used",
                       *hi - *lo));
        }
      }
      report.sheets.push_back(std::move(summary));
      sets.push_back(std::move(set));
    }
  }

  // Per-sheet minima should not decrease with n.
  std::optional<double> previous;
  for (int n = 0; n <= cfg.solver.nmax; ++n) {
    std::optional<double> sheet_min;
    for (const auto& s : report.sheets)
      if (s.n == n && s.min_value) sheet_min = sheet_min ? std::min(*sheet_min, *s.min_value) : *s.min_value;
    if (!sheet_min) continue;
    if (previous && *sheet_min < *previous - cfg.tie_rel * (1.0 + std::abs(*previous)))
      report.sheets_monotone = false;
    previous = sheet_min;
  }
  if (!report.sheets_monotone)
    report.diagnostics.push_back("sheet minima decrease with n");

  std::optional<Candidate> candidate;
  try {
    candidate = minimize_over_extrema(sets, f, cfg.tie_rel);
    report.critical_value = candidate->value;
  } catch (const Error&) {
  }

  const auto paths = witness_probes(f, cfg.probe_points);
  const std::optional<double> threshold =
      candidate ? std::optional<double>(candidate->value) : std::nullopt;
  const WitnessPath* diverging = nullptr;
  PathAnalysis diverging_info;
  const WitnessPath* converging = nullptr;
  PathAnalysis converging_info;
  for (const auto& path : paths) {
    for (double v : path.values)
      report.probe_minimum = report.probe_minimum ? std::min(*report.probe_minimum, v) : v;
    const PathAnalysis a = analyze(path, threshold, cfg);
    if (!a.escaping) continue;
    if (!a.converging) {
      if (!diverging || a.final_value < diverging_info.final_value) {
        diverging = &path;
        diverging_info = a;
      }
    } else if (!converging || a.estimate < converging_info.estimate) {
      converging = &path;
      converging_info = a;
    }
  }

  if (diverging) {
    report.verdict = Verdict::kUnbounded;
    report.bound = -std::numeric_limits<double>::infinity();
    report.witness = suffix_of(*diverging, diverging_info);
  } else if (converging) {
    report.verdict = Verdict::kInfimumNotAttained;
    report.bound = converging_info.estimate;
    report.witness = suffix_of(*converging, converging_info);
  } else if (!candidate) {
    report.verdict = Verdict::kInconclusive;
    report.diagnostics.push_back(rejected > 0
                                     ? "extrema exist but F is not positive definite at any of them"
                                     : "no extremum found and no escaping probe");
  } else if (report.probe_minimum &&
             *report.probe_minimum < candidate->value - 1e-9 * (1.0 + std::abs(candidate->value))) {
    report.verdict = Verdict::kInconclusive;
    report.bound = candidate->value;
    report.diagnostics.push_back(format("a probe reaches %.17g below the smallest extremal value %.17g",
                                        *report.probe_minimum, candidate->value));
  } else {
    report.verdict = Verdict::kBounded;
    report.bound = candidate->value;
  }

  if (candidate && (report.verdict == Verdict::kBounded || report.verdict == Verdict::kInconclusive)) {
    report.minimizer = candidate;
    report.sheet = candidate->sheet;
  }
  attach_minimizer_params(report, f, cfg.fixed_point_tol);

  if (cfg.run_oracles) {
    if (report.verdict == Verdict::kUnbounded) {
      report.diagnostics.push_back("oracles skipped for an unbounded functional");
    } else {
      const bool was_bounded = report.verdict == Verdict::kBounded;
      cross_check(report, f, cfg);
      if (was_bounded && !(report.oracle.fock_consistent && report.oracle.parametric_consistent))
        report.verdict = Verdict::kInconclusive;
    }
  }
  return report;
}

}  // namespace uncert
