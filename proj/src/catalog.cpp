#include "uncert/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uncert/error.hpp"

namespace uncert {

double lambert_w(double s) {
  constexpr double kBranch = -1.0 / std::numbers::e;
  if (std::isnan(s)) throw DomainError("lambert_w of NaN");
  if (s < kBranch) {
    // Allow a rounding-level overshoot of the branch point.
    if (s < kBranch - 4.0 * std::numeric_limits<double>::epsilon()) throw DomainError("lambert_w needs s >= -1/e");
    return -1.0;
  }
  if (s == 0.0) return 0.0;
  if (std::isinf(s)) return s;

  double w;
  const double q = std::numbers::e * s + 1.0;
  if (q < 0.3) {
    // Series about the branch point in p = sqrt(2 (e s + 1)).
    const double p = std::sqrt(2.0 * std::max(q, 0.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else {
    w = std::log1p(s);
  }
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double r = w * ew - s;
    if (r == 0.0) break;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double step = r / (ew * wp1 - (w + 2.0) * r / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return std::max(w, -1.0);
}

long kappa(int n) {
  if (n < 1) throw DomainError("kappa needs n >= 1");
  const long m = n + 3;
  return (m * m + 6) / 12;
}

namespace {

constexpr double kTau2 = 4.0 / 3.0;  // tau^2

double get(const ParamMap& p, const char* key) { return p.at(key); }

Expectation bounded(double bound, std::optional<SqueezeParams> params = std::nullopt) {
  Expectation e;
  e.verdict = Verdict::kBounded;
  e.bound = bound;
  e.params = params;
  return e;
}

Expectation no_claim(std::string why) {
  Expectation e;
  e.notes.push_back(std::move(why));
  return e;
}

Expectation with_verdict(Verdict v, std::optional<double> bound, std::string note = {}) {
  Expectation e;
  e.verdict = v;
  e.bound = bound;
  if (!note.empty()) e.notes.push_back(std::move(note));
  return e;
}

// Parses "a" followed by one digit per variable, non-increasing.
std::optional<std::vector<int>> exponent_key(const std::string& key, std::size_t vars) {
  if (key.size() != vars + 1 || key[0] != 'a') return std::nullopt;
  std::vector<int> e;
  for (std::size_t i = 1; i < key.size(); ++i) {
    if (key[i] < '0' || key[i] > '9') return std::nullopt;
    e.push_back(key[i] - '0');
  }
  if (!std::is_sorted(e.rbegin(), e.rend())) return std::nullopt;
  if (std::all_of(e.begin(), e.end(), [](int k) { return k == 0; })) return std::nullopt;
  return e;
}

std::string monomial(const std::vector<int>& exps, const char* const* names) {
  std::string out;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[i];
    if (exps[i] > 1) out += "^" + std::to_string(exps[i]);
  }
  return out;
}

std::string symmetric_polynomial(const ParamMap& coefficients, std::size_t vars,
                                 const char* const* names) {
  std::string out;
  for (const auto& [key, value] : coefficients) {
    const auto exps = exponent_key(key, vars);
    if (!exps) throw UsageError("bad coefficient key '" + key + "'");
    if (value == 0.0) continue;
    std::vector<int> perm = *exps;
    std::sort(perm.begin(), perm.end());
    std::string sum;
    do {
      if (!sum.empty()) sum += "+";
      sum += monomial(perm, names);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!out.empty()) out += " + ";
    out += key + "*(" + sum + ")";
  }
  if (out.empty()) throw UsageError("polynomial has no nonzero coefficient");
  return out;
}

bool all_nonnegative(const ParamMap& p) {
  return std::all_of(p.begin(), p.end(), [](const auto& kv) { return kv.second >= 0.0; });
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> c;
  auto fixed = [](std::string src) { return [src](const ParamMap&) { return src; }; };

  c.push_back({"heisenberg", "sqrt(x*y) >= hbar/2", {}, false, fixed("sqrt(x*y)"),
               [](const ParamMap&, double h) { return bounded(h / 2, SqueezeParams{0.0, 0.0}); }});

  c.push_back({"pair_sum", "x + y >= hbar", {}, false, fixed("x+y"),
               [](const ParamMap&, double h) { return bounded(h, SqueezeParams{0.0, 0.0}); }});

  c.push_back({"rs", "x*y - w^2 >= hbar^2/4", {}, false, fixed("x*y-w^2"),
               [](const ParamMap&, double h) { return bounded(h * h / 4, SqueezeParams{0.0, 0.0}); }});

  c.push_back({"triple_product", "x*y*z >= (tau*hbar/2)^3, tau = sqrt(4/3)", {}, false, fixed("x*y*z"),
               [](const ParamMap&, double h) {
                 const double tau = std::sqrt(kTau2);
                 Expectation e = bounded(std::pow(tau * h / 2, 3), SqueezeParams{0.5, 0.5 * std::log(tau)});
                 e.notes.push_back(
                     "gamma = ln(tau)/2 is the value for which x = e_0 exp(2 gamma) gives x = hbar/sqrt(3); "
                     "gamma = ln(tau)/4 does not reproduce the minimizer");
                 return e;
               }});

  c.push_back({"triple_sum", "x + y + z >= sqrt(3) hbar", {}, false, fixed("x+y+z"),
               [](const ParamMap&, double h) {
                 return bounded(std::sqrt(3.0) * h, SqueezeParams{0.5, 0.25 * std::log(kTau2)});
               }});

  c.push_back({"linear", "mu*x + nu*y + 2*lambda*w >= hbar*sqrt(mu*nu - lambda^2)",
               {{"mu", 1.0, "weight of x"}, {"nu", 1.0, "weight of y"}, {"lambda", 0.5, "half weight of w"}},
               false, fixed("mu*x+nu*y+2*lambda*w"),
               [](const ParamMap& p, double h) {
                 const double mu = get(p, "mu"), nu = get(p, "nu"), la = get(p, "lambda");
                 const double det = mu * nu - la * la;
                 const double scale = 1e-12 * (1.0 + std::abs(mu * nu) + la * la);
                 if (mu < 0 || nu < 0 || det < -scale)
                   return with_verdict(Verdict::kUnbounded, std::nullopt, "F is not positive semidefinite");
                 if (mu == 0 && nu == 0 && la == 0) return bounded(0.0);
                 if (std::abs(det) <= scale)
                   return with_verdict(Verdict::kInfimumNotAttained, 0.0,
                                       "mu*nu = lambda^2: the variance of a single quadrature combination, "
                                       "which squeezing drives to zero");
                 return bounded(h * std::sqrt(det),
                                SqueezeParams{la / nu, 0.5 * std::log(nu / std::sqrt(det))});
               }});

  c.push_back({"power_sum", "mu*x^m + nu*y^mp (closed form)",
               {{"mu", 2.0, "weight of x^m"}, {"nu", 1.0, "weight of y^mp"}, {"m", 2.0, "power of x"},
                {"mp", 1.0, "power of y"}},
               false, fixed("mu*x^m+nu*y^mp"),
               [](const ParamMap& p, double h) {
                 const double mu = get(p, "mu"), nu = get(p, "nu"), m = get(p, "m"), mp = get(p, "mp");
                 if (!(mu > 0 && nu > 0 && m > 0 && mp > 0)) return no_claim("needs mu, nu, m, mp > 0");
                 const double s = m + mp;
                 const double bound = std::pow(h / 2, 2 * m * mp / s) *
                                      (mu * std::pow(nu * mp / (mu * m), m / s) +
                                       nu * std::pow(mu * m / (nu * mp), mp / s));
                 return bounded(bound);
               }});

  c.push_back({"gen_rs", "(x*y)^m - mu*w^(2m)", {{"mu", 2.0, "weight of the covariance term"}, {"m", 2.0, "power"}},
               false, fixed("(x*y)^m-mu*w^(2*m)"),
               [](const ParamMap& p, double h) {
                 const double mu = get(p, "mu"), m = get(p, "m");
                 if (!(m > 1 && mu > 1)) return no_claim("closed form only for m > 1, mu > 1");
                 Expectation e = with_verdict(
                     Verdict::kUnbounded, std::nullopt,
                     "on every sheet f = (e_n^2 + w^2)^m - mu w^(2m) tends to -inf as |w| grows");
                 e.critical_value = std::pow(h / 2, 2 * m) * mu / std::pow(std::pow(mu, 1 / (m - 1)) - 1, m);
                 e.notes.push_back("critical_value is f at a positive definite extremum, not a lower bound");
                 return e;
               }});

  c.push_back({"mod_rs", "sqrt(x*y) - mu*|w| >= (hbar/2) sqrt(1 - mu^2)", {{"mu", 0.5, "weight of |w|"}}, false,
               fixed("sqrt(x*y)-mu*abs(w)"),
               [](const ParamMap& p, double h) {
                 const double mu = get(p, "mu");
                 if (mu > 1) return with_verdict(Verdict::kUnbounded, std::nullopt, "mu > 1");
                 if (mu == 1) return with_verdict(Verdict::kInfimumNotAttained, 0.0, "mu = 1");
                 if (!(mu > 0)) return no_claim("closed form only for 0 < mu < 1");
                 return bounded(h / 2 * std::sqrt(1 - mu * mu));
               }});

  c.push_back({"exponential", "x + mu*exp(y/nu) >= mu (1 + 2W) exp(2W), W = W(hbar/(4 sqrt(mu nu)))",
               {{"mu", 1.0, "prefactor"}, {"nu", 1.0, "scale of y"}}, false, fixed("x+mu*exp(y/nu)"),
               [](const ParamMap& p, double h) {
                 const double mu = get(p, "mu"), nu = get(p, "nu");
                 if (!(mu > 0 && nu > 0)) return no_claim("needs mu, nu > 0");
                 const double w = lambert_w(h / (4 * std::sqrt(mu * nu)));
                 return bounded(mu * (1 + 2 * w) * std::exp(2 * w),
                                SqueezeParams{0.0, 0.25 * std::log(mu / nu) + 0.5 * w});
               }});

  c.push_back({"rational", "sqrt(x*y)/(mu*sqrt(x) + nu*sqrt(y)): infimum 0, never reached",
               {{"mu", 1.0, "weight of sqrt(x)"}, {"nu", 1.0, "weight of sqrt(y)"}}, false,
               fixed("sqrt(x*y)/(mu*sqrt(x)+nu*sqrt(y))"),
               [](const ParamMap& p, double) {
                 if (!(get(p, "mu") > 0 && get(p, "nu") > 0)) return no_claim("needs mu, nu > 0");
                 return with_verdict(Verdict::kInfimumNotAttained, 0.0);
               }});

  c.push_back({"s3_poly", "symmetric polynomial in x, y, z; coefficients aJKL with J >= K >= L",
               {{"a100", 1.0, "x + y + z"}, {"a111", 1.0, "x*y*z"}}, true,
               [](const ParamMap& p) { return s3_polynomial(p); },
               [](const ParamMap& p, double h) {
                 if (!all_nonnegative(p)) return no_claim("closed form only for non-negative coefficients");
                 const double a = h / std::sqrt(3.0);
                 const Functional f = parse(s3_polynomial(p), p, h);
                 return bounded(f.evaluate({a, a, -a / 2}), SqueezeParams{0.5, 0.25 * std::log(kTau2)});
               }});

  c.push_back({"s2_func", "symmetric polynomial in x, y; coefficients aJK with J >= K",
               {{"a20", 1.0, "x^2 + y^2"}, {"a11", 1.0, "x*y"}}, true,
               [](const ParamMap& p) { return s2_polynomial(p); },
               [](const ParamMap& p, double h) {
                 if (!all_nonnegative(p)) return no_claim("closed form only for non-negative coefficients");
                 const Functional f = parse(s2_polynomial(p), p, h);
                 return bounded(f.evaluate({h / 2, h / 2, 0.0}), SqueezeParams{0.0, 0.0});
               }});
  return c;
}

}  // namespace

std::string s3_polynomial(const ParamMap& coefficients) {
  static const char* const names[] = {"x", "y", "z"};
  return symmetric_polynomial(coefficients, 3, names);
}

std::string s2_polynomial(const ParamMap& coefficients) {
  static const char* const names[] = {"x", "y"};
  return symmetric_polynomial(coefficients, 2, names);
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  throw UsageError("unknown catalog entry '" + name + "'");
}

ParamMap resolve_params(const CatalogEntry& entry, const ParamMap& overrides) {
  ParamMap out;
  if (entry.open_params) {
    // A polynomial given on the command line replaces the default one.
    if (overrides.empty())
      for (const auto& p : entry.params) out[p.name] = p.default_value;
    const std::size_t vars = entry.params.empty() ? 0 : entry.params.front().name.size() - 1;
    for (const auto& [k, v] : overrides) {
      if (!exponent_key(k, vars)) throw UsageError("'" + k + "' is not a coefficient key of " + entry.name);
      out[k] = v;
    }
    return out;
  }
  for (const auto& p : entry.params) out[p.name] = p.default_value;
  for (const auto& [k, v] : overrides) {
    if (!out.count(k)) throw UsageError("'" + k + "' is not a parameter of " + entry.name);
    out[k] = v;
  }
  return out;
}

std::string catalog_expression(const CatalogEntry& entry, const ParamMap& params) {
  return entry.expression(params);
}

Functional catalog_functional(const CatalogEntry& entry, const ParamMap& params, double hbar) {
  return parse(entry.expression(params), params, hbar);
}

Expectation catalog_bound(const std::string& name, const ParamMap& overrides, double hbar) {
  const CatalogEntry& entry = catalog_entry(name);
  return entry.expect(resolve_params(entry, overrides), hbar);
}

bool matches(const BoundReport& report, const Expectation& expected, double rel_tol) {
  if (!expected.verdict) return true;
  if (report.verdict != *expected.verdict) return false;
  if (expected.bound &&
      (report.verdict == Verdict::kBounded || report.verdict == Verdict::kInfimumNotAttained)) {
    return std::abs(report.bound - *expected.bound) <= rel_tol * (1.0 + std::abs(*expected.bound));
  }
  return true;
}

}  // namespace uncert
