#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uncert/certify.hpp"
#include "uncert/functional.hpp"
#include "uncert/symplectic.hpp"

namespace uncert {

/// Principal branch of Lambert's W (W e^W = s, W >= -1). Throws DomainError
/// for s < -1/e.
double lambert_w(double s);

/// Number of monomial classes of a symmetric polynomial of degree n in three
/// variables, floor(((n+3)^2 + 6) / 12). Throws DomainError for n < 1.
long kappa(int n);

struct ParamSpec {
  std::string name;
  double default_value = 0.0;
  std::string description;
};

/// What a catalog functional should certify to at given parameters.
struct Expectation {
  std::optional<Verdict> verdict;        ///< empty: the catalog makes no claim
  std::optional<double> bound;           ///< closed form (or infimum) when known
  std::optional<SqueezeParams> params;   ///< minimizer (b, gamma) when known
  std::optional<double> critical_value;  ///< reference value that is not a bound
  std::vector<std::string> notes;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
  /// Extra parameter names are accepted (the polynomial families take their
  /// coefficients this way).
  bool open_params = false;
  std::function<std::string(const ParamMap&)> expression;
  std::function<Expectation(const ParamMap&, double hbar)> expect;
};

const std::vector<CatalogEntry>& catalog();

/// Throws Error for an unknown name.
const CatalogEntry& catalog_entry(const std::string& name);

/// Defaults merged with overrides. Throws Error for parameter names the entry
/// does not know.
ParamMap resolve_params(const CatalogEntry& entry, const ParamMap& overrides);

/// Expression source of an entry at resolved parameters.
std::string catalog_expression(const CatalogEntry& entry, const ParamMap& params);

/// Parsed functional for an entry.
Functional catalog_functional(const CatalogEntry& entry, const ParamMap& params, double hbar);

/// Expected verdict and closed-form bound of an entry.
Expectation catalog_bound(const std::string& name, const ParamMap& overrides = {}, double hbar = 1.0);

/// Symmetric polynomial sum over exponent classes keyed "aJKL" (J >= K >= L)
/// in x, y, z. Every distinct permutation of (J, K, L) gets the coefficient.
std::string s3_polynomial(const ParamMap& coefficients);

/// Symmetric polynomial in x, y keyed "aJK" (J >= K).
std::string s2_polynomial(const ParamMap& coefficients);

/// Does the certified report agree with the expectation (verdict, and bound to
/// rel_tol * (1 + |bound|) when a bound is expected)? True when the
/// expectation makes no claim.
bool matches(const BoundReport& report, const Expectation& expected, double rel_tol = 1e-8);

}  // namespace uncert
