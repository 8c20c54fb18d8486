#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uncert/extremal.hpp"
#include "uncert/functional.hpp"
#include "uncert/moments.hpp"
#include "uncert/oracle.hpp"
#include "uncert/symplectic.hpp"

namespace uncert {

enum class Verdict { kBounded, kUnbounded, kInfimumNotAttained, kInconclusive };

std::string_view to_string(Verdict v);

struct CertifyConfig {
  SolverConfig solver;
  bool run_oracles = true;
  ParametricConfig parametric;
  FockConfig fock;
  int probe_points = 50;           ///< points per witness ray
  int probe_tail = 10;             ///< strictly decreasing tail needed to call a ray escaping
  double converge_ratio = 0.95;    ///< decrement ratio below which a tail counts as converging
  double tie_rel = 1e-10;          ///< extremal values this close count as equal
  double constancy_tol = 1e-8;     ///< allowed spread of f along a sampled manifold
  double fixed_point_tol = 1e-8;   ///< squeezed_moments(b, gamma) vs minimizer, relative
  double fock_soundness = 1e-6;    ///< oracle may undercut the bound by at most this
  double parametric_soundness = 1e-8;
};

struct SheetSummary {
  int n = 0;
  AbsBranch branch = AbsBranch::kNone;
  SetDimension dimension = SetDimension::kEmpty;
  std::size_t points = 0;
  std::size_t rejected = 0;
  std::size_t samples = 0;
  std::size_t seeds_tried = 0;
  std::size_t seeds_converged = 0;
  std::optional<double> min_value;   ///< over admissible points and samples
  std::optional<double> value_spread;  ///< max - min of f over the manifold samples
  std::vector<std::string> notes;
};

/// One probe ray through the uncertainty region.
struct WitnessPath {
  std::string label;
  std::vector<Moments3> moments;
  std::vector<double> values;
};

struct Candidate {
  double value = 0.0;
  Moments3 moments;
  int sheet = 0;
  AbsBranch branch = AbsBranch::kNone;
  Definiteness definiteness = Definiteness::kSingular;
  SetDimension dimension = SetDimension::kEmpty;
};

struct OracleCheck {
  std::optional<OracleResult> parametric;
  std::optional<OracleResult> fock;
  bool parametric_consistent = true;
  bool fock_consistent = true;
};

struct BoundReport {
  Verdict verdict = Verdict::kInconclusive;
  /// The bound when BOUNDED, the infimum estimate when INFIMUM_NOT_ATTAINED,
  /// -inf when UNBOUNDED, NaN when nothing could be said.
  double bound = 0.0;
  int sheet = 0;
  std::optional<Candidate> minimizer;
  std::optional<SqueezeParams> params;
  std::optional<ComplexSqueeze> complex_params;
  std::optional<double> fixed_point_error;
  /// Smallest extremal value even when the verdict is not BOUNDED.
  std::optional<double> critical_value;
  std::vector<SheetSummary> sheets;
  bool sheets_monotone = true;
  std::optional<WitnessPath> witness;  ///< strictly decreasing probe sequence
  std::optional<double> probe_minimum;
  OracleCheck oracle;
  std::vector<std::string> diagnostics;
};

/// Solves sheets 0..nmax (both abs branches when f uses abs(w)), picks the
/// smallest admissible extremal value, probes for escape routes and returns
/// a verdict. Never throws for numeric trouble; it lands in the verdict.
BoundReport certify(const Functional& f, const CertifyConfig& cfg = {});

/// Smallest f over all admissible points and manifold samples. Equal values
/// (within tie_rel) prefer the lower sheet, then the point nearest the sheet
/// vertex. Throws Error when no set holds an admissible point.
Candidate minimize_over_extrema(const std::vector<ExtremalSet>& sets, const Functional& f,
                                double tie_rel = 1e-10);

/// Fills (b, gamma), (r, theta, chi) and the fixed-point error for a BOUNDED
/// report; a failed fixed-point check turns the verdict INCONCLUSIVE.
void attach_minimizer_params(BoundReport& report, const Functional& f, double tol = 1e-8);

/// Deterministic probe rays on sheet 0 and from the vertex outwards.
std::vector<WitnessPath> witness_probes(const Functional& f, int points = 50);

/// Runs parametric_search on the minimizing sheet and fock_minimize, and
/// records whether either undercuts the bound.
void cross_check(BoundReport& report, const Functional& f, const CertifyConfig& cfg);

}  // namespace uncert
