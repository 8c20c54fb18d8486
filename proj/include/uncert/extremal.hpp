#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "uncert/functional.hpp"
#include "uncert/moments.hpp"
#include "uncert/symplectic.hpp"

namespace uncert {

/// The three consistency conditions; all vanish exactly at extrema on a sheet.
///   r1 = x f_x - y f_y
///   r2 = x f_w + 2 w f_y
///   r3 = x y - w^2 - e_n^2
struct ResidualVector {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;

  double inf_norm() const;
};

struct SolverConfig {
  int nmax = 5;                     ///< sheets 0..nmax are solved
  int seeds_b = 9;                  ///< lattice size along b
  int seeds_gamma = 9;              ///< lattice size along gamma
  double b_max = 2.0;
  double gamma_max = 1.5;
  int max_iterations = 100;
  int max_halvings = 30;
  double residual_tol = 1e-10;      ///< relative to (1 + |f|) and (1 + e_n^2)
  double dedup_rel = 1e-7;
  double rank_rel = 1e-8;           ///< singular values below rank_rel * sigma_max are zero
  double continuation_step = 0.05;  ///< arc length per step, in units of e_n
  int continuation_samples = 200;   ///< per branch
};

enum class SetDimension { kEmpty, kDim0, kDim1, kDim2 };

std::string_view to_string(SetDimension dim);

struct ExtremalPoint {
  Moments3 moments;
  double value = 0.0;
  Grad3 grad;
  Definiteness definiteness = Definiteness::kSingular;
  int local_dimension = 0;  ///< 3 - rank of the residual Jacobian
  std::size_t seed_index = 0;
  double residual = 0.0;    ///< inf-norm of the residuals
};

struct ExtremalSet {
  SheetIndex sheet;
  AbsBranch branch = AbsBranch::kNone;
  SetDimension dimension = SetDimension::kEmpty;
  /// Converged, deduplicated, positive definite points (in seed order).
  std::vector<ExtremalPoint> points;
  /// Converged points discarded because F was not positive definite or the
  /// pinned abs branch did not hold.
  std::vector<ExtremalPoint> rejected;
  /// Continuation samples along a DIM1/DIM2 manifold, with f at each sample.
  std::vector<Moments3> manifold_samples;
  std::vector<double> sample_values;
  std::size_t seeds_tried = 0;
  std::size_t seeds_converged = 0;
  std::vector<std::string> notes;
};

/// Throws whatever the functional's gradient throws at `m`.
ResidualVector residuals(const Functional& f, const Moments3& m, const SheetIndex& sheet);

/// squeezed_moments over a (b, gamma) lattice; every seed lies on the sheet.
std::vector<Moments3> seed_grid(const SheetIndex& sheet, const SolverConfig& cfg);

/// Damped Newton multistart on the consistency system of one sheet, followed
/// by rank classification and continuation sampling of degenerate sets.
ExtremalSet solve_sheet(const Functional& f, const SheetIndex& sheet, const SolverConfig& cfg);

}  // namespace uncert
