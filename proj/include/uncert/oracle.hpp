#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uncert/functional.hpp"
#include "uncert/moments.hpp"
#include "uncert/symplectic.hpp"

namespace uncert {

/// A normalized pure state in the truncated number basis |0>, ..., |D-1>.
class FockState {
 public:
  /// Normalizes `coefficients`. Throws Error for D < 2 or a zero vector.
  explicit FockState(Eigen::VectorXcd coefficients);

  static FockState number_state(int dim, int n);

  int dim() const { return static_cast<int>(coefficients_.size()); }
  const Eigen::VectorXcd& coefficients() const { return coefficients_; }

 private:
  Eigen::VectorXcd coefficients_;
};

struct OracleResult {
  std::string method;  ///< "parametric" or "fock"
  double value = 0.0;
  Moments3 moments;
  int sheet = 0;                       ///< parametric only
  std::optional<SqueezeParams> params; ///< parametric only
  std::vector<std::complex<double>> coefficients;  ///< fock only
  int restarts = 0;
  bool converged = false;
};

struct ParametricConfig {
  int grid_b = 81;
  int grid_gamma = 61;
  double b_max = 4.0;
  double gamma_max = 3.0;
  int refine_starts = 5;      ///< best grid points that get a pattern search
  double min_step = 1e-10;
};

struct FockConfig {
  int dim = 30;
  int restarts = 20;
  std::uint64_t seed = 42;
  int max_iterations = 2000;
};

/// Central second moments of a Fock state. Products of p and q are applied
/// exactly (through level D), so the result is exact for the truncated state.
Moments3 fock_moments(const FockState& s, double hbar = 1.0);

/// Minimum of f over the squeezed number states of one sheet, by a (b, gamma)
/// grid followed by compass pattern search.
OracleResult parametric_search(const Functional& f, const SheetIndex& sheet,
                               const ParametricConfig& cfg = {});

/// Multistart L-BFGS minimisation of f(fock_moments(psi)) over normalized
/// complex psi in dimension cfg.dim. Restart 0 is |0>, restart 1 is |1>, the
/// rest are random with a decaying envelope drawn from cfg.seed.
OracleResult fock_minimize(const Functional& f, const FockConfig& cfg = {});

}  // namespace uncert
