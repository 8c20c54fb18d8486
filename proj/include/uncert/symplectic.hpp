#pragma once

#include <array>
#include <complex>
#include <string_view>

#include "uncert/functional.hpp"
#include "uncert/moments.hpp"

namespace uncert {

/// Symmetric matrix [[f_x, f_w/2], [f_w/2, f_y]] of the quadratic operator
/// f_x p^2 + f_y q^2 + (f_w/2)(pq + qp).
struct FMatrix {
  double a = 0.0;  ///< f_x
  double c = 0.0;  ///< f_w / 2
  double d = 0.0;  ///< f_y

  double det() const { return a * d - c * c; }
  double norm() const;  ///< Frobenius norm
};

enum class Definiteness { kPosDef, kNegDef, kIndefinite, kSingular };

std::string_view to_string(Definiteness cls);

/// Shear b and log-scale gamma of the symplectic map diagonalising F.
struct SqueezeParams {
  double b = 0.0;
  double gamma = 0.0;
};

/// Rotation-plus-complex-squeeze form: r >= 0, theta in (-pi, pi], chi in (-pi/2, pi/2).
struct ComplexSqueeze {
  double r = 0.0;
  double theta = 0.0;
  double chi = 0.0;
};

struct WilliamsonResult {
  SqueezeParams params;
  double c = 0.0;  ///< sqrt(det F), the common diagonal entry
};

/// Coefficients of a and a^dagger in the transformed annihilation operator.
struct Bogoliubov {
  std::complex<double> c1;
  std::complex<double> c2;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

FMatrix f_matrix(const Grad3& g);

/// Default tolerance 1e-10 * (1 + |F|).
double default_definiteness_tol(const FMatrix& F);

Definiteness classify_definiteness(const FMatrix& F, double tol);
inline Definiteness classify_definiteness(const FMatrix& F) {
  return classify_definiteness(F, default_definiteness_tol(F));
}

/// b = f_w / (2 f_y), gamma = ln(f_y / sqrt(det F)) / 2, c = sqrt(det F).
/// Throws Error unless F is positive definite.
WilliamsonResult williamson_params(const FMatrix& F);

/// G_b = [[1, 0], [b, 1]] and S_gamma = diag(e^-gamma, e^gamma).
Mat2 shear_matrix(double b);
Mat2 scale_matrix(double gamma);
Mat2 multiply(const Mat2& lhs, const Mat2& rhs);
Mat2 transpose(const Mat2& m);
Mat2 inverse(const Mat2& m);

/// Sigma = (S_gamma G_b)^-1, which satisfies Sigma^T F Sigma = c I.
Mat2 williamson_sigma(const SqueezeParams& s);

/// Second moments of the squeezed number state built on |n>:
/// x = e_n e^{2 gamma}, w = -b x, y = e_n (b^2 e^{2 gamma} + e^{-2 gamma}).
Moments3 squeezed_moments(const SheetIndex& sheet, const SqueezeParams& s);

/// Converts (b, gamma) to (r, theta, chi) such that both sides describe the
/// same Bogoliubov transformation. Where the arctan formulas are ambiguous by
/// pi the branch with the smaller Bogoliubov residual is taken.
ComplexSqueeze bch_convert(const SqueezeParams& s);

/// c1 = cosh(gamma) - i (b/2) e^gamma, c2 = sinh(gamma) + i (b/2) e^gamma.
Bogoliubov bogoliubov_lhs(const SqueezeParams& s);

/// c1 = e^{-i chi} cosh r, c2 = -e^{i(theta - chi)} sinh r.
Bogoliubov bogoliubov_rhs(const ComplexSqueeze& cs);

/// max(|dc1|, |dc2|) between the two sides.
double bogoliubov_mismatch(const Bogoliubov& lhs, const Bogoliubov& rhs);

}  // namespace uncert
