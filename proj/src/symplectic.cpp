#include "uncert/symplectic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "uncert/error.hpp"

namespace uncert {

double FMatrix::norm() const { return std::sqrt(a * a + 2.0 * c * c + d * d); }

std::string_view to_string(Definiteness cls) {
  switch (cls) {
    case Definiteness::kPosDef:
      return "POS_DEF";
    case Definiteness::kNegDef:
      return "NEG_DEF";
    case Definiteness::kIndefinite:
      return "INDEFINITE";
    case Definiteness::kSingular:
      return "SINGULAR";
  }
  return "?";
}

FMatrix f_matrix(const Grad3& g) { return {g.f_x, 0.5 * g.f_w, g.f_y}; }

double default_definiteness_tol(const FMatrix& F) { return 1e-10 * (1.0 + F.norm()); }

Definiteness classify_definiteness(const FMatrix& F, double tol) {
  const double det = F.det();
  if (std::abs(det) <= tol) return Definiteness::kSingular;
  if (det > tol && F.a > tol) return Definiteness::kPosDef;
  if (det > tol && F.a < -tol) return Definiteness::kNegDef;
  return Definiteness::kIndefinite;
}

WilliamsonResult williamson_params(const FMatrix& F) {
  const Definiteness cls = classify_definiteness(F);
  if (cls != Definiteness::kPosDef) {
    std::ostringstream os;
    os << "F = [[" << F.a << ", " << F.c << "], [" << F.c << ", " << F.d << "]] is "
       << to_string(cls) << ", Williamson reduction needs a positive definite matrix";
    throw Error(os.str());
  }
  const double c = std::sqrt(F.det());
  return {{F.c / F.d, 0.5 * std::log(F.d / c)}, c};
}

Mat2 shear_matrix(double b) { return {{{1.0, 0.0}, {b, 1.0}}}; }

Mat2 scale_matrix(double gamma) { return {{{std::exp(-gamma), 0.0}, {0.0, std::exp(gamma)}}}; }

Mat2 multiply(const Mat2& lhs, const Mat2& rhs) {
  Mat2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = lhs[i][0] * rhs[0][j] + lhs[i][1] * rhs[1][j];
  return out;
}

Mat2 transpose(const Mat2& m) { return {{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}}; }

Mat2 inverse(const Mat2& m) {
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

Mat2 williamson_sigma(const SqueezeParams& s) {
  return inverse(multiply(scale_matrix(s.gamma), shear_matrix(s.b)));
}

Moments3 squeezed_moments(const SheetIndex& sheet, const SqueezeParams& s) {
  const double e = sheet.energy();
  const double up = std::exp(2.0 * s.gamma);
  const double down = std::exp(-2.0 * s.gamma);
  const double x = e * up;
  return {x, e * (s.b * s.b * up + down), -s.b * x};
}

Bogoliubov bogoliubov_lhs(const SqueezeParams& s) {
  const double half_shear = 0.5 * s.b * std::exp(s.gamma);
  return {{std::cosh(s.gamma), -half_shear}, {std::sinh(s.gamma), half_shear}};
}

Bogoliubov bogoliubov_rhs(const ComplexSqueeze& cs) {
  const std::complex<double> rot = std::polar(1.0, -cs.chi);
  return {rot * std::cosh(cs.r), -std::polar(1.0, cs.theta - cs.chi) * std::sinh(cs.r)};
}

double bogoliubov_mismatch(const Bogoliubov& lhs, const Bogoliubov& rhs) {
  return std::max(std::abs(lhs.c1 - rhs.c1), std::abs(lhs.c2 - rhs.c2));
}

namespace {

// Maps an angle into (-pi, pi].
double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::remainder(a, 2.0 * pi);
  if (a <= -pi) a += 2.0 * pi;
  return a;
}

}  // namespace

ComplexSqueeze bch_convert(const SqueezeParams& s) {
  constexpr double pi = std::numbers::pi;
  const double b = s.b;
  const double g = s.gamma;
  const double shrink = std::exp(-2.0 * g);

  ComplexSqueeze out;
  out.chi = std::atan(b / (1.0 + shrink));
  // |c2| = sinh r; asinh stays accurate as r -> 0 where arcosh(|c1|) does not.
  const double half_shear = 0.5 * b * std::exp(g);
  out.r = std::asinh(std::hypot(std::sinh(g), half_shear));

  // tan(theta - chi) = b / (1 - e^{-2 gamma}) fixes theta only up to pi; for
  // gamma = 0 the two candidates are +-pi/2 + atan(b/2).
  double candidates[3];
  int count = 0;
  if (g == 0.0) {
    candidates[count++] = wrap_angle(0.5 * pi + std::atan(0.5 * b));
    candidates[count++] = wrap_angle(-0.5 * pi + std::atan(0.5 * b));
  } else {
    const double base = std::atan(b / (1.0 - shrink)) + out.chi;
    candidates[count++] = wrap_angle(base);
    candidates[count++] = wrap_angle(base + pi);
  }

  const Bogoliubov target = bogoliubov_lhs(s);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    ComplexSqueeze trial = out;
    trial.theta = candidates[i];
    const double mismatch = bogoliubov_mismatch(target, bogoliubov_rhs(trial));
    if (mismatch < best) {
      best = mismatch;
      out.theta = candidates[i];
    }
  }
  return out;
}

}  // namespace uncert
