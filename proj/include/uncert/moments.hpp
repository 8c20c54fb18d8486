#pragma once

namespace uncert {

/// Relative floor (in units of hbar) below which a variance counts as zero.
inline constexpr double kVarianceFloor = 1e-12;

/// Second moments of a state: x = Var(p), y = Var(q), w = covariance of p and q.
struct Moments3 {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;

  bool operator==(const Moments3&) const = default;
};

/// Coordinates of the space of moments: u = (x+y)/2, v = (x-y)/2, w.
struct MomentPoint {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;

  bool operator==(const MomentPoint&) const = default;
};

/// Label of the hyperboloid sheet u^2 - v^2 - w^2 = e_n^2 with e_n = (n + 1/2) hbar.
struct SheetIndex {
  int n = 0;
  double hbar = 1.0;

  double energy() const { return (n + 0.5) * hbar; }
};

bool is_valid(const Moments3& m, double hbar = 1.0);

/// Throws InvalidMomentsError unless is_valid(m, hbar).
void require_valid(const Moments3& m, double hbar = 1.0);

MomentPoint to_uvw(const Moments3& m);

/// Inverse of to_uvw. Throws InvalidMomentsError when u <= |v| (a zero or
/// negative variance).
Moments3 from_uvw(const MomentPoint& p, double hbar = 1.0);

/// x*y - w^2, the determinant of the covariance matrix.
double rs_value(const Moments3& m);

double hyperboloid_residual(const MomentPoint& p, const SheetIndex& sheet);

/// True iff x*y - w^2 >= hbar^2/4. `slack` widens the test for round-off.
bool in_uncertainty_region(const Moments3& m, double hbar = 1.0, double slack = 0.0);

}  // namespace uncert
