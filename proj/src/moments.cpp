#include "uncert/moments.hpp"

#include <cmath>
#include <sstream>

#include "uncert/error.hpp"

namespace uncert {

bool is_valid(const Moments3& m, double hbar) {
  const double floor = kVarianceFloor * hbar;
  return std::isfinite(m.x) && std::isfinite(m.y) && std::isfinite(m.w) && m.x > floor &&
         m.y > floor;
}

void require_valid(const Moments3& m, double hbar) {
  if (!is_valid(m, hbar)) {
    std::ostringstream os;
    os << "non-physical moments (x=" << m.x << ", y=" << m.y << ", w=" << m.w
       << "): variances must be positive";
    throw InvalidMomentsError(os.str());
  }
}

MomentPoint to_uvw(const Moments3& m) {
  return {0.5 * (m.x + m.y), 0.5 * (m.x - m.y), m.w};
}

Moments3 from_uvw(const MomentPoint& p, double hbar) {
  const Moments3 m{p.u + p.v, p.u - p.v, p.w};
  if (!(p.u > std::abs(p.v)) || !is_valid(m, hbar)) {
    std::ostringstream os;
    os << "point (u=" << p.u << ", v=" << p.v << ", w=" << p.w
       << ") violates u > |v|";
    throw InvalidMomentsError(os.str());
  }
  return m;
}

double rs_value(const Moments3& m) { return m.x * m.y - m.w * m.w; }

double hyperboloid_residual(const MomentPoint& p, const SheetIndex& sheet) {
  const double e = sheet.energy();
  return p.u * p.u - p.v * p.v - p.w * p.w - e * e;
}

bool in_uncertainty_region(const Moments3& m, double hbar, double slack) {
  return rs_value(m) >= 0.25 * hbar * hbar - slack;
}

}  // namespace uncert
