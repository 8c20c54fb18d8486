#include "uncert/extremal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "uncert/error.hpp"

namespace uncert {

double ResidualVector::inf_norm() const {
  return std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
}

std::string_view to_string(SetDimension dim) {
  switch (dim) {
    case SetDimension::kEmpty:
      return "EMPTY";
    case SetDimension::kDim0:
      return "DIM0";
    case SetDimension::kDim1:
      return "DIM1";
    case SetDimension::kDim2:
      return "DIM2";
  }
  return "?";
}

ResidualVector residuals(const Functional& f, const Moments3& m, const SheetIndex& sheet) {
  const Grad3 g = f.gradient(m);
  const double e = sheet.energy();
  return {m.x * g.f_x - m.y * g.f_y, m.x * g.f_w + 2.0 * m.w * g.f_y,
          m.x * m.y - m.w * m.w - e * e};
}

std::vector<Moments3> seed_grid(const SheetIndex& sheet, const SolverConfig& cfg) {
  auto lattice = [](int count, double half_width, int i) {
    if (count <= 1) return 0.0;
    return -half_width + 2.0 * half_width * i / (count - 1);
  };
  std::vector<Moments3> seeds;
  seeds.reserve(static_cast<std::size_t>(std::max(cfg.seeds_b, 1) * std::max(cfg.seeds_gamma, 1)));
  for (int i = 0; i < std::max(cfg.seeds_b, 1); ++i)
    for (int j = 0; j < std::max(cfg.seeds_gamma, 1); ++j)
      seeds.push_back(squeezed_moments(sheet, {lattice(cfg.seeds_b, cfg.b_max, i),
                                               lattice(cfg.seeds_gamma, cfg.gamma_max, j)}));
  return seeds;
}

namespace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

Vec3 to_vec(const Moments3& m) { return {m.x, m.y, m.w}; }
Moments3 to_moments(const Vec3& v) { return {v[0], v[1], v[2]}; }
Vec3 to_vec(const ResidualVector& r) { return {r.r1, r.r2, r.r3}; }

// Residual evaluation that reports failure (domain, kink, invalid moments)
// instead of throwing, so that line searches can back off.
class System {
 public:
  System(const Functional& f, const SheetIndex& sheet, const SolverConfig& cfg)
      : f_(f), sheet_(sheet), cfg_(cfg) {}

  std::optional<Vec3> residual(const Vec3& v) const {
    const Moments3 m = to_moments(v);
    if (!is_valid(m, sheet_.hbar)) return std::nullopt;
    try {
      return to_vec(residuals(f_, m, sheet_));
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  // Central differences of the exact (forward-mode) residuals.
  std::optional<Mat3> jacobian(const Vec3& v) const {
    Mat3 J;
    for (int j = 0; j < 3; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(v[j]));
      Vec3 plus = v;
      Vec3 minus = v;
      plus[j] += h;
      minus[j] -= h;
      const auto rp = residual(plus);
      const auto rm = residual(minus);
      if (!rp || !rm) return std::nullopt;
      J.col(j) = (*rp - *rm) / (2.0 * h);
    }
    return J;
  }

  bool converged(const Vec3& v, const Vec3& r) const {
    const double e = sheet_.energy();
    double fv = 0.0;
    try {
      fv = f_.evaluate(to_moments(v));
    } catch (const Error&) {
      return false;
    }
    return std::max(std::abs(r[0]), std::abs(r[1])) <= cfg_.residual_tol * (1.0 + std::abs(fv)) &&
           std::abs(r[2]) <= cfg_.residual_tol * (1.0 + e * e);
  }

  // Minimum-norm Gauss-Newton step with singular values below rank_rel dropped.
  Vec3 step(const Mat3& J, const Vec3& r) const {
    Eigen::JacobiSVD<Mat3> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec3 sigma = svd.singularValues();
    Vec3 coeff = Vec3::Zero();
    const Vec3 ur = svd.matrixU().transpose() * r;
    for (int i = 0; i < 3; ++i)
      if (sigma[0] > 0.0 && sigma[i] > cfg_.rank_rel * sigma[0]) coeff[i] = ur[i] / sigma[i];
    return -(svd.matrixV() * coeff);
  }

  // Damped Newton from `start`; returns the converged point or nothing.
  std::optional<Vec3> newton(const Vec3& start, int max_iterations) const {
    Vec3 v = start;
    auto r = residual(v);
    if (!r) return std::nullopt;
    for (int it = 0; it < max_iterations; ++it) {
      if (converged(v, *r)) return polish(v, *r);
      const auto J = jacobian(v);
      if (!J) return std::nullopt;
      const Vec3 dv = step(*J, *r);
      double t = 1.0;
      bool accepted = false;
      for (int k = 0; k <= cfg_.max_halvings; ++k, t *= 0.5) {
        const Vec3 trial = v + t * dv;
        const auto rt = residual(trial);
        if (rt && rt->norm() < r->norm()) {
          v = trial;
          r = rt;
          accepted = true;
          break;
        }
      }
      if (!accepted) return converged(v, *r) ? std::optional<Vec3>(v) : std::nullopt;
    }
    if (converged(v, *r)) return polish(v, *r);
    return std::nullopt;
  }

  // A few full steps past the tolerance while they keep reducing the residual.
  Vec3 polish(Vec3 v, Vec3 r) const {
    for (int k = 0; k < 3; ++k) {
      const auto J = jacobian(v);
      if (!J) break;
      const Vec3 trial = v + step(*J, r);
      const auto rt = residual(trial);
      if (!rt || !(rt->norm() < r.norm())) break;
      v = trial;
      r = *rt;
    }
    return v;
  }

  const Functional& functional() const { return f_; }
  const SheetIndex& sheet() const { return sheet_; }

 private:
  const Functional& f_;
  SheetIndex sheet_;
  const SolverConfig& cfg_;
};

struct RankInfo {
  int rank = 0;
  Mat3 V;
};

RankInfo rank_of(const Mat3& J, double rank_rel) {
  Eigen::JacobiSVD<Mat3> svd(J, Eigen::ComputeFullV);
  const Vec3 sigma = svd.singularValues();
  RankInfo info;
  info.V = svd.matrixV();
  for (int i = 0; i < 3; ++i)
    if (sigma[0] > 0.0 && sigma[i] > rank_rel * sigma[0]) ++info.rank;
  return info;
}

bool branch_holds(AbsBranch branch, const Moments3& m, double tol) {
  switch (branch) {
    case AbsBranch::kPlus:
      return m.w >= -tol;
    case AbsBranch::kMinus:
      return m.w <= tol;
    case AbsBranch::kNone:
      return true;
  }
  return true;
}

// Predictor-corrector continuation along the null space of the residual
// Jacobian. `direction` must lie (approximately) in that null space.
void continue_along(const System& sys, const SolverConfig& cfg, int null_dim, Vec3 start,
                    Vec3 direction, int samples, std::vector<Moments3>& out) {
  const double h = cfg.continuation_step * sys.sheet().energy();
  Vec3 cur = start;
  Vec3 dir = direction.normalized();
  for (int k = 0; k < samples; ++k) {
    const auto J = sys.jacobian(cur);
    if (!J) return;
    const RankInfo info = rank_of(*J, cfg.rank_rel);
    if (3 - info.rank != null_dim) return;
    // Project the previous direction onto the current null space.
    Vec3 tangent = Vec3::Zero();
    for (int i = info.rank; i < 3; ++i) tangent += info.V.col(i).dot(dir) * info.V.col(i);
    if (tangent.norm() < 1e-12) return;
    tangent.normalize();

    const auto next = sys.newton(cur + h * tangent, 20);
    if (!next || (*next - cur).norm() < 1e-3 * h) return;
    dir = (*next - cur).normalized();
    cur = *next;
    out.push_back(to_moments(cur));
  }
}

}  // namespace

ExtremalSet solve_sheet(const Functional& f, const SheetIndex& sheet, const SolverConfig& cfg) {
  ExtremalSet set;
  set.sheet = sheet;
  set.branch = f.abs_branch();
  const System sys(f, sheet, cfg);
  const double branch_tol = 1e-10 * sheet.hbar;

  const std::vector<Moments3> seeds = seed_grid(sheet, cfg);
  set.seeds_tried = seeds.size();

  std::vector<ExtremalPoint> converged;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto root = sys.newton(to_vec(seeds[i]), cfg.max_iterations);
    if (!root) {
      ++failures;
      continue;
    }
    ++set.seeds_converged;
    const Vec3& v = *root;
    const bool duplicate = std::any_of(converged.begin(), converged.end(), [&](const auto& p) {
      const Vec3 other = to_vec(p.moments);
      return (other - v).norm() <= cfg.dedup_rel * std::max(other.norm(), v.norm());
    });
    if (duplicate) continue;

    ExtremalPoint p;
    p.moments = to_moments(v);
    p.seed_index = i;
    const auto [value, grad] = f.value_and_gradient(p.moments);
    p.value = value;
    p.grad = grad;
    p.definiteness = classify_definiteness(f_matrix(grad));
    p.residual = residuals(f, p.moments, sheet).inf_norm();
    const auto J = sys.jacobian(v);
    p.local_dimension = J ? 3 - rank_of(*J, cfg.rank_rel).rank : 0;
    converged.push_back(p);
  }

  std::size_t not_posdef = 0;
  std::size_t wrong_branch = 0;
  for (const auto& p : converged) {
    if (!branch_holds(set.branch, p.moments, branch_tol)) {
      ++wrong_branch;
      set.rejected.push_back(p);
    } else if (p.definiteness != Definiteness::kPosDef) {
      ++not_posdef;
      set.rejected.push_back(p);
    } else {
      set.points.push_back(p);
    }
  }

  if (failures > 0) {
    std::ostringstream os;
    os << failures << " of " << seeds.size() << " seeds did not converge";
    set.notes.push_back(os.str());
  }
  if (not_posdef > 0) {
    std::ostringstream os;
    os << not_posdef << " converged point(s) discarded: F not positive definite";
    set.notes.push_back(os.str());
  }
  if (wrong_branch > 0) {
    std::ostringstream os;
    os << wrong_branch << " converged point(s) discarded: sign of w outside the pinned abs branch";
    set.notes.push_back(os.str());
  }

  int max_dim = -1;
  for (const auto& p : set.points) max_dim = std::max(max_dim, p.local_dimension);
  switch (max_dim) {
    case -1:
      set.dimension = SetDimension::kEmpty;
      break;
    case 0:
      set.dimension = SetDimension::kDim0;
      break;
    case 1:
      set.dimension = SetDimension::kDim1;
      break;
    default:
      set.dimension = SetDimension::kDim2;
      break;
  }

  if (max_dim >= 1) {
    const auto base = std::find_if(set.points.begin(), set.points.end(),
                                   [&](const auto& p) { return p.local_dimension == max_dim; });
    const Vec3 start = to_vec(base->moments);
    const auto J = sys.jacobian(start);
    if (J) {
      const RankInfo info = rank_of(*J, cfg.rank_rel);
      std::vector<Moments3> samples;
      if (max_dim == 1) {
        const Vec3 t = info.V.col(2);
        continue_along(sys, cfg, 1, start, t, cfg.continuation_samples, samples);
        continue_along(sys, cfg, 1, start, -t, cfg.continuation_samples, samples);
      } else {
        constexpr int kFan = 8;
        const int per_ray = std::max(1, cfg.continuation_samples / kFan);
        for (int k = 0; k < kFan; ++k) {
          const double phi = 2.0 * std::numbers::pi * k / kFan;
          const Vec3 dir = std::cos(phi) * info.V.col(1) + std::sin(phi) * info.V.col(2);
          continue_along(sys, cfg, 2, start, dir, per_ray, samples);
        }
      }
      for (const auto& m : samples) {
        try {
          const auto [value, grad] = f.value_and_gradient(m);
          if (classify_definiteness(f_matrix(grad)) != Definiteness::kPosDef) continue;
          if (!branch_holds(set.branch, m, branch_tol)) continue;
          set.manifold_samples.push_back(m);
          set.sample_values.push_back(value);
        } catch (const Error&) {
        }
      }
    }
  }
  return set;
}

}  // namespace uncert
