#include "uncert/oracle.hpp"

#include <ceres/ceres.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "uncert/error.hpp"

namespace uncert {

FockState::FockState(Eigen::VectorXcd coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.size() < 2) throw Error("Fock state needs dimension >= 2");
  const double norm = coefficients_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw Error("Fock state has zero or non-finite norm");
  coefficients_ /= norm;
}

FockState FockState::number_state(int dim, int n) {
  if (n < 0 || n >= dim) throw Error("number state outside the truncated basis");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
  c[n] = 1.0;
  return FockState(std::move(c));
}

namespace {

using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

// q = sqrt(hbar/2)(a + a^dag) and p = i sqrt(hbar/2)(a^dag - a) applied to v;
// components beyond v's length count as zero. The same stencils give the
// adjoint action, so P^dag P v = apply_p(apply_p(v, D+1), D).
Vec apply_q(const Vec& v, Eigen::Index out_dim, double scale) {
  Vec out = Vec::Zero(out_dim);
  const Eigen::Index n = v.size();
  for (Eigen::Index j = 0; j < out_dim; ++j) {
    cd acc = 0.0;
    if (j + 1 < n) acc += std::sqrt(static_cast<double>(j + 1)) * v[j + 1];
    if (j >= 1 && j - 1 < n) acc += std::sqrt(static_cast<double>(j)) * v[j - 1];
    out[j] = scale * acc;
  }
  return out;
}

Vec apply_p(const Vec& v, Eigen::Index out_dim, double scale) {
  Vec out = Vec::Zero(out_dim);
  const Eigen::Index n = v.size();
  const cd i_scale(0.0, scale);
  for (Eigen::Index j = 0; j < out_dim; ++j) {
    cd acc = 0.0;
    if (j >= 1 && j - 1 < n) acc += std::sqrt(static_cast<double>(j)) * v[j - 1];
    if (j + 1 < n) acc -= std::sqrt(static_cast<double>(j + 1)) * v[j + 1];
    out[j] = i_scale * acc;
  }
  return out;
}

// The five Hermitian forms whose expectations build the central moments.
struct Forms {
  Vec p, q, pp, qq, sym;  // A phi for each form
};

Forms apply_forms(const Vec& phi, double hbar) {
  const double s = std::sqrt(0.5 * hbar);
  const Eigen::Index d = phi.size();
  const Vec P = apply_p(phi, d + 1, s);
  const Vec Q = apply_q(phi, d + 1, s);
  Forms out;
  out.p = P.head(d);
  out.q = Q.head(d);
  out.pp = apply_p(P, d, s);
  out.qq = apply_q(Q, d, s);
  out.sym = 0.5 * (apply_p(Q, d, s) + apply_q(P, d, s));
  return out;
}

double expect(const Vec& phi, const Vec& a_phi) { return phi.dot(a_phi).real(); }

Moments3 moments_of(const Vec& psi, const Forms& forms) {
  const double ep = expect(psi, forms.p);
  const double eq = expect(psi, forms.q);
  return {expect(psi, forms.pp) - ep * ep, expect(psi, forms.qq) - eq * eq,
          expect(psi, forms.sym) - ep * eq};
}

}  // namespace

Moments3 fock_moments(const FockState& s, double hbar) {
  const Vec& psi = s.coefficients();
  return moments_of(psi, apply_forms(psi, hbar));
}

// ---------------------------------------------------------------------------
// Parametric search on a sheet.

namespace {

std::optional<double> sheet_value(const Functional& f, const SheetIndex& sheet,
                                  const SqueezeParams& s) {
  try {
    const double v = f.evaluate(squeezed_moments(sheet, s));
    if (std::isfinite(v)) return v;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

OracleResult parametric_search(const Functional& f, const SheetIndex& sheet,
                               const ParametricConfig& cfg) {
  struct GridPoint {
    double value;
    SqueezeParams s;
  };
  std::vector<GridPoint> grid;
  const double db = cfg.grid_b > 1 ? 2.0 * cfg.b_max / (cfg.grid_b - 1) : 1.0;
  const double dg = cfg.grid_gamma > 1 ? 2.0 * cfg.gamma_max / (cfg.grid_gamma - 1) : 1.0;
  for (int i = 0; i < cfg.grid_b; ++i)
    for (int j = 0; j < cfg.grid_gamma; ++j) {
      const SqueezeParams s{-cfg.b_max + db * i, -cfg.gamma_max + dg * j};
      if (auto v = sheet_value(f, sheet, s)) grid.push_back({*v, s});
    }

  OracleResult result;
  result.method = "parametric";
  result.sheet = sheet.n;
  if (grid.empty()) return result;

  const auto starts = std::min<std::size_t>(grid.size(), static_cast<std::size_t>(cfg.refine_starts));
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(starts), grid.end(),
                    [](const GridPoint& a, const GridPoint& b) { return a.value < b.value; });

  GridPoint best = grid.front();
  bool converged = true;
  for (std::size_t k = 0; k < starts; ++k) {
    GridPoint cur = grid[k];
    double step = std::max(db, dg);
    int polls = 0;
    while (step > cfg.min_step && polls < 100000) {
      ++polls;
      bool moved = false;
      const SqueezeParams dirs[4] = {{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}};
      for (const auto& d : dirs) {
        const SqueezeParams trial{cur.s.b + d.b, cur.s.gamma + d.gamma};
        const auto v = sheet_value(f, sheet, trial);
        if (v && *v < cur.value) {
          cur = {*v, trial};
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    if (step > cfg.min_step) converged = false;
    if (cur.value < best.value) best = cur;
  }

  result.value = best.value;
  result.params = best.s;
  result.moments = squeezed_moments(sheet, best.s);
  result.restarts = static_cast<int>(starts);
  result.converged = converged;
  return result;
}

// ---------------------------------------------------------------------------
// Fock-space minimisation.

namespace {

class FockObjective final : public ceres::FirstOrderFunction {
 public:
  FockObjective(const Functional& f, int dim) : f_(f), dim_(dim) {
    if (f.uses_abs_w()) kinked_ = f.with_abs_branch(AbsBranch::kPlus);
  }

  int NumParameters() const override { return 2 * dim_; }

  bool Evaluate(const double* params, double* cost, double* gradient) const override {
    Vec phi(dim_);
    for (int k = 0; k < dim_; ++k) phi[k] = cd(params[k], params[dim_ + k]);
    const double norm2 = phi.squaredNorm();
    if (!(norm2 > 0.0)) return false;
    const Vec psi = phi / std::sqrt(norm2);
    const Forms forms = apply_forms(psi, f_.hbar());
    const Moments3 m = moments_of(psi, forms);

    double value = 0.0;
    Grad3 g;
    try {
      if (gradient == nullptr) {
        value = f_.evaluate(m);
      } else {
        std::tie(value, g) = value_and_gradient(m);
      }
    } catch (const Error&) {
      return false;
    }
    *cost = value;
    if (gradient == nullptr) return true;

    // d<A>/dphi for <A> = phi^dag A phi / |phi|^2 is 2 (A psi - <A> psi) / |phi|,
    // split into real and imaginary parts.
    const double ep = expect(psi, forms.p);
    const double eq = expect(psi, forms.q);
    const Vec dx = forms.pp - expect(psi, forms.pp) * psi - 2.0 * ep * (forms.p - ep * psi);
    const Vec dy = forms.qq - expect(psi, forms.qq) * psi - 2.0 * eq * (forms.q - eq * psi);
    const Vec dw = forms.sym - expect(psi, forms.sym) * psi - ep * (forms.q - eq * psi) -
                   eq * (forms.p - ep * psi);
    const Vec total = (2.0 / std::sqrt(norm2)) * (g.f_x * dx + g.f_y * dy + g.f_w * dw);
    for (int k = 0; k < dim_; ++k) {
      gradient[k] = total[k].real();
      gradient[dim_ + k] = total[k].imag();
    }
    return true;
  }

 private:
  std::pair<double, Grad3> value_and_gradient(const Moments3& m) const {
    try {
      return f_.value_and_gradient(m);
    } catch (const NotDifferentiableError&) {
      if (!kinked_) throw;
      // One-sided derivative at w = 0.
      return kinked_->value_and_gradient(m);
    }
  }

  const Functional& f_;
  int dim_;
  std::optional<Functional> kinked_;
};

Vec initial_state(int restart, int dim, std::uint64_t seed) {
  Vec phi = Vec::Zero(dim);
  if (restart == 0) {
    phi[0] = 1.0;
  } else if (restart == 1) {
    phi[1] = 1.0;
  } else {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < dim; ++k) {
      const double envelope = std::exp(-0.25 * k);
      phi[k] = cd(normal(rng), normal(rng)) * envelope;
    }
  }
  return phi;
}

}  // namespace

OracleResult fock_minimize(const Functional& f, const FockConfig& cfg) {
  if (cfg.dim < 2) throw Error("Fock dimension must be at least 2");
  OracleResult best;
  best.method = "fock";
  best.value = std::numeric_limits<double>::infinity();
  best.restarts = cfg.restarts;

  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = cfg.max_iterations;
  options.function_tolerance = 1e-15;
  options.gradient_tolerance = 1e-13;
  options.parameter_tolerance = 1e-15;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    const Vec phi0 = initial_state(restart, cfg.dim, cfg.seed);
    std::vector<double> params(2 * static_cast<std::size_t>(cfg.dim));
    for (int k = 0; k < cfg.dim; ++k) {
      params[k] = phi0[k].real();
      params[cfg.dim + k] = phi0[k].imag();
    }
    ceres::GradientProblem problem(new FockObjective(f, cfg.dim));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(options, problem, params.data(), &summary);

    Vec phi(cfg.dim);
    for (int k = 0; k < cfg.dim; ++k) phi[k] = cd(params[k], params[cfg.dim + k]);
    if (!(phi.norm() > 0.0)) continue;
    const FockState state(phi);
    const Moments3 m = fock_moments(state, f.hbar());
    double value = 0.0;
    try {
      value = f.evaluate(m);
    } catch (const Error&) {
      continue;
    }
    if (value < best.value) {
      best.value = value;
      best.moments = m;
      best.converged = summary.termination_type == ceres::CONVERGENCE;
      // Fix the global phase: largest coefficient real and positive.
      Vec c = state.coefficients();
      Eigen::Index arg = 0;
      c.cwiseAbs().maxCoeff(&arg);
      c *= std::polar(1.0, -std::arg(c[arg]));
      best.coefficients.assign(c.data(), c.data() + c.size());
    }
  }
  return best;
}

}  // namespace uncert
