#include "uncert/extremal.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "uncert/functional.hpp"

using namespace uncert;

TEST(extremal, residuals_examples) {
  const Functional rs = parse("x*y - w^2");
  const Moments3 on_sheet{2.0, (0.25 + 0.49) / 2.0, 0.7};
  const ResidualVector r = residuals(rs, on_sheet, {0});
  EXPECT_NEAR(r.r1, 0, 1e-15);
  EXPECT_NEAR(r.r2, 0, 1e-15);
  EXPECT_NEAR(r.r3, 0, 1e-15);

  const ResidualVector h = residuals(parse("sqrt(x*y)"), {0.5, 0.5, 0}, {0});
  EXPECT_EQ(h.inf_norm(), 0.0);

  // f_w = 2 x y = 2 and f_y = x z = 2 at (1, 1, 0).
  const ResidualVector t = residuals(parse("x*y*z"), {1, 1, 0}, {0});
  EXPECT_DOUBLE_EQ(t.r1, 0.0);
  EXPECT_DOUBLE_EQ(t.r2, 2.0);
  EXPECT_DOUBLE_EQ(t.r3, 0.75);
}

TEST(extremal, seed_grid_lies_on_sheet) {
  SolverConfig cfg;
  cfg.seeds_b = 5;
  cfg.seeds_gamma = 5;
  const auto seeds = seed_grid({0}, cfg);
  ASSERT_EQ(seeds.size(), 25u);
  for (const auto& m : seeds) {
    EXPECT_NEAR(rs_value(m), 0.25, 1e-12 * (1 + m.x * m.y));
    EXPECT_GT(m.x, 0);
    EXPECT_GT(m.y, 0);
  }
  EXPECT_EQ(seeds[12], (Moments3{0.5, 0.5, 0}));
}

TEST(extremal, triple_product_single_point) {
  const ExtremalSet set = solve_sheet(parse("x*y*z"), {0}, {});
  EXPECT_EQ(set.dimension, SetDimension::kDim0);
  ASSERT_EQ(set.points.size(), 1u);
  const double s = 1 / std::sqrt(3.0);
  EXPECT_NEAR(set.points[0].moments.x, s, 1e-10);
  EXPECT_NEAR(set.points[0].moments.y, s, 1e-10);
  EXPECT_NEAR(set.points[0].moments.w, -s / 2, 1e-10);
  EXPECT_EQ(set.points[0].definiteness, Definiteness::kPosDef);

  const ExtremalSet n1 = solve_sheet(parse("x*y*z"), {1}, {});
  ASSERT_EQ(n1.points.size(), 1u);
  EXPECT_NEAR(n1.points[0].moments.x, 3 * s, 1e-10);
}

TEST(extremal, heisenberg_hyperbola) {
  const ExtremalSet set = solve_sheet(parse("sqrt(x*y)"), {0}, {});
  EXPECT_EQ(set.dimension, SetDimension::kDim1);
  ASSERT_FALSE(set.manifold_samples.empty());
  for (const auto& m : set.manifold_samples) {
    EXPECT_NEAR(m.x * m.y, 0.25, 1e-9);
    EXPECT_NEAR(m.w, 0, 1e-9);
  }
  for (double v : set.sample_values) EXPECT_NEAR(v, 0.5, 1e-9);
}

TEST(extremal, rs_whole_sheet) {
  const ExtremalSet set = solve_sheet(parse("x*y - w^2"), {0}, {});
  EXPECT_EQ(set.dimension, SetDimension::kDim2);
  EXPECT_EQ(set.seeds_converged, set.seeds_tried);
  for (double v : set.sample_values) EXPECT_NEAR(v, 0.25, 1e-9);
}

TEST(extremal, converged_points_satisfy_tolerances) {
  for (const char* src : {"x*y*z", "x+y", "x+exp(y)", "2*x^2+y", "x^2+y^2+x*y+z^2"}) {
    const Functional f = parse(src);
    for (int n = 0; n <= 2; ++n) {
      const SheetIndex sheet{n};
      const ExtremalSet set = solve_sheet(f, sheet, {});
      for (const auto& p : set.points) {
        const ResidualVector r = residuals(f, p.moments, sheet);
        EXPECT_LT(std::max(std::abs(r.r1), std::abs(r.r2)), 1e-10 * (1 + std::abs(p.value))) << src;
        EXPECT_LT(std::abs(hyperboloid_residual(to_uvw(p.moments), sheet)), 1e-10 * (1 + sheet.energy() * sheet.energy()));
        EXPECT_EQ(p.definiteness, Definiteness::kPosDef);
      }
    }
  }
}

TEST(extremal, symmetric_polynomial_extrema_have_equal_variances) {
  const Functional f = parse("x^2+y^2+z^2 + 0.5*(x*y+y*z+z*x) + x*y*z");
  for (int n = 0; n <= 2; ++n) {
    const ExtremalSet set = solve_sheet(f, {n}, {});
    ASSERT_FALSE(set.points.empty());
    for (const auto& p : set.points) {
      const Moments3& m = p.moments;
      EXPECT_LT(std::abs(m.x - m.y), 1e-8);
      EXPECT_LT(std::abs(m.x + m.y + 2 * m.w - m.x), 1e-8);
    }
  }
}

TEST(extremal, s2_extrema_sit_at_the_vertex) {
  const ExtremalSet set = solve_sheet(parse("x^2 + y^2 + 3*x*y + x + y"), {0}, {});
  EXPECT_EQ(set.dimension, SetDimension::kDim0);
  for (const auto& p : set.points) {
    EXPECT_LT(std::abs(p.moments.x - p.moments.y), 1e-8);
    EXPECT_LT(std::abs(p.moments.w), 1e-8);
  }
}

TEST(extremal, indefinite_points_are_rejected) {
  const ExtremalSet set = solve_sheet(parse("x + y + 4*w"), {0}, {});
  EXPECT_TRUE(set.points.empty());
  EXPECT_EQ(set.dimension, SetDimension::kEmpty);
}

TEST(extremal, abs_branches_are_respected) {
  const Functional f = parse("sqrt(x*y) - 0.5*abs(w)");
  const ExtremalSet plus = solve_sheet(f.with_abs_branch(AbsBranch::kPlus), {0}, {});
  const ExtremalSet minus = solve_sheet(f.with_abs_branch(AbsBranch::kMinus), {0}, {});
  ASSERT_FALSE(plus.points.empty());
  ASSERT_FALSE(minus.points.empty());
  for (const auto& p : plus.points) EXPECT_GE(p.moments.w, -1e-10);
  for (const auto& p : minus.points) EXPECT_LE(p.moments.w, 1e-10);
  for (const auto& p : plus.points) EXPECT_NEAR(p.value, 0.5 * std::sqrt(0.75), 1e-10);
}

TEST(extremal, dimension_names) {
  EXPECT_EQ(to_string(SetDimension::kDim1), "DIM1");
  EXPECT_EQ(to_string(SetDimension::kEmpty), "EMPTY");
}
