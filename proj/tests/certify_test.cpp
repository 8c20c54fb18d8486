#include "uncert/certify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "uncert/error.hpp"

using namespace uncert;

namespace {

CertifyConfig quick() {
  CertifyConfig cfg;
  cfg.run_oracles = false;
  cfg.solver.nmax = 3;
  return cfg;
}

}  // namespace

TEST(certify, verdict_names) {
  EXPECT_EQ(to_string(Verdict::kBounded), "BOUNDED");
  EXPECT_EQ(to_string(Verdict::kUnbounded), "UNBOUNDED");
  EXPECT_EQ(to_string(Verdict::kInfimumNotAttained), "INFIMUM_NOT_ATTAINED");
  EXPECT_EQ(to_string(Verdict::kInconclusive), "INCONCLUSIVE");
}

TEST(certify, classic_bounds) {
  struct Case {
    const char* src;
    double bound;
  } cases[] = {{"sqrt(x*y)", 0.5}, {"x+y", 1.0}, {"x*y-w^2", 0.25},
               {"x*y*z", std::pow(3.0, -1.5)}, {"x+y+z", std::sqrt(3.0)}};
  for (const auto& c : cases) {
    const BoundReport r = certify(parse(c.src), quick());
    EXPECT_EQ(r.verdict, Verdict::kBounded) << c.src;
    EXPECT_NEAR(r.bound, c.bound, 1e-8 * c.bound) << c.src;
    EXPECT_EQ(r.sheet, 0);
    EXPECT_TRUE(r.sheets_monotone) << c.src;
  }
}

TEST(certify, bound_scales_with_hbar) {
  const BoundReport r = certify(parse("x*y*z", {}, 2.0), quick());
  EXPECT_EQ(r.verdict, Verdict::kBounded);
  EXPECT_NEAR(r.bound, 8 * std::pow(3.0, -1.5), 1e-8);
}

TEST(certify, triple_product_parameters) {
  const BoundReport r = certify(parse("x*y*z"), quick());
  ASSERT_TRUE(r.params.has_value());
  EXPECT_NEAR(r.params->b, 0.5, 1e-8);
  EXPECT_NEAR(r.params->gamma, 0.5 * std::log(std::sqrt(4.0 / 3.0)), 1e-8);
  ASSERT_TRUE(r.fixed_point_error.has_value());
  EXPECT_LT(*r.fixed_point_error, 1e-8);
  ASSERT_TRUE(r.complex_params.has_value());
  EXPECT_GE(r.complex_params->r, 0.0);
}

TEST(certify, unbounded_functionals) {
  for (const char* src : {"x+y+4*w", "(x*y)^2 - 2*w^4", "x - y"}) {
    const BoundReport r = certify(parse(src), quick());
    EXPECT_EQ(r.verdict, Verdict::kUnbounded) << src;
    EXPECT_TRUE(std::isinf(r.bound) && r.bound < 0) << src;
    ASSERT_TRUE(r.witness.has_value()) << src;
    for (std::size_t i = 1; i < r.witness->values.size(); ++i)
      EXPECT_LT(r.witness->values[i], r.witness->values[i - 1]) << src;
  }
}

TEST(certify, infimum_not_attained) {
  for (const char* src : {"sqrt(x*y)/(sqrt(x)+sqrt(y))", "x+y+2*w"}) {
    const BoundReport r = certify(parse(src), quick());
    EXPECT_EQ(r.verdict, Verdict::kInfimumNotAttained) << src;
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_GT(r.witness->values.back(), 0.0);
    EXPECT_LT(r.bound, 1e-3) << src;
    EXPECT_FALSE(r.minimizer.has_value());
  }
}

TEST(certify, bound_holds_on_random_squeezed_states) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> b(-2, 2), g(-1, 1);
  std::uniform_int_distribution<int> n(0, 3);
  for (const char* src : {"x*y*z", "x+exp(y)", "2*x^2+y", "sqrt(x*y)-0.5*abs(w)", "x^2+y^2+x*y+z"}) {
    const Functional f = parse(src);
    const BoundReport r = certify(f, quick());
    ASSERT_EQ(r.verdict, Verdict::kBounded) << src;
    for (int i = 0; i < 1000; ++i) {
      const Moments3 m = squeezed_moments({n(rng)}, {b(rng), g(rng)});
      EXPECT_GE(f.evaluate(m), r.bound - 1e-9 * (1 + std::abs(r.bound))) << src;
    }
  }
}

TEST(certify, abs_w_functional_checks_both_branches) {
  const BoundReport r = certify(parse("sqrt(x*y)-0.5*abs(w)"), quick());
  EXPECT_EQ(r.verdict, Verdict::kBounded);
  EXPECT_NEAR(r.bound, 0.5 * std::sqrt(0.75), 1e-8);
  int plus = 0, minus = 0;
  for (const auto& s : r.sheets) {
    plus += s.branch == AbsBranch::kPlus;
    minus += s.branch == AbsBranch::kMinus;
  }
  EXPECT_EQ(plus, 4);
  EXPECT_EQ(minus, 4);
}

TEST(certify, oracles_agree_with_bound) {
  CertifyConfig cfg;
  cfg.solver.nmax = 2;
  cfg.fock.restarts = 6;
  const BoundReport r = certify(parse("x*y*z"), cfg);
  EXPECT_EQ(r.verdict, Verdict::kBounded);
  ASSERT_TRUE(r.oracle.fock.has_value());
  ASSERT_TRUE(r.oracle.parametric.has_value());
  EXPECT_TRUE(r.oracle.fock_consistent);
  EXPECT_TRUE(r.oracle.parametric_consistent);
  EXPECT_NEAR(r.oracle.fock->value, r.bound, 1e-4);
}

TEST(certify, minimize_over_extrema_prefers_lower_sheet) {
  const Functional f = parse("x*y-w^2");
  std::vector<ExtremalSet> sets(2);
  sets[0].sheet = {1};
  sets[0].points.push_back({});
  sets[0].points.back().moments = {1.5, 1.5, 0};
  sets[0].points.back().value = 1.0;
  sets[1].sheet = {0};
  sets[1].points.push_back({});
  sets[1].points.back().moments = {0.5, 0.5, 0};
  sets[1].points.back().value = 1.0;
  EXPECT_EQ(minimize_over_extrema(sets, f).sheet, 0);
  EXPECT_THROW(minimize_over_extrema({}, f), Error);
}

TEST(certify, witness_probes_stay_in_region) {
  for (const auto& path : witness_probes(parse("x+y"), 20)) {
    ASSERT_EQ(path.moments.size(), path.values.size());
    for (const auto& m : path.moments) {
      // x*y - w^2 loses digits far out on a sheet; allow for that rounding.
      const double noise = 1e-14 * (m.x * m.y + m.w * m.w);
      EXPECT_GT(m.x, 0) << path.label;
      EXPECT_GE(rs_value(m), 0.25 - 1e-12 - noise) << path.label;
    }
  }
}
