#include "uncert/functional.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "uncert/error.hpp"

using namespace uncert;

TEST(functional, parses_rs_and_evaluates) {
  const Functional f = parse("x*y - w^2");
  EXPECT_DOUBLE_EQ(f.evaluate({1, 1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(f.evaluate({2, 3, 1}), 5.0);
  EXPECT_FALSE(f.uses_abs_w());
}

TEST(functional, z_expands_to_x_plus_y_plus_2w) {
  const Functional z = parse("z");
  for (const Moments3 m : {Moments3{1, 2, 3}, Moments3{0.3, 0.7, -0.2}, Moments3{5, 1e-3, -2.5}})
    EXPECT_EQ(z.evaluate(m), m.x + m.y + 2 * m.w);

  const Functional t = parse("x*y*z");
  const Moments3 m{0.5, 2.0, -0.25};
  EXPECT_DOUBLE_EQ(t.evaluate(m), 0.5 * 2.0 * (0.5 + 2.0 - 0.5));
}

TEST(functional, zero_times_y_is_x) {
  const Functional f = parse("x + 0*y");
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Moments3 m = testkit::random_moments(rng);
    EXPECT_EQ(f.evaluate(m), m.x);
  }
}

TEST(functional, triple_product_at_its_minimizer) {
  const double s = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(parse("x*y*z").evaluate({s, s, -s / 2}), std::pow(3.0, -1.5), 1e-15);
}

TEST(functional, heisenberg_value_and_gradient) {
  const Functional f = parse("sqrt(x*y)");
  EXPECT_DOUBLE_EQ(f.evaluate({0.25, 0.25, 0}), 0.25);
  const Grad3 g = f.gradient({1, 4, 0});
  EXPECT_DOUBLE_EQ(g.f_x, 1.0);
  EXPECT_DOUBLE_EQ(g.f_y, 0.25);
  EXPECT_DOUBLE_EQ(g.f_w, 0.0);
}

TEST(functional, rs_gradient) {
  const Grad3 g = parse("x*y - w^2").gradient({2, 3, 1});
  EXPECT_DOUBLE_EQ(g.f_x, 3);
  EXPECT_DOUBLE_EQ(g.f_y, 2);
  EXPECT_DOUBLE_EQ(g.f_w, -2);
}

TEST(functional, parameters_and_constants) {
  const Functional f = parse("mu*x + nu*y + 2*lambda*w", {{"mu", 2}, {"nu", 3}, {"lambda", 0.5}});
  EXPECT_DOUBLE_EQ(f.evaluate({1, 1, 1}), 6.0);
  EXPECT_DOUBLE_EQ(parse("hbar*x", {}, 2.0).evaluate({3, 1, 0}), 6.0);
  EXPECT_DOUBLE_EQ(parse("pi + e").evaluate({1, 1, 0}), M_PI + M_E);
  EXPECT_DOUBLE_EQ(parse("2^3^2").evaluate({1, 1, 0}), 512.0);
  EXPECT_DOUBLE_EQ(parse("-x^2").evaluate({3, 1, 0}), -9.0);
  EXPECT_DOUBLE_EQ(parse("pow(x, 0.5)").evaluate({4, 1, 0}), 2.0);
  EXPECT_DOUBLE_EQ(parse(" 1.5e1 * ( x ) ").evaluate({2, 1, 0}), 30.0);
}

TEST(functional, syntax_errors_report_position) {
  try {
    parse("x + * y");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse("(x + y"), ParseError);
  EXPECT_THROW(parse("x y"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("pow(x)"), ParseError);
}

TEST(functional, unknown_identifiers) {
  EXPECT_THROW(parse("sin(x)"), UnknownIdentifierError);
  EXPECT_THROW(parse("x + q"), UnboundParameterError);
  EXPECT_THROW(parse("x", {{"x", 1.0}}), ParseError);
}

TEST(functional, domain_errors) {
  EXPECT_THROW(parse("ln(w)").evaluate({1, 1, -1}), DomainError);
  EXPECT_THROW(parse("sqrt(w)").evaluate({1, 1, -1}), DomainError);
  EXPECT_THROW(parse("w^0.5").evaluate({1, 1, -1}), DomainError);
  EXPECT_THROW(parse("x/w").evaluate({1, 1, 0}), DomainError);
  EXPECT_THROW(parse("exp(1000*x)").evaluate({1, 1, 0}), DomainError);
  EXPECT_DOUBLE_EQ(parse("w^3").evaluate({1, 1, -2}), -8.0);
}

TEST(functional, abs_branches) {
  const Functional f = parse("sqrt(x*y) - 0.5*abs(w)");
  EXPECT_TRUE(f.uses_abs_w());
  EXPECT_DOUBLE_EQ(f.evaluate({1, 1, -0.5}), 0.75);
  EXPECT_THROW(f.gradient({1, 1, 0}), NotDifferentiableError);
  EXPECT_DOUBLE_EQ(f.gradient({1, 1, -0.5}).f_w, 0.5);

  const Functional plus = f.with_abs_branch(AbsBranch::kPlus);
  const Functional minus = f.with_abs_branch(AbsBranch::kMinus);
  EXPECT_DOUBLE_EQ(plus.gradient({1, 1, 0}).f_w, -0.5);
  EXPECT_DOUBLE_EQ(minus.gradient({1, 1, 0}).f_w, 0.5);
  EXPECT_DOUBLE_EQ(plus.evaluate({1, 1, 0.2}), 0.9);
}

TEST(functional, gradient_matches_finite_differences) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const Functional f = parse(testkit::random_functional(rng));
    const Moments3 m = testkit::random_moments(rng);
    const Grad3 g = f.gradient(m);
    const Grad3 fd = testkit::finite_difference_gradient(f, m);
    EXPECT_LE(std::abs(g.f_x - fd.f_x), 1e-6 * std::max(1.0, std::abs(g.f_x))) << f.source();
    EXPECT_LE(std::abs(g.f_y - fd.f_y), 1e-6 * std::max(1.0, std::abs(g.f_y))) << f.source();
    EXPECT_LE(std::abs(g.f_w - fd.f_w), 1e-6 * std::max(1.0, std::abs(g.f_w))) << f.source();
  }
}

TEST(functional, value_and_gradient_agree_with_separate_calls) {
  const Functional f = parse("x*y*z + exp(w)");
  const Moments3 m{0.7, 1.3, -0.2};
  const auto [v, g] = f.value_and_gradient(m);
  EXPECT_EQ(v, f.evaluate(m));
  EXPECT_EQ(g.f_w, f.gradient(m).f_w);
}

TEST(functional, printed_form_parses_back) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Functional f = parse(testkit::random_functional(rng));
    const Functional g = parse(f.to_string());
    for (int k = 0; k < 5; ++k) {
      const Moments3 m = testkit::random_moments(rng);
      EXPECT_EQ(f.evaluate(m), g.evaluate(m)) << f.source() << "  ->  " << f.to_string();
    }
  }
  const Functional p = parse("mu*x - 2", {{"mu", -1.5}});
  EXPECT_EQ(parse(p.to_string(), p.params()).evaluate({2, 1, 0}), -5.0);
}
