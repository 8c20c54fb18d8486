#include "uncert/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "uncert/error.hpp"

using namespace uncert;

TEST(oracle, fock_state_normalizes) {
  Eigen::VectorXcd v(3);
  v << 3.0, 4.0, 0.0;
  const FockState s(v);
  EXPECT_NEAR(s.coefficients().norm(), 1.0, 1e-15);
  EXPECT_THROW(FockState(Eigen::VectorXcd::Zero(4)), Error);
  EXPECT_THROW(FockState(Eigen::VectorXcd::Ones(1)), Error);
}

TEST(oracle, number_state_moments) {
  const Moments3 g = fock_moments(FockState::number_state(4, 0));
  EXPECT_NEAR(g.x, 0.5, 1e-15);
  EXPECT_NEAR(g.y, 0.5, 1e-15);
  EXPECT_NEAR(g.w, 0.0, 1e-15);
  const Moments3 one = fock_moments(FockState::number_state(4, 1));
  EXPECT_NEAR(one.x, 1.5, 1e-15);
  EXPECT_NEAR(one.y, 1.5, 1e-15);
  const Moments3 h = fock_moments(FockState::number_state(4, 2), 2.0);
  EXPECT_NEAR(h.x, 5.0, 1e-14);
}

// (|0> + |1>)/sqrt(2): <q> = 1/sqrt(2), <q^2> = 1, <p> = 0, <p^2> = 1, so
// Var(p) = 1 and Var(q) = 1/2.
TEST(oracle, superposition_moments) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2);
  v << 1.0, 1.0;
  const Moments3 m = fock_moments(FockState(v));
  EXPECT_NEAR(m.x, 1.0, 1e-15);
  EXPECT_NEAR(m.y, 0.5, 1e-15);
  EXPECT_NEAR(m.w, 0.0, 1e-15);
}

TEST(oracle, moments_match_dense_matrices) {
  std::mt19937_64 rng(11);
  for (int dim : {2, 3, 8, 30}) {
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXcd v = testkit::random_state(rng, dim);
      const double hbar = 0.5 + i % 3;
      const Moments3 a = fock_moments(FockState(v), hbar);
      const Moments3 b = testkit::dense_fock_moments(v, hbar);
      const double scale = 1 + std::abs(b.x) + std::abs(b.y);
      EXPECT_NEAR(a.x, b.x, 1e-12 * scale);
      EXPECT_NEAR(a.y, b.y, 1e-12 * scale);
      EXPECT_NEAR(a.w, b.w, 1e-12 * scale);
      EXPECT_GE(rs_value(a), hbar * hbar / 4 - 1e-10);
    }
  }
}

TEST(oracle, parametric_search_examples) {
  const OracleResult rs = parametric_search(parse("x*y - w^2"), {0});
  EXPECT_NEAR(rs.value, 0.25, 1e-8);

  const OracleResult t = parametric_search(parse("x*y*z"), {0});
  EXPECT_NEAR(t.value, std::pow(3.0, -1.5), 1e-10);
  ASSERT_TRUE(t.params.has_value());
  EXPECT_NEAR(t.params->b, 0.5, 1e-4);
  EXPECT_NEAR(t.params->gamma, 0.0719205, 1e-4);
  EXPECT_TRUE(in_uncertainty_region(t.moments, 1.0, 1e-10));

  const OracleResult h = parametric_search(parse("sqrt(x*y)"), {0});
  EXPECT_NEAR(h.value, 0.5, 1e-12);
  EXPECT_NEAR(h.params->b, 0.0, 1e-6);
}

TEST(oracle, fock_minimize_examples) {
  const OracleResult rs = fock_minimize(parse("x*y - w^2"));
  EXPECT_GE(rs.value, 0.25 - 1e-8);
  EXPECT_LE(rs.value, 0.25 + 1e-5);

  const OracleResult t = fock_minimize(parse("x*y*z"));
  EXPECT_NEAR(t.value, std::pow(3.0, -1.5), 1e-5);

  FockConfig small;
  small.dim = 10;
  const OracleResult sum = fock_minimize(parse("x + y"), small);
  EXPECT_NEAR(sum.value, 1.0, 1e-8);
  ASSERT_EQ(sum.coefficients.size(), 10u);
  // Any coherent state attains the minimum; the moments are those of |0>.
  EXPECT_NEAR(sum.moments.x, 0.5, 1e-4);
  EXPECT_NEAR(sum.moments.y, 0.5, 1e-4);
  EXPECT_TRUE(in_uncertainty_region(sum.moments, 1.0, 1e-10));
}

TEST(oracle, fock_minimize_is_deterministic) {
  FockConfig cfg;
  cfg.restarts = 5;
  const Functional f = parse("x + 2*y + w");
  EXPECT_EQ(fock_minimize(f, cfg).value, fock_minimize(f, cfg).value);
}

TEST(oracle, larger_dimension_does_not_hurt) {
  const Functional f = parse("x + exp(y)");
  double previous = INFINITY;
  for (int dim : {10, 20, 30}) {
    FockConfig cfg;
    cfg.dim = dim;
    const double v = fock_minimize(f, cfg).value;
    EXPECT_LE(v, previous + 1e-9);
    previous = v;
  }
}

TEST(oracle, truncation_error_of_squeezed_vacuum) {
  // Squeezed vacuum with r = 0.3: c_{2k} ~ (-tanh r)^k sqrt((2k)!)/(2^k k!).
  const double r = 0.3;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(30);
  double c = 1.0;
  for (int k = 0; 2 * k < 30; ++k) {
    v[2 * k] = c;
    c *= -std::tanh(r) * std::sqrt((2.0 * k + 1) * (2.0 * k + 2)) / (2.0 * (k + 1));
  }
  const Moments3 m = fock_moments(FockState(v));
  // Squeezing q by e^{-r}: Var(q) = e^{-2r}/2, Var(p) = e^{2r}/2.
  EXPECT_NEAR(m.y, 0.5 * std::exp(-2 * r), 1e-8);
  EXPECT_NEAR(m.x, 0.5 * std::exp(2 * r), 1e-8);
}
