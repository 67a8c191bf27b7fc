// Randomized checks of the algebraic invariants over many shapes and seeds.

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hcube/hcube.hpp"

using namespace hcube;

namespace {

struct Shape {
  int n;
  int m;
};

std::vector<Shape> shapes() {
  std::vector<Shape> out;
  for (int n = 1; n <= 7; ++n)
    for (int m : {1, 3}) out.push_back({n, m});
  return out;
}

FunctionFamily random_family(int n, int m, std::uint64_t seed, std::uint64_t stream) {
  std::vector<HypercubeFunction> members;
  for (int i = 0; i < n; ++i) members.push_back(random_function(n, m, seed, (stream << 8) + i));
  return FunctionFamily(std::move(members));
}

const auto exact = RademacherAveragePlan::exact();

}  // namespace

TEST(Properties, OperatorsAreLinear) {
  for (const auto [n, m] : shapes()) {
    const auto f = random_function(n, m, 1, n);
    const auto g = random_function(n, m, 2, n);
    const auto h = f + (-2.5) * g;
    for (int i = 1; i <= n; ++i) {
      EXPECT_LE(relative_deviation(partial_derivative(h, i), partial_derivative(f, i) + (-2.5) * partial_derivative(g, i)),
                1e-12);
      EXPECT_LE(relative_deviation(conditional_expectation(h, i),
                                   conditional_expectation(f, i) + (-2.5) * conditional_expectation(g, i)),
                1e-12);
    }
  }
}

TEST(Properties, ProjectionsAreIdempotent) {
  for (const auto [n, m] : shapes()) {
    const auto f = random_function(n, m, 3, n);
    for (int i = 1; i <= n; ++i) {
      const auto e = averaging_operator(f, i);
      EXPECT_LE(relative_deviation(averaging_operator(e, i), e), 1e-12);
      const auto d = partial_derivative(f, i);
      EXPECT_LE(relative_deviation(partial_derivative(d, i), d), 1e-12);
    }
    const auto r = rademacher_projection(f);
    EXPECT_LE(relative_deviation(rademacher_projection(r), r), 1e-12);
  }
}

TEST(Properties, ConditionalExpectationsCommuteAndNest) {
  for (const auto [n, m] : shapes()) {
    const auto f = random_function(n, m, 4, n);
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b)
        EXPECT_LE(relative_deviation(conditional_expectation(conditional_expectation(f, a), b),
                                     conditional_expectation(f, std::min(a, b))),
                  1e-12);
  }
}

TEST(Properties, ConditionalExpectationContractsEveryNorm) {
  for (const auto [n, m] : shapes())
    for (double q : {1.0, 3.0, infinity}) {
      const NormSpace X(m, q);
      const auto f = random_function(n, m, 5, n);
      for (int i = 0; i <= n; ++i)
        EXPECT_LE(lp_norm(conditional_expectation(f, i), 1.7, X), lp_norm(f, 1.7, X) * (1 + 1e-12));
    }
}

TEST(Properties, PermutedExpectationMatchesRelabelledAveraging) {
  for (int n = 2; n <= 6; ++n) {
    const auto f = random_function(n, 2, 6, n);
    const auto pi = random_permutation(n, 6, n);
    for (int level = 0; level <= n; ++level) {
      // Average over the coordinates outside {pi(1), ..., pi(level)} one by one.
      HypercubeFunction direct = f;
      for (int i = level + 1; i <= n; ++i) direct = averaging_operator(direct, pi(i));
      EXPECT_LE(relative_deviation(conditional_expectation_permuted(f, pi, level), direct), 1e-12);
    }
  }
}

TEST(Properties, ParsevalAndPlancherel) {
  for (const auto [n, m] : shapes()) {
    const auto f = random_function(n, m, 7, n);
    const auto g = random_function(n, m, 8, n);
    const auto fs = walsh_forward(f);
    const auto gs = walsh_forward(g);
    double spectral = 0.0;
    for (mask_t a = 0; a < fs.size(); ++a)
      for (int j = 0; j < m; ++j) spectral += fs(a, j) * gs(a, j);
    EXPECT_NEAR(duality_pairing(f, g), spectral, 1e-12);
  }
}

TEST(Properties, LpNormMonotoneInP) {
  for (const auto [n, m] : shapes()) {
    const NormSpace X(m, 1.5);
    const auto f = random_function(n, m, 9, n);
    double previous = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0, infinity}) {
      const double v = lp_norm(f, p, X);
      EXPECT_GE(v, previous * (1 - 1e-12));
      previous = v;
    }
  }
}

TEST(Properties, RatiosAreScaleInvariant) {
  for (int n = 1; n <= 5; ++n) {
    const NormSpace X(2, 3.0);
    const auto f = random_function(n, 2, 10, n);
    const auto family = random_family(n, 2, 10, n);
    EXPECT_NEAR(*pisier_report(f, 2.5, X, exact).ratio, *pisier_report(4.0 * f, 2.5, X, exact).ratio, 1e-12);
    EXPECT_NEAR(*theorem1_report(family, 2.5, X, exact).ratio,
                *theorem1_report(family.transformed([](const HypercubeFunction& g, int) { return 0.01 * g; }), 2.5, X,
                                 exact)
                     .ratio,
                1e-12);
  }
}

TEST(Properties, TransformsAgreeForAllSmallShapes) {
  for (int n = 1; n <= 10; ++n) {
    const auto f = random_function(n, 2, 11, n);
    EXPECT_LE(relative_deviation(walsh_forward(f), walsh_forward_naive(f)), 1e-12) << "n=" << n;
  }
}

TEST(Properties, SymmetrizationIdentityAcrossShapes) {
  for (int n = 1; n <= 6; ++n)
    for (int m : {1, 3})
      for (int t = 0; t < 3; ++t)
        EXPECT_LE(verify_symmetrization_identity(random_family(n, m, 12, 10 * n + t)).max_deviation, 1e-9);
}

TEST(Properties, HilbertEqualities) {
  const NormSpace X(3, 2.0);
  for (int n = 1; n <= 6; ++n)
    for (int t = 0; t < 5; ++t) {
      const auto f = random_function(n, 3, 13, 10 * n + t);
      EXPECT_LE(*pisier_report(f, 2.0, X, exact).ratio, 1.0 + 1e-9);
      EXPECT_LE(*stein_report(random_family(n, 3, 14, 10 * n + t), 2.0, X, exact).ratio, 1.0 + 1e-9);
      const auto M = make_dyadic_martingale(f);
      EXPECT_NEAR(*umd_plus_ratio(M, 2.0, X, exact), 1.0, 1e-9);
      EXPECT_NEAR(*umd_minus_ratio(M, 2.0, X, exact), 1.0, 1e-9);
    }
}

TEST(Properties, PisierBelowEnvelopeOnRandomInputs) {
  for (int n = 2; n <= 6; ++n)
    for (double q : {1.0, 2.0, infinity}) {
      const NormSpace X(2, q);
      EXPECT_LE(*pisier_report(random_function(n, 2, 15, n), 2.0, X, exact).ratio, pisier_envelope(n));
    }
}

TEST(Properties, VerifySuitePassesAndDetectsFaults) {
  VerifyConfig config;
  EXPECT_TRUE(run_identity_suite(config).passed());
  config.n = 1;
  EXPECT_TRUE(run_identity_suite(config).passed());
  config.n = 4;
  config.inject_fault = true;
  const auto report = run_identity_suite(config);
  ASSERT_NE(report.first_failure(), nullptr);
  EXPECT_EQ(report.first_failure()->name, "averaging_identity");
}
