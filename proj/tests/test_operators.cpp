#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "hcube/operators.hpp"

using namespace hcube;

TEST(Operators, PartialDerivativeSmallTable) {
  const auto f = HypercubeFunction::from_rows(2, {{1}, {2}, {3}, {4}});
  const auto d = partial_derivative(f, 1);
  const double expected[] = {-0.5, 0.5, -0.5, 0.5};
  for (mask_t k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(d(k, 0), expected[k]);
}

TEST(Operators, AveragingPlusDerivativeIsIdentity) {
  const auto f = random_function(5, 3, 1);
  for (int i = 1; i <= 5; ++i)
    EXPECT_LE(relative_deviation(averaging_operator(f, i) + partial_derivative(f, i), f), 1e-12);
}

TEST(Operators, ConditionalExpectationEndpoints) {
  const auto f = random_function(4, 2, 2);
  EXPECT_LE(relative_deviation(conditional_expectation(f, 4), f), 1e-15);
  const auto mean = mean_value(f);
  const auto e0 = conditional_expectation(f, 0);
  for (mask_t k = 0; k < f.size(); ++k) EXPECT_NEAR(e0(k, 1), mean[1], 1e-14);
}

TEST(Operators, PermutedExpectationKeepsPrefixCoordinates) {
  // pi = (2, 4, 1, 3), level 2 keeps coordinates {2, 4}.
  const Permutation pi({2, 4, 1, 3});
  EXPECT_EQ(pi.prefix_mask(2), mask_t{0b1010});
  const std::vector<double> one = {1.0};
  const auto w24 = walsh_character_function(4, 0b1010, one);
  const auto w1 = walsh_character_function(4, 0b0001, one);
  EXPECT_LE(relative_deviation(conditional_expectation_permuted(w24, pi, 2), w24), 1e-15);
  EXPECT_LE(max_abs_entry(conditional_expectation_permuted(w1, pi, 2)), 1e-15);
}

TEST(Operators, IdentityPermutationMatchesDirectAveraging) {
  const auto f = random_function(5, 2, 4);
  const auto id = Permutation::identity(5);
  for (int level = 0; level <= 5; ++level)
    EXPECT_LE(relative_deviation(conditional_expectation_permuted(f, id, level), conditional_expectation(f, level)),
              1e-12);
}

TEST(Operators, FractionalLaplacianScalesLevels) {
  const std::vector<double> v = {1.5};
  const auto w = walsh_character_function(5, 0b10110, v);
  const auto out = fractional_laplacian(w, 0.5);
  EXPECT_LE(relative_deviation(out, std::sqrt(3.0) * w), 1e-14);
  EXPECT_LE(max_abs_entry(fractional_laplacian(HypercubeFunction::constant(3, v), 1.0)), 1e-15);
}

TEST(Operators, RademacherProjectionKeepsDegreeOne) {
  const auto f = random_function(4, 1, 5);
  const auto s = walsh_forward(rademacher_projection(f));
  const auto full = walsh_forward(f);
  for (mask_t a = 0; a < s.size(); ++a) EXPECT_NEAR(s(a, 0), std::popcount(a) == 1 ? full(a, 0) : 0.0, 1e-14);
}

TEST(Operators, MartingaleDifferencesTelescope) {
  const auto f = random_function(6, 2, 6);
  HypercubeFunction sum(6, 2);
  for (int i = 1; i <= 6; ++i) sum += martingale_difference(f, i);
  EXPECT_LE(relative_deviation(sum, f - conditional_expectation(f, 0)), 1e-12);
}

TEST(Operators, RejectsBadCoordinates) {
  const auto f = random_function(3, 1, 0);
  EXPECT_THROW(partial_derivative(f, 0), input_error);
  EXPECT_THROW(partial_derivative(f, 4), input_error);
  EXPECT_THROW(conditional_expectation(f, 4), input_error);
  EXPECT_THROW(Permutation({1, 1, 2}), input_error);
}
