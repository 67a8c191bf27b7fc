#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hcube/core.hpp"
#include "hcube/error.hpp"

using namespace hcube;

TEST(Core, WalshCharacterSign) {
  // A = {1, 3}, eps = (-1, +1, -1): two negative factors.
  EXPECT_EQ(evaluate_walsh_character(0b101, 0b101), 1);
  EXPECT_EQ(evaluate_walsh_character(0b101, 0b001), -1);
  EXPECT_EQ(evaluate_walsh_character(0, 0b111), 1);
}

TEST(Core, CoordinateSignFollowsBitConvention) {
  EXPECT_EQ(coordinate_sign(0b010, 2), -1);
  EXPECT_EQ(coordinate_sign(0b010, 1), 1);
}

TEST(Core, ForwardTransformOfSmallTable) {
  const auto f = HypercubeFunction::from_rows(2, {{1}, {2}, {3}, {4}});
  const auto s = walsh_forward(f);
  EXPECT_DOUBLE_EQ(s(0, 0), 2.5);
  EXPECT_DOUBLE_EQ(s(1, 0), -0.5);
  EXPECT_DOUBLE_EQ(s(2, 0), -1.0);
  EXPECT_DOUBLE_EQ(s(3, 0), 0.0);
}

TEST(Core, CharacterFunctionHasSingleCoefficient) {
  const std::vector<double> v = {2.0, -1.0};
  const auto s = walsh_forward(walsh_character_function(4, 0b1010, v));
  for (mask_t a = 0; a < s.size(); ++a)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(s(a, j), a == 0b1010 ? v[j] : 0.0, 1e-15);
}

TEST(Core, FastMatchesNaive) {
  for (int n = 1; n <= 8; ++n) {
    const auto f = random_function(n, 3, 11, n);
    EXPECT_LE(relative_deviation(walsh_forward(f), walsh_forward_naive(f)), 1e-12) << "n=" << n;
    EXPECT_LE(relative_deviation(walsh_inverse(walsh_forward(f)), f), 1e-12) << "n=" << n;
  }
}

TEST(Core, MeanIsEmptySetCoefficient) {
  const auto f = random_function(5, 2, 3);
  const auto mean = mean_value(f);
  const auto s = walsh_forward(f);
  EXPECT_NEAR(mean[0], s(0, 0), 1e-14);
  EXPECT_NEAR(mean[1], s(0, 1), 1e-14);
}

TEST(Core, RejectsBadShapes) {
  EXPECT_THROW(HypercubeFunction(0, 1), input_error);
  EXPECT_THROW(HypercubeFunction(21, 1), input_error);
  EXPECT_THROW(HypercubeFunction(2, 0), input_error);
  EXPECT_THROW(HypercubeFunction::from_rows(2, {{1}, {2}, {3}}), input_error);
  EXPECT_THROW(HypercubeFunction(1, 1, {1.0, NAN}), input_error);
  EXPECT_THROW(SignAssignment(2, 4), input_error);
}

TEST(Core, RandomFunctionIsDeterministic) {
  const auto a = random_function(4, 2, 99, 5);
  const auto b = random_function(4, 2, 99, 5);
  const auto c = random_function(4, 2, 99, 6);
  EXPECT_EQ(max_abs_difference(a, b), 0.0);
  EXPECT_GT(max_abs_difference(a, c), 0.0);
}
