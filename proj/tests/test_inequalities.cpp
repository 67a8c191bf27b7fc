#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hcube/inequalities.hpp"
#include "hcube/io.hpp"

using namespace hcube;

namespace {

FunctionFamily random_family(int n, int m, std::uint64_t seed) {
  std::vector<HypercubeFunction> members;
  for (int i = 0; i < n; ++i) members.push_back(random_function(n, m, seed, 1000 + i));
  return FunctionFamily(std::move(members));
}

const auto exact = RademacherAveragePlan::exact();

}  // namespace

TEST(Pisier, SmallTableLhs) {
  const auto f = HypercubeFunction::from_rows(2, {{1}, {2}, {3}, {4}});
  EXPECT_NEAR(pisier_lhs(f, 2.0, NormSpace(1, 2.0)), std::sqrt(5.0) / 2.0, 1e-15);
}

TEST(Pisier, ConstantFunctionIsDegenerate) {
  const std::vector<double> v = {3.0, -1.0};
  const auto r = pisier_report(HypercubeFunction::constant(3, v), 2.0, NormSpace(2, 2.0), exact);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.ratio.has_value());
}

TEST(Pisier, OneDimensionalCubeIsExact) {
  for (double q : {1.0, 2.0, infinity})
    for (double p : {1.5, 2.0, 3.0}) {
      const auto r = pisier_report(random_function(1, 3, 17), p, NormSpace(3, q), exact);
      EXPECT_NEAR(*r.ratio, 1.0, 1e-12);
    }
}

TEST(Pisier, HilbertRatioAtMostOne) {
  for (int n = 1; n <= 6; ++n) {
    const auto r = pisier_report(random_function(n, 2, 3, n), 2.0, NormSpace(2, 2.0), exact);
    EXPECT_LE(*r.ratio, 1.0 + 1e-12);
  }
}

TEST(Pisier, DegreeOneHilbertFunctionAttainsOne) {
  const std::vector<double> v = {1.0};
  const auto f = walsh_character_function(4, 0b0100, v);
  EXPECT_NEAR(*pisier_report(f, 2.0, NormSpace(1, 2.0), exact).ratio, 1.0, 1e-12);
}

TEST(Theorem1, RepeatedFamilyReducesToPisier) {
  const NormSpace X(3, 1.5);
  for (int t = 0; t < 5; ++t) {
    const auto f = random_function(4, 3, 5, t);
    const auto family = FunctionFamily::repeated(f);
    EXPECT_NEAR(theorem1_lhs(family, 2.5, X), pisier_lhs(f, 2.5, X), 1e-10);
    EXPECT_NEAR(corollary2_lhs(family, 2.5, X), pisier_lhs(f, 2.5, X), 1e-10);
    EXPECT_NEAR(theorem1_rhs(family, 2.5, X, exact), pisier_rhs(f, 2.5, X, exact), 1e-10);
  }
}

TEST(Theorem1, HilbertRepeatedFamilyRatioAtMostOne) {
  const auto family = FunctionFamily::repeated(random_function(5, 2, 8));
  EXPECT_LE(*theorem1_report(family, 2.0, NormSpace(2, 2.0), exact).ratio, 1.0 + 1e-12);
}

TEST(Corollary2, GoldenReport) {
  const auto family = family_from_json(read_json_file(HCUBE_DATA_DIR "/corollary2_family.json"));
  const json golden = read_json_file(HCUBE_DATA_DIR "/corollary2_golden.json");
  const auto r = corollary2_report(family, golden["p"].get<double>(), NormSpace(family.m(), golden["q"].get<double>()),
                                   exact);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  EXPECT_LE(rel(r.lhs, golden["lhs"].get<double>()), 1e-9);
  EXPECT_LE(rel(r.rhs, golden["rhs"].get<double>()), 1e-9);
  EXPECT_LE(rel(*r.ratio, golden["ratio"].get<double>()), 1e-9);
}

TEST(Symmetrization, ExhaustiveIdentityHolds) {
  for (int n = 1; n <= 6; ++n) {
    const auto res = verify_symmetrization_identity(random_family(n, 2, 40 + n));
    EXPECT_LE(res.max_deviation, 1e-9) << "n=" << n;
    EXPECT_TRUE(res.exhaustive);
  }
}

TEST(Symmetrization, SampledAverageApproachesIdentity) {
  const auto family = random_family(5, 1, 2);
  const auto res = verify_symmetrization_identity(family, {false, 20000, 3});
  EXPECT_FALSE(res.exhaustive);
  EXPECT_EQ(res.permutations, 20000u);
  EXPECT_LE(res.max_deviation, 0.1);
}

TEST(Symmetrization, ExhaustiveRefusesLargeN) {
  std::vector<HypercubeFunction> members(9, HypercubeFunction(9, 1));
  EXPECT_THROW(permutation_average(FunctionFamily(members), {}), input_error);
}

TEST(Stein, HilbertContraction) {
  for (int t = 0; t < 10; ++t) {
    const auto r = stein_report(random_family(4, 2, 60 + t), 2.0, NormSpace(2, 2.0), exact);
    EXPECT_LE(*r.ratio, 1.0 + 1e-12);
  }
}

TEST(HnRemark, DenseAndFactoredExtractionAgree) {
  const int n = 3;
  std::vector<HypercubeFunction> slopes;
  for (int i = 0; i < n; ++i) slopes.push_back(random_function(n, 2, 71, i));
  const FactoredProductFunction F(random_function(n, 2, 72), slopes);
  const auto dense = DenseProductFunction::from(F);
  for (int i = 1; i <= n; ++i) EXPECT_LE(relative_deviation(hn_extract_Fi(dense, i), hn_extract_Fi(F, i)), 1e-14);
  const NormSpace X(2, 3.0);
  EXPECT_NEAR(*hn_remark_report(hn_extract_all(dense), 2.0, X, exact).ratio,
              *hn_remark_report(hn_extract_all(F), 2.0, X, exact).ratio, 1e-12);
}

TEST(KConvexity, ProjectionFixesDegreeOne) {
  const std::vector<double> v = {1.0, 2.0};
  const auto f = walsh_character_function(3, 0b010, v) + walsh_character_function(3, 0b100, v);
  EXPECT_NEAR(*k_convexity_ratio(f, 3.0, NormSpace(2, 1.0)), 1.0, 1e-12);
  EXPECT_LE(*k_convexity_ratio(random_function(4, 2, 3), 2.0, NormSpace(2, 2.0)), 1.0 + 1e-12);
}

TEST(RademacherType, L1SquareBasisVectors) {
  const std::vector<std::vector<double>> x = {{1.0, 0.0}, {0.0, 1.0}};
  EXPECT_NEAR(*rademacher_type_ratio(x, 2.0, NormSpace(2, 1.0)), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(*rademacher_type_ratio(x, 2.0, NormSpace(2, 2.0)), 1.0, 1e-12);
}

TEST(RademacherType, RejectsExponentOutsideRange) {
  const std::vector<std::vector<double>> x = {{1.0}};
  EXPECT_THROW(rademacher_type_report(x, 2.5, NormSpace(1, 2.0)), input_error);
  EXPECT_THROW(rademacher_type_report(x, 1.0, NormSpace(1, 2.0)), input_error);
}

TEST(Reports, ExponentChecks) {
  const auto f = random_function(2, 1, 0);
  EXPECT_NO_THROW(pisier_lhs(f, 1.0, NormSpace(1, 2.0)));
  EXPECT_THROW(theorem1_lhs(FunctionFamily::repeated(f), 1.0, NormSpace(1, 2.0)), input_error);
  EXPECT_EQ(parse_functional_name("hn-remark"), FunctionalName::hn_remark);
  EXPECT_THROW(parse_functional_name("nope"), input_error);
}
