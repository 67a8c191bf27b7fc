#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "hcube/io.hpp"
#include "run_config.hpp"

using namespace hcube;

TEST(Io, FunctionRoundTrip) {
  const auto f = random_function(3, 2, 1);
  const auto back = function_from_json(parse_json_text(to_json(f).dump()));
  EXPECT_EQ(max_abs_difference(f, back), 0.0);
}

TEST(Io, SpectrumRoundTrip) {
  const auto s = walsh_forward(random_function(2, 3, 2));
  EXPECT_EQ(relative_deviation(spectrum_from_json(to_json(s)), s), 0.0);
}

TEST(Io, FamilyAndVectorsRoundTrip) {
  const auto family = FunctionFamily::repeated(random_function(2, 1, 3));
  const auto back = family_from_json(to_json(family));
  EXPECT_EQ(max_abs_difference(back[1], family[1]), 0.0);
  const std::vector<std::vector<double>> v = {{1.0, 2.0}, {3.0, 4.0}};
  EXPECT_EQ(vectors_from_json(vectors_to_json(v)), v);
}

TEST(Io, MartingaleRoundTrip) {
  const auto F = FiniteFiltration::tree({{0, 0, 0}, {0, 0, 1}, {0, 1, 2}}, {0.25, 0.25, 0.5});
  const std::vector<double> terminal = {1.0, 3.0, -1.0};
  const auto M = MartingaleSequence::from_terminal(F, 1, terminal);
  const auto back = martingale_from_json(parse_json_text(to_json(M).dump()));
  EXPECT_EQ(back.steps(), 2);
  EXPECT_EQ(back.level(1), M.level(1));
  EXPECT_EQ(to_json(make_dyadic_martingale(random_function(2, 1, 0)))["filtration"]["kind"], "dyadic");
}

TEST(Io, ReportRoundTripKeepsInfinity) {
  const auto r = pisier_report(random_function(2, 2, 4), 2.0, NormSpace(2, infinity), RademacherAveragePlan::exact());
  const json j = to_json(r);
  EXPECT_EQ(j["parameters"]["q"], "inf");
  const auto back = report_from_json(j);
  EXPECT_TRUE(std::isinf(back.parameters.q));
  EXPECT_EQ(back.lhs, r.lhs);
  EXPECT_EQ(*back.ratio, *r.ratio);
}

TEST(Io, ParseErrorsCarryPosition) {
  try {
    parse_json_text("{\n  \"n\": 2,\n  oops\n}", "sample.json");
    FAIL() << "expected a parse error";
  } catch (const input_error& e) {
    const std::string what = e.what();
    EXPECT_EQ(what.rfind("sample.json:3:", 0), 0u) << what;
  }
}

TEST(Io, ShapeErrors) {
  EXPECT_THROW(function_from_json(parse_json_text(R"({"n": 2, "m": 1, "values": [[1], [2], [3]]})")), input_error);
  EXPECT_THROW(function_from_json(parse_json_text(R"({"n": 1, "m": 2, "values": [[1, 2], [3]]})")), input_error);
  EXPECT_THROW(function_from_json(parse_json_text(R"({"n": 1, "values": [[1], [2]]})")), input_error);
  EXPECT_THROW(read_json_file("/nonexistent/input.json"), input_error);
}

TEST(Io, CsvRow) {
  const auto f = HypercubeFunction::from_rows(1, {{1}, {-1}});
  const auto row = report_csv_row(pisier_report(f, 2.0, NormSpace(1, 2.0), RademacherAveragePlan::exact()));
  EXPECT_EQ(row, "pisier,1,1,2,2,1,1,1,0,exact\n");
}

TEST(RunConfigJson, RoundTripAndUnknownKeys) {
  cli::RunConfig c;
  c.command = "estimate";
  c.q = infinity;
  c.seed = 123;
  const auto back = cli::run_config_from_json(cli::to_json(c));
  EXPECT_EQ(back.command, "estimate");
  EXPECT_TRUE(std::isinf(back.q));
  EXPECT_EQ(back.seed, 123u);
  EXPECT_THROW(cli::run_config_from_json(parse_json_text(R"({"bogus": 1})")), input_error);
  EXPECT_THROW(cli::run_config_from_json(parse_json_text(R"({"command": "dance"})")), input_error);
  EXPECT_THROW(cli::run_config_from_json(parse_json_text(R"({"n": "six"})")), input_error);
}
