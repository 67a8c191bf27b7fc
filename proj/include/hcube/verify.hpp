#pragma once

// Self-check suite run by `hcube --command verify`: operator identities,
// transform agreement, martingale structure and the Hilbert-space equality
// cases, each reported with its worst deviation over random inputs.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hcube/core.hpp"
#include "hcube/inequalities.hpp"
#include "hcube/io.hpp"
#include "hcube/martingales.hpp"
#include "hcube/norms.hpp"
#include "hcube/operators.hpp"

namespace hcube {

inline constexpr double exact_identity_tolerance = 1e-12;
inline constexpr double derived_identity_tolerance = 1e-10;
inline constexpr double symmetrization_tolerance = 1e-9;

struct VerifyConfig {
  int n = 6;
  int m = 2;
  std::uint64_t seed = 7;
  int trials = 5;
  /// Test hook: perturbs the averaging operator so the suite must fail.
  bool inject_fault = false;
};

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  bool skipped = false;
};

struct VerifyReport {
  VerifyConfig config;
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  const CheckResult* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }
};

namespace detail {

class CheckAccumulator {
 public:
  CheckAccumulator(std::string name, double tolerance) { result_.name = std::move(name), result_.tolerance = tolerance; }
  void observe(double deviation) {
    if (!(deviation <= result_.max_deviation)) result_.max_deviation = std::isnan(deviation) ? INFINITY : deviation;
  }
  CheckResult finish() {
    result_.passed = result_.max_deviation <= result_.tolerance;
    return result_;
  }

 private:
  CheckResult result_;
};

inline double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace detail

inline VerifyReport run_identity_suite(const VerifyConfig& config) {
  detail::require(config.n >= 1 && config.n <= 12, "verify supports n in [1, 12]");
  detail::require(config.m >= 1 && config.trials >= 1, "verify needs m >= 1 and trials >= 1");
  const int n = config.n;
  const int m = config.m;

  detail::CheckAccumulator round_trip("walsh_round_trip", exact_identity_tolerance);
  detail::CheckAccumulator fast_naive("fast_vs_naive_transform", exact_identity_tolerance);
  detail::CheckAccumulator parseval("parseval", derived_identity_tolerance);
  detail::CheckAccumulator averaging("averaging_identity", exact_identity_tolerance);
  detail::CheckAccumulator composition("conditional_expectation_composition", exact_identity_tolerance);
  detail::CheckAccumulator difference("martingale_difference_property", exact_identity_tolerance);
  detail::CheckAccumulator spectral("spectral_actions", exact_identity_tolerance);
  detail::CheckAccumulator laplacian("fractional_laplacian_inverse", derived_identity_tolerance);
  detail::CheckAccumulator telescoping("telescoping", derived_identity_tolerance);
  detail::CheckAccumulator adjoint("self_adjointness", derived_identity_tolerance);
  detail::CheckAccumulator symmetrization("symmetrization_identity", symmetrization_tolerance);
  detail::CheckAccumulator reduction("reduction_chain", derived_identity_tolerance);
  detail::CheckAccumulator hilbert("hilbert_equalities", symmetrization_tolerance);

  const NormSpace euclid(m, 2.0);
  const auto plan = RademacherAveragePlan::exact();

  for (int t = 0; t < config.trials; ++t) {
    const auto f = random_function(n, m, config.seed, 4 * static_cast<std::uint64_t>(t));
    const auto g = random_function(n, m, config.seed, 4 * static_cast<std::uint64_t>(t) + 1);
    const auto spectrum = walsh_forward(f);
    const auto naive = walsh_forward_naive(f);

    round_trip.observe(relative_deviation(walsh_inverse(spectrum), f));
    fast_naive.observe(relative_deviation(spectrum, naive));

    for (int j = 0; j < m; ++j) {
      double energy = 0.0;
      double coefficients = 0.0;
      for (mask_t k = 0; k < f.size(); ++k) energy += f(k, j) * f(k, j);
      for (mask_t a = 0; a < f.size(); ++a) coefficients += spectrum(a, j) * spectrum(a, j);
      parseval.observe(detail::relative_gap(std::ldexp(energy, -n), coefficients));
    }

    for (int i = 1; i <= n; ++i) {
      auto averaged = averaging_operator(f, i);
      if (config.inject_fault) averaged(0, 0) += 1e-6;
      const auto derivative = partial_derivative(f, i);
      averaging.observe(relative_deviation(averaged + derivative, f));
      averaging.observe(max_abs_entry(averaging_operator(derivative, i)));

      const auto ds = walsh_forward(derivative);
      const auto es = walsh_forward(averaged);
      const mask_t bit = mask_t{1} << (i - 1);
      for (mask_t a = 0; a < f.size(); ++a)
        for (int j = 0; j < m; ++j) {
          spectral.observe(std::abs(ds(a, j) - ((a & bit) ? naive(a, j) : 0.0)));
          spectral.observe(std::abs(es(a, j) - ((a & bit) ? 0.0 : naive(a, j))));
        }
    }

    for (int level = 0; level <= n; ++level) {
      HypercubeFunction composed = f;
      for (int i = n; i > level; --i) composed = averaging_operator(composed, i);
      composition.observe(relative_deviation(conditional_expectation(f, level), composed));
      adjoint.observe(detail::relative_gap(duality_pairing(conditional_expectation(f, level), g),
                                           duality_pairing(f, conditional_expectation(g, level))));
    }

    HypercubeFunction sum(n, m);
    for (int i = 1; i <= n; ++i) {
      const auto d = martingale_difference(f, i);
      difference.observe(max_abs_entry(conditional_expectation(d, i - 1)) / std::max(1.0, max_abs_entry(f)));
      difference.observe(relative_deviation(d, conditional_expectation(partial_derivative(f, i), i)));
      sum += d;
    }
    const auto centered = f - conditional_expectation(f, 0);
    telescoping.observe(relative_deviation(sum, centered));
    laplacian.observe(relative_deviation(fractional_laplacian(fractional_laplacian(f, 1.0), -1.0), centered));
    laplacian.observe(relative_deviation(fractional_laplacian(f, 0.0), centered));

    if (n <= max_exhaustive_permutations_n) {
      std::vector<HypercubeFunction> members;
      for (int i = 0; i < n; ++i)
        members.push_back(random_function(n, m, config.seed,
                                          4 * static_cast<std::uint64_t>(t) + 2 + (static_cast<std::uint64_t>(i) << 16)));
      symmetrization.observe(verify_symmetrization_identity(FunctionFamily(std::move(members))).max_deviation);
    }

    const auto repeated = FunctionFamily::repeated(f);
    const double pisier = pisier_lhs(f, 2.5, euclid);
    reduction.observe(detail::relative_gap(theorem1_lhs(repeated, 2.5, euclid), pisier));
    reduction.observe(detail::relative_gap(corollary2_lhs(repeated, 2.5, euclid), pisier));

    // l_2 with p = 2: closed forms from the spectrum.
    double off_mean = 0.0;
    double weighted = 0.0;
    for (mask_t a = 1; a < f.size(); ++a)
      for (int j = 0; j < m; ++j) {
        off_mean += naive(a, j) * naive(a, j);
        weighted += std::popcount(a) * naive(a, j) * naive(a, j);
      }
    hilbert.observe(detail::relative_gap(pisier_lhs(f, 2.0, euclid), std::sqrt(off_mean)));
    hilbert.observe(detail::relative_gap(pisier_rhs(f, 2.0, euclid, plan), std::sqrt(weighted)));
    const auto M = make_dyadic_martingale(f);
    hilbert.observe(std::abs(*umd_plus_ratio(M, 2.0, euclid, plan) - 1.0));
    hilbert.observe(std::abs(*umd_minus_ratio(M, 2.0, euclid, plan) - 1.0));
    hilbert.observe(std::abs(*martingale_type_ratio(M, 2.0, euclid) - 1.0));
  }

  VerifyReport report{config, {}};
  for (auto* check : {&round_trip, &fast_naive, &parseval, &averaging, &composition, &difference, &spectral, &laplacian,
                      &telescoping, &adjoint, &reduction, &hilbert})
    report.checks.push_back(check->finish());
  auto sym = symmetrization.finish();
  if (n > max_exhaustive_permutations_n) sym.skipped = true;
  report.checks.push_back(sym);
  return report;
}

inline json to_json(const VerifyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"max_deviation", c.max_deviation},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed},
                      {"skipped", c.skipped}});
  return {{"passed", r.passed()},
          {"config",
           {{"n", r.config.n}, {"m", r.config.m}, {"seed", r.config.seed}, {"trials", r.config.trials},
            {"inject_fault", r.config.inject_fault}}},
          {"checks", checks}};
}

}  // namespace hcube
