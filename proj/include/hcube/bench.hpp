#pragma once

// Timing harness for the transform and sign-averaging kernels. Numbers
// produced alongside the timings are deterministic in the seed.

#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hcube/core.hpp"
#include "hcube/io.hpp"
#include "hcube/norms.hpp"

namespace hcube {

inline constexpr int max_naive_bench_n = 10;
inline constexpr int max_exact_bench_n = 12;

struct BenchConfig {
  int n_min = 1;
  int n_max = 10;
  int m = 1;
  std::uint64_t seed = 0;
  std::uint64_t samples = 2000;
};

struct BenchRow {
  int n = 0;
  double fast_seconds = 0.0;
  std::optional<double> naive_seconds;
  double max_deviation = 0.0;  // fast vs naive, relative
  std::optional<double> exact_average_seconds;
  std::optional<double> exact_average;
  double mc_average_seconds = 0.0;
  double mc_average = 0.0;
};

namespace detail {

/// Mean wall time of fn over enough repetitions to fill ~20 ms.
template <class Fn>
double time_per_call(Fn&& fn) {
  using clock = std::chrono::steady_clock;
  int reps = 1;
  for (;;) {
    const auto start = clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
    if (elapsed >= 0.02 || reps >= (1 << 20)) return elapsed / reps;
    reps *= 4;
  }
}

}  // namespace detail

inline std::vector<BenchRow> run_bench(const BenchConfig& config) {
  detail::require(config.n_min >= 1 && config.n_min <= config.n_max && config.n_max <= max_dimension,
                  "bench range must satisfy 1 <= n_min <= n_max <= 20");
  detail::require(config.m >= 1 && config.samples >= 1, "bench needs m >= 1 and samples >= 1");
  std::vector<BenchRow> rows;
  const NormSpace X(config.m, 2.0);
  for (int n = config.n_min; n <= config.n_max; ++n) {
    BenchRow row;
    row.n = n;
    const auto f = random_function(n, config.m, config.seed, static_cast<std::uint64_t>(n));
    WalshSpectrum fast = walsh_forward(f);
    row.fast_seconds = detail::time_per_call([&] { fast = walsh_forward(f); });
    if (n <= max_naive_bench_n) {
      WalshSpectrum naive = walsh_forward_naive(f);
      row.naive_seconds = detail::time_per_call([&] { naive = walsh_forward_naive(f); });
      row.max_deviation = relative_deviation(fast, naive);
    }

    std::vector<HypercubeFunction> members;
    for (int i = 0; i < n; ++i)
      members.push_back(random_function(n, config.m, config.seed,
                                        (std::uint64_t{1} << 32) + (static_cast<std::uint64_t>(n) << 8) +
                                            static_cast<std::uint64_t>(i)));
    const FunctionFamily family(std::move(members));
    if (n <= max_exact_bench_n) {
      double value = 0.0;
      row.exact_average_seconds =
          detail::time_per_call([&] { value = rademacher_average(family, 2.0, X, RademacherAveragePlan::exact()); });
      row.exact_average = value;
    }
    const auto mc = RademacherAveragePlan::monte_carlo(config.samples, config.seed);
    row.mc_average_seconds = detail::time_per_call([&] { row.mc_average = rademacher_average(family, 2.0, X, mc); });
    rows.push_back(row);
  }
  return rows;
}

inline bool bench_agrees(const std::vector<BenchRow>& rows) {
  for (const auto& row : rows)
    if (!(row.max_deviation <= 1e-12)) return false;
  return true;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "n,fast_seconds,naive_seconds,speedup,max_deviation,exact_average_seconds,exact_average,mc_average_seconds,"
         "mc_average\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& r : rows) {
    out << r.n << ',' << format_number(r.fast_seconds) << ',' << opt(r.naive_seconds) << ','
        << (r.naive_seconds ? format_number(*r.naive_seconds / r.fast_seconds) : std::string()) << ','
        << format_number(r.max_deviation) << ',' << opt(r.exact_average_seconds) << ',' << opt(r.exact_average) << ','
        << format_number(r.mc_average_seconds) << ',' << format_number(r.mc_average) << '\n';
  }
  return out.str();
}

inline json to_json(const std::vector<BenchRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json row = {{"n", r.n},
                {"fast_seconds", r.fast_seconds},
                {"max_deviation", r.max_deviation},
                {"mc_average_seconds", r.mc_average_seconds},
                {"mc_average", r.mc_average}};
    row["naive_seconds"] = r.naive_seconds ? json(*r.naive_seconds) : json(nullptr);
    row["speedup"] = r.naive_seconds ? json(*r.naive_seconds / r.fast_seconds) : json(nullptr);
    row["exact_average_seconds"] = r.exact_average_seconds ? json(*r.exact_average_seconds) : json(nullptr);
    row["exact_average"] = r.exact_average ? json(*r.exact_average) : json(nullptr);
    out.push_back(row);
  }
  return out;
}

}  // namespace hcube
