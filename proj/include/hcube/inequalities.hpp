#pragma once

// Left and right sides of the Pisier, Stein and martingale-transform type
// inequalities on the cube, the symmetrization identity behind the
// Laplacian form, and the Rademacher type and K-convexity ratios.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "hcube/core.hpp"
#include "hcube/norms.hpp"
#include "hcube/operators.hpp"

namespace hcube {

inline constexpr double degenerate_threshold = 1e-14;

enum class FunctionalName {
  pisier,
  theorem1,
  corollary2,
  stein,
  hn_remark,
  k_convexity,
  rademacher_type,
  umd,
  umd_plus,
  umd_minus,
  martingale_type,
};

inline constexpr FunctionalName all_functionals[] = {
    FunctionalName::pisier,          FunctionalName::theorem1,    FunctionalName::corollary2,
    FunctionalName::stein,           FunctionalName::hn_remark,   FunctionalName::k_convexity,
    FunctionalName::rademacher_type, FunctionalName::umd,         FunctionalName::umd_plus,
    FunctionalName::umd_minus,       FunctionalName::martingale_type,
};

inline std::string to_string(FunctionalName name) {
  switch (name) {
    case FunctionalName::pisier: return "pisier";
    case FunctionalName::theorem1: return "theorem1";
    case FunctionalName::corollary2: return "corollary2";
    case FunctionalName::stein: return "stein";
    case FunctionalName::hn_remark: return "hn-remark";
    case FunctionalName::k_convexity: return "k-convexity";
    case FunctionalName::rademacher_type: return "rademacher-type";
    case FunctionalName::umd: return "umd";
    case FunctionalName::umd_plus: return "umd-plus";
    case FunctionalName::umd_minus: return "umd-minus";
    case FunctionalName::martingale_type: return "martingale-type";
  }
  return "?";
}

inline FunctionalName parse_functional_name(const std::string& text) {
  for (FunctionalName name : all_functionals)
    if (to_string(name) == text) return name;
  throw input_error("unknown functional '" + text + "'");
}

/// Parameters a report was computed with.
struct ReportParameters {
  int n = 0;
  int m = 0;
  double p = 2.0;
  double q = 2.0;
  RademacherAveragePlan plan{};
};

/// One evaluated inequality: lhs <= C * rhs, so lhs / rhs is a witnessed
/// lower bound for the best constant C on the class the report names.
struct InequalityReport {
  FunctionalName name = FunctionalName::pisier;
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> ratio;
  ReportParameters parameters;
  bool degenerate = false;
  std::string scope;

  static InequalityReport make(FunctionalName name, double lhs, double rhs, ReportParameters parameters,
                               std::string scope) {
    InequalityReport r;
    r.name = name;
    r.lhs = lhs;
    r.rhs = rhs;
    r.parameters = parameters;
    r.scope = std::move(scope);
    r.degenerate = !(rhs >= degenerate_threshold);
    if (!r.degenerate) r.ratio = lhs / rhs;
    return r;
  }
};

namespace detail {

inline void check_pisier_exponent(double p) {
  require(p >= 1.0 && std::isfinite(p), "Pisier functionals need p in [1, inf)");
}

inline void check_open_exponent(double p) {
  require(p > 1.0 && std::isfinite(p), "inequality functionals need p in (1, inf)");
}

inline double root(double moment, double p) { return p == 2.0 ? std::sqrt(moment) : std::pow(moment, 1.0 / p); }

inline const char* hypercube_scope = "witnessed lower bound; uniform measure on C_n";

}  // namespace detail

// ---------------------------------------------------------------- Pisier

/// ||f - E f||_{L_p}.
inline double pisier_lhs(const HypercubeFunction& f, double p, const NormSpace& X) {
  detail::check_pisier_exponent(p);
  return lp_norm(f - conditional_expectation(f, 0), p, X);
}

/// Rademacher average of (d_1 f, ..., d_n f).
inline double pisier_rhs(const HypercubeFunction& f, double p, const NormSpace& X,
                         const RademacherAveragePlan& plan) {
  detail::check_pisier_exponent(p);
  const auto gradient = FunctionFamily::repeated(f).transformed(
      [](const HypercubeFunction& g, int i) { return partial_derivative(g, i); });
  return rademacher_average(gradient, p, X, plan);
}

inline InequalityReport pisier_report(const HypercubeFunction& f, double p, const NormSpace& X,
                                      const RademacherAveragePlan& plan) {
  return InequalityReport::make(FunctionalName::pisier, pisier_lhs(f, p, X), pisier_rhs(f, p, X, plan),
                                {f.n(), f.m(), p, X.q(), plan}, detail::hypercube_scope);
}

// ------------------------------------------------------ theorem / corollary

/// sum_i (E_i f_i - E_{i-1} f_i).
inline HypercubeFunction martingale_transform_sum(const FunctionFamily& family) {
  HypercubeFunction total(family.n(), family.m());
  for (int i = 1; i <= family.n(); ++i) total += martingale_difference(family[i - 1], i);
  return total;
}

inline double theorem1_lhs(const FunctionFamily& family, double p, const NormSpace& X) {
  detail::check_open_exponent(p);
  return lp_norm(martingale_transform_sum(family), p, X);
}

/// Rademacher average of (d_1 f_1, ..., d_n f_n).
inline double theorem1_rhs(const FunctionFamily& family, double p, const NormSpace& X,
                           const RademacherAveragePlan& plan) {
  detail::check_open_exponent(p);
  const auto gradient = family.transformed([](const HypercubeFunction& g, int i) { return partial_derivative(g, i); });
  return rademacher_average(gradient, p, X, plan);
}

inline InequalityReport theorem1_report(const FunctionFamily& family, double p, const NormSpace& X,
                                        const RademacherAveragePlan& plan) {
  return InequalityReport::make(FunctionalName::theorem1, theorem1_lhs(family, p, X),
                                theorem1_rhs(family, p, X, plan), {family.n(), family.m(), p, X.q(), plan},
                                detail::hypercube_scope);
}

/// sum_i Delta^{-1} d_i f_i, assembled on the Walsh side: the coefficient
/// at A is (1/|A|) sum_{i in A} fhat_i(A).
inline HypercubeFunction laplacian_gradient_sum(const FunctionFamily& family) {
  WalshSpectrum total(family.n(), family.m());
  for (int i = 1; i <= family.n(); ++i) {
    const WalshSpectrum s = walsh_forward(family[i - 1]);
    const mask_t bit = mask_t{1} << (i - 1);
    for (mask_t a = 0; a < s.size(); ++a) {
      if (!(a & bit)) continue;
      const double c = 1.0 / std::popcount(a);
      const auto src = s.row(a);
      auto dst = total.row(a);
      for (int j = 0; j < s.m(); ++j) dst[j] += c * src[j];
    }
  }
  return walsh_inverse(total);
}

inline double corollary2_lhs(const FunctionFamily& family, double p, const NormSpace& X) {
  detail::check_open_exponent(p);
  return lp_norm(laplacian_gradient_sum(family), p, X);
}

inline InequalityReport corollary2_report(const FunctionFamily& family, double p, const NormSpace& X,
                                          const RademacherAveragePlan& plan) {
  return InequalityReport::make(FunctionalName::corollary2, corollary2_lhs(family, p, X),
                                theorem1_rhs(family, p, X, plan), {family.n(), family.m(), p, X.q(), plan},
                                detail::hypercube_scope);
}

// ------------------------------------------------------- symmetrization

inline constexpr int max_exhaustive_permutations_n = 8;

/// Exhaustive enumeration of S_n (n <= 8), or `samples` uniformly drawn
/// permutations.
struct SymmetrizationPlan {
  bool exhaustive = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct SymmetrizationResult {
  double max_deviation = 0.0;
  std::uint64_t permutations = 0;
  bool exhaustive = true;
};

/// Uniform permutation of {1..n} by Fisher-Yates on a counter stream.
inline Permutation random_permutation(int n, std::uint64_t seed, std::uint64_t index) {
  std::vector<int> image(n);
  std::iota(image.begin(), image.end(), 1);
  CounterStream rng(seed, 0x7065726dULL ^ (index << 8));
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.bits() % static_cast<std::uint64_t>(i + 1));
    std::swap(image[i], image[j]);
  }
  return Permutation(std::move(image));
}

/// Average over permutations pi of sum_i E^pi_i d_{pi(i)} f_{pi(i)}.
inline HypercubeFunction permutation_average(const FunctionFamily& family, const SymmetrizationPlan& plan,
                                             std::uint64_t* used = nullptr) {
  const int n = family.n();
  std::vector<WalshSpectrum> gradient_spectra;
  gradient_spectra.reserve(n);
  for (int i = 1; i <= n; ++i) gradient_spectra.push_back(walsh_forward(partial_derivative(family[i - 1], i)));

  WalshSpectrum total(n, family.m());
  auto accumulate = [&](const Permutation& pi) {
    for (int i = 1; i <= n; ++i) {
      const mask_t allowed = pi.prefix_mask(i);
      const WalshSpectrum& s = gradient_spectra[pi(i) - 1];
      for (mask_t a = 0; a < s.size(); ++a) {
        if (a & ~allowed) continue;
        const auto src = s.row(a);
        auto dst = total.row(a);
        for (int j = 0; j < s.m(); ++j) dst[j] += src[j];
      }
    }
  };

  std::uint64_t count = 0;
  if (plan.exhaustive) {
    detail::require(n <= max_exhaustive_permutations_n,
                    "exhaustive permutation enumeration needs n <= 8; use sampled mode");
    std::vector<int> image(n);
    std::iota(image.begin(), image.end(), 1);
    do {
      accumulate(Permutation(image));
      ++count;
    } while (std::next_permutation(image.begin(), image.end()));
  } else {
    detail::require(plan.samples >= 1, "sampled symmetrization needs at least one permutation");
    for (std::uint64_t s = 0; s < plan.samples; ++s) accumulate(random_permutation(n, plan.seed, s));
    count = plan.samples;
  }
  total *= 1.0 / static_cast<double>(count);
  if (used) *used = count;
  return walsh_inverse(total);
}

/// Max entrywise gap between the permutation average and sum_i Delta^{-1} d_i f_i.
inline SymmetrizationResult verify_symmetrization_identity(const FunctionFamily& family,
                                                           const SymmetrizationPlan& plan = {}) {
  SymmetrizationResult out;
  out.exhaustive = plan.exhaustive;
  const HypercubeFunction averaged = permutation_average(family, plan, &out.permutations);
  out.max_deviation = max_abs_difference(averaged, laplacian_gradient_sum(family));
  return out;
}

// ------------------------------------------------------------------ Stein

/// Rademacher average of (E_1 f_1, ..., E_n f_n).
inline double stein_lhs(const FunctionFamily& family, double p, const NormSpace& X,
                        const RademacherAveragePlan& plan) {
  detail::check_open_exponent(p);
  const auto projected =
      family.transformed([](const HypercubeFunction& g, int i) { return conditional_expectation(g, i); });
  return rademacher_average(projected, p, X, plan);
}

inline double stein_rhs(const FunctionFamily& family, double p, const NormSpace& X,
                        const RademacherAveragePlan& plan) {
  detail::check_open_exponent(p);
  return rademacher_average(family, p, X, plan);
}

inline InequalityReport stein_report(const FunctionFamily& family, double p, const NormSpace& X,
                                     const RademacherAveragePlan& plan) {
  return InequalityReport::make(FunctionalName::stein, stein_lhs(family, p, X, plan),
                                stein_rhs(family, p, X, plan), {family.n(), family.m(), p, X.q(), plan},
                                "witnessed lower bound; dyadic hypercube filtration only");
}

// --------------------------------------------------- product functions

/// F(eps, delta) = G_0(eps) + sum_j delta_j G_j(eps).
struct FactoredProductFunction {
  HypercubeFunction base;
  std::vector<HypercubeFunction> slopes;

  FactoredProductFunction(HypercubeFunction g0, std::vector<HypercubeFunction> g)
      : base(std::move(g0)), slopes(std::move(g)) {
    detail::require(static_cast<int>(slopes.size()) == base.n(), "need exactly n slope functions");
    for (const auto& s : slopes) detail::require(s.same_shape(base), "shape mismatch");
  }
  int n() const { return base.n(); }
  int m() const { return base.m(); }
};

inline constexpr int max_dense_product_n = 8;

/// F on C_n x C_n stored as a function on C_{2n}: row eps | (delta << n).
struct DenseProductFunction {
  int n = 0;
  HypercubeFunction table;

  DenseProductFunction(int n_, HypercubeFunction t) : n(n_), table(std::move(t)) {
    detail::require(n >= 1 && n <= max_dense_product_n, "dense product functions need n in [1, 8]");
    detail::require(table.n() == 2 * n, "dense product table must live on C_{2n}");
  }
  int m() const { return table.m(); }

  static DenseProductFunction from(const FactoredProductFunction& F) {
    const int n = F.n();
    HypercubeFunction t(2 * n, F.m());
    for (mask_t delta = 0; delta < cube_size(n); ++delta) {
      for (mask_t eps = 0; eps < cube_size(n); ++eps) {
        auto dst = t.row(eps | (delta << n));
        const auto g0 = F.base.row(eps);
        std::copy(g0.begin(), g0.end(), dst.begin());
        for (int j = 1; j <= n; ++j) {
          const double s = coordinate_sign(delta, j);
          const auto g = F.slopes[j - 1].row(eps);
          for (int c = 0; c < F.m(); ++c) dst[c] += s * g[c];
        }
      }
    }
    return {n, std::move(t)};
  }
};

/// F_i for the factored form: exactly G_i.
inline HypercubeFunction hn_extract_Fi(const FactoredProductFunction& F, int i) {
  detail::require(i >= 1 && i <= F.n(), "coordinate must lie in [1, n]");
  return F.slopes[i - 1];
}

/// F_i(eps) = 2^-n sum_delta delta_i F(eps, delta).
inline HypercubeFunction hn_extract_Fi(const DenseProductFunction& F, int i) {
  detail::require(i >= 1 && i <= F.n, "coordinate must lie in [1, n]");
  const int n = F.n;
  HypercubeFunction out(n, F.m());
  for (mask_t eps = 0; eps < cube_size(n); ++eps) {
    auto dst = out.row(eps);
    for (mask_t delta = 0; delta < cube_size(n); ++delta) {
      const double s = coordinate_sign(delta, i);
      const auto src = F.table.row(eps | (delta << n));
      for (int c = 0; c < F.m(); ++c) dst[c] += s * src[c];
    }
    for (double& v : dst) v = std::ldexp(v, -n);
  }
  return out;
}

template <class Product>
FunctionFamily hn_extract_all(const Product& F) {
  std::vector<HypercubeFunction> members;
  const int n = [&] {
    if constexpr (std::is_same_v<Product, DenseProductFunction>) return F.n;
    else return F.n();
  }();
  for (int i = 1; i <= n; ++i) members.push_back(hn_extract_Fi(F, i));
  return FunctionFamily(std::move(members));
}

/// lhs ||sum_i Delta^{-1} d_i F_i||_{L_p}, rhs the Rademacher average of (F_i).
inline InequalityReport hn_remark_report(const FunctionFamily& components, double p, const NormSpace& X,
                                         const RademacherAveragePlan& plan) {
  detail::check_open_exponent(p);
  return InequalityReport::make(FunctionalName::hn_remark, lp_norm(laplacian_gradient_sum(components), p, X),
                                rademacher_average(components, p, X, plan),
                                {components.n(), components.m(), p, X.q(), plan}, detail::hypercube_scope);
}

// ------------------------------------------------- K-convexity and type

/// ||Rad f||_{L_r} / ||f||_{L_r}.
inline InequalityReport k_convexity_report(const HypercubeFunction& f, double r, const NormSpace& X) {
  detail::check_open_exponent(r);
  return InequalityReport::make(FunctionalName::k_convexity, lp_norm(rademacher_projection(f), r, X),
                                lp_norm(f, r, X), {f.n(), f.m(), r, X.q(), RademacherAveragePlan::exact()},
                                detail::hypercube_scope);
}

inline std::optional<double> k_convexity_ratio(const HypercubeFunction& f, double r, const NormSpace& X) {
  return k_convexity_report(f, r, X).ratio;
}

/// (2^-k sum_delta ||sum_i delta_i x_i||^s)^(1/s) / (sum_i ||x_i||^s)^(1/s).
inline InequalityReport rademacher_type_report(const std::vector<std::vector<double>>& vectors, double s,
                                               const NormSpace& X) {
  detail::require(s > 1.0 && s <= 2.0, "type exponent s must lie in (1, 2]");
  detail::require(!vectors.empty() && vectors.size() <= static_cast<std::size_t>(max_dimension),
                  "need between 1 and 20 vectors");
  detail::SignedSum sum;
  sum.points = 1;
  double denominator = 0.0;
  for (const auto& x : vectors) {
    detail::check_target(static_cast<int>(x.size()), X);
    sum.members.push_back(x.data());
    denominator += X.norm_power(x.data(), s);
  }
  const double lhs = detail::root(sum.exact(s, X).mean, s);
  const double rhs = detail::root(denominator, s);
  return InequalityReport::make(FunctionalName::rademacher_type, lhs, rhs,
                                {static_cast<int>(vectors.size()), X.m(), s, X.q(), RademacherAveragePlan::exact()},
                                "witnessed lower bound; finite-dimensional target");
}

inline std::optional<double> rademacher_type_ratio(const std::vector<std::vector<double>>& vectors, double s,
                                                   const NormSpace& X) {
  return rademacher_type_report(vectors, s, X).ratio;
}

}  // namespace hcube
