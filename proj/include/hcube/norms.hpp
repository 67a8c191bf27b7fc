#pragma once

// Target norms l_q^m, vector-valued L_p norms over the uniform cube, and
// Rademacher averages of families of functions.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hcube/core.hpp"
#include "hcube/parallel.hpp"
#include "hcube/random.hpp"

namespace hcube {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// l_q^m with q in [1, inf].
class NormSpace {
 public:
  NormSpace(int m, double q) : m_(m), q_(q) {
    detail::require(m >= 1, "target dimension m must be at least 1");
    detail::require(q >= 1.0, "norm index q must lie in [1, inf]");
  }

  int m() const { return m_; }
  double q() const { return q_; }

  /// Hoelder conjugate q*.
  double dual_index() const {
    if (q_ == 1.0) return infinity;
    if (std::isinf(q_)) return 1.0;
    return q_ / (q_ - 1.0);
  }
  NormSpace dual() const { return {m_, dual_index()}; }

  double norm(std::span<const double> v) const {
    detail::require(static_cast<int>(v.size()) == m_, "vector length must equal m");
    return raw_norm(v.data());
  }

  /// ||v||^p without the intermediate root when p == q.
  double norm_power(const double* v, double p) const {
    if (p == q_ && !std::isinf(q_)) {
      if (q_ == 2.0) {
        double s = 0.0;
        for (int j = 0; j < m_; ++j) s += v[j] * v[j];
        return s;
      }
      if (q_ == 1.0) {
        double s = 0.0;
        for (int j = 0; j < m_; ++j) s += std::abs(v[j]);
        return s;
      }
      double s = 0.0;
      for (int j = 0; j < m_; ++j) s += std::pow(std::abs(v[j]), q_);
      return s;
    }
    const double r = raw_norm(v);
    if (p == 2.0) return r * r;
    if (p == 1.0) return r;
    return std::pow(r, p);
  }

  double raw_norm(const double* v) const {
    if (m_ == 1) return std::abs(v[0]);
    if (std::isinf(q_)) {
      double r = 0.0;
      for (int j = 0; j < m_; ++j) r = std::max(r, std::abs(v[j]));
      return r;
    }
    if (q_ == 1.0) {
      double r = 0.0;
      for (int j = 0; j < m_; ++j) r += std::abs(v[j]);
      return r;
    }
    if (q_ == 2.0) {
      double r = 0.0;
      for (int j = 0; j < m_; ++j) r += v[j] * v[j];
      return std::sqrt(r);
    }
    double r = 0.0;
    for (int j = 0; j < m_; ++j) r += std::pow(std::abs(v[j]), q_);
    return std::pow(r, 1.0 / q_);
  }

 private:
  int m_;
  double q_;
};

/// (f_1, ..., f_n), all defined on C_n with a common target dimension.
class FunctionFamily {
 public:
  explicit FunctionFamily(std::vector<HypercubeFunction> members) : members_(std::move(members)) {
    detail::require(!members_.empty(), "family must be nonempty");
    const auto& first = members_.front();
    detail::require(static_cast<int>(members_.size()) == first.n(),
                    "family length must equal the cube dimension n");
    for (const auto& f : members_) detail::require(f.same_shape(first), "family shapes must agree");
  }

  /// f_1 = ... = f_n = f.
  static FunctionFamily repeated(const HypercubeFunction& f) {
    return FunctionFamily(std::vector<HypercubeFunction>(f.n(), f));
  }

  int n() const { return members_.front().n(); }
  int m() const { return members_.front().m(); }
  std::size_t size() const { return members_.size(); }
  const HypercubeFunction& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<HypercubeFunction>& members() const { return members_; }

  /// Applies op to every member.
  template <class Op>
  FunctionFamily transformed(Op&& op) const {
    std::vector<HypercubeFunction> out;
    out.reserve(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) out.push_back(op(members_[i], static_cast<int>(i) + 1));
    return FunctionFamily(std::move(out));
  }

 private:
  std::vector<HypercubeFunction> members_;
};

enum class AverageMode { exact, monte_carlo, automatic };

inline const char* to_string(AverageMode mode) {
  switch (mode) {
    case AverageMode::exact: return "exact";
    case AverageMode::monte_carlo: return "mc";
    case AverageMode::automatic: return "auto";
  }
  return "?";
}

inline AverageMode parse_average_mode(const std::string& name) {
  if (name == "exact") return AverageMode::exact;
  if (name == "mc" || name == "monte-carlo") return AverageMode::monte_carlo;
  if (name == "auto") return AverageMode::automatic;
  throw input_error("unknown averaging mode '" + name + "'");
}

/// How sign averages are computed. `automatic` enumerates all signs up to
/// `exact_threshold` members and samples beyond it.
struct RademacherAveragePlan {
  AverageMode mode = AverageMode::automatic;
  std::uint64_t samples = 20000;
  std::uint64_t seed = 0;
  int exact_threshold = 10;

  static RademacherAveragePlan exact() { return {AverageMode::exact, 20000, 0, 10}; }
  static RademacherAveragePlan monte_carlo(std::uint64_t samples, std::uint64_t seed) {
    return {AverageMode::monte_carlo, samples, seed, 10};
  }

  bool enumerates(int members) const {
    switch (mode) {
      case AverageMode::exact: return true;
      case AverageMode::monte_carlo: return false;
      case AverageMode::automatic: return members <= exact_threshold;
    }
    return true;
  }

  void validate(int members) const {
    detail::require(samples >= 1, "sample count must be at least 1");
    if (enumerates(members))
      detail::require(members <= max_dimension, "exact sign enumeration requires at most 20 members");
  }
};

/// E_delta of the per-sign L_p^p value, with its Monte Carlo standard error
/// (zero for exact enumeration).
struct SignMoment {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t evaluations = 0;
  bool exact = true;
};

namespace detail {

/// Sign averages for k tables over a finite measure space of `points` atoms.
/// members[i] points at a row-major points x m table; weights empty means
/// uniform. Computes E_delta sum_w w(w) ||sum_i delta_i g_i(w)||^p.
struct SignedSum {
  std::vector<const double*> members;
  std::size_t points = 0;
  std::span<const double> weights;

  double weight(std::size_t k) const {
    return weights.empty() ? 1.0 / static_cast<double>(points) : weights[k];
  }

  SignMoment exact(double p, const NormSpace& X) const {
    const int count = static_cast<int>(members.size());
    const int m = X.m();
    const std::size_t signs = cube_size(count);
    std::vector<double> per_point(points, 0.0);
    parallel_for(points, [&](std::size_t k) {
      std::vector<double> buffer(signs);
      std::vector<double> sum(m, 0.0);
      // Gray-code walk over sign vectors; bit set means delta_i = -1.
      mask_t gray = 0;
      auto recompute = [&] {
        std::fill(sum.begin(), sum.end(), 0.0);
        for (int i = 0; i < count; ++i) {
          const double s = ((gray >> i) & 1u) ? -1.0 : 1.0;
          const double* g = members[i] + k * m;
          for (int j = 0; j < m; ++j) sum[j] += s * g[j];
        }
      };
      recompute();
      buffer[0] = X.norm_power(sum.data(), p);
      for (std::size_t t = 1; t < signs; ++t) {
        const int bit = std::countr_zero(t);
        gray ^= mask_t{1} << bit;
        if ((t & 255u) == 0) {
          recompute();
        } else {
          const double s = ((gray >> bit) & 1u) ? -2.0 : 2.0;
          const double* g = members[bit] + k * m;
          for (int j = 0; j < m; ++j) sum[j] += s * g[j];
        }
        buffer[gray] = X.norm_power(sum.data(), p);
      }
      double total = 0.0;
      for (double v : buffer) total += v;
      per_point[k] = total / static_cast<double>(signs);
    }, 8);
    SignMoment out;
    for (std::size_t k = 0; k < points; ++k) out.mean += weight(k) * per_point[k];
    out.evaluations = signs;
    return out;
  }

  double for_signs(mask_t delta, double p, const NormSpace& X) const {
    const int m = X.m();
    std::vector<double> sum(m);
    double total = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
      std::fill(sum.begin(), sum.end(), 0.0);
      for (std::size_t i = 0; i < members.size(); ++i) {
        const double s = ((delta >> i) & 1u) ? -1.0 : 1.0;
        const double* g = members[i] + k * m;
        for (int j = 0; j < m; ++j) sum[j] += s * g[j];
      }
      total += weight(k) * X.norm_power(sum.data(), p);
    }
    return total;
  }

  SignMoment sampled(double p, const NormSpace& X, std::uint64_t samples, std::uint64_t seed) const {
    const mask_t full = members.size() >= 32 ? ~mask_t{0}
                                             : static_cast<mask_t>((std::uint64_t{1} << members.size()) - 1);
    std::vector<double> values(samples);
    parallel_for(samples, [&](std::size_t s) {
      const auto delta = static_cast<mask_t>(counter_hash(seed, 0x5167ULL, s)) & full;
      values[s] = for_signs(delta, p, X);
    }, 16);
    SignMoment out;
    out.exact = false;
    out.evaluations = samples;
    for (double v : values) out.mean += v;
    out.mean /= static_cast<double>(samples);
    if (samples > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - out.mean) * (v - out.mean);
      out.std_error = std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
    }
    return out;
  }

  SignMoment moment(double p, const NormSpace& X, const RademacherAveragePlan& plan) const {
    const int count = static_cast<int>(members.size());
    plan.validate(count);
    return plan.enumerates(count) ? exact(p, X) : sampled(p, X, plan.samples, plan.seed);
  }
};

inline void check_target(int m, const NormSpace& X) {
  require(m == X.m(), "target dimension does not match the norm space");
}

}  // namespace detail

/// (2^-n sum_eps ||f(eps)||^p)^(1/p), or the max over eps for p = inf.
inline double lp_norm(const HypercubeFunction& f, double p, const NormSpace& X) {
  detail::require(p >= 1.0, "L_p exponent must satisfy p >= 1");
  detail::check_target(f.m(), X);
  if (std::isinf(p)) {
    double worst = 0.0;
    for (mask_t k = 0; k < f.size(); ++k) worst = std::max(worst, X.raw_norm(f.row(k).data()));
    return worst;
  }
  double total = 0.0;
  for (mask_t k = 0; k < f.size(); ++k) total += X.norm_power(f.row(k).data(), p);
  total = std::ldexp(total, -f.n());
  return p == 2.0 ? std::sqrt(total) : std::pow(total, 1.0 / p);
}

/// E_delta ||sum_i delta_i g_i||_{L_p}^p together with its sampling error.
inline SignMoment rademacher_moment(const FunctionFamily& g, double p, const NormSpace& X,
                                    const RademacherAveragePlan& plan) {
  detail::require(p > 0.0 && std::isfinite(p), "Rademacher averages need p in (0, inf)");
  detail::check_target(g.m(), X);
  detail::SignedSum sum;
  sum.points = cube_size(g.n());
  for (const auto& f : g.members()) sum.members.push_back(f.flat().data());
  return sum.moment(p, X, plan);
}

/// (2^-n sum_delta ||sum_i delta_i g_i||_{L_p}^p)^(1/p).
inline double rademacher_average(const FunctionFamily& g, double p, const NormSpace& X,
                                 const RademacherAveragePlan& plan) {
  const double mean = rademacher_moment(g, p, X, plan).mean;
  return p == 2.0 ? std::sqrt(mean) : std::pow(mean, 1.0 / p);
}

/// 2^-n sum_eps <g(eps), f(eps)> with the Euclidean pairing.
inline double duality_pairing(const HypercubeFunction& f, const HypercubeFunction& g) {
  detail::require(f.same_shape(g), "shape mismatch");
  double total = 0.0;
  for (mask_t k = 0; k < f.size(); ++k) {
    const auto a = f.row(k);
    const auto b = g.row(k);
    double dot = 0.0;
    for (int j = 0; j < f.m(); ++j) dot += a[j] * b[j];
    total += dot;
  }
  return std::ldexp(total, -f.n());
}

}  // namespace hcube
