#pragma once

// Linear operators on hypercube functions: partial derivatives, the
// one-coordinate averaging operators, conditional expectations for the
// coordinate filtration (plain and permuted), fractional Laplacians and the
// Rademacher projection.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hcube/core.hpp"

namespace hcube {

/// A bijection of {1..n}; image(i) = pi(i).
class Permutation {
 public:
  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
    const int n = static_cast<int>(image_.size());
    detail::require(n >= 1, "permutation must be nonempty");
    std::vector<bool> seen(n + 1, false);
    for (int v : image_) {
      detail::require(v >= 1 && v <= n && !seen[v], "permutation image must list 1..n once each");
      seen[v] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> image(n);
    std::iota(image.begin(), image.end(), 1);
    return Permutation(std::move(image));
  }

  int n() const { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[i - 1]; }
  const std::vector<int>& image() const { return image_; }

  Permutation inverse() const {
    std::vector<int> inv(image_.size());
    for (int i = 1; i <= n(); ++i) inv[image_[i - 1] - 1] = i;
    return Permutation(std::move(inv));
  }

  /// Bitmask of {pi(1), ..., pi(level)}.
  mask_t prefix_mask(int level) const {
    mask_t mask = 0;
    for (int i = 1; i <= level; ++i) mask |= mask_t{1} << (image_[i - 1] - 1);
    return mask;
  }

 private:
  std::vector<int> image_;
};

namespace detail {

inline void check_coordinate(const HypercubeFunction& f, int i) {
  require(i >= 1 && i <= f.n(), "coordinate must lie in [1, n]");
}

inline void check_level(const HypercubeFunction& f, int level) {
  require(level >= 0 && level <= f.n(), "level must lie in [0, n]");
}

/// Zeroes every coefficient whose subset is not contained in `allowed`.
inline void restrict_spectrum(WalshSpectrum& s, mask_t allowed) {
  for (mask_t a = 0; a < s.size(); ++a)
    if ((a & ~allowed) != 0)
      for (double& v : s.row(a)) v = 0.0;
}

/// Scales row A by multiplier(A).
template <class Multiplier>
HypercubeFunction spectral_multiplier(const HypercubeFunction& f, Multiplier&& multiplier) {
  WalshSpectrum s = walsh_forward(f);
  for (mask_t a = 0; a < s.size(); ++a) {
    const double c = multiplier(a);
    for (double& v : s.row(a)) v *= c;
  }
  return walsh_inverse(s);
}

}  // namespace detail

/// (f(eps) - f(eps with eps_i flipped)) / 2.
inline HypercubeFunction partial_derivative(const HypercubeFunction& f, int i) {
  detail::check_coordinate(f, i);
  const mask_t flip = mask_t{1} << (i - 1);
  HypercubeFunction out(f.n(), f.m());
  for (mask_t k = 0; k < f.size(); ++k) {
    const auto a = f.row(k);
    const auto b = f.row(k ^ flip);
    auto dst = out.row(k);
    for (int j = 0; j < f.m(); ++j) dst[j] = 0.5 * (a[j] - b[j]);
  }
  return out;
}

/// (f(eps) + f(eps with eps_i flipped)) / 2, i.e. (id - d_i) f.
inline HypercubeFunction averaging_operator(const HypercubeFunction& f, int i) {
  detail::check_coordinate(f, i);
  const mask_t flip = mask_t{1} << (i - 1);
  HypercubeFunction out(f.n(), f.m());
  for (mask_t k = 0; k < f.size(); ++k) {
    const auto a = f.row(k);
    const auto b = f.row(k ^ flip);
    auto dst = out.row(k);
    for (int j = 0; j < f.m(); ++j) dst[j] = 0.5 * (a[j] + b[j]);
  }
  return out;
}

/// Average over coordinates level+1..n with the first `level` coordinates
/// held fixed; the conditional expectation onto sigma(eps_1..eps_level).
///
/// Coordinates 1..level are the low bits of the index, so the average runs
/// over the high bits; sums are taken in ascending order of the high part.
inline HypercubeFunction conditional_expectation(const HypercubeFunction& f, int level) {
  detail::check_level(f, level);
  if (level == f.n()) return f;
  const mask_t low_count = mask_t{1} << level;
  const mask_t high_count = f.size() >> level;
  const int m = f.m();
  std::vector<double> cell_means(static_cast<std::size_t>(low_count) * m, 0.0);
  for (mask_t high = 0; high < high_count; ++high) {
    for (mask_t low = 0; low < low_count; ++low) {
      const auto src = f.row((high << level) | low);
      double* dst = cell_means.data() + static_cast<std::size_t>(low) * m;
      for (int j = 0; j < m; ++j) dst[j] += src[j];
    }
  }
  const double scale = 1.0 / static_cast<double>(high_count);
  for (double& v : cell_means) v *= scale;

  HypercubeFunction out(f.n(), m);
  for (mask_t k = 0; k < f.size(); ++k) {
    const double* src = cell_means.data() + static_cast<std::size_t>(k & (low_count - 1)) * m;
    std::copy(src, src + m, out.row(k).begin());
  }
  return out;
}

/// Conditional expectation onto sigma(eps_pi(1), ..., eps_pi(level)),
/// computed as a Walsh restriction to subsets of {pi(1)..pi(level)}.
inline HypercubeFunction conditional_expectation_permuted(const HypercubeFunction& f,
                                                          const Permutation& pi, int level) {
  detail::check_level(f, level);
  detail::require(pi.n() == f.n(), "permutation size must equal n");
  WalshSpectrum s = walsh_forward(f);
  detail::restrict_spectrum(s, pi.prefix_mask(level));
  return walsh_inverse(s);
}

/// Delta^alpha: multiplies fhat(A) by |A|^alpha for A nonempty, drops fhat(empty).
inline HypercubeFunction fractional_laplacian(const HypercubeFunction& f, double alpha) {
  detail::require(std::isfinite(alpha), "alpha must be finite");
  return detail::spectral_multiplier(f, [alpha](mask_t a) {
    return a == 0 ? 0.0 : std::pow(static_cast<double>(std::popcount(a)), alpha);
  });
}

/// Keeps exactly the degree-one Walsh terms.
inline HypercubeFunction rademacher_projection(const HypercubeFunction& f) {
  return detail::spectral_multiplier(f, [](mask_t a) { return std::popcount(a) == 1 ? 1.0 : 0.0; });
}

/// d_i = E_i f - E_{i-1} f.
inline HypercubeFunction martingale_difference(const HypercubeFunction& f, int level) {
  detail::require(level >= 1 && level <= f.n(), "level must lie in [1, n]");
  return conditional_expectation(f, level) - conditional_expectation(f, level - 1);
}

}  // namespace hcube
