#pragma once

// Vector-valued functions on the discrete hypercube {-1,1}^n and their
// Walsh spectra.
//
// Index convention (used by every operator and every file format):
//   point index k in [0, 2^n); coordinate eps_i = +1 when bit (i-1) of k is
//   clear and -1 when it is set; bit 0 is the least significant bit.
//   A subset A of {1..n} is the bitmask with bit (i-1) set iff i is in A.
// Under this convention w_A(eps_k) = (-1)^popcount(A & k).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcube/error.hpp"
#include "hcube/random.hpp"

namespace hcube {

using mask_t = std::uint32_t;

inline constexpr int max_dimension = 20;

constexpr std::size_t cube_size(int n) { return std::size_t{1} << n; }

/// w_A(eps) for subset mask A and point index eps.
constexpr int evaluate_walsh_character(mask_t subset, mask_t point) {
  return (std::popcount(subset & point) & 1) ? -1 : 1;
}

/// eps_i in {-1,+1} for 1-based coordinate i.
constexpr int coordinate_sign(mask_t point, int i) { return ((point >> (i - 1)) & 1u) ? -1 : 1; }

struct PointTag {};
struct SpectrumTag {};

/// Dense 2^n x m table of doubles, row-major. The tag keeps point values and
/// Walsh coefficients from being mixed up.
template <class Tag>
class CubeTable {
 public:
  CubeTable() = default;

  /// Zero table.
  CubeTable(int n, int m) : n_(n), m_(m) {
    check_shape(n, m);
    data_.assign(cube_size(n) * static_cast<std::size_t>(m), 0.0);
  }

  /// Takes ownership of a flattened row-major table.
  CubeTable(int n, int m, std::vector<double> flat) : n_(n), m_(m), data_(std::move(flat)) {
    check_shape(n, m);
    detail::require(data_.size() == cube_size(n) * static_cast<std::size_t>(m),
                    "table must hold 2^n rows of m entries");
    for (double v : data_) detail::require(std::isfinite(v), "table entries must be finite");
  }

  static CubeTable from_rows(int n, const std::vector<std::vector<double>>& rows) {
    detail::require(!rows.empty(), "table has no rows");
    const int m = static_cast<int>(rows.front().size());
    detail::require(rows.size() == cube_size(n), "table length must equal 2^n");
    std::vector<double> flat;
    flat.reserve(rows.size() * rows.front().size());
    for (const auto& row : rows) {
      detail::require(static_cast<int>(row.size()) == m, "every row must have length m");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return CubeTable(n, m, std::move(flat));
  }

  /// Every row equal to value.
  static CubeTable constant(int n, std::span<const double> value) {
    CubeTable out(n, static_cast<int>(value.size()));
    for (mask_t k = 0; k < out.size(); ++k) out.set_row(k, value);
    return out;
  }

  int n() const { return n_; }
  int m() const { return m_; }
  mask_t size() const { return static_cast<mask_t>(cube_size(n_)); }

  std::span<const double> row(mask_t k) const {
    return {data_.data() + static_cast<std::size_t>(k) * m_, static_cast<std::size_t>(m_)};
  }
  std::span<double> row(mask_t k) {
    return {data_.data() + static_cast<std::size_t>(k) * m_, static_cast<std::size_t>(m_)};
  }
  void set_row(mask_t k, std::span<const double> value) {
    detail::require(static_cast<int>(value.size()) == m_, "row length must equal m");
    std::copy(value.begin(), value.end(), row(k).begin());
  }

  double operator()(mask_t k, int j) const { return data_[static_cast<std::size_t>(k) * m_ + j]; }
  double& operator()(mask_t k, int j) { return data_[static_cast<std::size_t>(k) * m_ + j]; }

  std::span<const double> flat() const { return data_; }
  std::span<double> flat() { return data_; }

  bool same_shape(const CubeTable& other) const { return n_ == other.n_ && m_ == other.m_; }

  CubeTable& operator+=(const CubeTable& other) {
    detail::require(same_shape(other), "shape mismatch");
    for (std::size_t j = 0; j < data_.size(); ++j) data_[j] += other.data_[j];
    return *this;
  }
  CubeTable& operator-=(const CubeTable& other) {
    detail::require(same_shape(other), "shape mismatch");
    for (std::size_t j = 0; j < data_.size(); ++j) data_[j] -= other.data_[j];
    return *this;
  }
  CubeTable& operator*=(double scale) {
    for (double& v : data_) v *= scale;
    return *this;
  }

  friend CubeTable operator+(CubeTable a, const CubeTable& b) { return a += b; }
  friend CubeTable operator-(CubeTable a, const CubeTable& b) { return a -= b; }
  friend CubeTable operator*(double s, CubeTable a) { return a *= s; }
  friend bool operator==(const CubeTable&, const CubeTable&) = default;

 private:
  static void check_shape(int n, int m) {
    detail::require(n >= 1 && n <= max_dimension, "dimension n must lie in [1, 20]");
    detail::require(m >= 1, "target dimension m must be at least 1");
  }

  int n_ = 0;
  int m_ = 0;
  std::vector<double> data_;
};

/// f : C_n -> R^m, row k holds f(eps_k).
using HypercubeFunction = CubeTable<PointTag>;
/// Walsh coefficients, row a holds fhat(A) for the subset with bitmask a.
using WalshSpectrum = CubeTable<SpectrumTag>;

/// A sign vector delta in C_n, stored with the point bit convention.
class SignAssignment {
 public:
  SignAssignment(int n, mask_t bits) : n_(n), bits_(bits) {
    detail::require(n >= 1 && n <= max_dimension, "dimension n must lie in [1, 20]");
    detail::require(bits < cube_size(n), "sign mask must be below 2^n");
  }
  static SignAssignment all_plus(int n) { return {n, 0}; }

  int n() const { return n_; }
  mask_t bits() const { return bits_; }
  int sign(int i) const { return coordinate_sign(bits_, i); }

 private:
  int n_;
  mask_t bits_;
};

namespace detail {

/// In-place unnormalized Walsh-Hadamard butterfly, applied to each of the m
/// interleaved components at once.
inline void hadamard_butterfly(std::span<double> data, int n, int m) {
  const std::size_t rows = cube_size(n);
  for (std::size_t h = 1; h < rows; h <<= 1) {
    for (std::size_t block = 0; block < rows; block += 2 * h) {
      for (std::size_t k = block; k < block + h; ++k) {
        double* lo = data.data() + k * m;
        double* hi = data.data() + (k + h) * m;
        for (int j = 0; j < m; ++j) {
          const double a = lo[j];
          const double b = hi[j];
          lo[j] = a + b;
          hi[j] = a - b;
        }
      }
    }
  }
}

}  // namespace detail

/// fhat(A) = 2^-n sum_eps f(eps) w_A(eps), by the O(n 2^n) butterfly.
inline WalshSpectrum walsh_forward(const HypercubeFunction& f) {
  std::vector<double> data(f.flat().begin(), f.flat().end());
  detail::hadamard_butterfly(data, f.n(), f.m());
  const double scale = std::ldexp(1.0, -f.n());
  for (double& v : data) v *= scale;
  return WalshSpectrum(f.n(), f.m(), std::move(data));
}

/// f(eps) = sum_A fhat(A) w_A(eps).
inline HypercubeFunction walsh_inverse(const WalshSpectrum& s) {
  std::vector<double> data(s.flat().begin(), s.flat().end());
  detail::hadamard_butterfly(data, s.n(), s.m());
  return HypercubeFunction(s.n(), s.m(), std::move(data));
}

/// Direct O(4^n) double sum. Kept for benchmarking and as a reference path.
inline WalshSpectrum walsh_forward_naive(const HypercubeFunction& f) {
  WalshSpectrum out(f.n(), f.m());
  const double scale = std::ldexp(1.0, -f.n());
  for (mask_t a = 0; a < f.size(); ++a) {
    auto dst = out.row(a);
    for (mask_t k = 0; k < f.size(); ++k) {
      const double w = evaluate_walsh_character(a, k);
      const auto src = f.row(k);
      for (int j = 0; j < f.m(); ++j) dst[j] += w * src[j];
    }
    for (int j = 0; j < f.m(); ++j) dst[j] *= scale;
  }
  return out;
}

/// v * w_A.
inline HypercubeFunction walsh_character_function(int n, mask_t subset, std::span<const double> v) {
  HypercubeFunction f(n, static_cast<int>(v.size()));
  for (mask_t k = 0; k < f.size(); ++k) {
    const double w = evaluate_walsh_character(subset, k);
    for (int j = 0; j < f.m(); ++j) f(k, j) = w * v[j];
  }
  return f;
}

/// Independent standard-normal entries drawn from (seed, stream).
inline HypercubeFunction random_function(int n, int m, std::uint64_t seed, std::uint64_t stream = 0) {
  HypercubeFunction f(n, m);
  CounterStream rng(seed, stream);
  for (double& v : f.flat()) v = rng.normal();
  return f;
}

/// 2^-n sum_eps f(eps), summed in ascending index order.
inline std::vector<double> mean_value(const HypercubeFunction& f) {
  std::vector<double> mean(f.m(), 0.0);
  for (mask_t k = 0; k < f.size(); ++k) {
    const auto r = f.row(k);
    for (int j = 0; j < f.m(); ++j) mean[j] += r[j];
  }
  const double scale = std::ldexp(1.0, -f.n());
  for (double& v : mean) v *= scale;
  return mean;
}

/// Largest absolute entrywise difference.
template <class Tag>
double max_abs_difference(const CubeTable<Tag>& a, const CubeTable<Tag>& b) {
  detail::require(a.same_shape(b), "shape mismatch");
  double worst = 0.0;
  for (std::size_t j = 0; j < a.flat().size(); ++j)
    worst = std::max(worst, std::abs(a.flat()[j] - b.flat()[j]));
  return worst;
}

template <class Tag>
double max_abs_entry(const CubeTable<Tag>& a) {
  double worst = 0.0;
  for (double v : a.flat()) worst = std::max(worst, std::abs(v));
  return worst;
}

/// max|a-b| / max(1, max|b|); the deviation measure used by all identity checks.
template <class Tag>
double relative_deviation(const CubeTable<Tag>& a, const CubeTable<Tag>& b) {
  return max_abs_difference(a, b) / std::max(1.0, max_abs_entry(b));
}

}  // namespace hcube
