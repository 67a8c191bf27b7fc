#pragma once

// Finite filtered probability spaces and X-valued martingales on them, with
// the UMD, UMD+/- and martingale type ratios.
//
// Only finite filtrations are representable (the dyadic cube filtration and
// finite rooted trees), so every ratio computed here is a lower bound for the
// corresponding constant taken over all probability spaces.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hcube/core.hpp"
#include "hcube/inequalities.hpp"
#include "hcube/norms.hpp"
#include "hcube/operators.hpp"

namespace hcube {

inline constexpr double martingale_tolerance = 1e-12;

enum class FiltrationKind { dyadic, tree };

/// Sample space {0..N-1} with point masses and nested partitions
/// level 0 (trivial) through level n.
class FiniteFiltration {
 public:
  /// sigma(eps_1..eps_i) on C_n; point k's level-i cell is k mod 2^i.
  static FiniteFiltration dyadic(int n) {
    detail::require(n >= 1 && n <= max_dimension, "dimension n must lie in [1, 20]");
    FiniteFiltration out;
    out.kind_ = FiltrationKind::dyadic;
    const std::size_t points = cube_size(n);
    out.probabilities_.assign(points, 1.0 / static_cast<double>(points));
    out.cells_.resize(n + 1);
    out.cell_counts_.resize(n + 1);
    for (int level = 0; level <= n; ++level) {
      const mask_t low = (mask_t{1} << level) - 1;
      out.cells_[level].resize(points);
      for (std::size_t k = 0; k < points; ++k) out.cells_[level][k] = static_cast<int>(k & low);
      out.cell_counts_[level] = static_cast<int>(low) + 1;
    }
    return out;
  }

  /// levels[i][k] labels the level-i cell containing point k; labels are
  /// arbitrary integers and are renumbered internally.
  static FiniteFiltration tree(const std::vector<std::vector<int>>& levels, std::vector<double> probabilities) {
    detail::require(levels.size() >= 2, "a filtration needs at least levels 0 and 1");
    detail::require(!probabilities.empty(), "sample space must be nonempty");
    const std::size_t points = probabilities.size();
    double total = 0.0;
    for (double w : probabilities) {
      detail::require(std::isfinite(w) && w > 0.0, "point probabilities must be positive");
      total += w;
    }
    detail::require(std::abs(total - 1.0) <= 1e-12, "point probabilities must sum to 1");

    FiniteFiltration out;
    out.kind_ = FiltrationKind::tree;
    out.probabilities_ = std::move(probabilities);
    for (const auto& labels : levels) {
      detail::require(labels.size() == points, "every level must label every point");
      std::map<int, int> renumber;
      std::vector<int> cells(points);
      for (std::size_t k = 0; k < points; ++k) {
        auto [it, inserted] = renumber.try_emplace(labels[k], static_cast<int>(renumber.size()));
        cells[k] = it->second;
      }
      out.cell_counts_.push_back(static_cast<int>(renumber.size()));
      out.cells_.push_back(std::move(cells));
    }
    detail::require(out.cell_counts_.front() == 1, "level 0 must be the trivial partition");
    for (std::size_t level = 1; level < out.cells_.size(); ++level) {
      std::vector<int> parent(out.cell_counts_[level], -1);
      for (std::size_t k = 0; k < points; ++k) {
        int& p = parent[out.cells_[level][k]];
        const int coarse = out.cells_[level - 1][k];
        detail::require(p == -1 || p == coarse, "each level must refine the previous one");
        p = coarse;
      }
    }
    return out;
  }

  FiltrationKind kind() const { return kind_; }
  int steps() const { return static_cast<int>(cells_.size()) - 1; }
  std::size_t points() const { return probabilities_.size(); }
  const std::vector<double>& probabilities() const { return probabilities_; }
  int cell(int level, std::size_t point) const { return cells_[level][point]; }
  int cell_count(int level) const { return cell_counts_[level]; }
  const std::vector<std::vector<int>>& levels() const { return cells_; }

  std::string label() const {
    return kind_ == FiltrationKind::dyadic ? "dyadic-hypercube(" + std::to_string(steps()) + ")"
                                           : "tree(" + std::to_string(steps()) + " levels, " +
                                                 std::to_string(points()) + " points)";
  }

  /// E[values | level] as probability-weighted cell averages; values is
  /// a points x m row-major table.
  std::vector<double> conditional_expectation(int level, std::span<const double> values, int m) const {
    detail::require(level >= 0 && level <= steps(), "level out of range");
    detail::require(values.size() == points() * static_cast<std::size_t>(m), "table shape mismatch");
    const int cells = cell_counts_[level];
    std::vector<double> mass(cells, 0.0);
    std::vector<double> sums(static_cast<std::size_t>(cells) * m, 0.0);
    for (std::size_t k = 0; k < points(); ++k) {
      const int c = cells_[level][k];
      mass[c] += probabilities_[k];
      for (int j = 0; j < m; ++j) sums[static_cast<std::size_t>(c) * m + j] += probabilities_[k] * values[k * m + j];
    }
    std::vector<double> out(values.size());
    for (std::size_t k = 0; k < points(); ++k) {
      const int c = cells_[level][k];
      for (int j = 0; j < m; ++j) out[k * m + j] = sums[static_cast<std::size_t>(c) * m + j] / mass[c];
    }
    return out;
  }

 private:
  FiltrationKind kind_ = FiltrationKind::tree;
  std::vector<double> probabilities_;
  std::vector<std::vector<int>> cells_;
  std::vector<int> cell_counts_;
};

/// M_0, ..., M_n adapted to a finite filtration, each a points x m table.
class MartingaleSequence {
 public:
  /// Rejects tables that are not adapted or fail the martingale property
  /// by more than 1e-12 (relative to the largest entry, floored at 1).
  MartingaleSequence(FiniteFiltration filtration, int m, std::vector<std::vector<double>> values)
      : filtration_(std::move(filtration)), m_(m), values_(std::move(values)) {
    detail::require(m >= 1, "target dimension m must be at least 1");
    detail::require(static_cast<int>(values_.size()) == filtration_.steps() + 1, "need one table per level 0..n");
    double scale = 1.0;
    for (const auto& table : values_) {
      detail::require(table.size() == filtration_.points() * static_cast<std::size_t>(m), "table shape mismatch");
      for (double v : table) {
        detail::require(std::isfinite(v), "martingale values must be finite");
        scale = std::max(scale, std::abs(v));
      }
    }
    const double tol = martingale_tolerance * scale;
    for (int level = 0; level <= steps(); ++level) {
      const auto projected = filtration_.conditional_expectation(level, values_[level], m_);
      detail::require(max_gap(projected, values_[level]) <= tol,
                      "M_" + std::to_string(level) + " is not measurable for level " + std::to_string(level));
      if (level > 0) {
        const auto previous = filtration_.conditional_expectation(level - 1, values_[level], m_);
        detail::require(max_gap(previous, values_[level - 1]) <= tol,
                        "martingale property fails at level " + std::to_string(level));
      }
    }
  }

  /// M_i = E[terminal | level i].
  static MartingaleSequence from_terminal(const FiniteFiltration& filtration, int m, std::span<const double> terminal) {
    std::vector<std::vector<double>> values;
    for (int level = 0; level <= filtration.steps(); ++level)
      values.push_back(filtration.conditional_expectation(level, terminal, m));
    return MartingaleSequence(filtration, m, std::move(values));
  }

  const FiniteFiltration& filtration() const { return filtration_; }
  int steps() const { return filtration_.steps(); }
  int m() const { return m_; }
  const std::vector<double>& level(int i) const { return values_[i]; }

  /// d_i = M_i - M_{i-1}.
  std::vector<double> difference(int i) const {
    detail::require(i >= 1 && i <= steps(), "step out of range");
    std::vector<double> d(values_[i]);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] -= values_[i - 1][j];
    return d;
  }

  std::vector<double> increment() const {
    std::vector<double> d(values_.back());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] -= values_.front()[j];
    return d;
  }

  /// Largest violation of E[M_i | level i-1] = M_{i-1}.
  double martingale_deviation() const {
    double worst = 0.0;
    for (int level = 1; level <= steps(); ++level)
      worst = std::max(worst, max_gap(filtration_.conditional_expectation(level - 1, values_[level], m_),
                                      values_[level - 1]));
    return worst;
  }

  MartingaleSequence scaled(double factor) const {
    auto values = values_;
    for (auto& table : values)
      for (double& v : table) v *= factor;
    return MartingaleSequence(filtration_, m_, std::move(values));
  }

 private:
  static double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    return worst;
  }

  FiniteFiltration filtration_;
  int m_;
  std::vector<std::vector<double>> values_;
};

/// Dyadic martingale M_i = E_i f.
inline MartingaleSequence make_dyadic_martingale(const HypercubeFunction& f) {
  std::vector<std::vector<double>> values;
  for (int level = 0; level <= f.n(); ++level) {
    const auto projected = conditional_expectation(f, level);
    values.emplace_back(projected.flat().begin(), projected.flat().end());
  }
  return MartingaleSequence(FiniteFiltration::dyadic(f.n()), f.m(), std::move(values));
}

namespace detail {

inline double weighted_lp_norm(std::span<const double> table, const std::vector<double>& weights, int m, double p,
                               const NormSpace& X) {
  check_target(m, X);
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) total += weights[k] * X.norm_power(table.data() + k * m, p);
  return root(total, p);
}

inline std::vector<double> signed_difference_sum(const MartingaleSequence& M, mask_t signs) {
  std::vector<double> out(M.level(0).size(), 0.0);
  for (int i = 1; i <= M.steps(); ++i) {
    const double s = coordinate_sign(signs, i);
    const auto d = M.difference(i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += s * d[j];
  }
  return out;
}

/// (E_delta ||sum_i delta_i d_i||_{L_p}^p)^(1/p).
inline double averaged_transform_norm(const MartingaleSequence& M, double p, const NormSpace& X,
                                      const RademacherAveragePlan& plan) {
  std::vector<std::vector<double>> diffs;
  for (int i = 1; i <= M.steps(); ++i) diffs.push_back(M.difference(i));
  SignedSum sum;
  sum.points = M.filtration().points();
  sum.weights = M.filtration().probabilities();
  for (const auto& d : diffs) sum.members.push_back(d.data());
  return root(sum.moment(p, X, plan).mean, p);
}

inline ReportParameters martingale_parameters(const MartingaleSequence& M, double p, const NormSpace& X,
                                              const RademacherAveragePlan& plan) {
  return {M.steps(), M.m(), p, X.q(), plan};
}

inline std::string martingale_scope(const MartingaleSequence& M) {
  return "witnessed lower bound; filtration " + M.filtration().label();
}

}  // namespace detail

/// ||sum_i delta_i d_i||_{L_p} / ||M_n - M_0||_{L_p} for one sign choice.
inline InequalityReport umd_report(const MartingaleSequence& M, double p, const NormSpace& X,
                                   const SignAssignment& signs) {
  detail::check_open_exponent(p);
  detail::require(signs.n() == M.steps(), "sign vector length must equal the number of steps");
  const auto& w = M.filtration().probabilities();
  const double lhs = detail::weighted_lp_norm(detail::signed_difference_sum(M, signs.bits()), w, M.m(), p, X);
  const double rhs = detail::weighted_lp_norm(M.increment(), w, M.m(), p, X);
  return InequalityReport::make(FunctionalName::umd, lhs, rhs,
                                detail::martingale_parameters(M, p, X, RademacherAveragePlan::exact()),
                                detail::martingale_scope(M));
}

inline std::optional<double> umd_ratio(const MartingaleSequence& M, double p, const NormSpace& X,
                                       const SignAssignment& signs) {
  return umd_report(M, p, X, signs).ratio;
}

struct UmdMaximum {
  InequalityReport report;
  SignAssignment signs;
};

/// Worst sign pattern over all 2^n choices; ties go to the lowest mask.
inline UmdMaximum umd_max_report(const MartingaleSequence& M, double p, const NormSpace& X) {
  detail::require(M.steps() <= max_dimension, "sign enumeration needs at most 20 steps");
  UmdMaximum best{umd_report(M, p, X, SignAssignment::all_plus(M.steps())), SignAssignment::all_plus(M.steps())};
  for (mask_t bits = 1; bits < cube_size(M.steps()); ++bits) {
    const SignAssignment signs(M.steps(), bits);
    auto candidate = umd_report(M, p, X, signs);
    if (candidate.lhs > best.report.lhs) best = {std::move(candidate), signs};
  }
  return best;
}

/// (E_delta ||sum delta_i d_i||^p)^(1/p) / ||M_n - M_0||.
inline InequalityReport umd_plus_report(const MartingaleSequence& M, double p, const NormSpace& X,
                                        const RademacherAveragePlan& plan) {
  detail::check_open_exponent(p);
  const double averaged = detail::averaged_transform_norm(M, p, X, plan);
  const double direct = detail::weighted_lp_norm(M.increment(), M.filtration().probabilities(), M.m(), p, X);
  return InequalityReport::make(FunctionalName::umd_plus, averaged, direct, detail::martingale_parameters(M, p, X, plan),
                                detail::martingale_scope(M));
}

/// ||M_n - M_0|| / (E_delta ||sum delta_i d_i||^p)^(1/p).
inline InequalityReport umd_minus_report(const MartingaleSequence& M, double p, const NormSpace& X,
                                         const RademacherAveragePlan& plan) {
  detail::check_open_exponent(p);
  const double averaged = detail::averaged_transform_norm(M, p, X, plan);
  const double direct = detail::weighted_lp_norm(M.increment(), M.filtration().probabilities(), M.m(), p, X);
  return InequalityReport::make(FunctionalName::umd_minus, direct, averaged,
                                detail::martingale_parameters(M, p, X, plan), detail::martingale_scope(M));
}

inline std::optional<double> umd_plus_ratio(const MartingaleSequence& M, double p, const NormSpace& X,
                                            const RademacherAveragePlan& plan) {
  return umd_plus_report(M, p, X, plan).ratio;
}

inline std::optional<double> umd_minus_ratio(const MartingaleSequence& M, double p, const NormSpace& X,
                                             const RademacherAveragePlan& plan) {
  return umd_minus_report(M, p, X, plan).ratio;
}

/// ||M_n - M_0||_{L_s} / (sum_i ||d_i||_{L_s}^s)^(1/s).
inline InequalityReport martingale_type_report(const MartingaleSequence& M, double s, const NormSpace& X) {
  detail::require(s > 1.0 && s <= 2.0, "type exponent s must lie in (1, 2]");
  const auto& w = M.filtration().probabilities();
  double pieces = 0.0;
  for (int i = 1; i <= M.steps(); ++i) pieces += std::pow(detail::weighted_lp_norm(M.difference(i), w, M.m(), s, X), s);
  return InequalityReport::make(FunctionalName::martingale_type, detail::weighted_lp_norm(M.increment(), w, M.m(), s, X),
                                detail::root(pieces, s),
                                detail::martingale_parameters(M, s, X, RademacherAveragePlan::exact()),
                                detail::martingale_scope(M));
}

inline std::optional<double> martingale_type_ratio(const MartingaleSequence& M, double s, const NormSpace& X) {
  return martingale_type_report(M, s, X).ratio;
}

}  // namespace hcube
