#pragma once

// Extremal search for inequality ratios. Every returned value is the ratio
// of an explicit witness, so it is a lower bound for the best constant of
// the inequality on the class the functional ranges over.
//
// Search: P random probes with independent standard normal entries, then R
// ascent runs on log(ratio) from the best probes. Gradients are central
// finite differences; steps use backtracking (halving) along the normalized
// gradient. The objective is homogeneous of degree 0, so iterates are
// rescaled to unit RMS after every accepted step.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hcube/core.hpp"
#include "hcube/inequalities.hpp"
#include "hcube/io.hpp"
#include "hcube/martingales.hpp"
#include "hcube/norms.hpp"
#include "hcube/parallel.hpp"

namespace hcube {

struct ProblemShape {
  int n = 2;
  int m = 1;
  double p = 2.0;
  double q = 2.0;
};

struct SearchConfig {
  FunctionalName functional = FunctionalName::pisier;
  ProblemShape shape{};
  RademacherAveragePlan plan{};
  int restarts = 16;
  int iterations = 300;
  int probes = 2000;
  double fd_step = 1e-5;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;

  void validate() const {
    detail::require(restarts >= 1 && iterations >= 1 && probes >= 1, "restarts, iterations and probes must be >= 1");
    detail::require(fd_step > 0.0 && tolerance > 0.0, "finite-difference step and tolerance must be positive");
    detail::require(shape.n >= 1 && shape.n <= max_dimension, "n must lie in [1, 20]");
    detail::require(shape.m >= 1, "m must be at least 1");
    detail::require(shape.q >= 1.0, "q must lie in [1, inf]");
    detail::require(shape.p > 1.0 && std::isfinite(shape.p), "search needs p in (1, inf)");
  }
};

/// lhs and rhs of one functional evaluation.
struct Evaluation {
  double lhs = 0.0;
  double rhs = 0.0;

  bool degenerate() const { return !(rhs >= degenerate_threshold); }
  double ratio() const { return lhs / rhs; }
};

/// A registered ratio functional over a flattened real input vector.
class RatioFunctional {
 public:
  RatioFunctional(FunctionalName name, ProblemShape shape, RademacherAveragePlan plan)
      : name_(name), shape_(shape), plan_(plan), X_(shape.m, shape.q) {}

  FunctionalName name() const { return name_; }
  const ProblemShape& shape() const { return shape_; }
  const RademacherAveragePlan& plan() const { return plan_; }

  std::size_t dimension() const {
    const std::size_t table = cube_size(shape_.n) * static_cast<std::size_t>(shape_.m);
    switch (kind()) {
      case Kind::function: return table;
      case Kind::family: return table * static_cast<std::size_t>(shape_.n);
      case Kind::vectors: return static_cast<std::size_t>(shape_.n) * shape_.m;
    }
    return table;
  }

  InequalityReport report(std::span<const double> x) const {
    detail::require(x.size() == dimension(), "witness length does not match the problem shape");
    const double p = shape_.p;
    switch (name_) {
      case FunctionalName::pisier: return pisier_report(as_function(x), p, X_, plan_);
      case FunctionalName::k_convexity: return k_convexity_report(as_function(x), p, X_);
      case FunctionalName::theorem1: return theorem1_report(as_family(x), p, X_, plan_);
      case FunctionalName::corollary2: return corollary2_report(as_family(x), p, X_, plan_);
      case FunctionalName::stein: return stein_report(as_family(x), p, X_, plan_);
      case FunctionalName::hn_remark: return hn_remark_report(as_family(x), p, X_, plan_);
      case FunctionalName::rademacher_type: return rademacher_type_report(as_vectors(x), p, X_);
      case FunctionalName::umd: return umd_max_report(make_dyadic_martingale(as_function(x)), p, X_).report;
      case FunctionalName::umd_plus: return umd_plus_report(make_dyadic_martingale(as_function(x)), p, X_, plan_);
      case FunctionalName::umd_minus: return umd_minus_report(make_dyadic_martingale(as_function(x)), p, X_, plan_);
      case FunctionalName::martingale_type:
        return martingale_type_report(make_dyadic_martingale(as_function(x)), p, X_);
    }
    throw input_error("unhandled functional");
  }

  Evaluation evaluate(std::span<const double> x) const {
    const auto r = report(x);
    return {r.lhs, r.rhs};
  }

  /// Structured witness (function, family or vectors JSON).
  json witness_json(std::span<const double> x) const {
    switch (kind()) {
      case Kind::function: return to_json(as_function(x));
      case Kind::family: return to_json(as_family(x));
      case Kind::vectors: return vectors_to_json(as_vectors(x));
    }
    return {};
  }

  std::vector<double> witness_from_json(const json& j) const {
    std::vector<double> flat;
    switch (kind()) {
      case Kind::function: {
        const auto f = function_from_json(j);
        detail::require(f.n() == shape_.n && f.m() == shape_.m, "witness shape mismatch");
        flat.assign(f.flat().begin(), f.flat().end());
        break;
      }
      case Kind::family: {
        const auto family = family_from_json(j);
        detail::require(family.n() == shape_.n && family.m() == shape_.m, "witness shape mismatch");
        for (const auto& f : family.members()) flat.insert(flat.end(), f.flat().begin(), f.flat().end());
        break;
      }
      case Kind::vectors: {
        const auto vectors = vectors_from_json(j);
        detail::require(static_cast<int>(vectors.size()) == shape_.n && static_cast<int>(vectors.front().size()) == shape_.m,
                        "witness shape mismatch");
        for (const auto& v : vectors) flat.insert(flat.end(), v.begin(), v.end());
        break;
      }
    }
    return flat;
  }

 private:
  enum class Kind { function, family, vectors };

  Kind kind() const {
    switch (name_) {
      case FunctionalName::theorem1:
      case FunctionalName::corollary2:
      case FunctionalName::stein:
      case FunctionalName::hn_remark: return Kind::family;
      case FunctionalName::rademacher_type: return Kind::vectors;
      default: return Kind::function;
    }
  }

  HypercubeFunction as_function(std::span<const double> x) const {
    return HypercubeFunction(shape_.n, shape_.m, std::vector<double>(x.begin(), x.end()));
  }

  FunctionFamily as_family(std::span<const double> x) const {
    const std::size_t table = cube_size(shape_.n) * static_cast<std::size_t>(shape_.m);
    std::vector<HypercubeFunction> members;
    for (int i = 0; i < shape_.n; ++i)
      members.emplace_back(shape_.n, shape_.m,
                           std::vector<double>(x.begin() + i * table, x.begin() + (i + 1) * table));
    return FunctionFamily(std::move(members));
  }

  std::vector<std::vector<double>> as_vectors(std::span<const double> x) const {
    std::vector<std::vector<double>> out;
    for (int i = 0; i < shape_.n; ++i) out.emplace_back(x.begin() + i * shape_.m, x.begin() + (i + 1) * shape_.m);
    return out;
  }

  FunctionalName name_;
  ProblemShape shape_;
  RademacherAveragePlan plan_;
  NormSpace X_;
};

/// A stored witness with the values it produced and how it was found.
struct RatioCertificate {
  FunctionalName functional = FunctionalName::pisier;
  ProblemShape shape{};
  RademacherAveragePlan plan{};
  std::vector<double> witness;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  SearchConfig config{};
  std::string hash;
  // Search statistics.
  double best_probe_ratio = 0.0;
  int winner = -1;  // restart index, or -1 when a probe won outright
  int discarded_restarts = 0;
  int resampled_probes = 0;
};

namespace detail {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  void text(const std::string& s) { bytes(s.data(), s.size()); }
  void number(double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    bytes(&bits, sizeof bits);
  }
  void integer(std::uint64_t x) { bytes(&x, sizeof x); }
  std::string hex() const {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << state_;
    return out.str();
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string certificate_hash(const RatioCertificate& c) {
  Fnv1a h;
  h.text(to_string(c.functional));
  h.integer(static_cast<std::uint64_t>(c.shape.n));
  h.integer(static_cast<std::uint64_t>(c.shape.m));
  h.number(c.shape.p);
  h.number(c.shape.q);
  h.text(to_string(c.plan.mode));
  h.integer(c.plan.samples);
  h.integer(c.plan.seed);
  h.integer(static_cast<std::uint64_t>(c.plan.exact_threshold));
  for (double x : c.witness) h.number(x);
  h.number(c.lhs);
  h.number(c.rhs);
  return h.hex();
}

inline double rms(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

inline void normalize(std::vector<double>& x) {
  const double r = rms(x);
  if (r > 0.0 && std::isfinite(r))
    for (double& v : x) v /= r;
}

/// log(lhs/rhs); NaN for degenerate or failed evaluations.
inline double log_ratio(const RatioFunctional& F, const std::vector<double>& x) {
  try {
    const Evaluation e = F.evaluate(x);
    if (e.degenerate() || !std::isfinite(e.lhs) || !std::isfinite(e.rhs)) return std::nan("");
    return std::log(e.lhs) - std::log(e.rhs);
  } catch (const input_error&) {
    return std::nan("");
  }
}

struct AscentResult {
  std::vector<double> x;
  double objective = -INFINITY;
  bool discarded = false;
};

inline AscentResult ascend(const RatioFunctional& F, std::vector<double> x, const SearchConfig& config) {
  AscentResult out;
  normalize(x);
  double phi = log_ratio(F, x);
  if (!std::isfinite(phi)) return {std::move(x), phi, true};
  const std::size_t d = x.size();
  std::vector<double> gradient(d);
  std::vector<double> trial(d);
  double step = 1.0;
  for (int it = 0; it < config.iterations; ++it) {
    const double scale = rms(x);
    double gnorm = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double h = config.fd_step * std::max(std::abs(x[c]), scale);
      const double saved = x[c];
      x[c] = saved + h;
      const double up = log_ratio(F, x);
      x[c] = saved - h;
      const double down = log_ratio(F, x);
      x[c] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) return {std::move(x), phi, true};
      gradient[c] = (up - down) / (2.0 * h);
      gnorm += gradient[c] * gradient[c];
    }
    gnorm = std::sqrt(gnorm);
    if (gnorm == 0.0) break;
    const double length = std::sqrt(static_cast<double>(d)) * scale / gnorm;

    step = std::min(1.0, 2.0 * step);
    double accepted = -INFINITY;
    while (step >= 1e-10) {
      for (std::size_t c = 0; c < d; ++c) trial[c] = x[c] + step * length * gradient[c];
      const double candidate = log_ratio(F, trial);
      if (!std::isfinite(candidate)) return {std::move(x), phi, true};
      if (candidate > phi) {
        accepted = candidate;
        break;
      }
      step *= 0.5;
    }
    if (!std::isfinite(accepted)) break;
    const double improvement = std::expm1(accepted - phi);
    x = trial;
    normalize(x);
    phi = accepted;
    if (improvement < config.tolerance) break;
  }
  out.x = std::move(x);
  out.objective = phi;
  return out;
}

inline std::vector<double> normal_vector(std::size_t d, std::uint64_t seed, std::uint64_t stream) {
  CounterStream rng(seed, stream);
  std::vector<double> x(d);
  for (double& v : x) v = rng.normal();
  return x;
}

inline constexpr int max_probe_resamples = 16;

}  // namespace detail

/// Random probes followed by restarted ascent; returns the best witness.
/// Throws degenerate_error when every probe is degenerate.
inline RatioCertificate maximize_ratio(const SearchConfig& config) {
  config.validate();
  const RatioFunctional F(config.functional, config.shape, config.plan);
  const std::size_t d = F.dimension();

  struct Probe {
    std::vector<double> x;
    double objective = -INFINITY;
    int resamples = 0;
  };
  std::vector<Probe> probes(config.probes);
  parallel_for(probes.size(), [&](std::size_t j) {
    Probe& probe = probes[j];
    for (int attempt = 0; attempt < detail::max_probe_resamples; ++attempt) {
      probe.x = detail::normal_vector(d, config.seed, (std::uint64_t{j} << 8) | static_cast<std::uint64_t>(attempt));
      probe.objective = detail::log_ratio(F, probe.x);
      if (std::isfinite(probe.objective)) break;
      ++probe.resamples;
    }
  }, 1);

  std::vector<std::size_t> order;
  int resampled = 0;
  for (std::size_t j = 0; j < probes.size(); ++j) {
    resampled += probes[j].resamples;
    if (std::isfinite(probes[j].objective)) order.push_back(j);
  }
  if (order.empty()) throw degenerate_error("every probe was degenerate for " + to_string(config.functional));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probes[a].objective > probes[b].objective; });

  std::vector<detail::AscentResult> runs(config.restarts);
  parallel_for(runs.size(), [&](std::size_t r) {
    std::vector<double> start = r < order.size() ? probes[order[r]].x
                                                 : detail::normal_vector(d, config.seed, 0xa5cefULL + (std::uint64_t{r} << 20));
    runs[r] = detail::ascend(F, std::move(start), config);
  }, 1);

  // Winner: highest objective, then lowest restart index; probes rank below
  // a restart with an equal value.
  const Probe& best_probe = probes[order.front()];
  std::vector<double> best_x = best_probe.x;
  double best = best_probe.objective;
  int winner = -1;
  int discarded = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].discarded) {
      ++discarded;
      continue;
    }
    if (runs[r].objective > best || (winner == -1 && runs[r].objective == best)) {
      best = runs[r].objective;
      best_x = runs[r].x;
      winner = static_cast<int>(r);
    }
  }

  RatioCertificate cert;
  cert.functional = config.functional;
  cert.shape = config.shape;
  cert.plan = config.plan;
  cert.witness = std::move(best_x);
  const Evaluation e = F.evaluate(cert.witness);
  cert.lhs = e.lhs;
  cert.rhs = e.rhs;
  cert.ratio = e.ratio();
  cert.config = config;
  cert.best_probe_ratio = std::exp(best_probe.objective);
  cert.winner = winner;
  cert.discarded_restarts = discarded;
  cert.resampled_probes = resampled;
  cert.hash = detail::certificate_hash(cert);
  return cert;
}

// ---------------------------------------------------------- serialization

inline json to_json(const ProblemShape& s) {
  return {{"n", s.n}, {"m", s.m}, {"p", detail::exponent_json(s.p)}, {"q", detail::exponent_json(s.q)}};
}

inline ProblemShape shape_from_json(const json& j) {
  return {detail::int_field(j, "n"), detail::int_field(j, "m"), detail::exponent_from_json(detail::field(j, "p"), "p"),
          detail::exponent_from_json(detail::field(j, "q"), "q")};
}

inline json to_json(const SearchConfig& c) {
  return {{"functional", to_string(c.functional)},
          {"shape", to_json(c.shape)},
          {"plan", to_json(c.plan)},
          {"restarts", c.restarts},
          {"iterations", c.iterations},
          {"probes", c.probes},
          {"fd_step", c.fd_step},
          {"tolerance", c.tolerance},
          {"seed", c.seed}};
}

inline SearchConfig search_config_from_json(const json& j) {
  SearchConfig c;
  c.functional = parse_functional_name(detail::field(j, "functional").get<std::string>());
  c.shape = shape_from_json(detail::field(j, "shape"));
  c.plan = plan_from_json(detail::field(j, "plan"));
  c.restarts = detail::int_field(j, "restarts");
  c.iterations = detail::int_field(j, "iterations");
  c.probes = detail::int_field(j, "probes");
  c.fd_step = detail::number(detail::field(j, "fd_step"), "fd_step");
  c.tolerance = detail::number(detail::field(j, "tolerance"), "tolerance");
  c.seed = detail::field(j, "seed").get<std::uint64_t>();
  return c;
}

inline json to_json(const RatioCertificate& c) {
  const RatioFunctional F(c.functional, c.shape, c.plan);
  return {{"certificate", to_string(c.functional)},
          {"shape", to_json(c.shape)},
          {"plan", to_json(c.plan)},
          {"witness", F.witness_json(c.witness)},
          {"lhs", c.lhs},
          {"rhs", c.rhs},
          {"ratio", c.ratio},
          {"config", to_json(c.config)},
          {"hash", c.hash},
          {"search",
           {{"best_probe_ratio", c.best_probe_ratio},
            {"winner_restart", c.winner},
            {"discarded_restarts", c.discarded_restarts},
            {"resampled_probes", c.resampled_probes}}}};
}

inline RatioCertificate certificate_from_json(const json& j) {
  RatioCertificate c;
  c.functional = parse_functional_name(detail::field(j, "certificate").get<std::string>());
  c.shape = shape_from_json(detail::field(j, "shape"));
  c.plan = plan_from_json(detail::field(j, "plan"));
  const RatioFunctional F(c.functional, c.shape, c.plan);
  c.witness = F.witness_from_json(detail::field(j, "witness"));
  c.lhs = detail::number(detail::field(j, "lhs"), "lhs");
  c.rhs = detail::number(detail::field(j, "rhs"), "rhs");
  c.ratio = detail::number(detail::field(j, "ratio"), "ratio");
  c.config = search_config_from_json(detail::field(j, "config"));
  c.hash = detail::field(j, "hash").get<std::string>();
  const json& search = detail::field(j, "search");
  c.best_probe_ratio = detail::number(detail::field(search, "best_probe_ratio"), "best_probe_ratio");
  c.winner = detail::int_field(search, "winner_restart");
  c.discarded_restarts = detail::int_field(search, "discarded_restarts");
  c.resampled_probes = detail::int_field(search, "resampled_probes");
  return c;
}

inline constexpr double certificate_tolerance = 1e-9;

/// Recomputes lhs and rhs from the stored witness; any mismatch (hash or
/// values beyond 1e-9 relative) means the certificate is corrupt.
inline InequalityReport reevaluate_certificate(const RatioCertificate& c) {
  if (detail::certificate_hash(c) != c.hash) throw certificate_error("certificate hash mismatch");
  const RatioFunctional F(c.functional, c.shape, c.plan);
  const InequalityReport report = F.report(c.witness);
  auto close = [](double a, double b) {
    return std::abs(a - b) <= certificate_tolerance * std::max({std::abs(a), std::abs(b), 1e-300});
  };
  if (!close(report.lhs, c.lhs) || !close(report.rhs, c.rhs))
    throw certificate_error("certificate values do not reproduce: lhs " + format_number(report.lhs) + " vs " +
                            format_number(c.lhs) + ", rhs " + format_number(report.rhs) + " vs " + format_number(c.rhs));
  return report;
}

// ------------------------------------------------------------- scanning

/// 2e log n.
inline double pisier_envelope(int n) { return 2.0 * std::numbers::e * std::log(static_cast<double>(n)); }

struct ScanRow {
  int n = 0;
  RatioCertificate certificate;
  double envelope = 0.0;
};

/// One search per n in [n_min, n_max]; target_dimension(n) picks m.
inline std::vector<ScanRow> scan_dimension(const SearchConfig& base, int n_min, int n_max,
                                           const std::function<int(int)>& target_dimension) {
  detail::require(n_min >= 1 && n_min <= n_max && n_max <= max_dimension, "scan range must satisfy 1 <= n_min <= n_max <= 20");
  std::vector<ScanRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    SearchConfig config = base;
    config.shape.n = n;
    config.shape.m = target_dimension(n);
    rows.push_back({n, maximize_ratio(config), pisier_envelope(n)});
  }
  return rows;
}

inline std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  out << "functional,n,m,p,q,ratio,lhs,rhs,envelope_2e_log_n\n";
  for (const auto& row : rows) {
    const auto& c = row.certificate;
    out << to_string(c.functional) << ',' << row.n << ',' << c.shape.m << ',' << format_number(c.shape.p) << ','
        << format_number(c.shape.q) << ',' << format_number(c.ratio) << ',' << format_number(c.lhs) << ','
        << format_number(c.rhs) << ',' << format_number(row.envelope) << '\n';
  }
  return out.str();
}

}  // namespace hcube
