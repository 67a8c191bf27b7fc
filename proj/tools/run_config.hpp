#pragma once

// Command-line run configuration. A RunConfig serializes to JSON and every
// report embeds it, so `hcube --config saved.json` reproduces a run.

#include <cstdint>
#include <set>
#include <string>

#include "hcube/hcube.hpp"

namespace hcube::cli {

inline constexpr int exit_pass = 0;
inline constexpr int exit_check_failure = 1;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_degenerate = 3;

struct RunConfig {
  std::string command = "verify";
  std::string functional = "pisier";
  int n = 6;
  int n_min = 1;
  int m = 2;
  std::string m_rule = "fixed";
  double p = 2.0;
  double q = 2.0;
  std::string mode = "auto";
  std::uint64_t samples = 20000;
  std::uint64_t seed = 7;
  int restarts = 16;
  int iters = 300;
  int probes = 2000;
  int trials = 5;
  std::string in;
  std::string out;
  std::string format = "json";
  bool inject_fault = false;

  void validate() const {
    static const std::set<std::string> commands = {"verify", "eval", "estimate", "scan", "bench", "transform"};
    detail::require(commands.count(command) == 1, "unknown command '" + command + "'");
    detail::require(format == "json" || format == "csv", "format must be json or csv");
    detail::require(m_rule == "fixed" || m_rule == "pow2", "m-rule must be fixed or pow2");
    parse_average_mode(mode);
    parse_functional_name(functional);
  }

  RademacherAveragePlan plan() const {
    RademacherAveragePlan plan;
    plan.mode = parse_average_mode(mode);
    plan.samples = samples;
    plan.seed = seed;
    return plan;
  }

  int target_dimension(int dimension) const { return m_rule == "pow2" ? (1 << dimension) : m; }
};

inline json to_json(const RunConfig& c) {
  return {{"command", c.command}, {"functional", c.functional}, {"n", c.n},
          {"n_min", c.n_min},     {"m", c.m},                   {"m_rule", c.m_rule},
          {"p", detail::exponent_json(c.p)},
          {"q", detail::exponent_json(c.q)},
          {"mode", c.mode},       {"samples", c.samples},       {"seed", c.seed},
          {"restarts", c.restarts}, {"iters", c.iters},         {"probes", c.probes},
          {"trials", c.trials},   {"in", c.in},                 {"out", c.out},
          {"format", c.format},   {"inject_fault", c.inject_fault}};
}

/// Fills a config from JSON; unknown keys are rejected.
inline RunConfig run_config_from_json(const json& j, RunConfig c = {}) {
  detail::require(j.is_object(), "run configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "command") c.command = value.get<std::string>();
      else if (key == "functional") c.functional = value.get<std::string>();
      else if (key == "n") c.n = value.get<int>();
      else if (key == "n_min") c.n_min = value.get<int>();
      else if (key == "m") c.m = value.get<int>();
      else if (key == "m_rule") c.m_rule = value.get<std::string>();
      else if (key == "p") c.p = detail::exponent_from_json(value, "p");
      else if (key == "q") c.q = detail::exponent_from_json(value, "q");
      else if (key == "mode") c.mode = value.get<std::string>();
      else if (key == "samples") c.samples = value.get<std::uint64_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "restarts") c.restarts = value.get<int>();
      else if (key == "iters") c.iters = value.get<int>();
      else if (key == "probes") c.probes = value.get<int>();
      else if (key == "trials") c.trials = value.get<int>();
      else if (key == "in") c.in = value.get<std::string>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "format") c.format = value.get<std::string>();
      else if (key == "inject_fault") c.inject_fault = value.get<bool>();
      else throw input_error("unknown configuration key '" + key + "'");
    } catch (const json::type_error& e) {
      throw input_error("configuration key '" + key + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

}  // namespace hcube::cli
