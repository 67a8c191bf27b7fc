// hcube: verification suites, inequality evaluation, constant searches,
// dimension scans, transform benchmarks and Walsh transforms of JSON files.
//
// Exit codes: 0 pass, 1 check failure, 2 input error, 3 degenerate result.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hcube/hcube.hpp"
#include "run_config.hpp"

namespace {

using namespace hcube;
using hcube::cli::RunConfig;

double parse_exponent(const std::string& text, const char* name) {
  if (text == "inf" || text == "infinity") return infinity;
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) return value;
  } catch (...) {
  }
  throw input_error(std::string("--") + name + " expects a number or 'inf', got '" + text + "'");
}

void emit(const RunConfig& config, const std::string& text, bool csv_rows = false, const std::string& header = "") {
  if (config.out.empty()) {
    std::cout << header << text;
    return;
  }
  // CSV batch runs append rows to an existing file.
  const bool append = csv_rows && std::filesystem::exists(config.out);
  write_text_file(config.out, append ? text : header + text, append);
}

json with_config(json body, const RunConfig& config) {
  body["config"] = cli::to_json(config);
  return body;
}

int run_verify(const RunConfig& config) {
  VerifyConfig vc;
  vc.n = config.n;
  vc.m = config.m;
  vc.seed = config.seed;
  vc.trials = config.trials;
  vc.inject_fault = config.inject_fault;
  const VerifyReport report = run_identity_suite(vc);
  if (config.format == "csv") {
    std::string rows;
    for (const auto& c : report.checks)
      rows += c.name + ',' + format_number(c.max_deviation) + ',' + format_number(c.tolerance) + ',' +
              (c.skipped ? "skipped" : c.passed ? "pass" : "fail") + '\n';
    emit(config, rows, false, "check,max_deviation,tolerance,status\n");
  } else {
    emit(config, with_config(to_json(report), config).dump(2) + '\n');
  }
  if (const CheckResult* failed = report.first_failure()) {
    std::cerr << "check failed: " << failed->name << " (max deviation " << format_number(failed->max_deviation)
              << " > " << format_number(failed->tolerance) << ")\n";
    return cli::exit_check_failure;
  }
  return cli::exit_pass;
}

InequalityReport evaluate_input(const RunConfig& config, const json& input) {
  const FunctionalName name = parse_functional_name(config.functional);
  const RademacherAveragePlan plan = config.plan();
  const double p = config.p;
  auto norm_for = [&](int m) { return NormSpace(m, config.q); };
  auto martingale = [&]() {
    if (input.contains("filtration")) return martingale_from_json(input);
    return make_dyadic_martingale(function_from_json(input));
  };

  switch (name) {
    case FunctionalName::pisier: {
      const auto f = function_from_json(input);
      return pisier_report(f, p, norm_for(f.m()), plan);
    }
    case FunctionalName::k_convexity: {
      const auto f = function_from_json(input);
      return k_convexity_report(f, p, norm_for(f.m()));
    }
    case FunctionalName::theorem1: {
      const auto family = family_from_json(input);
      return theorem1_report(family, p, norm_for(family.m()), plan);
    }
    case FunctionalName::corollary2: {
      const auto family = family_from_json(input);
      return corollary2_report(family, p, norm_for(family.m()), plan);
    }
    case FunctionalName::stein: {
      const auto family = family_from_json(input);
      return stein_report(family, p, norm_for(family.m()), plan);
    }
    case FunctionalName::hn_remark: {
      const auto components =
          input.contains("product_values") ? hn_extract_all(product_from_json(input)) : family_from_json(input);
      return hn_remark_report(components, p, norm_for(components.m()), plan);
    }
    case FunctionalName::rademacher_type: {
      const auto vectors = vectors_from_json(input);
      return rademacher_type_report(vectors, p, norm_for(static_cast<int>(vectors.front().size())));
    }
    case FunctionalName::umd: {
      const auto M = martingale();
      return umd_max_report(M, p, norm_for(M.m())).report;
    }
    case FunctionalName::umd_plus: {
      const auto M = martingale();
      return umd_plus_report(M, p, norm_for(M.m()), plan);
    }
    case FunctionalName::umd_minus: {
      const auto M = martingale();
      return umd_minus_report(M, p, norm_for(M.m()), plan);
    }
    case FunctionalName::martingale_type: {
      const auto M = martingale();
      return martingale_type_report(M, p, norm_for(M.m()));
    }
  }
  throw input_error("unhandled functional");
}

int run_eval(const RunConfig& config) {
  detail::require(!config.in.empty(), "eval needs --in PATH");
  const json input = read_json_file(config.in);
  const InequalityReport report = input.contains("certificate")
                                      ? reevaluate_certificate(certificate_from_json(input))
                                      : evaluate_input(config, input);
  if (config.format == "csv") {
    emit(config, report_csv_row(report), true, report_csv_header);
  } else {
    emit(config, with_config({{"report", to_json(report)}}, config).dump(2) + '\n');
  }
  return report.degenerate ? cli::exit_degenerate : cli::exit_pass;
}

SearchConfig search_config(const RunConfig& config) {
  SearchConfig sc;
  sc.functional = parse_functional_name(config.functional);
  sc.shape = {config.n, config.m, config.p, config.q};
  sc.plan = config.plan();
  sc.restarts = config.restarts;
  sc.iterations = config.iters;
  sc.probes = config.probes;
  sc.seed = config.seed;
  return sc;
}

int run_estimate(const RunConfig& config) {
  SearchConfig sc = search_config(config);
  sc.shape.m = config.target_dimension(config.n);
  const RatioCertificate cert = maximize_ratio(sc);
  if (config.format == "csv") {
    emit(config, report_csv_row(reevaluate_certificate(cert)), true, report_csv_header);
  } else {
    emit(config, to_json(cert).dump(2) + '\n');
  }
  return cli::exit_pass;
}

int run_scan(const RunConfig& config) {
  const auto rows =
      scan_dimension(search_config(config), config.n_min, config.n, [&](int n) { return config.target_dimension(n); });
  if (config.format == "csv") {
    emit(config, scan_csv(rows));
  } else {
    json certificates = json::array();
    for (const auto& row : rows)
      certificates.push_back({{"n", row.n}, {"envelope", row.envelope}, {"certificate", to_json(row.certificate)}});
    emit(config, with_config({{"scan", certificates}}, config).dump(2) + '\n');
  }
  return cli::exit_pass;
}

int run_bench_command(const RunConfig& config) {
  BenchConfig bc;
  bc.n_min = config.n_min;
  bc.n_max = config.n;
  bc.m = config.m;
  bc.seed = config.seed;
  bc.samples = std::min<std::uint64_t>(config.samples, 2000);
  const auto rows = run_bench(bc);
  if (config.format == "csv") {
    emit(config, bench_csv(rows));
  } else {
    emit(config, with_config({{"bench", to_json(rows)}}, config).dump(2) + '\n');
  }
  if (!bench_agrees(rows)) {
    std::cerr << "check failed: fast and naive transforms disagree\n";
    return cli::exit_check_failure;
  }
  return cli::exit_pass;
}

int run_transform(const RunConfig& config) {
  detail::require(!config.in.empty(), "transform needs --in PATH");
  const json input = read_json_file(config.in);
  const json output = input.contains("coefficients") ? to_json(walsh_inverse(spectrum_from_json(input)))
                                                     : to_json(walsh_forward(function_from_json(input)));
  emit(config, output.dump(2) + '\n');
  return cli::exit_pass;
}

int dispatch(const RunConfig& config) {
  if (config.command == "verify") return run_verify(config);
  if (config.command == "eval") return run_eval(config);
  if (config.command == "estimate") return run_estimate(config);
  if (config.command == "scan") return run_scan(config);
  if (config.command == "bench") return run_bench_command(config);
  return run_transform(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vector-valued Fourier analysis on the discrete hypercube"};
  RunConfig flags;
  std::string p_text = "2";
  std::string q_text = "2";
  std::string config_path;

  std::map<std::string, CLI::Option*> opts;
  opts["command"] = app.add_option("--command", flags.command, "verify | eval | estimate | scan | bench | transform");
  opts["functional"] = app.add_option("--functional", flags.functional,
                                      "pisier | theorem1 | corollary2 | stein | hn-remark | k-convexity | "
                                      "rademacher-type | umd | umd-plus | umd-minus | martingale-type");
  opts["n"] = app.add_option("--n", flags.n, "cube dimension (upper end of the range for scan and bench)");
  opts["n_min"] = app.add_option("--n-min", flags.n_min, "lower end of the range for scan and bench");
  opts["m"] = app.add_option("--m", flags.m, "target dimension");
  opts["m_rule"] = app.add_option("--m-rule", flags.m_rule, "fixed | pow2 (m = 2^n)");
  opts["p"] = app.add_option("--p", p_text, "L_p exponent (or type exponent s, or r)");
  opts["q"] = app.add_option("--q", q_text, "target norm index q, 'inf' allowed");
  opts["mode"] = app.add_option("--mode", flags.mode, "exact | mc | auto");
  opts["samples"] = app.add_option("--samples", flags.samples, "Monte Carlo sample count");
  opts["seed"] = app.add_option("--seed", flags.seed, "random seed");
  opts["restarts"] = app.add_option("--restarts", flags.restarts, "ascent restarts");
  opts["iters"] = app.add_option("--iters", flags.iters, "iterations per restart");
  opts["probes"] = app.add_option("--probes", flags.probes, "random probes");
  opts["trials"] = app.add_option("--trials", flags.trials, "random inputs per verify check");
  opts["in"] = app.add_option("--in", flags.in, "input JSON path");
  opts["out"] = app.add_option("--out", flags.out, "output path (stdout when omitted)");
  opts["format"] = app.add_option("--format", flags.format, "json | csv");
  opts["inject_fault"] = app.add_flag("--inject-fault", flags.inject_fault, "corrupt an operator (verify self-test)");
  app.add_option("--config", config_path, "load a serialized run configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::exit_pass : cli::exit_input_error;
  }

  try {
    flags.p = parse_exponent(p_text, "p");
    flags.q = parse_exponent(q_text, "q");
    RunConfig config = flags;
    if (!config_path.empty()) {
      config = cli::run_config_from_json(read_json_file(config_path));
      // Explicit flags override the loaded file.
      const json explicit_flags = cli::to_json(flags);
      for (const auto& [key, option] : opts)
        if (option->count() > 0) config = cli::run_config_from_json(json{{key, explicit_flags[key]}}, config);
    }
    config.validate();
    return dispatch(config);
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return cli::exit_input_error;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return cli::exit_input_error;
  } catch (const degenerate_error& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return cli::exit_degenerate;
  } catch (const certificate_error& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return cli::exit_check_failure;
  }
}
