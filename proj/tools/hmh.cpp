#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "hmh/harness.hpp"
#include "hmh/oracles.hpp"

namespace {

hmh::RunConfig base_config(const std::string& path) {
  return path.empty() ? hmh::load_default_config() : hmh::load_config_file(path);
}

void print_summary(const hmh::SuiteResult& result) {
  std::size_t passed = 0;
  for (const auto& c : result.checks) {
    const auto& r = c.report;
    passed += r.passed;
    std::printf("[%s] %-34s rel_err=%-12.3e %9.1f ms\n", r.passed ? "PASS" : "FAIL",
                r.identity_name.c_str(), r.rel_err, c.wall_ms);
    if (auto it = r.params.find("error"); it != r.params.end())
      std::printf("       error: %s\n", std::get<std::string>(it->second).c_str());
  }
  std::printf("suite %s: %s (%zu/%zu passed)\n", result.suite.c_str(),
              result.passed ? "PASS" : "FAIL", passed, result.checks.size());
}

void report_drift(const hmh::SuiteResult& result) {
  for (const auto& c : result.checks) {
    const auto& r = c.report;
    if (r.passed) continue;
    if (r.identity_name.rfind("golden", 0) == 0)
      std::fprintf(stderr, "ERROR: pinned constant check failed: %s (lhs %.17g, rhs %.17g)\n",
                   r.identity_name.c_str(), r.lhs.real(), r.rhs.real());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic analysis identity checks on the Heisenberg motion group"};
  app.require_subcommand(1);

  std::string config_path;

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite_name;
  std::optional<std::uint64_t> seed;
  std::vector<double> lambda;
  std::optional<int> trunc;
  std::string json_out;
  bool timings = false;
  verify->add_option("suite", suite_name,
                     "orthonormality|heat|bergman|gutzmer|poisson|plancherel|paley_wiener|all")
      ->required();
  verify->add_option("--config", config_path, "JSON config file (default: $HMH_CONFIG)");
  verify->add_option("--seed", seed, "Seed for random test functions");
  verify->add_option("--json", json_out, "Write the report JSON here");
  verify->add_option("--lambda", lambda, "Lambda interval a b")->expected(2);
  verify->add_option("--trunc", trunc, "Truncation degree M_trunc");
  verify->add_flag("--timings", timings, "Record wall_ms in the JSON report");

  auto* pin = app.add_subcommand("pin-constants", "Measure constants with the oracles and write the golden file");
  std::string pin_out;
  pin->add_option("--config", config_path, "JSON config file (default: $HMH_CONFIG)");
  pin->add_option("--out", pin_out, "Output path (default: the configured golden file)");

  auto* dump = app.add_subcommand("dump", "Write function values on a grid as CSV");
  hmh::DumpOptions dopt;
  std::string dump_out;
  dump->add_option("object", dopt.object, "special_hermite|heat_kernel|test_function")->required();
  dump->add_option("--config", config_path, "JSON config file (default: $HMH_CONFIG)");
  dump->add_option("--out", dump_out, "CSV path (default: stdout)");
  dump->add_option("--grid", dopt.grid, "Points per axis");
  dump->add_option("--extent", dopt.extent, "Half-width of the square grid");
  dump->add_option("--lambda", dopt.lambda, "Lambda value");
  dump->add_option("--alpha", dopt.alpha, "First index (special_hermite)");
  dump->add_option("--beta", dopt.beta, "Second index (special_hermite)");
  dump->add_option("--t", dopt.t, "Heat time (heat_kernel)");
  dump->add_option("--seed", seed, "Seed (test_function)");

  CLI11_PARSE(app, argc, argv);

  try {
    hmh::RunConfig config = base_config(config_path);
    if (seed) config.seed = *seed;

    if (*verify) {
      if (lambda.size() == 2) config.lambda_interval = {lambda[0], lambda[1]};
      if (trunc) config.M_trunc = *trunc;
      config.validate();
      const auto suite = hmh::parse_suite(suite_name);
      const auto result = hmh::run_suite(config, suite);
      print_summary(result);
      report_drift(result);
      if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) throw std::runtime_error("cannot write " + json_out);
        out << result.to_json(timings).dump(2) << "\n";
      }
      return result.passed ? 0 : 1;
    }

    if (*pin) {
      const std::string path = pin_out.empty() ? config.resolved_golden_path() : pin_out;
      const auto constants = hmh::oracle::measure_constants();
      for (const auto& [name, value] : constants) std::printf("%-42s %.17g\n", name.c_str(), value);
      hmh::write_golden(path, constants);
      std::printf("wrote %s\n", path.c_str());
      return 0;
    }

    if (*dump) {
      config.validate();
      if (dump_out.empty()) {
        hmh::dump_csv(config, dopt, std::cout);
      } else {
        std::ofstream out(dump_out);
        if (!out) throw std::runtime_error("cannot write " + dump_out);
        hmh::dump_csv(config, dopt, out);
      }
      return 0;
    }
  } catch (const hmh::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
