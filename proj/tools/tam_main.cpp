#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tam/errors.hpp"
#include "tam/scenarios.hpp"

namespace {

// exit codes: 0 all checks pass, 1 check failure, 2 config error,
// 3 numeric error
constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

struct CliOptions {
  tam::RunConfig config;
  std::vector<std::string> tolerance_args;
  std::string signature_arg;
};

int run_command(CliOptions& opts) {
  for (const auto& entry : opts.tolerance_args) {
    auto eq = entry.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --tol expects <check>=<value>, got '" << entry
                << "'\n";
      return kConfigError;
    }
    try {
      opts.config.tolerances[entry.substr(0, eq)] =
          std::stod(entry.substr(eq + 1));
    } catch (const std::exception&) {
      std::cerr << "error: bad tolerance value in '" << entry << "'\n";
      return kConfigError;
    }
  }
  if (!opts.signature_arg.empty()) {
    auto comma = opts.signature_arg.find(',');
    if (comma == std::string::npos) {
      std::cerr << "error: --signature expects p,q\n";
      return kConfigError;
    }
    try {
      opts.config.signature = {std::stoi(opts.signature_arg.substr(0, comma)),
                               std::stoi(opts.signature_arg.substr(comma + 1))};
    } catch (const std::exception&) {
      std::cerr << "error: bad signature '" << opts.signature_arg << "'\n";
      return kConfigError;
    }
    if (opts.config.signature.first < 0 || opts.config.signature.second < 0 ||
        opts.config.signature.first + opts.config.signature.second < 1) {
      std::cerr << "error: signature must have p+q >= 1\n";
      return kConfigError;
    }
  }

  tam::RunResult result;
  try {
    result = tam::run_scenario(opts.config);
  } catch (const tam::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << tam::list_scenarios();
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumericError;
  }

  std::string text = tam::report_text(opts.config, result);
  if (opts.config.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opts.config.output_path);
    if (!out) {
      std::cerr << "error: cannot write '" << opts.config.output_path << "'\n";
      return kConfigError;
    }
    out << text;
    for (const auto& check : result.checks) {
      std::cout << (check.pass ? "pass" : "FAIL") << "  " << check.check
                << "  max_residual=" << check.max_residual
                << "  tolerance=" << check.tolerance << "\n";
    }
  }
  return result.pass() ? kOk : kCheckFailure;
}

void add_common(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--scenario", opts.config.scenario,
                  "scenario name (see list-scenarios)");
  cmd->add_option("--seed", opts.config.seed, "random seed");
  cmd->add_option("--tol", opts.tolerance_args,
                  "per-check tolerance override, <check>=<value>");
  cmd->add_option("--out", opts.config.output_path, "report file path");
  cmd->add_option("--grid", opts.config.grid, "sampling grid size")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical transport calculus in fibre bundles"};
  app.require_subcommand(1);

  CliOptions opts;

  CLI::App* check = app.add_subcommand("check", "transport law checks");
  add_common(check, opts);
  CLI::App* factorize =
      app.add_subcommand("factorize", "product-domain factorizations");
  add_common(factorize, opts);
  CLI::App* demo = app.add_subcommand("demo", "worked geometry scenarios");
  add_common(demo, opts);
  demo->add_option("--colatitude", opts.config.colatitude,
                   "latitude circle colatitude in radians");
  CLI::App* derive = app.add_subcommand("derive", "derivation checks");
  add_common(derive, opts);
  CLI::App* curv = app.add_subcommand("curvature", "curvature and torsion");
  add_common(curv, opts);
  CLI::App* metric =
      app.add_subcommand("metric-roundtrip", "metric correspondence checks");
  add_common(metric, opts);
  metric->add_option("--signature", opts.signature_arg,
                     "metric signature as p,q");
  metric->add_option("--metric-file", opts.config.metric_file,
                     "JSON file with a constant metric matrix to round trip");
  CLI::App* list =
      app.add_subcommand("list-scenarios", "print the scenario table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (list->parsed()) {
    std::cout << tam::list_scenarios();
    return kOk;
  }
  for (CLI::App* cmd : {check, factorize, demo, derive, curv, metric}) {
    if (cmd->parsed()) {
      opts.config.command = cmd->get_name();
      return run_command(opts);
    }
  }
  return kConfigError;
}
