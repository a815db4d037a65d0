#include "stoprule/cli.hpp"
#include "stoprule/types.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

/// Splits "key=value" param flags; anything without '=' is rejected here so
/// the library only ever sees well-formed pairs.
std::vector<std::pair<std::string, std::string>> split_params(
    const std::vector<std::string>& raw) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(raw.size());
  for (const auto& item : raw) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw stoprule::ValidationError("--param expects key=value, got '" + item + "'");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

struct SubArgs {
  std::string variant;
  long long n = 0;
  std::vector<long long> n_list;
  std::vector<std::string> params;
  long long trials = 0;
  unsigned long long seed = 20260814ULL;
  std::string format = "text";
  std::string out;
};

void add_common_output(CLI::App* cmd, SubArgs& args) {
  cmd->add_option("--format", args.format, "Output format: text, json, csv")
      ->default_val("text");
  cmd->add_option("--out", args.out, "Write the report to this file instead of stdout");
}

void add_variant_options(CLI::App* cmd, SubArgs& args, bool required = true) {
  auto* opt = cmd->add_option("--variant", args.variant, "Variant name from the catalog");
  if (required) opt->required();
  cmd->add_option("--param", args.params,
                  "Variant or command parameter as key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stoprule: threshold stopping rules, their limits, and cross-checks"};
  app.require_subcommand(1);

  SubArgs solve_args, asym_args, verify_args, sweep_args, oracle_args, conj_args, two_args;

  auto* solve = app.add_subcommand("solve", "Optimal threshold and payoff at a given n");
  add_variant_options(solve, solve_args);
  solve->add_option("--n", solve_args.n, "Horizon")->required();
  add_common_output(solve, solve_args);

  auto* asym = app.add_subcommand("asymptotic", "Limiting threshold fraction and payoff");
  add_variant_options(asym, asym_args);
  add_common_output(asym, asym_args);

  auto* verify = app.add_subcommand(
      "verify", "Limit-hypothesis and convergence diagnostics over a list of n");
  add_variant_options(verify, verify_args);
  verify->add_option("--n", verify_args.n, "Single horizon");
  verify->add_option("--n-list", verify_args.n_list, "Horizons (repeatable or comma separated)")
      ->delimiter(',');
  add_common_output(verify, verify_args);

  auto* sweep = app.add_subcommand("sweep", "(n, kappa/n, payoff) across a list of n");
  add_variant_options(sweep, sweep_args);
  sweep->add_option("--n", sweep_args.n, "Single horizon");
  sweep->add_option("--n-list", sweep_args.n_list, "Horizons (repeatable or comma separated)")
      ->delimiter(',');
  add_common_output(sweep, sweep_args);

  auto* oracle = app.add_subcommand(
      "oracle", "Cross-check the recurrence against enumeration or simulation");
  add_variant_options(oracle, oracle_args);
  oracle->add_option("--n", oracle_args.n, "Horizon")->required();
  oracle->add_option("--trials", oracle_args.trials, "Monte Carlo trials (>= 10000; 0 = skip)");
  oracle->add_option("--seed", oracle_args.seed, "Monte Carlo seed");
  add_common_output(oracle, oracle_args);

  auto* conj = app.add_subcommand(
      "conjecture", "Gap experiment for a synthetic recurrence family");
  conj->add_option("--variant", conj_args.variant, "Example name: exmu or ei-example")
      ->required();
  conj->add_option("--param", conj_args.params, "Example parameter, e.g. mu=3 (repeatable)");
  conj->add_option("--n", conj_args.n, "Single horizon");
  conj->add_option("--n-list", conj_args.n_list, "Horizons (repeatable or comma separated)")
      ->delimiter(',');
  add_common_output(conj, conj_args);

  auto* two = app.add_subcommand("two-threshold",
                                 "Two-cutoff rule for hiring one of the best two");
  two->add_option("--n", two_args.n, "Horizon")->required();
  add_common_output(two, two_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  stoprule::cli::RunRequest req;
  SubArgs* args = nullptr;
  if (solve->parsed()) { req.command = stoprule::cli::Command::solve; args = &solve_args; }
  else if (asym->parsed()) { req.command = stoprule::cli::Command::asymptotic; args = &asym_args; }
  else if (verify->parsed()) { req.command = stoprule::cli::Command::verify; args = &verify_args; }
  else if (sweep->parsed()) { req.command = stoprule::cli::Command::sweep; args = &sweep_args; }
  else if (oracle->parsed()) { req.command = stoprule::cli::Command::oracle; args = &oracle_args; }
  else if (conj->parsed()) { req.command = stoprule::cli::Command::conjecture; args = &conj_args; }
  else { req.command = stoprule::cli::Command::two_threshold; args = &two_args; }

  try {
    req.variant = args->variant;
    req.n = static_cast<stoprule::Index>(args->n);
    for (long long n : args->n_list) req.n_list.push_back(static_cast<stoprule::Index>(n));
    req.params = split_params(args->params);
    req.trials = static_cast<long>(args->trials);
    req.seed = static_cast<std::uint64_t>(args->seed);
    req.format = stoprule::cli::format_from_name(args->format);
    req.out = args->out;
  } catch (const stoprule::ValidationError& e) {
    std::cerr << "error: validation: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: validation: " << e.what() << '\n';
    return 1;
  }

  return stoprule::cli::run(req, std::cout, std::cerr);
}
