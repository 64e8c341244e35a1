#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "entmeas/errors.hpp"
#include "state_io.hpp"

int main(int argc, char** argv) {
  using entmeas::cli::GlobalOpts;
  GlobalOpts g;

  CLI::App app{"entmeas: distance-based entanglement measures for small quantum systems"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "base seed for all stochastic operations")
      ->capture_default_str();
  app.add_option("--tol", g.tol, "solver gap tolerance")->capture_default_str();
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_option("--out", g.out, "write the report to this file instead of stdout");
  app.add_flag("--bits", g.bits, "report entropic quantities in bits instead of nats");

  std::string measures_path;
  CLI::App* measures = app.add_subcommand("measures", "entropies, mutual information, fidelity");
  measures->add_option("state", measures_path, "state file (JSON)")->required();

  std::string ree_path;
  std::string distance = "relent";
  CLI::App* ree_cmd =
      app.add_subcommand("ree", "distance from the separable set (the entanglement value)");
  ree_cmd->add_option("state", ree_path, "state file (JSON)")->required();
  ree_cmd->add_option("--distance", distance, "relent or bures")
      ->check(CLI::IsMember({"relent", "bures"}))
      ->capture_default_str();

  std::size_t steps = 16;
  CLI::App* sweep =
      app.add_subcommand("bell-sweep", "closed form vs solver across Bell-diagonal states");
  sweep->add_option("--steps", steps, "number of lambda_1 grid points")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}))
      ->capture_default_str();

  std::string suite = "all";
  std::size_t trials = 20;
  CLI::App* check = app.add_subcommand("check", "statistical invariant suites");
  check->add_option("--suite", suite, "which suite to run")
      ->check(CLI::IsMember({"axioms", "monotonicity", "pure-conjecture", "all"}))
      ->capture_default_str();
  check->add_option("--trials", trials, "trials per statistical suite")->capture_default_str();

  std::string split_path;
  CLI::App* split = app.add_subcommand(
      "split", "quantum/classical correlation split of a bipartite state");
  split->add_option("state", split_path, "state file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage problems share the parse-error exit code
  }

  try {
    if (measures->parsed()) return entmeas::cli::cmd_measures(measures_path, g);
    if (ree_cmd->parsed()) return entmeas::cli::cmd_ree(ree_path, distance, g);
    if (sweep->parsed()) return entmeas::cli::cmd_bell_sweep(steps, g);
    if (check->parsed()) return entmeas::cli::cmd_check(suite, trials, g);
    if (split->parsed()) return entmeas::cli::cmd_split(split_path, g);
  } catch (const entmeas::cli::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const entmeas::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
