#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "owshift/canonical.hpp"
#include "owshift/commands.hpp"

namespace {

void add_common(CLI::App* sub, ows::RunConfig& cfg) {
  auto& a = cfg.analysis;
  sub->add_option("--horizon", a.horizon, "largest n used in the n-th root traces")->check(CLI::Range(8, 1 << 22));
  sub->add_option("--k-max", a.k_max, "largest window start k scanned")->check(CLI::NonNegativeNumber);
  sub->add_option("--samples", a.samples, "random candidate vectors for the R2/R3 bounds")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", a.seed, "seed for the candidate vectors");
  sub->add_option("--chain-tol", a.chain_tol, "relative slack for the inequality chains")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--refute-tol", a.refute_tol, "relative gap that refutes a condition identity")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", cfg.out, "write the document here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical analysis of operator weighted shifts"};
  app.set_version_flag("--version", std::string(ows::kToolVersion));
  app.require_subcommand(1);

  ows::RunConfig cfg;
  std::string spec_file, literal, which, example;

  auto* report = app.add_subcommand("report", "eight radii, chains and spectrum descriptor");
  report->add_option("spec", spec_file, "weight specification file")->required();
  add_common(report, cfg);

  auto* local = app.add_subcommand("local", "local spectral radius and lower-bound disc of a vector");
  local->add_option("spec", spec_file, "weight specification file")->required();
  local->add_option("vector", literal, "vector literal, e.g. \"[0: e0, 1: e1]\"")->required();
  local->add_option("--grid", cfg.grid, "radial points of the resolvent divergence map")->check(CLI::Range(0, 64));
  add_common(local, cfg);

  auto* check = app.add_subcommand("check", "necessary identities for Dunford (C) or Bishop (beta)");
  check->add_option("which", which, "dunford or bishop")->required()->check(CLI::IsMember({"dunford", "bishop"}));
  check->add_option("spec", spec_file, "weight specification file")->required();
  check->add_option("vector", literal, "vector literal")->required();
  add_common(check, cfg);

  auto* examples = app.add_subcommand("examples", "bundled reproductions with PASS/FAIL lines");
  examples->add_option("name", example, "geometric, diagonal or kim")
      ->required()
      ->check(CLI::IsMember(ows::canonical_names()));
  examples->add_option("--write-spec", cfg.write_spec, "also save the canonical spec file here");
  add_common(examples, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ows::exit_code::parse_error;
  }

  std::function<ows::CommandResult()> command;
  if (*report)
    command = [&] { return ows::cmd_report(spec_file, cfg); };
  else if (*local)
    command = [&] { return ows::cmd_local(spec_file, literal, cfg); };
  else if (*check)
    command = [&] { return ows::cmd_check(spec_file, which, literal, cfg); };
  else
    command = [&] { return ows::cmd_examples(example, cfg); };
  return ows::run_command(command, cfg, std::cout, std::cerr);
}
