#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "symqt/error.hpp"

using namespace symqt;
using namespace symqt::cli;

int main(int argc, char** argv) {
  CLI::App app{"symqt: symmetry analysis of finite group models"};
  app.require_subcommand(1);

  std::string model;
  auto* analyze = app.add_subcommand("analyze", "permissibility, maximal subgroups and frames per parameter");
  analyze->add_option("model", model, "model JSON (default: bundled triangle)");

  std::string parameter;
  SpectrumOptions sopt;
  bool all_subsets = false;
  auto* spectrum = app.add_subcommand("spectrum", "operator spectrum against the variance prespectrum");
  spectrum->add_option("parameter", parameter)->required();
  spectrum->add_option("model", model);
  spectrum->add_option("--probes", sopt.probes, "random eta functions to try");
  spectrum->add_option("--seed", sopt.seed);
  spectrum->add_flag("--all-subsets", all_subsets, "search every subset, not only orbit unions");

  std::string q_spec, space = "M";
  auto* op = app.add_subcommand("operator", "the operator of a parameter");
  op->add_option("parameter", parameter)->required();
  op->add_option("model", model);
  op->add_option("--q", q_spec, "label=value,... (default: model encoding)");
  op->add_option("--space", space, "M or L2")->check(CLI::IsMember({"M", "L2"}));

  std::string from, value, to;
  auto* tr = app.add_subcommand("transition", "outcome table of one parameter after another is fixed");
  tr->add_option("--from", from)->required();
  tr->add_option("--value", value)->required();
  tr->add_option("--to", to)->required();
  tr->add_option("model", model);

  bool sealed = false;
  std::uint64_t tseed = 2024;
  std::string replay;
  auto* tri = app.add_subcommand("triangle", "interactive triangle with four windows");
  tri->add_flag("--sealed-top", sealed);
  tri->add_option("--seed", tseed);
  tri->add_option("--replay", replay, "JSON lines transcript to start from");

  std::string angles, sweep;
  long long samples = 100000;
  std::uint64_t eseed = 0;
  auto* epr = app.add_subcommand("epr", "EPR correlation, exact and simulated, as CSV");
  auto* ang = epr->add_option("--angles", angles, "comma separated angles");
  auto* swp = epr->add_option("--sweep", sweep, "start:stop:step");
  ang->excludes(swp);
  epr->add_option("--samples", samples);
  epr->add_option("--seed", eseed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kValidation;
  }

  return guarded(
      [&]() -> int {
        if (*analyze) return cmd_analyze(model, std::cout);
        if (*spectrum) {
          if (all_subsets) sopt.search = PrespectrumSearch::AllSubsets;
          return cmd_spectrum(model, parameter, sopt, std::cout);
        }
        if (*op) return cmd_operator(model, parameter, q_spec, space, std::cout);
        if (*tr) return cmd_transition(model, from, value, to, std::cout);
        if (*tri)
          return triangle_repl(std::cin, std::cout, sealed, tseed,
                               replay.empty() ? std::nullopt : std::optional<std::string>(replay));
        if (angles.empty() && sweep.empty()) throw ValidationError("epr needs --angles or --sweep");
        epr_csv(angles.empty() ? parse_sweep(sweep) : parse_angles(angles), samples, eseed, std::cout);
        return kOk;
      },
      std::cerr);
}
