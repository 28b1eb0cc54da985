#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symqt/model_io.hpp"
#include "symqt/operators.hpp"
#include "symqt/spectrum.hpp"

namespace symqt::cli {

enum ExitCode { kOk = 0, kFailure = 1, kValidation = 2, kResidual = 3, kHypothesis = 4 };

// Runs fn, mapping library errors to exit codes and printing them to err.
int guarded(const std::function<int()>& fn, std::ostream& err);

std::string bundled_model_path();

// Irreducible copy chosen by the document's state_space selector and its standard coherent family.
struct StateSpace {
  InvariantSubspace M;
  CoherentFamily family;
};
StateSpace state_space(const ModelDocument& doc);

nlohmann::ordered_json analyze_report(const ModelDocument& doc);

struct SpectrumOptions {
  int probes = 5;
  std::uint64_t seed = 0;
  PrespectrumSearch search = PrespectrumSearch::OrbitUnions;
};
nlohmann::ordered_json spectrum_report(const ModelDocument& doc, const std::string& parameter, const SpectrumOptions& opt);

// q_spec "label=value,label=value"; empty means the model encoding. space "M" or "L2".
nlohmann::ordered_json operator_report(const ModelDocument& doc, const std::string& parameter, const std::string& q_spec,
                                       const std::string& space);

nlohmann::ordered_json transition_report(const ModelDocument& doc, const std::string& param_a, const std::string& value_a,
                                         const std::string& param_b);

// Interactive triangle session; returns when input ends or on quit.
int triangle_repl(std::istream& in, std::ostream& out, bool sealed_top, std::uint64_t seed,
                  const std::optional<std::string>& replay_path = std::nullopt);

// Parses "start:stop:step" into the angles start, start + step, ... <= stop.
std::vector<double> parse_sweep(const std::string& spec);
std::vector<double> parse_angles(const std::string& spec);
void epr_csv(const std::vector<double>& angles, long long samples, std::uint64_t seed, std::ostream& out);

int cmd_analyze(const std::string& path, std::ostream& out);
int cmd_spectrum(const std::string& path, const std::string& parameter, const SpectrumOptions& opt, std::ostream& out);
int cmd_operator(const std::string& path, const std::string& parameter, const std::string& q_spec,
                 const std::string& space, std::ostream& out);
int cmd_transition(const std::string& path, const std::string& param_a, const std::string& value_a,
                   const std::string& param_b, std::ostream& out);

}  // namespace symqt::cli
