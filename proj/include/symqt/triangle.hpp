#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "symqt/measurement.hpp"
#include "symqt/model_io.hpp"
#include "symqt/operators.hpp"
#include "symqt/repr.hpp"

namespace symqt {

enum class Window { A, B, C, Top };
Window parse_window(const std::string& s);
std::string to_string(Window w);

// Equilateral triangle with letters A, B, C at its corners and a white and a black side,
// hidden in a sphere with three equatorial windows and one on top.
struct TriangleModel {
  ModelDocument doc;
  InvariantSubspace M;  // first 2-dim irreducible copy of the regular representation
  std::vector<Observable> observables;  // theta0, theta_a, theta_b, theta_c on functions over the 6 points
  bool sealed_top = false;
  std::vector<int> support;             // the state is uniform over these points
  std::optional<Window> last;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  std::vector<nlohmann::ordered_json> history;

  const GroupAction& action() const { return *doc.action; }
  const ParametricFunction& parameter(Window w) const;
  const Observable& observable(Window w) const;
  DensityOperator state() const;
};

// Bundled model document for the triangle.
ModelDocument triangle_document();

TriangleModel triangle_new(bool sealed_top = false, std::uint64_t seed = 2024);

struct TriangleObservation {
  Window window = Window::A;
  std::string value;
  std::vector<std::pair<std::string, double>> probabilities;
  std::vector<int> support_after;
};

// Opens a window. Throws HypothesisError for the top window of a sealed model.
std::pair<TriangleObservation, TriangleModel> triangle_open_window(const TriangleModel& model, Window window,
                                                                   std::uint64_t seed);
// Same, drawing with the model's own seed and step counter.
std::pair<TriangleObservation, TriangleModel> triangle_open_window(const TriangleModel& model, Window window);

// Replays a JSON-lines transcript from a fresh model.
TriangleModel triangle_replay(const std::vector<nlohmann::ordered_json>& records, bool sealed_top, std::uint64_t seed);

struct TriangleVerification {
  bool ok = true;
  bool color_permissible = false;
  Subgroup rotations;                  // stabilizer of "white"
  bool reflections_swap_colors = false;
  bool letter_a_permissible = true;
  Witness letter_a_witness;            // the counterexample with g5
  std::vector<std::string> lines;
};

TriangleVerification triangle_verify();

// Coherent family on the triangle's state space from an eigenvector of the rotation g2.
CoherentFamily triangle_standard_family(const TriangleModel& model);

nlohmann::ordered_json to_json(const TriangleObservation& o);

}  // namespace symqt
