#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symqt/group.hpp"
#include "symqt/operators.hpp"
#include "symqt/permissibility.hpp"
#include "symqt/rng.hpp"

namespace symqt {

// |a^dagger b|^2 for unit vectors a, b.
double transition_probability(const Vec& a, const Vec& b, double tol = 1e-9);

struct State {
  std::string focus;
  int value = -1;              // value index when the state sits at a single value
  std::vector<double> probs;   // distribution over the focus values
  DensityOperator rho;
  std::optional<Vec> vector;   // set when rho has rank one

  bool pure() const { return vector.has_value(); }
  const std::string& tag() const { return rho.op.basis_tag; }
};

// State at one value: the eigenvector when the eigenvalue is simple, otherwise the
// normalized projector onto its eigenspace.
State state_at(const Observable& obs, int value_index);
State state_at(const Observable& obs, const std::string& label);
// Mixture of the value states with the given weights.
State mixed_state(const Observable& obs, const std::vector<double>& probs);

// Probability of each value of the observable, indexed by value.
std::vector<double> outcome_probabilities(const State& s, const Observable& obs);

// f^dagger A_b f for a pure state, tr(rho A_b) otherwise.
double conditional_expectation_qt(const State& s, const Observable& b);

struct MeasureResult {
  int outcome = -1;
  std::vector<double> probabilities;
  State post;
  std::uint64_t seed = 0;
  std::uint64_t draw = 0;
};

// Samples an outcome and projects the state onto its eigenspace.
MeasureResult measure(const State& s, const Observable& obs, CounterRng& rng);
MeasureResult measure(const State& s, const Observable& obs, std::uint64_t seed);

nlohmann::ordered_json transcript_record(const MeasureResult& r, const Observable& obs);

// Posterior mean under the uniform prior: sum_theta theta q~(theta, x) / |Theta| with
// q~ normalized so that its prior average at x equals 1. likelihood(theta, x).
double bayes_estimator_haar(const RMat& likelihood, const std::vector<double>& theta_values, int x);

struct RiskModel {
  RMat likelihood;        // likelihood(point, x)
  Table data_action;      // data_action[g][x]
  ParametricFunction target;
  RMat loss;              // loss(estimate value, true value)
  std::vector<int> estimator;  // value index estimated from x
};

struct RiskReport {
  bool ok = true;
  bool loss_invariant = true;
  bool estimator_equivariant = true;
  bool model_equivariant = true;
  std::vector<double> risk;            // per point
  Partition data_orbits;
  std::vector<std::vector<double>> conditional_risk;  // [orbit][point]
  std::vector<std::string> problems;
};

// Checks that the expected loss is constant on each orbit of points, also conditionally on
// each orbit of the data, and equals the posterior expected loss there.
RiskReport invariant_risk_check(const RiskModel& model, const GroupAction& action, double tol = 1e-12);

}  // namespace symqt
