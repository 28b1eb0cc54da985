#pragma once

#include <string>
#include <vector>

#include "symqt/group.hpp"
#include "symqt/repr.hpp"

namespace symqt {

// Counterexample to permissibility: theta(phi1) = theta(phi2) but theta(g phi1) != theta(g phi2).
struct Witness {
  int phi1 = -1;
  int phi2 = -1;
  int g = -1;
};

struct PermissibilityResult {
  bool permissible = true;
  std::vector<Witness> witnesses;  // first violating pair for each violating g, in element order
};

PermissibilityResult check_permissible(const ParametricFunction& theta, const GroupAction& action, const Subgroup& h);
bool is_permissible(const ParametricFunction& theta, const GroupAction& action, const Subgroup& h);
bool is_permissible(const ParametricFunction& theta, const GroupAction& action);

// {g : theta(x) = theta(y) <=> theta(g x) = theta(g y)}.
Subgroup maximal_permissible_subgroup(const ParametricFunction& theta, const GroupAction& action);

// Action of a subgroup on the values of a permissible parametric function.
struct InducedGroup {
  Subgroup base;
  int value_count = 0;
  Table table;  // table[i][k]: image of value k under base.members[i]

  int act(int g, int value) const;
  // Distinct value permutations, i.e. the image group.
  std::vector<std::vector<int>> image() const;
};

InducedGroup induced_group(const ParametricFunction& theta, const GroupAction& action, const Subgroup& h);

enum class Ordering { Below, Above, Equivalent, Incomparable };
std::string to_string(Ordering o);

// Below: theta1 = psi(theta2) for some psi, i.e. theta2's partition refines theta1's.
Ordering compare(const ParametricFunction& theta1, const ParametricFunction& theta2);

// Joint labeling x -> (theta_1(x), theta_2(x), ...).
ParametricFunction compound(const std::vector<ParametricFunction>& thetas, std::string name = "");

// Span of the normalized level-set indicators; requires permissibility under h.
InvariantSubspace parametric_invariant_subspace(const ParametricFunction& theta, const GroupAction& action,
                                                const Subgroup& h);
InvariantSubspace parametric_invariant_subspace(const ParametricFunction& theta, const GroupAction& action);

bool is_frame(const std::vector<ParametricFunction>& thetas);
bool is_consistent(const std::vector<ParametricFunction>& thetas, const GroupAction& action);

constexpr int kMaxBruteForcePoints = 12;

// Coarsest permissible psi of which every theta is a function, each staying permissible
// under its own maximal subgroup; ties broken by the smallest restricted growth string.
ParametricFunction minimal_hyperparameter(const std::vector<ParametricFunction>& thetas, const GroupAction& action,
                                          int max_points = kMaxBruteForcePoints);

struct HaarSplitReport {
  bool ok = true;
  std::vector<int> level_set_sizes;  // per value index
  Partition value_orbits;            // induced-group orbits on values
  std::vector<std::string> problems;
};

HaarSplitReport haar_split_check(const ParametricFunction& theta, const GroupAction& action, const Subgroup& h);
HaarSplitReport haar_split_check(const ParametricFunction& theta, const GroupAction& action);

}  // namespace symqt
