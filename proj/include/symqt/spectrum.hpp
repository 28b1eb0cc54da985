#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "symqt/group.hpp"
#include "symqt/operators.hpp"
#include "symqt/repr.hpp"

namespace symqt {

enum class PrespectrumSearch {
  OrbitUnions,  // candidates are unions of orbits of the maximal permissible subgroup
  AllSubsets,   // every non-empty subset of the action set
};

struct SpectrumReport {
  std::string parameter;
  std::string method;                 // "brute_force" or "eigen"
  std::vector<int> prespectrum;       // points, brute_force only
  std::vector<int> spectrum;          // value indices, -1 for an eigenvalue encoding no value
  std::vector<double> values;         // numeric spectrum
  std::vector<int> multiplicities;    // eigen only
  Mat eigenvectors;                   // eigen only, columns grouped by cluster
  double variance_score = 0.0;
  std::vector<std::pair<std::vector<int>, double>> candidates;  // brute_force only
};

// Maximal subsets on which every function of theta agrees with the restriction of a member of M.
std::vector<std::vector<int>> zero_prespectra(const ParametricFunction& theta, const GroupAction& action, const Mat& M,
                                              PrespectrumSearch search = PrespectrumSearch::OrbitUnions,
                                              int max_points = 12);

SpectrumReport spectrum_by_variance(const ParametricFunction& theta, const GroupAction& action, const Mat& M,
                                    const std::vector<double>& eta, const std::vector<double>& encoding,
                                    PrespectrumSearch search = PrespectrumSearch::OrbitUnions);

SpectrumReport a_spectrum(const ParametricFunction& theta, const CoherentFamily& family,
                          const std::vector<double>& encoding);

struct SpectrumTheoremReport {
  bool holds = false;
  std::vector<std::string> mismatches;
  bool have_a_spectrum = false;
  SpectrumReport a;
  std::vector<SpectrumReport> by_variance;  // one per probe that produced a result
};

// Compares the operator spectrum with the variance-minimizing spectrum for every probe, and checks
// orbit structure, closure under the induced group and the restricted-M condition.
SpectrumTheoremReport verify_spectrum_theorem(const ParametricFunction& theta, const CoherentFamily& family, const Mat& M,
                               const GroupAction& action, const std::vector<std::vector<double>>& probes,
                               const std::vector<double>& encoding,
                               PrespectrumSearch search = PrespectrumSearch::OrbitUnions);

nlohmann::ordered_json to_json(const SpectrumReport& r, const ParametricFunction& theta);
nlohmann::ordered_json to_json(const SpectrumTheoremReport& r, const ParametricFunction& theta);

}  // namespace symqt
