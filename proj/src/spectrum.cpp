#include "symqt/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "symqt/error.hpp"
#include "symqt/permissibility.hpp"

namespace symqt {

namespace {

Mat rows_of(const Mat& A, const std::vector<int>& rows) {
  Mat out(rows.size(), A.cols());
  for (size_t i = 0; i < rows.size(); ++i) out.row(i) = A.row(rows[i]);
  return out;
}

Mat level_indicators(const ParametricFunction& theta) {
  Mat V = Mat::Zero(theta.size(), theta.value_count());
  for (int x = 0; x < theta.size(); ++x) V(x, theta.index(x)) = 1.0;
  return V;
}

bool restricted_containment(const Mat& V, const Mat& M, const std::vector<int>& subset) {
  Mat Ms = orthonormal_basis(rows_of(M, subset), 1e-9);
  return span_excess(Ms, rows_of(V, subset)) <= 1e-9;
}

std::vector<int> points_of(unsigned mask, const std::vector<std::vector<int>>& atoms) {
  std::vector<int> pts;
  for (size_t i = 0; i < atoms.size(); ++i)
    if (mask >> i & 1u) pts.insert(pts.end(), atoms[i].begin(), atoms[i].end());
  std::sort(pts.begin(), pts.end());
  return pts;
}

double conditional_variance(const ParametricFunction& theta, const std::vector<double>& eta, int k) {
  auto ls = theta.level_set(k);
  double mean = 0.0, sq = 0.0;
  for (int x : ls) mean += eta[x];
  mean /= ls.size();
  for (int x : ls) sq += (eta[x] - mean) * (eta[x] - mean);
  return sq / ls.size();
}

std::vector<int> image_values(const ParametricFunction& theta, const std::vector<int>& pts) {
  std::set<int> s;
  for (int x : pts) s.insert(theta.index(x));
  return {s.begin(), s.end()};
}

bool same_values(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-7) return false;
  return true;
}

std::string show(const std::vector<double>& v) {
  std::string s = "{";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "}";
}

}  // namespace

std::vector<std::vector<int>> zero_prespectra(const ParametricFunction& theta, const GroupAction& action, const Mat& M,
                                              PrespectrumSearch search, int max_points) {
  const int m = action.set_size();
  if (m > max_points)
    throw LimitError("subset search over " + std::to_string(m) + " points exceeds the cap of " + std::to_string(max_points));
  if (theta.size() != m || M.rows() != m) throw ValidationError("parameter, state space and action disagree on |Phi|");
  std::vector<std::vector<int>> atoms;
  if (search == PrespectrumSearch::OrbitUnions) {
    atoms = orbits(action, maximal_permissible_subgroup(theta, action));
  } else {
    for (int x = 0; x < m; ++x) atoms.push_back({x});
  }
  const Mat V = level_indicators(theta);
  const unsigned total = 1u << atoms.size();
  std::vector<char> valid(total, 0);
  for (unsigned mask = 1; mask < total; ++mask) valid[mask] = restricted_containment(V, M, points_of(mask, atoms));
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask < total; ++mask) {
    if (!valid[mask]) continue;
    bool maximal = true;
    for (unsigned sup = mask + 1; sup < total && maximal; ++sup)
      if ((sup & mask) == mask && valid[sup]) maximal = false;
    if (maximal) out.push_back(points_of(mask, atoms));
  }
  std::sort(out.begin(), out.end());
  return out;
}

SpectrumReport spectrum_by_variance(const ParametricFunction& theta, const GroupAction& action, const Mat& M,
                                    const std::vector<double>& eta, const std::vector<double>& encoding,
                                    PrespectrumSearch search) {
  if (static_cast<int>(eta.size()) != theta.size()) throw ValidationError("probe must be defined on every point");
  if (static_cast<int>(encoding.size()) != theta.value_count()) throw ValidationError("encoding needs one value per label");
  auto cands = zero_prespectra(theta, action, M, search);
  if (cands.empty()) throw HypothesisError(theta.name() + " has no 0-prespectrum in the given state space");
  SpectrumReport rep;
  rep.parameter = theta.name();
  rep.method = "brute_force";
  double best = 0.0;
  int arg = -1;
  for (size_t i = 0; i < cands.size(); ++i) {
    double score = 0.0;
    for (int k : image_values(theta, cands[i])) score += conditional_variance(theta, eta, k);
    rep.candidates.emplace_back(cands[i], score);
    if (arg < 0 || score < best - 1e-12) {
      best = score;
      arg = static_cast<int>(i);
    }
  }
  rep.prespectrum = cands[arg];
  rep.variance_score = best;
  rep.spectrum = image_values(theta, rep.prespectrum);
  for (int k : rep.spectrum) rep.values.push_back(encoding[k]);
  return rep;
}

SpectrumReport a_spectrum(const ParametricFunction& theta, const CoherentFamily& family,
                          const std::vector<double>& encoding) {
  QOperator A = operator_for_parameter(family, theta, encoding);
  Observable obs = make_observable(theta, encoding, A);
  SpectrumReport rep;
  rep.parameter = theta.name();
  rep.method = "eigen";
  rep.eigenvectors = Mat(A.dim(), 0);
  for (size_t c = 0; c < obs.clusters.size(); ++c) {
    rep.values.push_back(obs.clusters[c].value);
    rep.spectrum.push_back(obs.cluster_value[c]);
    rep.multiplicities.push_back(obs.clusters[c].multiplicity());
    Mat grown(A.dim(), rep.eigenvectors.cols() + obs.clusters[c].vectors.cols());
    grown << rep.eigenvectors, obs.clusters[c].vectors;
    rep.eigenvectors = grown;
  }
  return rep;
}

SpectrumTheoremReport verify_spectrum_theorem(const ParametricFunction& theta, const CoherentFamily& family, const Mat& M,
                               const GroupAction& action, const std::vector<std::vector<double>>& probes,
                               const std::vector<double>& encoding, PrespectrumSearch search) {
  SpectrumTheoremReport r;
  Representation reg = regular_representation(action);
  try {
    if (!is_irreducible(restrict_representation(reg, orthonormal_basis(M))))
      r.mismatches.push_back("state space is reducible");
  } catch (const Error& e) {
    r.mismatches.push_back(std::string("state space is not invariant: ") + e.what());
  }
  try {
    r.a = a_spectrum(theta, family, encoding);
    r.have_a_spectrum = true;
  } catch (const Error& e) {
    r.mismatches.push_back(std::string("A-spectrum unavailable: ") + e.what());
  }
  const Subgroup Ga = maximal_permissible_subgroup(theta, action);
  const Partition atoms = orbits(action, Ga);
  const InducedGroup ig = induced_group(theta, action, Ga);
  for (size_t p = 0; p < probes.size(); ++p) {
    SpectrumReport s;
    try {
      s = spectrum_by_variance(theta, action, M, probes[p], encoding, search);
    } catch (const Error& e) {
      r.mismatches.push_back("probe " + std::to_string(p) + ": " + e.what());
      continue;
    }
    if (r.have_a_spectrum && !same_values(r.a.values, s.values))
      r.mismatches.push_back("probe " + std::to_string(p) + ": A-spectrum " + show(r.a.values) +
                             " differs from variance spectrum " + show(s.values));
    if (!r.by_variance.empty() && r.by_variance.front().prespectrum != s.prespectrum)
      r.mismatches.push_back("probe " + std::to_string(p) + ": minimizer depends on the probe");
    int split = 0;
    for (const auto& cand : s.candidates) {
      std::set<int> pts(cand.first.begin(), cand.first.end());
      for (const auto& o : atoms) {
        size_t hit = 0;
        for (int x : o) hit += pts.count(x);
        if (hit != 0 && hit != o.size()) {
          ++split;
          break;
        }
      }
    }
    if (split)
      r.mismatches.push_back("probe " + std::to_string(p) + ": " + std::to_string(split) + " of " +
                             std::to_string(s.candidates.size()) + " 0-prespectra are not unions of orbits");
    std::set<int> spec(s.spectrum.begin(), s.spectrum.end());
    bool closed = true;
    for (const auto& row : ig.table)
      for (int k : spec) closed = closed && spec.count(row[k]);
    if (!closed) r.mismatches.push_back("probe " + std::to_string(p) + ": spectrum not closed under the induced group");
    // The restriction of M to the prespectrum must be the restricted parametric space.
    Mat Ms = orthonormal_basis(rows_of(M, s.prespectrum));
    Mat Vs = orthonormal_basis(rows_of(level_indicators(theta), s.prespectrum));
    if (Ms.cols() != Vs.cols() || span_excess(Ms, Vs) > 1e-9)
      r.mismatches.push_back("probe " + std::to_string(p) + ": restricted state space is not the restricted parametric space");
    r.by_variance.push_back(std::move(s));
  }
  if (probes.empty()) r.mismatches.push_back("no probes supplied");
  r.holds = r.mismatches.empty();
  return r;
}

nlohmann::ordered_json to_json(const SpectrumReport& r, const ParametricFunction& theta) {
  nlohmann::ordered_json j;
  j["parameter"] = r.parameter;
  j["method"] = r.method;
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (int k : r.spectrum) labels.push_back(k >= 0 ? nlohmann::ordered_json(theta.value(k)) : nlohmann::ordered_json());
  j["spectrum"] = labels;
  j["values"] = r.values;
  if (r.method == "eigen") {
    j["multiplicities"] = r.multiplicities;
    j["eigenvectors"] = matrix_to_json(r.eigenvectors);
  } else {
    j["prespectrum"] = r.prespectrum;
    j["variance_score"] = r.variance_score;
    nlohmann::ordered_json c = nlohmann::ordered_json::array();
    for (const auto& [pts, score] : r.candidates) c.push_back({{"points", pts}, {"score", score}});
    j["candidates"] = c;
  }
  return j;
}

nlohmann::ordered_json to_json(const SpectrumTheoremReport& r, const ParametricFunction& theta) {
  nlohmann::ordered_json j;
  j["parameter"] = theta.name();
  j["holds"] = r.holds;
  j["mismatches"] = r.mismatches;
  if (r.have_a_spectrum) j["a_spectrum"] = to_json(r.a, theta);
  nlohmann::ordered_json v = nlohmann::ordered_json::array();
  for (const auto& s : r.by_variance) v.push_back(to_json(s, theta));
  j["variance_spectra"] = v;
  return j;
}

}  // namespace symqt
