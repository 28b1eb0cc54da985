#include "symqt/triangle.hpp"

#include <algorithm>
#include <set>

#include "symqt/error.hpp"
#include "symqt/permissibility.hpp"

namespace symqt {

namespace {

const char* kTriangleJson = R"({
  "schema_version": 1,
  "elements": ["g1", "g2", "g3", "g4", "g5", "g6"],
  "cayley": [
    [0, 1, 2, 3, 4, 5],
    [1, 2, 0, 5, 3, 4],
    [2, 0, 1, 4, 5, 3],
    [3, 4, 5, 0, 1, 2],
    [4, 5, 3, 2, 0, 1],
    [5, 3, 4, 1, 2, 0]
  ],
  "points": ["ABC", "CAB", "BCA", "ACB", "CBA", "BAC"],
  "action": [
    [0, 1, 2, 3, 4, 5],
    [1, 2, 0, 5, 3, 4],
    [2, 0, 1, 4, 5, 3],
    [3, 4, 5, 0, 1, 2],
    [4, 5, 3, 2, 0, 1],
    [5, 3, 4, 1, 2, 0]
  ],
  "parameters": {
    "theta0": ["white", "white", "white", "black", "black", "black"],
    "theta_a": ["A", "C", "B", "A", "C", "B"],
    "theta_b": ["B", "A", "C", "C", "B", "A"],
    "theta_c": ["C", "B", "A", "B", "A", "C"]
  },
  "encodings": {
    "theta0": {"white": 1, "black": -1},
    "theta_a": {"A": 1, "C": 3, "B": 2},
    "theta_b": {"B": 2, "A": 1, "C": 3},
    "theta_c": {"C": 3, "B": 2, "A": 1}
  },
  "state_space": {"irrep_dim": 2, "copy": 0},
  "seed": 2024
})";

int slot(Window w) { return static_cast<int>(w); }

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Window parse_window(const std::string& s) {
  if (s == "a") return Window::A;
  if (s == "b") return Window::B;
  if (s == "c") return Window::C;
  if (s == "top") return Window::Top;
  throw ValidationError("unknown window '" + s + "' (expected a, b, c or top)");
}

std::string to_string(Window w) {
  switch (w) {
    case Window::A: return "a";
    case Window::B: return "b";
    case Window::C: return "c";
    case Window::Top: return "top";
  }
  return "?";
}

ModelDocument triangle_document() { return parse_model(kTriangleJson); }

const ParametricFunction& TriangleModel::parameter(Window w) const { return observable(w).theta; }

const Observable& TriangleModel::observable(Window w) const {
  return w == Window::Top ? observables[0] : observables[1 + slot(w)];
}

DensityOperator TriangleModel::state() const {
  const int m = action().set_size();
  Mat rho = Mat::Zero(m, m);
  for (int x : support) rho(x, x) = 1.0 / static_cast<double>(support.size());
  return density_from_matrix(rho, "L2");
}

TriangleModel triangle_new(bool sealed_top, std::uint64_t seed) {
  TriangleModel t;
  t.doc = triangle_document();
  t.sealed_top = sealed_top;
  t.seed = seed;
  Representation reg = regular_representation(t.action());
  int copy = 0;
  for (const auto& b : decompose(reg))
    if (b.dim() == 2 && copy++ == t.doc.state_space->copy) t.M = b;
  // Point states e_x form the coherent family on functions over the points.
  Vec e0 = Vec::Zero(t.action().set_size());
  e0(0) = 1.0;
  CoherentFamily delta = coherent_family(reg, e0, t.action(), 0, "L2");
  for (const char* name : {"theta0", "theta_a", "theta_b", "theta_c"}) {
    const auto& theta = t.doc.parameter(name);
    auto enc = t.doc.encoding(theta);
    t.observables.push_back(make_observable(theta, enc, operator_for_parameter(delta, theta, enc)));
  }
  for (int x = 0; x < t.action().set_size(); ++x) t.support.push_back(x);
  return t;
}

std::pair<TriangleObservation, TriangleModel> triangle_open_window(const TriangleModel& model, Window window,
                                                                   std::uint64_t seed) {
  if (window == Window::Top && model.sealed_top) throw HypothesisError("the top window is sealed");
  const Observable& obs = model.observable(window);
  DensityOperator rho = model.state();
  TriangleObservation o;
  o.window = window;
  CounterRng rng(seed, model.step);
  const double u = rng.uniform();
  double acc = 0.0;
  int outcome = -1;
  for (int k = 0; k < obs.theta.value_count(); ++k) {
    double p = probability(rho, obs, {obs.theta.value(k)});
    o.probabilities.emplace_back(obs.theta.value(k), p);
    if (p > 0.0) {
      acc += p;
      if (outcome < 0 && u < acc) outcome = k;
    }
  }
  if (outcome < 0)
    for (int k = obs.theta.value_count() - 1; k >= 0 && outcome < 0; --k)
      if (o.probabilities[k].second > 0.0) outcome = k;
  o.value = obs.theta.value(outcome);

  TriangleModel next = model;
  std::vector<int> level = obs.theta.level_set(outcome);
  if (window != Window::Top && model.last == Window::Top) {
    // The triangle lies flat with a known side up; a corner now fixes it completely.
    next.support = intersect_sorted(level, model.support);
  } else {
    // The new hold releases whatever the previous window fixed.
    next.support = level;
  }
  next.last = window;
  next.step = model.step + 1;
  o.support_after = next.support;
  auto rec = to_json(o);
  rec["seed"] = seed;
  rec["step"] = model.step;
  next.history.push_back(rec);
  return {o, next};
}

std::pair<TriangleObservation, TriangleModel> triangle_open_window(const TriangleModel& model, Window window) {
  return triangle_open_window(model, window, model.seed);
}

TriangleModel triangle_replay(const std::vector<nlohmann::ordered_json>& records, bool sealed_top, std::uint64_t seed) {
  TriangleModel t = triangle_new(sealed_top, seed);
  for (const auto& r : records) {
    if (!r.contains("window") || !r.contains("seed")) throw ValidationError("transcript record lacks window or seed");
    auto res = triangle_open_window(t, parse_window(r.at("window").get<std::string>()), r.at("seed").get<std::uint64_t>());
    if (r.contains("value") && r.at("value").get<std::string>() != res.first.value)
      throw ValidationError("transcript does not replay: expected " + r.at("value").get<std::string>() + ", got " +
                            res.first.value);
    t = std::move(res.second);
  }
  return t;
}

TriangleVerification triangle_verify() {
  TriangleVerification v;
  ModelDocument doc = triangle_document();
  const GroupAction& act = *doc.action;
  const Subgroup G = full_subgroup(act.group_ptr());
  const auto& theta0 = doc.parameter("theta0");
  const auto& theta_a = doc.parameter("theta_a");
  v.color_permissible = is_permissible(theta0, act, G);
  v.rotations = level_set_stabilizer(act, theta0, "white");
  v.reflections_swap_colors = true;
  InducedGroup ig = induced_group(theta0, act, G);
  for (int g = 0; g < act.group().order(); ++g) {
    bool rotation = v.rotations.contains(g);
    bool swaps = ig.act(g, 0) != 0;
    if (rotation == swaps) v.reflections_swap_colors = false;
  }
  v.lines.push_back(std::string("theta0 permissible: ") + (v.color_permissible ? "yes" : "no"));
  auto pr = check_permissible(theta_a, act, G);
  v.letter_a_permissible = pr.permissible;
  const int g5 = 4;
  for (const auto& w : pr.witnesses)
    if (w.g == g5) v.letter_a_witness = w;
  const auto& W = v.letter_a_witness;
  if (W.g == g5) {
    v.lines.push_back("theta_a(g5 " + std::to_string(W.phi1 + 1) + ") = theta_a(" +
                      std::to_string(act.act(g5, W.phi1) + 1) + ") = " + theta_a.labels()[act.act(g5, W.phi1)] +
                      ", theta_a(g5 " + std::to_string(W.phi2 + 1) + ") = theta_a(" +
                      std::to_string(act.act(g5, W.phi2) + 1) + ") = " + theta_a.labels()[act.act(g5, W.phi2)]);
  }
  v.ok = v.color_permissible && v.reflections_swap_colors && !v.letter_a_permissible && W.g == g5 &&
         v.rotations.members == std::vector<int>{0, 1, 2};
  return v;
}

CoherentFamily triangle_standard_family(const TriangleModel& model) {
  Representation reg = regular_representation(model.action());
  Representation rm = restrict_representation(reg, model.M.basis);
  const int g2 = 1;
  Eigen::ComplexEigenSolver<Mat> es(rm(g2));
  // Eigenvector for exp(2 pi i / 3).
  int pick = es.eigenvalues()(0).imag() > 0 ? 0 : 1;
  Vec f0 = canonical_phase(es.eigenvectors().col(pick).normalized());
  return coherent_family(rm, f0, model.action(), 0, "M");
}

nlohmann::ordered_json to_json(const TriangleObservation& o) {
  nlohmann::ordered_json j;
  j["window"] = to_string(o.window);
  j["value"] = o.value;
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [label, prob] : o.probabilities) p[label] = prob;
  j["probabilities"] = p;
  j["support"] = o.support_after;
  return j;
}

}  // namespace symqt
