#include "symqt/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "symqt/error.hpp"

namespace symqt {

double transition_probability(const Vec& a, const Vec& b, double tol) {
  if (a.size() != b.size()) throw ValidationError("vectors have different dimensions");
  if (std::abs(a.norm() - 1.0) > tol || std::abs(b.norm() - 1.0) > tol) throw ValidationError("vectors must have unit norm");
  return std::min(1.0, std::norm(a.dot(b)));
}

namespace {

State from_rho(const Observable& obs, Mat rho, int value, std::vector<double> probs) {
  State s;
  s.focus = obs.theta.name();
  s.value = value;
  s.probs = std::move(probs);
  rho = (rho + rho.adjoint()) / 2.0;
  auto clusters = hermitian_clusters(rho, 1e-9);
  int nonzero = 0;
  for (const auto& c : clusters)
    if (c.value > 1e-9) nonzero += c.multiplicity();
  if (nonzero == 1) {
    const auto& top = clusters.back();
    Vec v = canonical_phase(top.vectors.col(0));
    s.vector = v;
    rho = v * v.adjoint();
  }
  s.rho = density_from_matrix(rho, obs.tag());
  return s;
}

int rank_of(const Mat& P) { return static_cast<int>(std::lround(P.trace().real())); }

}  // namespace

State state_at(const Observable& obs, int value_index) {
  if (value_index < 0 || value_index >= obs.theta.value_count()) throw ValidationError("value index out of range");
  Mat P = obs.projector(value_index);
  int r = rank_of(P);
  if (r == 0) throw ValidationError("value '" + obs.theta.value(value_index) + "' is not in the spectrum of " + obs.theta.name());
  std::vector<double> probs(obs.theta.value_count(), 0.0);
  probs[value_index] = 1.0;
  return from_rho(obs, P / static_cast<double>(r), value_index, probs);
}

State state_at(const Observable& obs, const std::string& label) {
  int k = obs.theta.value_index(label);
  if (k < 0) throw ValidationError("unknown label '" + label + "' for " + obs.theta.name());
  return state_at(obs, k);
}

State mixed_state(const Observable& obs, const std::vector<double>& probs) {
  if (static_cast<int>(probs.size()) != obs.theta.value_count()) throw ValidationError("need one weight per value");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw ValidationError("negative weight");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("weights must sum to 1");
  Mat rho = Mat::Zero(obs.op.dim(), obs.op.dim());
  for (size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] == 0.0) continue;
    Mat P = obs.projector(static_cast<int>(k));
    int r = rank_of(P);
    if (r == 0) throw ValidationError("weighted value is not in the spectrum");
    rho += probs[k] * P / static_cast<double>(r);
  }
  int single = -1;
  for (size_t k = 0; k < probs.size(); ++k)
    if (probs[k] == 1.0) single = static_cast<int>(k);
  return from_rho(obs, rho, single, probs);
}

std::vector<double> outcome_probabilities(const State& s, const Observable& obs) {
  if (s.tag() != obs.tag()) throw ValidationError("basis mismatch: state '" + s.tag() + "' vs operator '" + obs.tag() + "'");
  for (size_t c = 0; c < obs.clusters.size(); ++c)
    if (obs.cluster_value[c] < 0)
      throw HypothesisError("eigenvalue " + std::to_string(obs.clusters[c].value) + " of " + obs.theta.name() +
                            " encodes no value");
  std::vector<double> p(obs.theta.value_count(), 0.0);
  for (int k = 0; k < obs.theta.value_count(); ++k)
    p[k] = std::clamp((s.rho.matrix() * obs.projector(k)).trace().real(), 0.0, 1.0);
  return p;
}

double conditional_expectation_qt(const State& s, const Observable& b) {
  if (s.tag() != b.tag()) throw ValidationError("basis mismatch: state '" + s.tag() + "' vs operator '" + b.tag() + "'");
  if (s.pure()) return s.vector->dot(b.op.matrix * *s.vector).real();
  return expectation(s.rho, b.op).real();
}

MeasureResult measure(const State& s, const Observable& obs, CounterRng& rng) {
  MeasureResult r;
  r.probabilities = outcome_probabilities(s, obs);
  r.seed = rng.seed();
  const double u = rng.uniform();
  r.draw = rng.counter();
  double acc = 0.0;
  int last = -1;
  for (size_t k = 0; k < r.probabilities.size(); ++k) {
    if (r.probabilities[k] <= 0.0) continue;
    last = static_cast<int>(k);
    acc += r.probabilities[k];
    if (u < acc) {
      r.outcome = last;
      break;
    }
  }
  if (r.outcome < 0) r.outcome = last;
  Mat P = obs.projector(r.outcome);
  Mat rho = P * s.rho.matrix() * P;
  rho /= rho.trace().real();
  std::vector<double> probs(obs.theta.value_count(), 0.0);
  probs[r.outcome] = 1.0;
  r.post = from_rho(obs, rho, r.outcome, probs);
  return r;
}

MeasureResult measure(const State& s, const Observable& obs, std::uint64_t seed) {
  CounterRng rng(seed);
  return measure(s, obs, rng);
}

nlohmann::ordered_json transcript_record(const MeasureResult& r, const Observable& obs) {
  nlohmann::ordered_json j;
  j["parameter"] = obs.theta.name();
  j["outcome"] = obs.theta.value(r.outcome);
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (size_t k = 0; k < r.probabilities.size(); ++k) p[obs.theta.value(static_cast<int>(k))] = r.probabilities[k];
  j["probabilities"] = p;
  j["seed"] = r.seed;
  j["draw"] = r.draw;
  return j;
}

double bayes_estimator_haar(const RMat& likelihood, const std::vector<double>& theta_values, int x) {
  const Eigen::Index T = likelihood.rows();
  if (T == 0 || static_cast<Eigen::Index>(theta_values.size()) != T) throw ValidationError("need one likelihood row per value");
  if (x < 0 || x >= likelihood.cols()) throw ValidationError("observation index out of range");
  const double nu = 1.0 / static_cast<double>(T);
  double norm = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    if (likelihood(t, x) < 0.0) throw ValidationError("likelihood has a negative entry");
    norm += likelihood(t, x) * nu;
  }
  if (norm <= 0.0) throw ValidationError("likelihood vanishes at observation " + std::to_string(x) + "; cannot normalize");
  double est = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) est += theta_values[t] * (likelihood(t, x) / norm) * nu;
  return est;
}

RiskReport invariant_risk_check(const RiskModel& model, const GroupAction& action, double tol) {
  const FiniteGroup& G = action.group();
  const int m = action.set_size();
  const int X = static_cast<int>(model.likelihood.cols());
  const ParametricFunction& th = model.target;
  if (model.likelihood.rows() != m || th.size() != m) throw ValidationError("risk model and action disagree on |Phi|");
  if (static_cast<int>(model.data_action.size()) != G.order()) throw ValidationError("data action needs one row per element");
  if (static_cast<int>(model.estimator.size()) != X) throw ValidationError("estimator needs one value per observation");
  if (model.loss.rows() != th.value_count() || model.loss.cols() != th.value_count())
    throw ValidationError("loss must be a value-by-value table");
  const Subgroup full = full_subgroup(action.group_ptr());
  InducedGroup ig = induced_group(th, action, full);
  RiskReport rep;
  for (int g = 0; g < G.order(); ++g) {
    for (int a = 0; a < th.value_count(); ++a)
      for (int b = 0; b < th.value_count(); ++b)
        if (std::abs(model.loss(ig.act(g, a), ig.act(g, b)) - model.loss(a, b)) > tol && rep.loss_invariant) {
          rep.loss_invariant = false;
          rep.problems.push_back("loss is not invariant under " + G.name(g) + " at (" + th.value(a) + ", " + th.value(b) + ")");
        }
    for (int x = 0; x < X; ++x) {
      if (model.estimator[model.data_action[g][x]] != ig.act(g, model.estimator[x]) && rep.estimator_equivariant) {
        rep.estimator_equivariant = false;
        rep.problems.push_back("estimator is not equivariant under " + G.name(g) + " at observation " + std::to_string(x));
      }
      for (int p = 0; p < m; ++p)
        if (std::abs(model.likelihood(action.act(g, p), model.data_action[g][x]) - model.likelihood(p, x)) > tol &&
            rep.model_equivariant) {
          rep.model_equivariant = false;
          rep.problems.push_back("model is not equivariant under " + G.name(g));
        }
    }
  }
  auto loss_at = [&](int p, int x) { return model.loss(model.estimator[x], th.index(p)); };
  for (int p = 0; p < m; ++p) {
    double r = 0.0;
    for (int x = 0; x < X; ++x) r += loss_at(p, x) * model.likelihood(p, x);
    rep.risk.push_back(r);
  }
  // Orbits of the data under the group.
  std::vector<int> owner(X, -1);
  for (int x = 0; x < X; ++x) {
    if (owner[x] >= 0) continue;
    std::vector<int> orb;
    for (int g = 0; g < G.order(); ++g) {
      int y = model.data_action[g][x];
      if (owner[y] < 0) {
        owner[y] = static_cast<int>(rep.data_orbits.size());
        orb.push_back(y);
      }
    }
    std::sort(orb.begin(), orb.end());
    rep.data_orbits.push_back(orb);
  }
  const Partition point_orbits = orbits(action, full);
  for (const auto& po : point_orbits)
    for (int p : po)
      if (std::abs(rep.risk[p] - rep.risk[po.front()]) > tol) {
        rep.ok = false;
        rep.problems.push_back("risk differs between points " + action.point_name(po.front()) + " and " +
                               action.point_name(p));
      }
  for (const auto& dor : rep.data_orbits) {
    std::vector<double> cr(m, 0.0);
    for (int p = 0; p < m; ++p) {
      double mass = 0.0, l = 0.0;
      for (int x : dor) {
        mass += model.likelihood(p, x);
        l += loss_at(p, x) * model.likelihood(p, x);
      }
      cr[p] = mass > 0.0 ? l / mass : 0.0;
    }
    for (const auto& po : point_orbits) {
      for (int p : po)
        if (std::abs(cr[p] - cr[po.front()]) > tol) {
          rep.ok = false;
          rep.problems.push_back("conditional risk differs between points " + action.point_name(po.front()) + " and " +
                                 action.point_name(p));
        }
      for (int x : dor) {
        double mass = 0.0, l = 0.0;
        for (int p : po) {
          mass += model.likelihood(p, x);
          l += loss_at(p, x) * model.likelihood(p, x);
        }
        if (mass <= 0.0) continue;
        if (std::abs(l / mass - cr[po.front()]) > 1e-9) {
          rep.ok = false;
          rep.problems.push_back("posterior risk at observation " + std::to_string(x) + " differs from the conditional risk");
        }
      }
    }
    rep.conditional_risk.push_back(std::move(cr));
  }
  if (!rep.loss_invariant || !rep.estimator_equivariant || !rep.model_equivariant) rep.ok = false;
  return rep;
}

}  // namespace symqt
