// One line per acceptance criterion; nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "symqt/error.hpp"
#include "symqt/measurement.hpp"
#include "symqt/permissibility.hpp"
#include "symqt/repr.hpp"
#include "symqt/rng.hpp"
#include "symqt/spectrum.hpp"
#include "symqt/spin.hpp"
#include "symqt/triangle.hpp"

using namespace symqt;
using json = nlohmann::ordered_json;

namespace {

constexpr double kOrthoTol = 1e-10;
constexpr double kRoundTripTol = 1e-8;
constexpr double kRoundTripResidual = 1e-9;
constexpr double kSpinTol = 1e-10;
constexpr double kEprExactTol = 1e-12;
constexpr double kEprSigmas = 4.0;
constexpr double kEprAbsAtThird = 3e-3;
constexpr double kEprObserverSigmas = 3.0;
constexpr double kChainTol = 0.01;
constexpr double kProbSumTol = 1e-12;
constexpr double kTraceRhoTol = 1e-8;
constexpr double kTraceTol = 1e-12;
constexpr double kMinEigTol = -1e-10;
constexpr double kRiskTol = 1e-12;

constexpr double kBudgetAC1 = 1.0;
constexpr double kBudgetAC3 = 10.0;
constexpr double kBudgetAC4 = 5.0;
constexpr double kBudgetAC5 = 30.0;
constexpr double kBudgetAC7 = 60.0;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void run(int id, const char* title, double budget, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget > 0 && secs > budget) {
    std::ostringstream s;
    s << "took " << secs << " s, budget " << budget << " s";
    o.fail(s.str());
  }
  if (!o.pass) ++failures;
  std::printf("AC%-2d %s  %s (%.2f s)%s%s\n", id, o.pass ? "PASS" : "FAIL", title, secs, o.detail.empty() ? "" : ": ",
              o.detail.c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

ModelDocument bundled() { return load_model_file(cli::bundled_model_path()); }

void check_orthogonality(GroupPtr g, const std::string& name, Outcome& o) {
  auto chars = irreducible_characters(g);
  double sum_sq = 0.0;
  for (size_t i = 0; i < chars.size(); ++i) {
    sum_sq += std::norm(chars[i](g->identity()));
    for (size_t j = 0; j < chars.size(); ++j) {
      double err = std::abs(character_inner(chars[i], chars[j]) - cplx(i == j ? 1.0 : 0.0));
      if (err > kOrthoTol) o.fail(name + ": <chi" + std::to_string(i) + ", chi" + std::to_string(j) + "> off by " + num(err));
    }
  }
  if (std::abs(sum_sq - g->order()) > 1e-8) o.fail(name + ": squared dimensions do not add up to the order");
}

Representation first_irrep_of_dim(GroupPtr g, int d) {
  for (auto& r : irreducible_representations(g))
    if (r.dim() == d) return r;
  throw Error("no irreducible representation of that dimension");
}

double min_eig(const Mat& rho) { return Eigen::SelfAdjointEigenSolver<Mat>(rho).eigenvalues().minCoeff(); }

void check_density(const Mat& rho, const std::string& what, Outcome& o) {
  if (std::abs(rho.trace() - 1.0) > kTraceTol) o.fail(what + ": trace " + num(rho.trace().real()));
  if (min_eig(rho) < kMinEigTol) o.fail(what + ": eigenvalue " + num(min_eig(rho)));
}

}  // namespace

int main() {
  run(1, "triangle analysis: colour permissible, letters not, g5 counterexample", kBudgetAC1, [](Outcome& o) {
    std::ostringstream out;
    if (cli::cmd_analyze("", out) != 0) o.fail("analyze returned nonzero");
    json r = json::parse(out.str());
    for (const auto& p : r["parameters"]) {
      bool want = p["name"] == "theta0";
      if (p["permissible"] != want) o.fail(p["name"].get<std::string>() + " has the wrong verdict");
    }
    bool found = false;
    for (const auto& p : r["parameters"])
      if (p["name"] == "theta_a")
        for (const auto& w : p["witnesses"])
          if (w["g"] == "g5" && w["text"].get<std::string>().rfind("theta_a(g5 1) = theta_a(5) = C", 0) == 0) found = true;
    if (!found) o.fail("no g5 witness theta_a(g5 1) = theta_a(5) = C");
  });

  run(2, "maximal permissible subgroup of theta_a is {g1, g4}", 0, [](Outcome& o) {
    ModelDocument doc = bundled();
    Subgroup h = maximal_permissible_subgroup(doc.parameter("theta_a"), *doc.action);
    if (h.members != std::vector<int>{0, 3}) o.fail("got a subgroup of order " + std::to_string(h.size()));
  });

  run(3, "regular decomposition [1,1,2,2], character orthogonality, Schur", kBudgetAC3, [](Outcome& o) {
    ModelDocument doc = bundled();
    std::vector<int> dims;
    for (const auto& b : decompose(regular_representation(*doc.action))) dims.push_back(b.dim());
    if (dims != std::vector<int>{1, 1, 2, 2}) o.fail("S3 regular blocks differ from [1,1,2,2]");
    check_orthogonality(cyclic_group(2), "C2", o);
    check_orthogonality(cyclic_group(3), "C3", o);
    check_orthogonality(doc.group, "S3", o);
    check_orthogonality(dihedral_group(4), "D4", o);
    check_orthogonality(symmetric_group(4), "S4", o);
    for (GroupPtr g : {doc.group, dihedral_group(4), symmetric_group(4)}) {
      auto irreps = irreducible_representations(g);
      for (size_t i = 0; i < irreps.size(); ++i)
        for (size_t j = 0; j < irreps.size(); ++j)
          if (intertwiner_dimension(irreps[i], irreps[j]) != (i == j ? 1 : 0))
            o.fail("intertwiner dimension wrong for irreps " + std::to_string(i) + ", " + std::to_string(j));
    }
  });

  run(4, "irreducible operator round trip, 100 Hermitian targets on S3 and D4", kBudgetAC4, [](Outcome& o) {
    ModelDocument doc = bundled();
    int n = 0;
    double worst = 0.0, worst_res = 0.0;
    for (GroupPtr g : {doc.group, dihedral_group(4)}) {
      Representation r = first_irrep_of_dim(g, 2);
      for (unsigned s = 0; s < 100; ++s, ++n) {
        Mat Q = random_hermitian(2, 90000 + s);
        Vec v = random_unit_vector(2, 95000 + s);
        Vec c(g->order());
        for (int k = 0; k < g->order(); ++k) {
          Vec w = r(k) * v;
          c(k) = w.dot(Q * w);
        }
        QOperator A = solve_operator_irreducible(r, v, c);
        worst = std::max(worst, max_abs(A.matrix - Q));
        worst_res = std::max(worst_res, A.residual);
      }
    }
    if (worst > kRoundTripTol) o.fail("max error " + num(worst));
    if (worst_res > kRoundTripResidual) o.fail("max residual " + num(worst_res));
    o.detail = o.pass ? std::to_string(n) + " solves, max error " + num(worst) : o.detail;
  });

  run(5, "spectrum theorem on the triangle for theta_a, theta_b, theta_c, theta0", kBudgetAC5, [](Outcome& o) {
    ModelDocument doc = bundled();
    cli::StateSpace ss = cli::state_space(doc);
    CounterRng rng(5, 0);
    std::vector<std::vector<double>> probes;
    for (int p = 0; p < 5; ++p) {
      std::vector<double> eta;
      for (int x = 0; x < 6; ++x) eta.push_back(rng.uniform());
      probes.push_back(eta);
    }
    std::string failed;
    for (const char* name : {"theta_a", "theta_b", "theta_c", "theta0"}) {
      const auto& th = doc.parameter(name);
      SpectrumTheoremReport r = verify_spectrum_theorem(th, ss.family, ss.M.basis, *doc.action, probes, doc.encoding(th));
      if (!r.holds) {
        o.fail(std::string(name) + ": " + (r.mismatches.empty() ? "does not hold" : r.mismatches.front()));
        failed += (failed.empty() ? "" : ", ") + std::string(name);
      }
    }
    if (!o.pass) o.detail += "; fails for " + failed;
  });

  run(6, "spin probabilities against transition probabilities, 1000 axis pairs", 0, [](Outcome& o) {
    CounterRng rng(6, 0);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      Axis a = unit_axis(Axis(nd(rng), nd(rng), nd(rng)));
      Axis n = unit_axis(Axis(nd(rng), nd(rng), nd(rng)));
      auto [pm, pp] = spin_probability(a.dot(n));
      worst = std::max(worst, std::abs(transition_probability(spin_eigenvector(a, 1), spin_eigenvector(n, 1)) - pp));
      worst = std::max(worst, std::abs(transition_probability(spin_eigenvector(a, -1), spin_eigenvector(n, 1)) - pm));
    }
    if (worst > kSpinTol) o.fail("max deviation " + num(worst));
    auto [m0, p0] = spin_probability(0.0);
    if (m0 != 0.5 || p0 != 0.5) o.fail("theta = 0 does not give (1/2, 1/2) exactly");
  });

  run(7, "EPR correlation exact and simulated with 10^6 samples", kBudgetAC7, [](Outcome& o) {
    double worst_sig = 0.0;
    for (int k = 0; k <= 6; ++k) {
      const double u = k * M_PI / 6;
      if (std::abs(epr_correlation_exact(u) + std::cos(u)) > kEprExactTol) o.fail("exact value wrong at k = " + std::to_string(k));
      EprEstimate a = epr_correlation_mc(u, 1000000, 700 + k);
      double dev = std::abs(a.estimate + std::cos(u));
      if (dev > kEprSigmas * a.std_error + 1e-15) o.fail("u = " + num(u) + " off by " + num(dev));
      if (a.std_error > 0) worst_sig = std::max(worst_sig, dev / a.std_error);
      if (k == 2 && dev > kEprAbsAtThird) o.fail("u = pi/3 off by " + num(dev));
      EprEstimate b = epr_correlation_mc(u, 1000000, 700 + k, Observer::B);
      double se = std::hypot(a.std_error, b.std_error);
      if (std::abs(a.estimate - b.estimate) > kEprObserverSigmas * se + 1e-15)
        o.fail("observer B differs at u = " + num(u));
    }
    if (o.pass) o.detail = "worst " + num(worst_sig) + " standard errors";
  });

  run(8, "triangle chain over 10^5 runs: b after a = A, and a repeats", 0, [](Outcome& o) {
    const int runs = 100000;
    int seen_a = 0, repeats = 0, b_counts[3] = {0, 0, 0};
    TriangleModel fresh = triangle_new(false, 0);
    const auto& tb = fresh.parameter(Window::B);
    for (int i = 0; i < runs; ++i) {
      auto [first, t1] = triangle_open_window(fresh, Window::A, 500000 + i);
      if (first.value != "A") continue;
      ++seen_a;
      auto [again, t2] = triangle_open_window(t1, Window::A, 700000 + i);
      if (again.value == "A") ++repeats;
      auto [b, t3] = triangle_open_window(t1, Window::B, 900000 + i);
      ++b_counts[tb.value_index(b.value)];
    }
    if (seen_a == 0) return o.fail("never saw A");
    double pa = b_counts[tb.value_index("A")] / double(seen_a), pb = b_counts[tb.value_index("B")] / double(seen_a),
           pc = b_counts[tb.value_index("C")] / double(seen_a);
    if (pa != 0.0) o.fail("b showed A after a showed A");
    if (std::abs(pb - 0.5) > kChainTol || std::abs(pc - 0.5) > kChainTol) o.fail("B " + num(pb) + ", C " + num(pc));
    if (repeats != seen_a) o.fail("a did not repeat " + std::to_string(seen_a - repeats) + " times");
    if (o.pass) o.detail = std::to_string(seen_a) + " runs with A: B " + num(pb) + ", C " + num(pc);
  });

  run(9, "probabilities sum to one, tr(A rho) against the prior average, density operators", 0, [](Outcome& o) {
    TriangleModel t = triangle_new();
    ModelDocument doc = bundled();
    cli::StateSpace ss = cli::state_space(doc);
    CounterRng rng(9, 0);
    // triangle: observables on functions over the points and the colour on the 2-dim copy
    for (Window w : {Window::A, Window::B, Window::C, Window::Top}) {
      const Observable& obs = t.observable(w);
      for (int k = 0; k < obs.theta.value_count(); ++k) {
        State s = state_at(obs, k);
        check_density(s.rho.matrix(), "state at " + obs.theta.value(k), o);
        for (Window w2 : {Window::A, Window::B, Window::C, Window::Top}) {
          double sum = probability(s.rho, t.observable(w2), t.observable(w2).theta.values());
          if (std::abs(sum - 1.0) > kProbSumTol) o.fail("probabilities sum to " + num(sum));
        }
      }
    }
    const auto& t0 = doc.parameter("theta0");
    std::vector<double> q = doc.encoding(t0);
    QOperator A = operator_for_parameter(ss.family, t0, q);
    Observable colour = make_observable(t0, q, A);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> prior;
      double tot = 0.0;
      for (int x = 0; x < 6; ++x) tot += prior.emplace_back(rng.uniform());
      for (double& p : prior) p /= tot;
      DensityOperator rho = density_operator(ss.family.members, prior, "M");
      check_density(rho.matrix(), "triangle mixture", o);
      double direct = 0.0;
      for (int x = 0; x < 6; ++x) direct += prior[x] * q[t0.index(x)];
      if (std::abs(expectation(rho, A) - direct) > kTraceRhoTol) o.fail("triangle: tr(A rho) differs from the prior average");
      double sum = probability(rho, colour, t0.values());
      if (std::abs(sum - 1.0) > kProbSumTol) o.fail("colour probabilities sum to " + num(sum));
    }
    // spin: family of up states along random axes, observable along a
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 20; ++rep) {
      Axis a = unit_axis(Axis(nd(rng), nd(rng), nd(rng)));
      QOperator S;
      S.matrix = spin_operator(a);
      S.hermitian = true;
      S.basis_tag = "spin";
      std::vector<Vec> fam;
      std::vector<double> prior;
      double direct = 0.0, tot = 0.0;
      std::vector<Axis> axes;
      for (int k = 0; k < 8; ++k) {
        axes.push_back(unit_axis(Axis(nd(rng), nd(rng), nd(rng))));
        fam.push_back(spin_eigenvector(axes.back(), 1));
        tot += prior.emplace_back(rng.uniform());
      }
      for (int k = 0; k < 8; ++k) {
        prior[k] /= tot;
        direct += prior[k] * a.dot(axes[k]);
      }
      DensityOperator rho = density_operator(fam, prior, "spin");
      check_density(rho.matrix(), "spin mixture", o);
      if (std::abs(expectation(rho, S) - direct) > kTraceRhoTol) o.fail("spin: tr(A rho) differs from the prior average");
      double sum = 0.0;
      for (const auto& c : hermitian_clusters(S.matrix)) sum += (rho.matrix() * c.vectors * c.vectors.adjoint()).trace().real();
      if (std::abs(sum - 1.0) > kProbSumTol) o.fail("spin probabilities sum to " + num(sum));
    }
  });

  run(10, "Haar split, invariant risk of the colour model, Bayes estimator against brute force", 0, [](Outcome& o) {
    ModelDocument doc = bundled();
    const GroupAction& act = *doc.action;
    for (const auto& th : doc.parameters) {
      if (is_permissible(th, act) && !haar_split_check(th, act).ok) o.fail(th.name() + ": Haar split fails");
      Subgroup ga = maximal_permissible_subgroup(th, act);
      if (!haar_split_check(th, act, ga).ok) o.fail(th.name() + ": Haar split fails on its own subgroup");
    }
    // D4 regular: the rotation coset is permissible
    GroupAction d4 = regular_action(dihedral_group(4));
    std::vector<int> coset;
    for (int g = 0; g < 8; ++g) coset.push_back(g < 4 ? 0 : 1);
    ParametricFunction rc = ParametricFunction::from_indices("rotation_coset", coset);
    if (!is_permissible(rc, d4)) o.fail("rotation coset of D4 not permissible");
    else if (!haar_split_check(rc, d4).ok) o.fail("D4 rotation coset: Haar split fails");

    // three readings of the colour, each right with probability 0.8
    const auto& t0 = doc.parameter("theta0");
    RiskModel m;
    m.target = t0;
    m.likelihood = RMat(6, 8);
    for (int x = 0; x < 6; ++x)
      for (int obs = 0; obs < 8; ++obs) {
        double l = 1.0;
        for (int i = 0; i < 3; ++i) l *= ((obs >> i & 1) == t0.index(x)) ? 0.8 : 0.2;
        m.likelihood(x, obs) = l;
      }
    for (int g = 0; g < 6; ++g) {
      std::vector<int> row;
      for (int obs = 0; obs < 8; ++obs) row.push_back(g >= 3 ? obs ^ 7 : obs);
      m.data_action.push_back(row);
    }
    m.loss = RMat::Ones(2, 2) - RMat::Identity(2, 2);
    for (int obs = 0; obs < 8; ++obs) m.estimator.push_back(std::popcount(unsigned(obs)) >= 2 ? 1 : 0);
    RiskReport rr = invariant_risk_check(m, act);
    if (!rr.ok) o.fail("risk check: " + (rr.problems.empty() ? std::string("not ok") : rr.problems.front()));
    for (const auto& orbit : orbits(act, full_subgroup(act.group_ptr())))
      for (int x : orbit)
        if (std::abs(rr.risk[x] - rr.risk[orbit.front()]) > kRiskTol) o.fail("risk not constant on an orbit");

    // brute force: posterior mean as a Haar sum over group elements
    auto brute = [](const RMat& lik, const std::vector<double>& th, int x) {
      const double nu = 1.0 / static_cast<double>(lik.rows());
      double norm = 0.0, est = 0.0;
      for (Eigen::Index g = 0; g < lik.rows(); ++g) norm += lik(g, x) * nu;
      for (Eigen::Index g = 0; g < lik.rows(); ++g) est += th[g] * (lik(g, x) / norm) * nu;
      return est;
    };
    std::vector<std::pair<RMat, std::vector<double>>> tables;
    for (double k : {1.0, 0.5}) {
      RMat lik(2, 2);
      for (int t = 0; t < 2; ++t)
        for (int x = 0; x < 2; ++x) lik(t, x) = (1.0 + (t ? k : -k) * (x ? 1.0 : -1.0)) / 2.0;
      tables.push_back({lik, {-k, k}});
    }
    std::vector<double> colour_values;
    for (int x = 0; x < 6; ++x) colour_values.push_back(doc.encoding(t0)[t0.index(x)]);
    tables.push_back({m.likelihood, colour_values});
    for (const auto& [lik, th] : tables)
      for (int x = 0; x < lik.cols(); ++x) {
        bool defined = false;
        for (Eigen::Index t = 0; t < lik.rows(); ++t) defined = defined || lik(t, x) > 0.0;
        if (!defined) continue;
        if (bayes_estimator_haar(lik, th, x) != brute(lik, th, x)) o.fail("Bayes estimate differs at x = " + std::to_string(x));
      }
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
