#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "symqt/error.hpp"
#include "symqt/measurement.hpp"
#include "symqt/rng.hpp"
#include "symqt/spin.hpp"
#include "symqt/triangle.hpp"

using namespace symqt;

TEST(Triangle, LabelsAndVerification) {
  TriangleModel t = triangle_new();
  EXPECT_EQ(t.action().point_names(), (std::vector<std::string>{"ABC", "CAB", "BCA", "ACB", "CBA", "BAC"}));
  EXPECT_EQ(t.M.dim(), 2);
  EXPECT_EQ(t.observables.size(), 4u);
  TriangleVerification v = triangle_verify();
  EXPECT_TRUE(v.ok);
  EXPECT_TRUE(v.color_permissible);
  EXPECT_TRUE(v.reflections_swap_colors);
  EXPECT_FALSE(v.letter_a_permissible);
  EXPECT_EQ(v.rotations.members, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(v.letter_a_witness.g, 4);
  ASSERT_EQ(v.lines.size(), 2u);
  EXPECT_EQ(v.lines[1], "theta_a(g5 1) = theta_a(5) = C, theta_a(g5 4) = theta_a(3) = B");
}

TEST(Triangle, RepeatWindow) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    TriangleModel t = triangle_new(false, seed);
    auto [o1, t1] = triangle_open_window(t, Window::A);
    auto [o2, t2] = triangle_open_window(t1, Window::A);
    EXPECT_EQ(o1.value, o2.value);
    auto [o3, t3] = triangle_open_window(t2, Window::Top);
    auto [o4, t4] = triangle_open_window(t3, Window::Top);
    EXPECT_EQ(o3.value, o4.value);
  }
}

TEST(Triangle, LetterThenNeighbour) {
  TriangleModel t = triangle_new();
  // find a seed that shows A at a
  for (std::uint64_t seed = 0;; ++seed) {
    auto [o, t1] = triangle_open_window(t, Window::A, seed);
    if (o.value != "A") continue;
    EXPECT_EQ(o.support_after, (std::vector<int>{0, 3}));
    auto [ob, t2] = triangle_open_window(t1, Window::B, seed);
    std::map<std::string, double> p(ob.probabilities.begin(), ob.probabilities.end());
    EXPECT_NEAR(p["B"], 0.5, 1e-12);
    EXPECT_NEAR(p["C"], 0.5, 1e-12);
    EXPECT_NEAR(p["A"], 0.0, 1e-12);
    break;
  }
}

TEST(Triangle, TopThenCornerFixesEverything) {
  TriangleModel t = triangle_new(false, 9);
  auto [top, t1] = triangle_open_window(t, Window::Top);
  EXPECT_EQ(t1.support.size(), 3u);
  auto [a, t2] = triangle_open_window(t1, Window::A);
  EXPECT_EQ(t2.support.size(), 1u);
  // every window is now determined
  for (Window w : {Window::B, Window::C}) {
    auto [o, tn] = triangle_open_window(t2, w);
    for (const auto& [label, p] : o.probabilities) EXPECT_TRUE(p == 0.0 || p == 1.0) << label << " " << p;
  }
  // a corner window after another corner releases the colour
  auto [b, t3] = triangle_open_window(t2, Window::B);
  EXPECT_EQ(t3.support.size(), 2u);
}

TEST(Triangle, SealedTop) {
  TriangleModel t = triangle_new(true);
  EXPECT_THROW(triangle_open_window(t, Window::Top), HypothesisError);
  EXPECT_NO_THROW(triangle_open_window(t, Window::C));
  EXPECT_THROW(parse_window("d"), ValidationError);
}

TEST(Triangle, ReplayIsExact) {
  TriangleModel t = triangle_new(false, 77);
  for (Window w : {Window::A, Window::B, Window::Top, Window::C, Window::C, Window::A})
    t = triangle_open_window(t, w).second;
  TriangleModel r = triangle_replay(t.history, false, 77);
  EXPECT_EQ(r.support, t.support);
  ASSERT_EQ(r.history.size(), t.history.size());
  for (size_t k = 0; k < t.history.size(); ++k) EXPECT_EQ(r.history[k].dump(), t.history[k].dump());
  auto bad = t.history;
  bad[0]["value"] = bad[0]["value"] == "A" ? "B" : "A";
  EXPECT_THROW(triangle_replay(bad, false, 77), ValidationError);
}

TEST(Triangle, LongRunProductRule) {
  std::map<std::pair<std::string, std::string>, int> counts;
  const int n = 20000;
  TriangleModel fresh = triangle_new(false, 0);
  for (int i = 0; i < n; ++i) {
    auto [a, t1] = triangle_open_window(fresh, Window::A, 1000 + i);
    auto [b, t2] = triangle_open_window(t1, Window::B, 1000 + i);
    ++counts[{a.value, b.value}];
  }
  // oracle: 1/3 for the letter at a, then 1/2 on each of the two other letters
  for (const char* x : {"A", "B", "C"})
    for (const char* y : {"A", "B", "C"}) {
      double want = std::string(x) == y ? 0.0 : 1.0 / 6.0;
      EXPECT_NEAR(counts[std::make_pair(std::string(x), std::string(y))] / static_cast<double>(n), want, 0.01) << x << y;
    }
}

TEST(Spin, Probabilities) {
  auto [m0, p0] = spin_probability(0.0);
  EXPECT_EQ(m0, 0.5);
  EXPECT_EQ(p0, 0.5);
  auto [m1, p1] = spin_probability(1.0);
  EXPECT_EQ(m1, 0.0);
  EXPECT_EQ(p1, 1.0);
  auto [mh, ph] = spin_probability(0.5);
  EXPECT_DOUBLE_EQ(mh, 0.25);
  EXPECT_DOUBLE_EQ(ph, 0.75);
  EXPECT_THROW(spin_probability(1.5), ValidationError);
  EXPECT_DOUBLE_EQ(spin_conditional_mean(0.3), 0.3);
}

TEST(Spin, MatchesTransitionProbability) {
  CounterRng rng(21, 0);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 200; ++k) {
    Axis a = unit_axis(Axis(nd(rng), nd(rng), nd(rng)));
    Axis n = unit_axis(Axis(nd(rng), nd(rng), nd(rng)));
    auto [pm, pp] = spin_probability(a.dot(n));
    EXPECT_NEAR(transition_probability(spin_eigenvector(a, 1), spin_eigenvector(n, 1)), pp, 1e-10);
    EXPECT_NEAR(transition_probability(spin_eigenvector(a, -1), spin_eigenvector(n, 1)), pm, 1e-10);
  }
}

TEST(Spin, OperatorAndRotations) {
  Axis a(0, 0.6, 0.8);
  Mat S = spin_operator(a);
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  EXPECT_NEAR(es.eigenvalues()(0), -1.0, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-12);
  Axis n = unit_axis(Axis(1, 2, 3));
  Mat U = su2_rotation(n, 0.9);
  Eigen::Matrix3d R = so3_rotation(n, 0.9);
  Axis b(1, 0, 0);
  // U (a.sigma) U^dagger = (R a).sigma
  EXPECT_LT(max_abs(U * spin_operator(b) * U.adjoint() - spin_operator(R * b)), 1e-12);
  EXPECT_THROW(spin_model(Axis(1, 1, 0), Axis(1, 0, 0)), ValidationError);
}

TEST(Spin, OperatorFromSampledFamily) {
  Axis a = unit_axis(Axis(0.3, -0.4, 0.5));
  QOperator A = spin_operator_from_family(a, 40, 8);
  EXPECT_LT(A.residual, 1e-8);
  Mat S = spin_operator(a);
  Eigen::SelfAdjointEigenSolver<Mat> ea(A.matrix), es(S);
  EXPECT_LT((ea.eigenvalues() - es.eigenvalues()).cwiseAbs().maxCoeff(), 1e-8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      EXPECT_NEAR(transition_probability(ea.eigenvectors().col(i), ea.eigenvectors().col(j)),
                  transition_probability(es.eigenvectors().col(i), es.eigenvectors().col(j)), 1e-8);
}

TEST(Epr, Exact) {
  EXPECT_NEAR(epr_correlation_exact(0.0), -1.0, 1e-12);
  EXPECT_NEAR(epr_correlation_exact(M_PI / 2), 0.0, 1e-12);
  for (int k = 0; k <= 6; ++k) EXPECT_NEAR(epr_correlation_exact(k * M_PI / 6), -std::cos(k * M_PI / 6), 1e-12);
}

TEST(Epr, MonteCarlo) {
  EprEstimate e = epr_correlation_mc(M_PI / 3, 200000, 5);
  EXPECT_NEAR(e.estimate, -0.5, 4 * e.std_error);
  EXPECT_NEAR(e.mean_a, 0.0, 0.01);
  EXPECT_NEAR(e.mean_b, 0.0, 0.01);
  EprEstimate b = epr_correlation_mc(M_PI / 3, 200000, 5, Observer::B);
  EXPECT_NEAR(b.estimate, e.estimate, 3 * std::hypot(e.std_error, b.std_error));
  EprEstimate again = epr_correlation_mc(M_PI / 3, 200000, 5);
  EXPECT_EQ(again.estimate, e.estimate);
  EXPECT_THROW(epr_correlation_mc(0.0, 0, 1), ValidationError);
}
