#include <gtest/gtest.h>

#include <array>

#include "symqt/error.hpp"
#include "symqt/model_io.hpp"
#include "symqt/permissibility.hpp"

using namespace symqt;

namespace {

struct Tri {
  ModelDocument doc = load_model_file(std::string(SYMQT_DATA_DIR) + "/s3_triangle.json");
  const GroupAction& act() const { return *doc.action; }
  const ParametricFunction& p(const char* n) const { return doc.parameter(n); }
};

}  // namespace

TEST(Permissibility, TriangleVerdicts) {
  Tri t;
  EXPECT_TRUE(is_permissible(t.p("theta0"), t.act()));
  for (const char* n : {"theta_a", "theta_b", "theta_c"}) EXPECT_FALSE(is_permissible(t.p(n), t.act())) << n;
}

TEST(Permissibility, WitnessesForLetterA) {
  Tri t;
  auto r = check_permissible(t.p("theta_a"), t.act(), full_subgroup(t.act().group_ptr()));
  ASSERT_FALSE(r.permissible);
  // oracle: first violating pair per element
  std::vector<std::array<int, 3>> want = {{0, 3, 1}, {0, 3, 2}, {0, 3, 4}, {0, 3, 5}};
  ASSERT_EQ(r.witnesses.size(), want.size());
  for (size_t k = 0; k < want.size(); ++k) {
    EXPECT_EQ(r.witnesses[k].phi1, want[k][0]);
    EXPECT_EQ(r.witnesses[k].phi2, want[k][1]);
    EXPECT_EQ(r.witnesses[k].g, want[k][2]);
  }
  // g5 sends point 1 to point 5 with letter C, point 4 to point 3 with letter B
  EXPECT_EQ(t.act().act(4, 0), 4);
  EXPECT_EQ(t.p("theta_a").labels()[4], "C");
  EXPECT_EQ(t.p("theta_a").labels()[t.act().act(4, 3)], "B");
}

TEST(Permissibility, MaximalSubgroups) {
  Tri t;
  EXPECT_EQ(maximal_permissible_subgroup(t.p("theta0"), t.act()).size(), 6);
  EXPECT_EQ(maximal_permissible_subgroup(t.p("theta_a"), t.act()).members, (std::vector<int>{0, 3}));
  EXPECT_EQ(maximal_permissible_subgroup(t.p("theta_b"), t.act()).members, (std::vector<int>{0, 4}));
  EXPECT_EQ(maximal_permissible_subgroup(t.p("theta_c"), t.act()).members, (std::vector<int>{0, 5}));
}

TEST(Permissibility, InducedGroupOnColours) {
  Tri t;
  InducedGroup ig = induced_group(t.p("theta0"), t.act(), full_subgroup(t.act().group_ptr()));
  Table want = {{0, 1}, {0, 1}, {0, 1}, {1, 0}, {1, 0}, {1, 0}};
  EXPECT_EQ(ig.table, want);
  EXPECT_EQ(ig.image().size(), 2u);
  EXPECT_THROW(induced_group(t.p("theta_a"), t.act(), full_subgroup(t.act().group_ptr())), HypothesisError);
  Subgroup ga = maximal_permissible_subgroup(t.p("theta_a"), t.act());
  InducedGroup iga = induced_group(t.p("theta_a"), t.act(), ga);
  // g4 keeps every corner letter at window a
  for (int k = 0; k < 3; ++k) EXPECT_EQ(iga.act(3, k), k);
}

TEST(Permissibility, Ordering) {
  Tri t;
  ParametricFunction id = ParametricFunction::from_indices("id", {0, 1, 2, 3, 4, 5});
  EXPECT_EQ(compare(t.p("theta0"), id), Ordering::Below);
  EXPECT_EQ(compare(id, t.p("theta0")), Ordering::Above);
  EXPECT_EQ(compare(t.p("theta_a"), t.p("theta_b")), Ordering::Incomparable);
  ParametricFunction renamed("r", {"x", "y", "z", "x", "y", "z"});
  EXPECT_EQ(compare(t.p("theta_a"), renamed), Ordering::Equivalent);
  EXPECT_EQ(to_string(Ordering::Incomparable), "incomparable");
}

TEST(Permissibility, FrameAndConsistency) {
  Tri t;
  EXPECT_TRUE(is_frame({t.p("theta_a"), t.p("theta_b")}));
  EXPECT_TRUE(is_frame({t.p("theta0"), t.p("theta_a")}));
  EXPECT_FALSE(is_frame({t.p("theta_a")}));
  // G_a and G_b together generate S3
  EXPECT_TRUE(is_consistent({t.p("theta_a"), t.p("theta_b")}, t.act()));
  EXPECT_FALSE(is_consistent({t.p("theta_a")}, t.act()));
  EXPECT_EQ(compound({t.p("theta0"), t.p("theta_a")}).value_count(), 6);
}

TEST(Permissibility, InvariantSubspace) {
  Tri t;
  auto s = parametric_invariant_subspace(t.p("theta0"), t.act());
  EXPECT_EQ(s.dim(), 2);
  EXPECT_LT(max_abs(s.basis.adjoint() * s.basis - Mat::Identity(2, 2)), 1e-12);
  EXPECT_THROW(parametric_invariant_subspace(t.p("theta_a"), t.act()), HypothesisError);
  Subgroup ga = maximal_permissible_subgroup(t.p("theta_a"), t.act());
  EXPECT_EQ(parametric_invariant_subspace(t.p("theta_a"), t.act(), ga).dim(), 3);
}

TEST(Permissibility, MinimalHyperparameter) {
  Tri t;
  // oracle: coarsest permissible refinements
  ParametricFunction psi0 = minimal_hyperparameter({t.p("theta0")}, t.act());
  EXPECT_EQ(psi0.indices(), (std::vector<int>{0, 0, 0, 1, 1, 1}));
  ParametricFunction psia = minimal_hyperparameter({t.p("theta_a")}, t.act());
  EXPECT_EQ(psia.indices(), (std::vector<int>{0, 1, 2, 3, 4, 5}));
  ParametricFunction psi3 = minimal_hyperparameter({t.p("theta_a"), t.p("theta_b"), t.p("theta_c")}, t.act());
  EXPECT_EQ(psi3.value_count(), 6);
  EXPECT_THROW(minimal_hyperparameter({t.p("theta0")}, t.act(), 4), LimitError);
}

TEST(Permissibility, HaarSplit) {
  Tri t;
  auto rep = haar_split_check(t.p("theta0"), t.act());
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.level_set_sizes, (std::vector<int>{3, 3}));
  EXPECT_EQ(rep.value_orbits, (Partition{{0, 1}}));
  Subgroup ga = maximal_permissible_subgroup(t.p("theta_a"), t.act());
  auto ra = haar_split_check(t.p("theta_a"), t.act(), ga);
  EXPECT_TRUE(ra.ok);
  EXPECT_EQ(ra.value_orbits, (Partition{{0}, {1}, {2}}));
  EXPECT_THROW(haar_split_check(t.p("theta_a"), t.act()), HypothesisError);
}

TEST(Permissibility, TrivialGroupEverythingPermissible) {
  auto g = trivial_group();
  GroupAction act(g, {{0, 1, 2}});
  ParametricFunction f("f", {"x", "y", "x"});
  EXPECT_TRUE(is_permissible(f, act));
  EXPECT_EQ(maximal_permissible_subgroup(f, act).size(), 1);
}
