#pragma once

#include <vector>

#include "symqt/group.hpp"
#include "symqt/linalg.hpp"

namespace symqt {

constexpr unsigned long long kDecomposeSeed = 0x5eed2024ULL;

// Unitary matrix representation of a finite group.
class Representation {
 public:
  // Validates homomorphism and unitarity within tol.
  Representation(GroupPtr group, std::vector<Mat> matrices, double tol = kDefaultTol);

  const FiniteGroup& group() const { return *group_; }
  GroupPtr group_ptr() const { return group_; }
  int dim() const { return dim_; }
  const Mat& operator()(int g) const { return mats_[g]; }
  const std::vector<Mat>& matrices() const { return mats_; }
  double tol() const { return tol_; }

 private:
  GroupPtr group_;
  int dim_ = 0;
  std::vector<Mat> mats_;
  double tol_;
};

struct InvariantSubspace {
  int ambient_dim = 0;
  Mat basis;  // ambient_dim x k, orthonormal columns
  bool irreducible = false;
  int isotypic = -1;  // index of the irreducible type, -1 if unassigned
  int dim() const { return static_cast<int>(basis.cols()); }
};

// (U(g) f)(x) = f(g^{-1} x) on functions over the action set.
Representation regular_representation(const GroupAction& action);
Representation trivial_representation(GroupPtr group);

// Restriction to an invariant subspace, expressed in the subspace basis: B^dagger U(g) B.
Representation restrict_representation(const Representation& rep, const Mat& basis);

Vec character(const Representation& rep);
// (1/|G|) sum_g conj(chi1(g)) chi2(g).
cplx character_inner(const Vec& chi1, const Vec& chi2);
bool is_irreducible(const Representation& rep, double tol = 1e-8);

struct DecomposeOptions {
  unsigned long long seed = kDecomposeSeed;
  double cluster_tol = kClusterTol;
  int max_attempts = 16;
};

// Orthogonal decomposition into irreducible invariant subspaces, ordered by
// irreducible type (first appearance after sorting by dimension, then character).
std::vector<InvariantSubspace> decompose(const Representation& rep, const DecomposeOptions& opt = {});

// One representative of each irreducible type, extracted from the regular representation.
std::vector<Representation> irreducible_representations(GroupPtr group, const DecomposeOptions& opt = {});
std::vector<Vec> irreducible_characters(GroupPtr group);

// Index of the type in irreps whose character matches chi, or -1.
int match_character(const std::vector<Representation>& irreps, const Vec& chi, double tol = 1e-7);

// P = d/|G| sum_g conj(chi(g)) U(g); throws if the result is not a projection.
Mat isotypic_projection(const Representation& rep, const Vec& chi);

// (1/|G|) sum_g f(g) U(g).
Mat fourier_transform(const Vec& f, const Representation& rep);
// f(g) = sum_r d_r tr(U_r(g^{-1}) fhat_r); requires a complete set of irreducible types.
Vec inverse_fourier(const std::vector<Mat>& components, const std::vector<Representation>& irreps);

// {g : U(g) maps span(basis) into itself}.
Subgroup subspace_stabilizer_group(const Representation& rep, const Mat& basis, double tol = kDefaultTol);

// dim {A : U1(g) A = A U2(g) for all g}.
int intertwiner_dimension(const Representation& rep1, const Representation& rep2, double tol = 1e-8);

// Smallest invariant subspace containing the given vectors.
Mat invariant_span(const Representation& rep, const Mat& vectors, double tol = kDefaultTol);

}  // namespace symqt
