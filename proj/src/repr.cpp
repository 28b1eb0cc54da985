#include "symqt/repr.hpp"

#include <algorithm>
#include <cmath>

#include "symqt/error.hpp"

namespace symqt {

Representation::Representation(GroupPtr group, std::vector<Mat> matrices, double tol)
    : group_(std::move(group)), mats_(std::move(matrices)), tol_(tol) {
  const int n = group_->order();
  if (static_cast<int>(mats_.size()) != n) throw ValidationError("representation needs one matrix per element");
  dim_ = static_cast<int>(mats_[0].rows());
  for (int g = 0; g < n; ++g) {
    if (mats_[g].rows() != dim_ || mats_[g].cols() != dim_) throw ValidationError("representation matrices must be square of equal size");
    double u = max_abs(mats_[g].adjoint() * mats_[g] - Mat::Identity(dim_, dim_));
    if (u > tol_) throw ValidationError("matrix of element " + std::to_string(g) + " is not unitary (" + std::to_string(u) + ")");
  }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      double e = max_abs(mats_[group_->mul(g, h)] - mats_[g] * mats_[h]);
      if (e > tol_)
        throw ValidationError("homomorphism fails at (" + std::to_string(g) + ", " + std::to_string(h) + "), error " +
                              std::to_string(e));
    }
}

Representation regular_representation(const GroupAction& action) {
  const int m = action.set_size();
  std::vector<Mat> mats;
  for (int g = 0; g < action.group().order(); ++g) {
    Mat U = Mat::Zero(m, m);
    for (int x = 0; x < m; ++x) U(action.act(g, x), x) = 1.0;
    mats.push_back(std::move(U));
  }
  return Representation(action.group_ptr(), std::move(mats));
}

Representation trivial_representation(GroupPtr group) {
  std::vector<Mat> mats(group->order(), Mat::Identity(1, 1));
  return Representation(std::move(group), std::move(mats));
}

Representation restrict_representation(const Representation& rep, const Mat& basis) {
  std::vector<Mat> mats;
  for (int g = 0; g < rep.group().order(); ++g) {
    const Mat UB = rep(g) * basis;
    double leak = span_excess(basis, UB);
    if (leak > 1e-7) throw HypothesisError("subspace is not invariant (leak " + std::to_string(leak) + ")");
    mats.push_back(basis.adjoint() * UB);
  }
  return Representation(rep.group_ptr(), std::move(mats), std::max(rep.tol(), 1e-8));
}

Vec character(const Representation& rep) {
  Vec chi(rep.group().order());
  for (int g = 0; g < rep.group().order(); ++g) chi(g) = rep(g).trace();
  return chi;
}

cplx character_inner(const Vec& chi1, const Vec& chi2) { return chi1.dot(chi2) / static_cast<double>(chi1.size()); }

bool is_irreducible(const Representation& rep, double tol) {
  Vec chi = character(rep);
  return std::abs(character_inner(chi, chi) - 1.0) < tol;
}

namespace {

struct Leaf {
  Mat basis;
  Vec chi;
};

void refine(const Representation& rep, const Mat& B, const DecomposeOptions& opt, unsigned long long& counter,
            std::vector<Leaf>& out) {
  const int n = rep.group().order();
  std::vector<Mat> R;
  for (int g = 0; g < n; ++g) R.push_back(B.adjoint() * rep(g) * B);
  Vec chi(n);
  for (int g = 0; g < n; ++g) chi(g) = R[g].trace();
  if (B.cols() == 1 || std::abs(character_inner(chi, chi) - 1.0) < 1e-8) {
    out.push_back({B, chi});
    return;
  }
  const int k = static_cast<int>(B.cols());
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    Mat H = random_hermitian(k, opt.seed + 7919ULL * counter++);
    Mat T = Mat::Zero(k, k);
    for (int g = 0; g < n; ++g) T += R[g] * H * R[g].adjoint();
    T /= static_cast<double>(n);
    auto clusters = hermitian_clusters(T, opt.cluster_tol);
    if (clusters.size() < 2) continue;
    bool invariant = true;
    for (const auto& c : clusters)
      for (int g = 0; g < n && invariant; ++g) invariant = span_excess(c.vectors, R[g] * c.vectors) < 1e-8;
    if (!invariant) continue;
    for (const auto& c : clusters) refine(rep, B * c.vectors, opt, counter, out);
    return;
  }
  throw Error("decomposition did not converge: block of dimension " + std::to_string(k) + " has character norm " +
              std::to_string(character_inner(chi, chi).real()));
}

bool same_character(const Vec& a, const Vec& b, double tol) { return (a - b).cwiseAbs().maxCoeff() < tol; }

// Orders characters by dimension, then by values in element order, larger first.
bool character_before(const Vec& a, const Vec& b) {
  if (std::abs(a(0).real() - b(0).real()) > 1e-6) return a(0).real() < b(0).real();
  for (Eigen::Index g = 0; g < a.size(); ++g) {
    if (std::abs(a(g).real() - b(g).real()) > 1e-6) return a(g).real() > b(g).real();
    if (std::abs(a(g).imag() - b(g).imag()) > 1e-6) return a(g).imag() > b(g).imag();
  }
  return false;
}

}  // namespace

std::vector<InvariantSubspace> decompose(const Representation& rep, const DecomposeOptions& opt) {
  std::vector<Leaf> leaves;
  unsigned long long counter = 0;
  refine(rep, Mat::Identity(rep.dim(), rep.dim()), opt, counter, leaves);
  std::vector<Vec> types;
  std::vector<int> type_of;
  for (const auto& l : leaves) {
    int t = -1;
    for (size_t i = 0; i < types.size(); ++i)
      if (same_character(types[i], l.chi, 1e-6)) t = static_cast<int>(i);
    if (t < 0) {
      t = static_cast<int>(types.size());
      types.push_back(l.chi);
    }
    type_of.push_back(t);
  }
  std::vector<int> order(types.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return character_before(types[a], types[b]); });
  std::vector<InvariantSubspace> out;
  for (size_t rank = 0; rank < order.size(); ++rank)
    for (size_t i = 0; i < leaves.size(); ++i)
      if (type_of[i] == order[rank]) {
        InvariantSubspace s;
        s.ambient_dim = rep.dim();
        s.basis = leaves[i].basis;
        s.irreducible = true;
        s.isotypic = static_cast<int>(rank);
        out.push_back(std::move(s));
      }
  return out;
}

std::vector<Representation> irreducible_representations(GroupPtr group, const DecomposeOptions& opt) {
  Representation reg = regular_representation(regular_action(group));
  auto blocks = decompose(reg, opt);
  std::vector<Representation> out;
  int last = -1;
  for (const auto& b : blocks)
    if (b.isotypic != last) {
      out.push_back(restrict_representation(reg, b.basis));
      last = b.isotypic;
    }
  return out;
}

std::vector<Vec> irreducible_characters(GroupPtr group) {
  std::vector<Vec> out;
  for (const auto& r : irreducible_representations(group)) out.push_back(character(r));
  return out;
}

int match_character(const std::vector<Representation>& irreps, const Vec& chi, double tol) {
  for (size_t i = 0; i < irreps.size(); ++i)
    if (same_character(character(irreps[i]), chi, tol)) return static_cast<int>(i);
  return -1;
}

Mat isotypic_projection(const Representation& rep, const Vec& chi) {
  const int n = rep.group().order();
  if (chi.size() != n) throw ValidationError("character length does not match the group order");
  Mat P = Mat::Zero(rep.dim(), rep.dim());
  for (int g = 0; g < n; ++g) P += std::conj(chi(g)) * rep(g);
  P *= chi(rep.group().identity()).real() / n;
  double idem = max_abs(P * P - P), herm = max_abs(P - P.adjoint());
  if (idem > 1e-8 || herm > 1e-8) throw ValidationError("result is not an orthogonal projection; input is not an irreducible character");
  return P;
}

Mat fourier_transform(const Vec& f, const Representation& rep) {
  const int n = rep.group().order();
  if (f.size() != n) throw ValidationError("function must be defined on every group element");
  Mat F = Mat::Zero(rep.dim(), rep.dim());
  for (int g = 0; g < n; ++g) F += f(g) * rep(g);
  return F / static_cast<double>(n);
}

Vec inverse_fourier(const std::vector<Mat>& components, const std::vector<Representation>& irreps) {
  if (components.size() != irreps.size() || irreps.empty())
    throw ValidationError("one Fourier component per irreducible representation is required");
  const FiniteGroup& G = irreps[0].group();
  const int n = G.order();
  int sum_sq = 0;
  for (size_t i = 0; i < irreps.size(); ++i) {
    sum_sq += irreps[i].dim() * irreps[i].dim();
    for (size_t j = 0; j < i; ++j)
      if (same_character(character(irreps[i]), character(irreps[j]), 1e-6))
        throw ValidationError("irreducible list contains a repeated type");
  }
  if (sum_sq != n) throw ValidationError("irreducible list is incomplete: sum of squared dimensions is " + std::to_string(sum_sq));
  Vec f = Vec::Zero(n);
  for (int g = 0; g < n; ++g)
    for (size_t r = 0; r < irreps.size(); ++r)
      f(g) += static_cast<double>(irreps[r].dim()) * (irreps[r](G.inv(g)) * components[r]).trace();
  return f;
}

Subgroup subspace_stabilizer_group(const Representation& rep, const Mat& basis, double tol) {
  Subgroup s{rep.group_ptr(), {}};
  for (int g = 0; g < rep.group().order(); ++g)
    if (span_excess(basis, rep(g) * basis) <= tol) s.members.push_back(g);
  if (!is_subgroup(rep.group(), s.members)) throw Error("stabilizer of the subspace is not a subgroup");
  return s;
}

int intertwiner_dimension(const Representation& rep1, const Representation& rep2, double tol) {
  if (rep1.group_ptr() != rep2.group_ptr() && rep1.group().cayley() != rep2.group().cayley())
    throw ValidationError("representations belong to different groups");
  const int d1 = rep1.dim(), d2 = rep2.dim(), N = d1 * d2;
  Mat gram = Mat::Zero(N, N);
  for (int g = 0; g < rep1.group().order(); ++g) {
    // vec(U1 X - X U2) = (I (x) U1 - U2^T (x) I) vec(X), column-major.
    Mat K = Mat::Zero(N, N);
    const Mat& U1 = rep1(g);
    const Mat& U2 = rep2(g);
    for (int b = 0; b < d2; ++b) K.block(b * d1, b * d1, d1, d1) += U1;
    for (int a = 0; a < d2; ++a)
      for (int b = 0; b < d2; ++b) K.block(a * d1, b * d1, d1, d1) -= U2(b, a) * Mat::Identity(d1, d1);
    gram += K.adjoint() * K;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  int nullity = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < tol) ++nullity;
  return nullity;
}

Mat invariant_span(const Representation& rep, const Mat& vectors, double tol) {
  Mat all(rep.dim(), vectors.cols() * rep.group().order());
  for (int g = 0; g < rep.group().order(); ++g) all.middleCols(g * vectors.cols(), vectors.cols()) = rep(g) * vectors;
  return orthonormal_basis(all, tol);
}

}  // namespace symqt
