#include "symqt/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "symqt/error.hpp"
#include "symqt/permissibility.hpp"

namespace symqt {

namespace {

// Hermitian basis orthonormal in the Frobenius inner product.
std::vector<Mat> hermitian_basis(int d) {
  std::vector<Mat> B;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    Mat E = Mat::Zero(d, d);
    E(i, i) = 1.0;
    B.push_back(E);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Mat E = Mat::Zero(d, d);
      E(i, j) = s;
      E(j, i) = s;
      B.push_back(E);
      Mat F = Mat::Zero(d, d);
      F(i, j) = cplx(0.0, s);
      F(j, i) = cplx(0.0, -s);
      B.push_back(F);
    }
  return B;
}

template <class M, class V>
V min_norm_solve(const M& A, const V& b, SolveMethod method, int* rank) {
  using Scalar = typename M::Scalar;
  if (method == SolveMethod::Orthogonal) {
    Eigen::CompleteOrthogonalDecomposition<M> cod;
    cod.setThreshold(1e-10);
    cod.compute(A);
    *rank = static_cast<int>(cod.rank());
    return cod.solve(b);
  }
  M G = A.adjoint() * A;
  V y = A.adjoint() * b;
  Eigen::SelfAdjointEigenSolver<M> es(G);
  const auto& w = es.eigenvalues();
  const double cut = std::max(w.cwiseAbs().maxCoeff(), 1.0) * 1e-20;
  V x = V::Zero(A.cols());
  *rank = 0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w(k) <= cut) continue;
    ++*rank;
    auto vk = es.eigenvectors().col(k);
    Scalar coef = vk.dot(y) / w(k);
    x += coef * vk;
  }
  return x;
}

double pointwise_residual(const Mat& A, const std::vector<Vec>& states, const std::vector<cplx>& targets) {
  double r = 0.0;
  for (size_t k = 0; k < states.size(); ++k) {
    cplx q = states[k].dot(A * states[k]);
    r = std::max(r, std::abs(q - targets[k]));
  }
  return r;
}

bool all_real(const std::vector<cplx>& t) {
  for (const auto& x : t)
    if (std::abs(x.imag()) > 1e-12 * std::max(1.0, std::abs(x))) return false;
  return true;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

}  // namespace

QOperator solve_quadratic_forms(const std::vector<Vec>& states, const std::vector<cplx>& targets,
                                const std::string& tag, SolveMethod method, const Mat* extra_rows,
                                const Vec* extra_rhs) {
  if (states.empty() || states.size() != targets.size())
    throw ValidationError("need one target per state and at least one state");
  const int d = static_cast<int>(states[0].size());
  for (const auto& s : states)
    if (s.size() != d) throw ValidationError("states have different dimensions");
  const int K = static_cast<int>(states.size());
  const int E = extra_rows ? static_cast<int>(extra_rows->rows()) : 0;
  QOperator out;
  out.basis_tag = tag;
  out.hermitian = all_real(targets);
  if (out.hermitian) {
    auto B = hermitian_basis(d);
    const int U = static_cast<int>(B.size());
    RMat M(K + 2 * E, U);
    RVec rhs(K + 2 * E);
    for (int k = 0; k < K; ++k) {
      for (int b = 0; b < U; ++b) M(k, b) = states[k].dot(B[b] * states[k]).real();
      rhs(k) = targets[k].real();
    }
    for (int e = 0; e < E; ++e) {
      for (int b = 0; b < U; ++b) {
        cplx coef = 0.0;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) coef += (*extra_rows)(e, i * d + j) * B[b](i, j);
        M(K + 2 * e, b) = coef.real();
        M(K + 2 * e + 1, b) = coef.imag();
      }
      rhs(K + 2 * e) = (*extra_rhs)(e).real();
      rhs(K + 2 * e + 1) = (*extra_rhs)(e).imag();
    }
    int rank = 0;
    RVec x = min_norm_solve(M, rhs, method, &rank);
    out.matrix = Mat::Zero(d, d);
    for (int b = 0; b < U; ++b) out.matrix += x(b) * B[b];
    out.nullity = U - rank;
  } else {
    const int U = d * d;
    Mat M(K + E, U);
    Vec rhs(K + E);
    for (int k = 0; k < K; ++k) {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M(k, i * d + j) = std::conj(states[k](i)) * states[k](j);
      rhs(k) = targets[k];
    }
    if (E) {
      M.bottomRows(E) = *extra_rows;
      rhs.tail(E) = *extra_rhs;
    }
    int rank = 0;
    Vec x = min_norm_solve(M, rhs, method, &rank);
    out.matrix = Mat(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out.matrix(i, j) = x(i * d + j);
    out.nullity = U - rank;
  }
  out.residual = pointwise_residual(out.matrix, states, targets);
  return out;
}

CoherentFamily coherent_family(const Representation& rep_on_m, const Vec& f0, const GroupAction& action, int base_point,
                               const std::string& tag) {
  if (rep_on_m.group_ptr() != action.group_ptr() && rep_on_m.group().cayley() != action.group().cayley())
    throw ValidationError("representation and action use different groups");
  if (f0.size() != rep_on_m.dim()) throw ValidationError("f0 has the wrong dimension");
  if (std::abs(f0.norm() - 1.0) > 1e-9) throw ValidationError("f0 must have unit norm");
  if (base_point < 0 || base_point >= action.set_size()) throw ValidationError("base point out of range");
  Subgroup G = full_subgroup(action.group_ptr());
  if (!is_transitive(action, G)) throw HypothesisError("coherent family needs a transitive action");
  if (!is_exact(action, G)) throw HypothesisError("coherent family needs an exact action");
  CoherentFamily fam;
  fam.rep = std::make_shared<Representation>(rep_on_m);
  fam.action = std::make_shared<GroupAction>(action);
  fam.base_point = base_point;
  fam.f0 = f0;
  fam.tag = tag;
  fam.members.assign(action.set_size(), Vec());
  fam.element_of.assign(action.set_size(), -1);
  for (int g = 0; g < action.group().order(); ++g) {
    int x = action.act(g, base_point);
    fam.element_of[x] = g;
    fam.members[x] = rep_on_m(g) * f0;
  }
  for (int x = 0; x < fam.size(); ++x)
    for (int y = x + 1; y < fam.size(); ++y) {
      if ((fam.members[x] - fam.members[y]).norm() < 1e-9) fam.periodic = true;
      if (std::abs(std::abs(fam.members[x].dot(fam.members[y])) - 1.0) < 1e-9) fam.ray_periodic = true;
    }
  return fam;
}

QOperator solve_operator_irreducible(const Representation& irrep, const Vec& v, const Vec& c, const SolveOptions& opt) {
  const int n = irrep.group().order();
  const int d = irrep.dim();
  if (!is_irreducible(irrep)) throw HypothesisError("representation is reducible");
  if (v.size() != d || v.norm() < 1e-12) throw ValidationError("v must be a nonzero vector of the irrep's dimension");
  if (c.size() != n) throw ValidationError("c must be defined on every group element");
  std::vector<Vec> states;
  std::vector<cplx> targets;
  for (int g = 0; g < n; ++g) {
    states.push_back(irrep(g) * v);
    targets.push_back(c(g));
  }
  // D_ij = (1/|G|) sum_g conj(w_i) w_j U(g), w = U(g) v.
  std::vector<Mat> D(d * d, Mat::Zero(d, d));
  for (int g = 0; g < n; ++g)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) D[i * d + j] += std::conj(states[g](i)) * states[g](j) * irrep(g);
  for (auto& m : D) m /= static_cast<double>(n);
  const Mat chat = fourier_transform(c, irrep);
  Mat rows(d * d, d * d);
  Vec rhs(d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      for (int ij = 0; ij < d * d; ++ij) rows(a * d + b, ij) = D[ij](a, b);
      rhs(a * d + b) = chat(a, b);
    }
  QOperator Q = solve_quadratic_forms(states, targets, "irrep", opt.method, &rows, &rhs);
  Mat lhs = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lhs += Q.matrix(i, j) * D[i * d + j];
  Q.fourier_residual = max_abs(lhs - chat);
  if (opt.throw_on_residual && std::max(Q.residual, Q.fourier_residual) > opt.tol)
    throw ResidualError("c is not reachable on this irrep: pointwise residual " + fmt(Q.residual) +
                            ", Fourier residual " + fmt(Q.fourier_residual),
                        std::max(Q.residual, Q.fourier_residual));
  return Q;
}

QOperator build_operator(const Representation& rep, const Vec& f0, const Vec& c, const SolveOptions& opt) {
  const int n = rep.group().order();
  if (f0.size() != rep.dim()) throw ValidationError("f0 has the wrong dimension");
  if (c.size() != n) throw ValidationError("c must be defined on every group element");
  std::vector<Vec> states;
  std::vector<cplx> targets;
  for (int g = 0; g < n; ++g) {
    states.push_back(rep(g) * f0);
    targets.push_back(c(g));
  }
  QOperator A = solve_quadratic_forms(states, targets, "rep", opt.method);
  auto blocks = decompose(rep);
  Mat S(rep.dim(), rep.dim());
  std::vector<int> block_of;
  int col = 0;
  for (size_t b = 0; b < blocks.size(); ++b) {
    S.middleCols(col, blocks[b].dim()) = blocks[b].basis;
    col += blocks[b].dim();
    for (int k = 0; k < blocks[b].dim(); ++k) block_of.push_back(static_cast<int>(b));
    if ((blocks[b].basis.adjoint() * f0).norm() < 1e-9) A.unconstrained_blocks.push_back(static_cast<int>(b));
  }
  Mat Ad = S.adjoint() * A.matrix * S;
  double cross = 0.0;
  for (int i = 0; i < rep.dim(); ++i)
    for (int j = 0; j < rep.dim(); ++j)
      if (block_of[i] != block_of[j]) cross += std::norm(Ad(i, j));
  A.cross_block_weight = std::sqrt(cross);
  if (opt.throw_on_residual && A.residual > opt.tol) {
    Vec r(n);
    for (int g = 0; g < n; ++g) r(g) = c(g) - states[g].dot(A.matrix * states[g]);
    auto irreps = irreducible_representations(rep.group_ptr());
    std::string missing;
    for (size_t t = 0; t < irreps.size(); ++t) {
      if (max_abs(fourier_transform(r, irreps[t])) <= opt.tol) continue;
      Mat P = isotypic_projection(rep, character(irreps[t]));
      if ((P * f0).norm() < 1e-9)
        missing += (missing.empty() ? "" : ", ") + std::string("type ") + std::to_string(t) + " (dimension " +
                   std::to_string(irreps[t].dim()) + ")";
    }
    if (!missing.empty())
      throw HypothesisError("f_r = 0 on irreducible block " + missing + " where c has a nonzero component");
    throw ResidualError("c has components the domain cannot reach: residual " + fmt(A.residual), A.residual);
  }
  return A;
}

QOperator operator_for_parameter(const CoherentFamily& family, const ParametricFunction& theta,
                                 const std::vector<double>& q, const SolveOptions& opt) {
  if (theta.size() != family.size()) throw ValidationError("parameter and family have different point counts");
  if (static_cast<int>(q.size()) != theta.value_count()) throw ValidationError("q needs one value per label");
  std::vector<cplx> targets;
  for (int x = 0; x < theta.size(); ++x) targets.push_back(q[theta.index(x)]);
  QOperator A = solve_quadratic_forms(family.members, targets, family.tag, opt.method);
  if (opt.throw_on_residual && A.residual > opt.tol)
    throw HypothesisError("V_a does not contain M for " + theta.name() + ": residual " + fmt(A.residual));
  return A;
}

QOperator conditional_expectation_projection(const ParametricFunction& theta, const GroupAction& action) {
  if (!is_permissible(theta, action))
    throw HypothesisError(theta.name() + " is not permissible; the level-set average is not equivariant");
  const int m = action.set_size();
  QOperator P;
  P.basis_tag = "L2";
  P.hermitian = true;
  P.matrix = Mat::Zero(m, m);
  for (int k = 0; k < theta.value_count(); ++k) {
    auto ls = theta.level_set(k);
    for (int x : ls)
      for (int y : ls) P.matrix(x, y) = 1.0 / static_cast<double>(ls.size());
  }
  return P;
}

DensityOperator density_operator(const std::vector<Vec>& family, std::vector<double> prior, const std::string& tag) {
  if (family.empty() || family.size() != prior.size()) throw ValidationError("need one prior weight per family member");
  double sum = 0.0;
  for (double p : prior) {
    if (p < -1e-12) throw ValidationError("prior has a negative weight");
    sum += p;
  }
  DensityOperator rho;
  if (std::abs(sum - 1.0) > 1e-6) throw ValidationError("prior sums to " + std::to_string(sum) + ", not 1");
  if (std::abs(sum - 1.0) > 1e-15) {
    rho.warnings.push_back("prior renormalized from total " + std::to_string(sum));
    for (double& p : prior) p /= sum;
  }
  const int d = static_cast<int>(family[0].size());
  rho.op.matrix = Mat::Zero(d, d);
  for (size_t k = 0; k < family.size(); ++k) {
    if (family[k].size() != d) throw ValidationError("family members have different dimensions");
    rho.op.matrix += prior[k] * family[k] * family[k].adjoint() / family[k].squaredNorm();
  }
  rho.op.matrix = (rho.op.matrix + rho.op.matrix.adjoint()) / 2.0;
  rho.op.hermitian = true;
  rho.op.basis_tag = tag;
  rho.prior = std::move(prior);
  return rho;
}

DensityOperator density_from_matrix(const Mat& rho, const std::string& tag) {
  if (rho.rows() != rho.cols()) throw ValidationError("density matrix must be square");
  if (max_abs(rho - rho.adjoint()) > 1e-9) throw ValidationError("density matrix must be Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-9) throw ValidationError("density matrix must have trace 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10) throw ValidationError("density matrix must be positive semidefinite");
  DensityOperator out;
  out.op.matrix = rho;
  out.op.hermitian = true;
  out.op.basis_tag = tag;
  return out;
}

cplx expectation(const DensityOperator& rho, const QOperator& A) {
  if (rho.op.basis_tag != A.basis_tag)
    throw ValidationError("basis mismatch: state '" + rho.op.basis_tag + "' vs operator '" + A.basis_tag + "'");
  if (rho.op.dim() != A.dim()) throw ValidationError("dimension mismatch between state and operator");
  return (A.matrix * rho.op.matrix).trace();
}

Mat Observable::projector(int value_index) const {
  const int d = op.dim();
  Mat P = Mat::Zero(d, d);
  for (size_t c = 0; c < clusters.size(); ++c)
    if (cluster_value[c] == value_index) P += clusters[c].vectors * clusters[c].vectors.adjoint();
  return P;
}

std::vector<int> Observable::spectrum_values() const {
  std::vector<int> out;
  for (int v : cluster_value)
    if (v >= 0) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

Observable make_observable(const ParametricFunction& theta, const std::vector<double>& encoding, const QOperator& op,
                           double tol) {
  if (static_cast<int>(encoding.size()) != theta.value_count()) throw ValidationError("encoding needs one value per label");
  for (size_t i = 0; i < encoding.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (std::abs(encoding[i] - encoding[j]) <= tol) throw ValidationError("encoding of " + theta.name() + " is not injective");
  Observable obs;
  obs.theta = theta;
  obs.encoding = encoding;
  obs.op = op;
  obs.clusters = hermitian_clusters(op.matrix, tol);
  for (const auto& c : obs.clusters) {
    int label = -1;
    for (size_t k = 0; k < encoding.size(); ++k)
      if (std::abs(encoding[k] - c.value) <= tol) label = static_cast<int>(k);
    obs.cluster_value.push_back(label);
  }
  return obs;
}

double probability(const DensityOperator& rho, const Observable& obs, const std::vector<std::string>& C) {
  if (rho.op.basis_tag != obs.tag())
    throw ValidationError("basis mismatch: state '" + rho.op.basis_tag + "' vs operator '" + obs.tag() + "'");
  std::vector<int> idx;
  for (const auto& l : C) {
    int k = obs.theta.value_index(l);
    if (k < 0) throw ValidationError("unknown label '" + l + "' for " + obs.theta.name());
    if (std::find(idx.begin(), idx.end(), k) == idx.end()) idx.push_back(k);
  }
  double p = 0.0;
  for (int k : idx) p += (rho.matrix() * obs.projector(k)).trace().real();
  if (p < -1e-9 || p > 1.0 + 1e-9) throw Error("probability out of range: " + std::to_string(p));
  return std::clamp(p, 0.0, 1.0);
}

QOperator observable_function(const Observable& obs, const std::function<cplx(int)>& f) {
  QOperator out;
  out.basis_tag = obs.tag();
  out.matrix = Mat::Zero(obs.op.dim(), obs.op.dim());
  out.hermitian = true;
  for (size_t c = 0; c < obs.clusters.size(); ++c) {
    if (obs.cluster_value[c] < 0)
      throw HypothesisError("eigenvalue " + std::to_string(obs.clusters[c].value) + " of " + obs.theta.name() +
                            " encodes no value");
    cplx fv = f(obs.cluster_value[c]);
    if (std::abs(fv.imag()) > 1e-12) out.hermitian = false;
    out.matrix += fv * obs.clusters[c].vectors * obs.clusters[c].vectors.adjoint();
  }
  return out;
}

QOperator indicator_operator(const GroupAction& action, const ParametricFunction& theta,
                             const std::vector<std::string>& C, int base_point) {
  Representation reg = regular_representation(action);
  std::vector<char> in(theta.value_count(), 0);
  for (const auto& l : C) {
    int k = theta.value_index(l);
    if (k < 0) throw ValidationError("unknown label '" + l + "' for " + theta.name());
    in[k] = 1;
  }
  Vec f0 = Vec::Zero(action.set_size());
  f0(base_point) = 1.0;
  Vec c(action.group().order());
  for (int g = 0; g < action.group().order(); ++g) c(g) = in[theta.index(action.act(g, base_point))] ? 1.0 : 0.0;
  QOperator P = build_operator(reg, f0, c);
  P.basis_tag = "L2";
  return P;
}

}  // namespace symqt
