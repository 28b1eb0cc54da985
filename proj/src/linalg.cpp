#include "symqt/linalg.hpp"

#include <algorithm>
#include <random>

#include "symqt/error.hpp"
#include "symqt/rng.hpp"

namespace symqt {

Mat orthonormal_basis(const Mat& A, double tol) {
  if (A.cols() == 0 || A.rows() == 0) return Mat(A.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > tol) ++r;
  return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& A, double tol) {
  const int n = static_cast<int>(A.cols());
  if (A.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > tol) ++r;
  return svd.matrixV().rightCols(n - r);
}

int numerical_rank(const Mat& A, double tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(A);
  const auto& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s(r) > tol) ++r;
  return r;
}

double span_excess(const Mat& basis, const Mat& B) {
  if (B.cols() == 0) return 0.0;
  if (basis.cols() == 0) return B.colwise().norm().maxCoeff();
  Mat resid = B - basis * (basis.adjoint() * B);
  return resid.colwise().norm().maxCoeff();
}

Vec canonical_phase(const Vec& v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      cplx ph = std::conj(v(i)) / std::abs(v(i));
      return v * ph;
    }
  }
  return v;
}

std::vector<EigenCluster> hermitian_clusters(const Mat& H, double tol) {
  Mat Hs = (H + H.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(Hs);
  if (es.info() != Eigen::Success) throw Error("eigen-decomposition failed");
  const RVec& w = es.eigenvalues();
  const Mat& V = es.eigenvectors();
  std::vector<EigenCluster> out;
  Eigen::Index i = 0;
  while (i < w.size()) {
    Eigen::Index j = i + 1;
    while (j < w.size() && w(j) - w(j - 1) <= tol) ++j;
    EigenCluster c;
    c.value = w.segment(i, j - i).mean();
    c.vectors = V.middleCols(i, j - i);
    for (Eigen::Index k = 0; k < c.vectors.cols(); ++k) c.vectors.col(k) = canonical_phase(c.vectors.col(k));
    out.push_back(std::move(c));
    i = j;
  }
  return out;
}

Mat random_hermitian(int dim, unsigned long long seed) {
  CounterRng rng(seed, 17);
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = cplx(nd(rng), nd(rng));
  return (A + A.adjoint()) / 2.0;
}

Vec random_unit_vector(int dim, unsigned long long seed) {
  CounterRng rng(seed, 29);
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(nd(rng), nd(rng));
  return v / v.norm();
}

double max_abs(const Mat& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

nlohmann::ordered_json matrix_to_json(const Mat& A) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j) row.push_back({A(i, j).real(), A(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

static cplx entry_from_json(const nlohmann::ordered_json& e) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw ValidationError("complex entry must be a [re, im] pair");
  return {e[0].get<double>(), e[1].get<double>()};
}

Mat matrix_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_array()) throw ValidationError("matrix must be an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Mat A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols)
      throw ValidationError("matrix row " + std::to_string(i) + " has the wrong length");
    for (Eigen::Index k = 0; k < cols; ++k) A(i, k) = entry_from_json(j[i][k]);
  }
  return A;
}

nlohmann::ordered_json vector_to_json(const Vec& v) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

Vec vector_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_array()) throw ValidationError("vector must be an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = entry_from_json(j[i]);
  return v;
}

}  // namespace symqt
