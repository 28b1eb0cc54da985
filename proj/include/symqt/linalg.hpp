#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace symqt {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

constexpr double kDefaultTol = 1e-9;
constexpr double kClusterTol = 1e-7;

// Orthonormal basis for the column span of A; columns below tol are dropped.
Mat orthonormal_basis(const Mat& A, double tol = 1e-9);

// Orthonormal basis of the null space of A.
Mat null_space(const Mat& A, double tol = 1e-9);

// Numerical rank from singular values relative to tol.
int numerical_rank(const Mat& A, double tol = 1e-9);

// Largest distance between a column of B and its projection onto span(basis).
double span_excess(const Mat& basis, const Mat& B);

// Eigenvalue cluster of a Hermitian matrix.
struct EigenCluster {
  double value = 0.0;
  Mat vectors;  // orthonormal columns
  int multiplicity() const { return static_cast<int>(vectors.cols()); }
};

// Eigen-decomposition of a Hermitian matrix with eigenvalues merged within tol.
// Each eigenvector is phased so its first significant coordinate is real positive.
std::vector<EigenCluster> hermitian_clusters(const Mat& H, double tol = kClusterTol);

// Phase a vector so its first coordinate with modulus above tol is real positive.
Vec canonical_phase(const Vec& v, double tol = 1e-9);

// Deterministic seeded complex Gaussian Hermitian matrix.
Mat random_hermitian(int dim, unsigned long long seed);
Vec random_unit_vector(int dim, unsigned long long seed);

double max_abs(const Mat& A);

// JSON as nested arrays of [re, im] pairs, row-major.
nlohmann::ordered_json matrix_to_json(const Mat& A);
Mat matrix_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json vector_to_json(const Vec& v);
Vec vector_from_json(const nlohmann::ordered_json& j);

}  // namespace symqt
