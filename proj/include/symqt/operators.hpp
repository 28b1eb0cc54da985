#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "symqt/group.hpp"
#include "symqt/linalg.hpp"
#include "symqt/repr.hpp"

namespace symqt {

constexpr double kSolveTol = 1e-8;

struct QOperator {
  Mat matrix;
  bool hermitian = false;
  std::string basis_tag;
  // Diagnostics of the defining linear system.
  double residual = 0.0;            // max |f^dagger A f - target| over the design points
  double fourier_residual = 0.0;    // max entry of sum Q_ij D_ij - chat (irreducible solve only)
  int nullity = 0;                  // dimension of the unconstrained directions
  std::vector<int> unconstrained_blocks;  // decomposition blocks with zero projection of f0
  double cross_block_weight = 0.0;  // Frobenius norm of entries between distinct blocks

  int dim() const { return static_cast<int>(matrix.rows()); }
};

enum class SolveMethod { Orthogonal, NormalEquations };

struct SolveOptions {
  SolveMethod method = SolveMethod::Orthogonal;
  double tol = kSolveTol;
  bool throw_on_residual = true;
};

// Minimum-norm A with w_k^dagger A w_k = t_k for every k. Hermitian unknowns when all
// targets are real, general complex unknowns otherwise. Never throws on residual.
QOperator solve_quadratic_forms(const std::vector<Vec>& states, const std::vector<cplx>& targets,
                                const std::string& tag, SolveMethod method = SolveMethod::Orthogonal,
                                const Mat* extra_rows = nullptr, const Vec* extra_rhs = nullptr);

struct CoherentFamily {
  std::shared_ptr<const Representation> rep;
  std::shared_ptr<const GroupAction> action;
  int base_point = 0;
  Vec f0;
  std::vector<Vec> members;       // indexed by point
  std::vector<int> element_of;    // element_of[x]: the g with g base_point = x
  bool periodic = false;          // two points share the same vector
  bool ray_periodic = false;      // two points share the same ray
  std::string tag;

  int size() const { return static_cast<int>(members.size()); }
};

CoherentFamily coherent_family(const Representation& rep_on_m, const Vec& f0, const GroupAction& action,
                               int base_point = 0, const std::string& tag = "M");

// Operator on an irreducible U reproducing the Fourier component of c at U, stacked with the
// pointwise identity v^dagger U(g)^dagger Q U(g) v = c(g).
QOperator solve_operator_irreducible(const Representation& irrep, const Vec& v, const Vec& c,
                                     const SolveOptions& opt = {});

// A on the representation space with (U(g) f0)^dagger A (U(g) f0) = c(g) for every g.
QOperator build_operator(const Representation& rep, const Vec& f0, const Vec& c, const SolveOptions& opt = {});

// A with f_x^dagger A f_x = q(theta(x)) for every point x; q indexed by value.
QOperator operator_for_parameter(const CoherentFamily& family, const ParametricFunction& theta,
                                 const std::vector<double>& q, const SolveOptions& opt = {});

// Averaging over level sets, on functions over the action set.
QOperator conditional_expectation_projection(const ParametricFunction& theta, const GroupAction& action);

struct DensityOperator {
  QOperator op;
  std::vector<double> prior;
  std::vector<std::string> warnings;
  const Mat& matrix() const { return op.matrix; }
};

DensityOperator density_operator(const std::vector<Vec>& family, std::vector<double> prior, const std::string& tag);
DensityOperator density_from_matrix(const Mat& rho, const std::string& tag);

cplx expectation(const DensityOperator& rho, const QOperator& A);

// Operator of a parametric function together with its labeled spectral projectors.
struct Observable {
  ParametricFunction theta;
  std::vector<double> encoding;
  QOperator op;
  std::vector<EigenCluster> clusters;
  std::vector<int> cluster_value;  // value index of each cluster, -1 if the eigenvalue encodes no value

  // Projector onto the eigenspace of the value; zero matrix if absent from the spectrum.
  Mat projector(int value_index) const;
  std::vector<int> spectrum_values() const;
  const std::string& tag() const { return op.basis_tag; }
};

Observable make_observable(const ParametricFunction& theta, const std::vector<double>& encoding, const QOperator& op,
                           double tol = kClusterTol);

// tr(rho P_C) for the labels in C.
double probability(const DensityOperator& rho, const Observable& obs, const std::vector<std::string>& C);

// sum over spectrum of f(value) times the spectral projector.
QOperator observable_function(const Observable& obs, const std::function<cplx(int value_index)>& f);

// P_C via build_operator from the indicator of C along the orbit of base_point.
QOperator indicator_operator(const GroupAction& action, const ParametricFunction& theta,
                             const std::vector<std::string>& C, int base_point = 0);

}  // namespace symqt
