#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "symqt/linalg.hpp"
#include "symqt/operators.hpp"

namespace symqt {

using Axis = Eigen::Vector3d;

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

// a_x sigma_x + a_y sigma_y + a_z sigma_z.
Mat spin_operator(const Axis& a);
// Unit eigenvector of the spin operator along a with eigenvalue sign (+1 or -1).
Vec spin_eigenvector(const Axis& a, int sign);
// Unit vector on the sphere.
Axis unit_axis(const Axis& a);

// SU(2) element exp(-i angle n.sigma / 2) and the rotation it covers.
Mat su2_rotation(const Axis& n, double angle);
Eigen::Matrix3d so3_rotation(const Axis& n, double angle);

struct SpinModel {
  Axis a;
  Axis b;
  bool epr = false;
  Mat op_a;
  Mat op_b;
};

SpinModel spin_model(const Axis& a, const Axis& b, bool epr = false);

// (P(x = -1), P(x = +1)) given theta_a = cos of the angle to the axis.
std::pair<double, double> spin_probability(double theta_a);
// E(x | phi) = theta_a.
double spin_conditional_mean(double theta_a);

// Operator of theta_a = a . n(R) over coherent states R|up> of random rotations.
QOperator spin_operator_from_family(const Axis& a, int samples, std::uint64_t seed);

double epr_correlation_exact(double u);

enum class Observer { A, B };

struct EprEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  long long n = 0;
  std::uint64_t seed = 0;
};

EprEstimate epr_correlation_mc(double u, long long n_samples, std::uint64_t seed, Observer observer = Observer::A);

}  // namespace symqt
