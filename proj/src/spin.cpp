#include "symqt/spin.hpp"

#include <cmath>
#include <random>

#include "symqt/error.hpp"
#include "symqt/rng.hpp"

namespace symqt {

Mat pauli_x() {
  Mat s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Mat pauli_y() {
  Mat s(2, 2);
  s << 0, cplx(0, -1), cplx(0, 1), 0;
  return s;
}

Mat pauli_z() {
  Mat s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

Axis unit_axis(const Axis& a) {
  double n = a.norm();
  if (n < 1e-12) throw ValidationError("axis must be nonzero");
  return a / n;
}

Mat spin_operator(const Axis& a) { return a(0) * pauli_x() + a(1) * pauli_y() + a(2) * pauli_z(); }

Vec spin_eigenvector(const Axis& a, int sign) {
  if (sign != 1 && sign != -1) throw ValidationError("spin eigenvalue must be +1 or -1");
  Eigen::SelfAdjointEigenSolver<Mat> es(spin_operator(unit_axis(a)));
  return canonical_phase(es.eigenvectors().col(sign > 0 ? 1 : 0));
}

Mat su2_rotation(const Axis& n, double angle) {
  Axis u = unit_axis(n);
  return std::cos(angle / 2) * Mat::Identity(2, 2) - cplx(0, std::sin(angle / 2)) * spin_operator(u);
}

Eigen::Matrix3d so3_rotation(const Axis& n, double angle) {
  return Eigen::AngleAxisd(angle, unit_axis(n)).toRotationMatrix();
}

SpinModel spin_model(const Axis& a, const Axis& b, bool epr) {
  if (std::abs(a.norm() - 1.0) > 1e-9 || std::abs(b.norm() - 1.0) > 1e-9) throw ValidationError("axes must be unit vectors");
  return SpinModel{a, b, epr, spin_operator(a), spin_operator(b)};
}

std::pair<double, double> spin_probability(double theta_a) {
  if (!(theta_a >= -1.0 && theta_a <= 1.0)) throw ValidationError("theta_a must lie in [-1, 1]");
  return {(1.0 - theta_a) / 2.0, (1.0 + theta_a) / 2.0};
}

double spin_conditional_mean(double theta_a) {
  auto [pm, pp] = spin_probability(theta_a);
  return pp - pm;
}

QOperator spin_operator_from_family(const Axis& a, int samples, std::uint64_t seed) {
  if (samples < 4) throw ValidationError("need at least 4 sampled rotations");
  CounterRng rng(seed, 3);
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec up(2);
  up << 1, 0;
  std::vector<Vec> states;
  std::vector<cplx> targets;
  for (int k = 0; k < samples; ++k) {
    Eigen::Quaterniond q(nd(rng), nd(rng), nd(rng), nd(rng));
    q.normalize();
    Eigen::AngleAxisd aa(q);
    states.push_back(su2_rotation(aa.axis(), aa.angle()) * up);
    targets.push_back(a.dot(aa.toRotationMatrix() * Axis::UnitZ()));
  }
  return solve_quadratic_forms(states, targets, "spin");
}

double epr_correlation_exact(double u) {
  // Observer A's prior puts 1/2 on psi = a and on psi = -a; given theta_a the partner's
  // b-component is -theta_a cos u and E(x_b | psi) equals it.
  double e = 0.0;
  for (double theta_a : {1.0, -1.0}) e += 0.5 * spin_conditional_mean(theta_a) * spin_conditional_mean(-theta_a * std::cos(u));
  return e;
}

EprEstimate epr_correlation_mc(double u, long long n_samples, std::uint64_t seed, Observer observer) {
  if (n_samples < 1) throw ValidationError("need at least one sample");
  CounterRng rng(seed, observer == Observer::A ? 11 : 13);
  const double c = std::cos(u);
  double sum = 0.0, sum_sq = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (long long i = 0; i < n_samples; ++i) {
    // theta of the observer holding the prior, then the partner's component along its axis.
    double theta_own = rng.uniform() < 0.5 ? 1.0 : -1.0;
    double theta_other = -theta_own * c;
    double x_own = rng.uniform() < spin_probability(theta_own).second ? 1.0 : -1.0;
    double x_other = rng.uniform() < spin_probability(theta_other).second ? 1.0 : -1.0;
    double xa = observer == Observer::A ? x_own : x_other;
    double xb = observer == Observer::A ? x_other : x_own;
    sum += xa * xb;
    sum_sq += xa * xb * xa * xb;
    sum_a += xa;
    sum_b += xb;
  }
  EprEstimate e;
  const double n = static_cast<double>(n_samples);
  e.n = n_samples;
  e.seed = seed;
  e.estimate = sum / n;
  e.mean_a = sum_a / n;
  e.mean_b = sum_b / n;
  double var = n_samples > 1 ? std::max(0.0, (sum_sq - n * e.estimate * e.estimate) / (n - 1)) : 0.0;
  e.std_error = std::sqrt(var / n);
  return e;
}

}  // namespace symqt
