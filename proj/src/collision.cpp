#include "steerlab/collision.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "steerlab/errors.hpp"

namespace steerlab {

CollisionConfig::CollisionConfig(double total_time, int collisions)
    : total_time_(total_time), collisions_(collisions) {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw DomainError("CollisionConfig: total time must be positive and finite");
  }
  if (collisions < 1) throw DomainError("CollisionConfig: at least one collision is required");
}

double CollisionConfig::coupling() const { return std::acos(std::exp(-step())); }

ComplexMatrix collision_unitary_unchecked(double g) {
  return cnot(1, 0, 2) * kron(pauli::identity(), rotation_y(g));
}

ComplexMatrix collision_unitary(double g) {
  if (!(g > 0.0 && g < std::numbers::pi / 2)) {
    throw DomainError("collision_unitary: coupling must lie in (0, pi/2)");
  }
  return collision_unitary_unchecked(g);
}

DensityMatrix evolve_joint(const DensityMatrix& rho0, const CollisionConfig& config, int max_collisions) {
  if (rho0.qubit_count() != 1) throw DomainError("evolve_joint: initial system state must be one qubit");
  const int n = config.collisions();
  if (n > max_collisions) {
    throw ResourceError("evolve_joint: " + std::to_string(n) + " collisions exceed the budget of " +
                        std::to_string(max_collisions));
  }
  const int qubits = n + 1;
  ComplexMatrix state = kron(rho0.matrix(), DensityMatrix::ground_state(n).matrix());

  ComplexMatrix rotations = pauli::identity();
  const ComplexMatrix ry = rotation_y(config.coupling());
  for (int i = 0; i < n; ++i) rotations = kron(rotations, ry);
  state = rotations * state * rotations.adjoint();

  for (int i = 1; i <= n; ++i) {
    const ComplexMatrix cx = cnot(i, 0, qubits);
    state = cx * state * cx.adjoint();
  }
  return DensityMatrix::trusted(std::move(state));
}

ChannelMatrix single_step_channel(double g) {
  const ComplexMatrix w = collision_unitary(g);
  const ComplexMatrix ancilla = DensityMatrix::ground_state(1).matrix();
  const int keep_system[] = {0};
  return channel_matrix_of([&](const ComplexMatrix& op) {
    const ComplexMatrix joint = w * kron(op, ancilla) * w.adjoint();
    return partial_trace_operator(joint, 2, keep_system);
  });
}

ComplexMatrix choi_operator(const ChannelMatrix& lambda) {
  const auto apply = [&](const ComplexMatrix& m) {
    Eigen::Vector4d k;
    for (int j = 0; j < 4; ++j) k(j) = (pauli::sigma(j) * m).trace().real();
    // Non-Hermitian inputs |j><k| are handled by splitting into Hermitian parts.
    Eigen::Vector4d k_imag;
    for (int j = 0; j < 4; ++j) k_imag(j) = (pauli::sigma(j) * m).trace().imag();
    const Eigen::Vector4d out_re = lambda * k;
    const Eigen::Vector4d out_im = lambda * k_imag;
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i < 4; ++i) out += 0.5 * Complex(out_re(i), out_im(i)) * pauli::sigma(i);
    return out;
  };
  ComplexMatrix choi = ComplexMatrix::Zero(4, 4);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      ComplexMatrix unit = ComplexMatrix::Zero(2, 2);
      unit(j, k) = 1;
      choi += kron(unit, apply(unit));
    }
  }
  return choi;
}

bool is_cptp(const ChannelMatrix& lambda, const NumericPolicy& policy) {
  const Eigen::RowVector4d first = lambda.row(0);
  if ((first - Eigen::RowVector4d(1, 0, 0, 0)).cwiseAbs().maxCoeff() > policy.psd_slack) return false;
  return min_eigenvalue(choi_operator(lambda)) >= -policy.psd_slack;
}

std::vector<BlochVector> stroboscopic_trajectory(const CollisionConfig& config) {
  const ChannelMatrix step = single_step_channel(config.coupling());
  std::vector<BlochVector> out;
  out.reserve(config.collisions() + 1);
  Eigen::Vector4d k(1, 0, 0, 1);
  for (int c = 0; c <= config.collisions(); ++c) {
    out.push_back(BlochVector{k.tail<3>()});
    k = step * k;
  }
  return out;
}

}  // namespace steerlab
