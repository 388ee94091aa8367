#pragma once

#include <vector>

#include <Eigen/Dense>

#include "steerlab/qmath.hpp"

namespace steerlab {

/// Dephasing time T split into N equal collisions. The per-collision step is
/// t = T / N and the coupling angle g = arccos(exp(-t)).
class CollisionConfig {
 public:
  CollisionConfig(double total_time, int collisions);

  double total_time() const noexcept { return total_time_; }
  int collisions() const noexcept { return collisions_; }
  double step() const noexcept { return total_time_ / collisions_; }
  double coupling() const;

 private:
  double total_time_;
  int collisions_;
};

/// Largest number of collisions the dense simulator accepts by default
/// (system + 5 ancillas = 64-dimensional state).
inline constexpr int kDefaultMaxCollisions = 5;

/// 4x4 real map acting on extended Bloch vectors k = (1, r).
using ChannelMatrix = Eigen::Matrix4d;

/// W = CX (ancilla controls, system target) * (I (x) R_y(g)); system is the
/// more significant factor. Throws DomainError unless g is in (0, pi/2).
ComplexMatrix collision_unitary(double g);

/// Same as collision_unitary but without the range check; g = 0 gives CX.
ComplexMatrix collision_unitary_unchecked(double g);

/// Joint system + environment state after N collisions. Ancillas start in
/// |0><0|; all ancilla rotations are applied first, then the CNOT ladder.
DensityMatrix evolve_joint(const DensityMatrix& rho0, const CollisionConfig& config,
                           int max_collisions = kDefaultMaxCollisions);

/// Bloch representation of one collision, obtained by process tomography of
/// the reduced single-step map on the Pauli basis.
ChannelMatrix single_step_channel(double g);

/// Bloch-representation matrix of an arbitrary single-qubit map.
template <typename Map>
ChannelMatrix channel_matrix_of(Map&& map) {
  ChannelMatrix lambda;
  for (int j = 0; j < 4; ++j) {
    const ComplexMatrix out = map(pauli::sigma(j));
    for (int i = 0; i < 4; ++i) {
      lambda(i, j) = 0.5 * (pauli::sigma(i) * out).trace().real();
    }
  }
  return lambda;
}

/// Choi operator sum_{jk} |j><k| (x) E(|j><k|) of the map described by lambda.
ComplexMatrix choi_operator(const ChannelMatrix& lambda);

/// True when the Choi operator is PSD to the policy slack and the first row
/// is (1, 0, 0, 0).
bool is_cptp(const ChannelMatrix& lambda, const NumericPolicy& policy = kDefaultPolicy);

/// Bloch vectors after k = 0..N collisions, starting from |0><0|.
std::vector<BlochVector> stroboscopic_trajectory(const CollisionConfig& config);

}  // namespace steerlab
