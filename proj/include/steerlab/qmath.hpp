#pragma once

// Dense complex linear algebra for a handful of qubits.
//
// Qubit ordering: qubit 0 is the most significant tensor factor. In the
// collision model qubit 0 is the system and qubits 1..N are the ancillas in
// collision order.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "steerlab/numeric_policy.hpp"

namespace steerlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// sigma_0 = identity, sigma_1..3 = x, y, z.
ComplexMatrix sigma(int index);
}  // namespace pauli

ComplexMatrix rotation_x(double angle);  ///< exp(-i angle sigma_x / 2)
ComplexMatrix rotation_y(double angle);  ///< exp(-i angle sigma_y / 2)
ComplexMatrix rotation_z(double angle);  ///< exp(-i angle sigma_z / 2)

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);

bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultPolicy.hermitian_tol);

/// Smallest eigenvalue of a Hermitian matrix. Closed form for 2x2.
/// Throws DomainError for non-square or non-Hermitian input.
double min_eigenvalue(const ComplexMatrix& m);

/// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd eigenvalues(const ComplexMatrix& m);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& m);

/// Embed a single-qubit operator acting on `qubit` of an n-qubit register.
ComplexMatrix embed_one(const ComplexMatrix& op, int qubit, int num_qubits);

/// Embed a 4x4 operator on (first, second), where `first` is the more
/// significant factor of the 4x4 operator's own basis.
ComplexMatrix embed_two(const ComplexMatrix& op, int first, int second, int num_qubits);

/// Controlled-NOT with the given control and target inside an n-qubit register.
ComplexMatrix cnot(int control, int target, int num_qubits);

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity against `policy`.
  explicit DensityMatrix(ComplexMatrix matrix, const NumericPolicy& policy = kDefaultPolicy);

  static DensityMatrix ground_state(int num_qubits);
  static DensityMatrix maximally_mixed(int num_qubits);
  static DensityMatrix from_pure(const Eigen::VectorXcd& psi);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  int qubit_count() const noexcept { return qubits_; }
  int dimension() const noexcept { return static_cast<int>(matrix_.rows()); }

  /// Wraps a matrix produced by trusted internal code; only the shape is checked.
  static DensityMatrix trusted(ComplexMatrix matrix);

  /// U rho U^dagger.
  DensityMatrix conjugated(const ComplexMatrix& unitary) const;

 private:
  DensityMatrix() = default;

  ComplexMatrix matrix_;
  int qubits_ = 0;
};

/// Reduced state on the qubits listed in `keep` (kept in ascending order).
/// Throws DomainError for out-of-range or duplicate indices.
DensityMatrix partial_trace(const DensityMatrix& state, std::span<const int> keep);

/// Trace over the complementary qubits of an arbitrary (not necessarily
/// normalized) operator.
ComplexMatrix partial_trace_operator(const ComplexMatrix& op, int num_qubits,
                                     std::span<const int> keep);

struct BlochVector {
  Vec3 r = Vec3::Zero();

  double norm() const { return r.norm(); }
  /// Extended representation k = (1, r).
  Eigen::Vector4d extended() const { return {1.0, r.x(), r.y(), r.z()}; }
};

BlochVector bloch_from_density(const DensityMatrix& rho);
DensityMatrix density_from_bloch(const BlochVector& b);

/// (Tr M, Tr sigma_x M, Tr sigma_y M, Tr sigma_z M) for a 2x2 operator.
Eigen::Vector4d pauli_coefficients(const ComplexMatrix& m);
/// Inverse of pauli_coefficients: 0.5 * (v0 I + v . sigma).
ComplexMatrix from_pauli_coefficients(const Eigen::Vector4d& v);

}  // namespace steerlab
