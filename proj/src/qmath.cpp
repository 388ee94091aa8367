#include "steerlab/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "steerlab/errors.hpp"

namespace steerlab {

namespace {

constexpr Complex kI{0.0, 1.0};

int qubits_for_dimension(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d *= 2;
    ++n;
  }
  if (d != dim) throw DomainError("matrix dimension " + std::to_string(dim) + " is not a power of two");
  return n;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DomainError(std::string(what) + ": matrix must be square and non-empty");
  }
}

}  // namespace

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix sigma(int index) {
  switch (index) {
    case 0: return identity();
    case 1: return x();
    case 2: return y();
    case 3: return z();
    default: throw DomainError("Pauli index must be in 0..3");
  }
}
}  // namespace pauli

ComplexMatrix rotation_x(double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  ComplexMatrix m(2, 2);
  m << c, -kI * s, -kI * s, c;
  return m;
}

ComplexMatrix rotation_y(double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  ComplexMatrix m(2, 2);
  m << c, -s, s, c;
  return m;
}

ComplexMatrix rotation_z(double angle) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::exp(-kI * (angle / 2));
  m(1, 1) = std::exp(kI * (angle / 2));
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

double min_eigenvalue(const ComplexMatrix& m) {
  require_square(m, "min_eigenvalue");
  if (!is_hermitian(m)) throw DomainError("min_eigenvalue: matrix is not Hermitian");
  if (m.rows() == 1) return m(0, 0).real();
  if (m.rows() == 2) {
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const double half_gap = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    return 0.5 * (a + d) - half_gap;
  }
  return eigenvalues(m)(0);
}

Eigen::VectorXd eigenvalues(const ComplexMatrix& m) {
  require_square(m, "eigenvalues");
  if (!is_hermitian(m)) throw DomainError("eigenvalues: matrix is not Hermitian");
  if (m.rows() == 2) {
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const double half_gap = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    Eigen::VectorXd ev(2);
    ev << 0.5 * (a + d) - half_gap, 0.5 * (a + d) + half_gap;
    return ev;
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double trace_norm(const ComplexMatrix& m) { return eigenvalues(m).cwiseAbs().sum(); }

ComplexMatrix embed_one(const ComplexMatrix& op, int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits) throw DomainError("embed_one: qubit index out of range");
  const auto left = ComplexMatrix::Identity(Eigen::Index{1} << qubit, Eigen::Index{1} << qubit);
  const auto right_dim = Eigen::Index{1} << (num_qubits - qubit - 1);
  const auto right = ComplexMatrix::Identity(right_dim, right_dim);
  return kron(kron(left, op), right);
}

ComplexMatrix embed_two(const ComplexMatrix& op, int first, int second, int num_qubits) {
  if (first == second || first < 0 || second < 0 || first >= num_qubits || second >= num_qubits) {
    throw DomainError("embed_two: invalid qubit pair");
  }
  if (op.rows() != 4 || op.cols() != 4) throw DomainError("embed_two: operator must be 4x4");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  const int shift_first = num_qubits - 1 - first;
  const int shift_second = num_qubits - 1 - second;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int in_pair = static_cast<int>(((col >> shift_first) & 1) << 1 | ((col >> shift_second) & 1));
    const Eigen::Index base = col & ~((Eigen::Index{1} << shift_first) | (Eigen::Index{1} << shift_second));
    for (int out_pair = 0; out_pair < 4; ++out_pair) {
      const Complex amp = op(out_pair, in_pair);
      if (amp == Complex{}) continue;
      const Eigen::Index row = base | (Eigen::Index{(out_pair >> 1) & 1} << shift_first) |
                               (Eigen::Index{out_pair & 1} << shift_second);
      out(row, col) += amp;
    }
  }
  return out;
}

ComplexMatrix cnot(int control, int target, int num_qubits) {
  ComplexMatrix cx = ComplexMatrix::Zero(4, 4);
  cx(0, 0) = cx(1, 1) = 1;
  cx(2, 3) = cx(3, 2) = 1;
  return embed_two(cx, control, target, num_qubits);
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix matrix, const NumericPolicy& policy)
    : matrix_(std::move(matrix)) {
  require_square(matrix_, "DensityMatrix");
  qubits_ = qubits_for_dimension(matrix_.rows());
  if (!is_hermitian(matrix_, policy.hermitian_tol)) throw DomainError("DensityMatrix: not Hermitian");
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > policy.trace_tol) {
    throw DomainError("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
  }
  if (min_eigenvalue(matrix_) < -policy.psd_slack) throw DomainError("DensityMatrix: not positive semidefinite");
}

DensityMatrix DensityMatrix::trusted(ComplexMatrix matrix) {
  require_square(matrix, "DensityMatrix");
  DensityMatrix out;
  out.qubits_ = qubits_for_dimension(matrix.rows());
  out.matrix_ = std::move(matrix);
  return out;
}

DensityMatrix DensityMatrix::ground_state(int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(0, 0) = 1;
  return trusted(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  return trusted(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw DomainError("from_pure: zero vector");
  const Eigen::VectorXcd u = psi / n;
  return trusted(u * u.adjoint());
}

DensityMatrix DensityMatrix::conjugated(const ComplexMatrix& unitary) const {
  return trusted(unitary * matrix_ * unitary.adjoint());
}

ComplexMatrix partial_trace_operator(const ComplexMatrix& op, int num_qubits, std::span<const int> keep) {
  if (op.rows() != (Eigen::Index{1} << num_qubits) || op.cols() != op.rows()) {
    throw DomainError("partial_trace: operator dimension does not match qubit count");
  }
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw DomainError("partial_trace: duplicate qubit index");
  }
  for (int q : kept) {
    if (q < 0 || q >= num_qubits) throw DomainError("partial_trace: qubit index out of range");
  }
  std::vector<int> traced;
  for (int q = 0; q < num_qubits; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }

  const auto compose = [&](const std::vector<int>& qubits, Eigen::Index sub, Eigen::Index other,
                           const std::vector<int>& other_qubits) {
    Eigen::Index full = 0;
    const int k = static_cast<int>(qubits.size());
    for (int j = 0; j < k; ++j) {
      full |= ((sub >> (k - 1 - j)) & 1) << (num_qubits - 1 - qubits[j]);
    }
    const int m = static_cast<int>(other_qubits.size());
    for (int j = 0; j < m; ++j) {
      full |= ((other >> (m - 1 - j)) & 1) << (num_qubits - 1 - other_qubits[j]);
    }
    return full;
  };

  const Eigen::Index kdim = Eigen::Index{1} << kept.size();
  const Eigen::Index tdim = Eigen::Index{1} << traced.size();
  ComplexMatrix out = ComplexMatrix::Zero(kdim, kdim);
  for (Eigen::Index i = 0; i < kdim; ++i) {
    for (Eigen::Index j = 0; j < kdim; ++j) {
      Complex acc{};
      for (Eigen::Index t = 0; t < tdim; ++t) {
        acc += op(compose(kept, i, t, traced), compose(kept, j, t, traced));
      }
      out(i, j) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& state, std::span<const int> keep) {
  return DensityMatrix::trusted(partial_trace_operator(state.matrix(), state.qubit_count(), keep));
}

Eigen::Vector4d pauli_coefficients(const ComplexMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DomainError("pauli_coefficients: expected a 2x2 operator");
  return {(m(0, 0) + m(1, 1)).real(), 2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(),
          (m(0, 0) - m(1, 1)).real()};
}

ComplexMatrix from_pauli_coefficients(const Eigen::Vector4d& v) {
  ComplexMatrix m(2, 2);
  m(0, 0) = 0.5 * (v(0) + v(3));
  m(1, 1) = 0.5 * (v(0) - v(3));
  m(0, 1) = Complex(0.5 * v(1), -0.5 * v(2));
  m(1, 0) = Complex(0.5 * v(1), 0.5 * v(2));
  return m;
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
  if (rho.qubit_count() != 1) throw DomainError("bloch_from_density: single-qubit state required");
  const Eigen::Vector4d v = pauli_coefficients(rho.matrix());
  return BlochVector{Vec3(v(1), v(2), v(3))};
}

DensityMatrix density_from_bloch(const BlochVector& b) {
  return DensityMatrix::trusted(from_pauli_coefficients({1.0, b.r.x(), b.r.y(), b.r.z()}));
}

}  // namespace steerlab
