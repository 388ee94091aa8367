#pragma once

#include <random>

#include <Eigen/Dense>

#include "steerlab/qmath.hpp"

namespace testing {

inline steerlab::Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  steerlab::Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

/// Uniform in the unit ball.
inline steerlab::Vec3 random_bloch(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return random_unit(rng) * std::cbrt(u(rng));
}

inline steerlab::ComplexMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  steerlab::ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = {n(rng), n(rng)};
  }
  return m;
}

inline steerlab::DensityMatrix random_density(int qubits, std::mt19937_64& rng) {
  const int d = 1 << qubits;
  const steerlab::ComplexMatrix g = random_matrix(d, d, rng);
  steerlab::ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return steerlab::DensityMatrix(rho);
}

inline double max_abs(const steerlab::ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
