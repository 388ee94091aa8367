#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "steerlab/errors.hpp"
#include "steerlab/qmath.hpp"

using namespace steerlab;

namespace {

// Element-by-element Kronecker product.
ComplexMatrix kron_loop(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

}  // namespace

TEST_CASE("kron of identities is the identity") {
  CHECK(testing::max_abs(kron(pauli::identity(), pauli::identity()) - ComplexMatrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("kron with the first factor most significant") {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  const ComplexMatrix k = kron(pauli::z(), p0);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 1;
  expected(2, 2) = -1;
  CHECK(testing::max_abs(k - expected) == 0.0);
}

TEST_CASE("kron of a y rotation matches an elementwise loop") {
  const ComplexMatrix r = rotation_y(1.194);
  CHECK(testing::max_abs(kron(r, pauli::identity()) - kron_loop(r, pauli::identity())) < 1e-15);
  std::mt19937_64 rng(3);
  const ComplexMatrix a = testing::random_matrix(2, 3, rng), b = testing::random_matrix(3, 2, rng);
  CHECK(testing::max_abs(kron(a, b) - kron_loop(a, b)) < 1e-14);
}

TEST_CASE("kron is associative and bilinear") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = testing::random_matrix(2, 2, rng), b = testing::random_matrix(2, 2, rng),
                        c = testing::random_matrix(2, 2, rng), d = testing::random_matrix(2, 2, rng);
    const Complex s(0.3, -1.7);
    CHECK(testing::max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) < 1e-12);
    CHECK(testing::max_abs(kron(s * a + d, b) - (s * kron(a, b) + kron(d, b))) < 1e-12);
    CHECK(testing::max_abs(kron(a, s * b + d) - (s * kron(a, b) + kron(a, d))) < 1e-12);
  }
}

TEST_CASE("rotations follow exp(-i angle sigma / 2)") {
  const double g = 0.7;
  const Complex i(0, 1);
  const ComplexMatrix expected = std::cos(g / 2) * pauli::identity() - i * std::sin(g / 2) * pauli::y();
  CHECK(testing::max_abs(rotation_y(g) - expected) < 1e-15);
  CHECK(testing::max_abs(rotation_x(g) - (std::cos(g / 2) * pauli::identity() - i * std::sin(g / 2) * pauli::x())) <
        1e-15);
  CHECK(testing::max_abs(rotation_z(g) - (std::cos(g / 2) * pauli::identity() - i * std::sin(g / 2) * pauli::z())) <
        1e-15);
}

TEST_CASE("partial trace of a product state returns the factor") {
  std::mt19937_64 rng(5);
  const DensityMatrix rho = testing::random_density(1, rng), tau = testing::random_density(2, rng);
  const DensityMatrix joint(kron(rho.matrix(), tau.matrix()));
  const std::vector<int> keep_sys{0}, keep_env{1, 2};
  CHECK(testing::max_abs(partial_trace(joint, keep_sys).matrix() - rho.matrix()) < 1e-14);
  CHECK(testing::max_abs(partial_trace(joint, keep_env).matrix() - tau.matrix()) < 1e-14);
}

TEST_CASE("partial trace of a Bell state is maximally mixed") {
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix bell = DensityMatrix::from_pure(phi);
  for (int q = 0; q < 2; ++q) {
    const std::vector<int> keep{q};
    CHECK(testing::max_abs(partial_trace(bell, keep).matrix() - 0.5 * pauli::identity()) < 1e-15);
  }
}

TEST_CASE("partial trace after one collision leaves z = cos g") {
  // |psi> = W |00> computed by hand: cos(g/2)|00> + sin(g/2)|11>.
  const double g = 1.435;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = std::cos(g / 2);
  psi(3) = std::sin(g / 2);
  const std::vector<int> keep{0};
  const BlochVector b = bloch_from_density(partial_trace(DensityMatrix::from_pure(psi), keep));
  CHECK(std::abs(b.r.x()) < 1e-15);
  CHECK(std::abs(b.r.z() - std::cos(g)) < 1e-14);
}

TEST_CASE("partial trace preserves trace and positivity") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const DensityMatrix rho = testing::random_density(3, rng);
    const std::vector<int> keep{t % 3};
    const DensityMatrix red = partial_trace(rho, keep);
    CHECK(std::abs(red.matrix().trace().real() - 1.0) < 1e-12);
    CHECK(min_eigenvalue(red.matrix()) >= -1e-12);
  }
}

TEST_CASE("partial trace rejects invalid indices") {
  const DensityMatrix rho = DensityMatrix::ground_state(2);
  const std::vector<int> out_of_range{2}, duplicate{0, 0};
  CHECK_THROWS_AS(partial_trace(rho, out_of_range), DomainError);
  CHECK_THROWS_AS(partial_trace(rho, duplicate), DomainError);
}

TEST_CASE("Bloch conversions") {
  CHECK((bloch_from_density(DensityMatrix::ground_state(1)).r - Vec3(0, 0, 1)).norm() == 0.0);
  CHECK(bloch_from_density(DensityMatrix::maximally_mixed(1)).r.norm() == 0.0);
  const BlochVector dephased{Vec3(0, 0, std::exp(-2.0))};
  CHECK(std::abs(bloch_from_density(density_from_bloch(dephased)).r.z() - 0.1353352832366127) < 1e-15);
  CHECK_THROWS_AS(bloch_from_density(DensityMatrix::ground_state(2)), DomainError);

  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const BlochVector b{testing::random_bloch(rng)};
    CHECK((bloch_from_density(density_from_bloch(b)).r - b.r).norm() < 1e-14);
    // Random Hermitian positive matrix normalized to unit trace.
    const DensityMatrix rho = testing::random_density(1, rng);
    CHECK(testing::max_abs(density_from_bloch(bloch_from_density(rho)).matrix() - rho.matrix()) < 1e-12);
  }
}

TEST_CASE("min eigenvalue") {
  CHECK(min_eigenvalue(pauli::identity()) == doctest::Approx(1.0));
  CHECK(min_eigenvalue(pauli::z()) == doctest::Approx(-1.0));
  CHECK(std::abs(min_eigenvalue(0.5 * (pauli::identity() + 1.2 * pauli::x())) + 0.1) < 1e-12);
  ComplexMatrix non_hermitian = pauli::identity();
  non_hermitian(0, 1) = 1.0;
  CHECK_THROWS_AS(min_eigenvalue(non_hermitian), DomainError);

  std::mt19937_64 rng(29);
  const ComplexMatrix g = testing::random_matrix(8, 8, rng);
  const ComplexMatrix h = g + g.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  CHECK(std::abs(min_eigenvalue(h) - es.eigenvalues()(0)) < 1e-10);
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(pauli::identity()), DomainError);  // trace 2
  CHECK_THROWS_AS(DensityMatrix(0.5 * (pauli::identity() + 1.2 * pauli::x())), DomainError);
  ComplexMatrix three = ComplexMatrix::Identity(3, 3) / 3.0;
  CHECK_THROWS_AS(DensityMatrix{three}, DomainError);
  CHECK_NOTHROW(DensityMatrix(0.5 * pauli::identity()));
}

TEST_CASE("cnot and embedding respect qubit order") {
  // Control 0 (most significant), target 1: |10> -> |11>.
  const ComplexMatrix cx = cnot(0, 1, 2);
  CHECK(std::abs(cx(3, 2) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(cx(0, 0) - Complex(1.0)) < 1e-15);
  // Control 1, target 0: |01> -> |11>.
  const ComplexMatrix xc = cnot(1, 0, 2);
  CHECK(std::abs(xc(3, 1) - Complex(1.0)) < 1e-15);
  CHECK(testing::max_abs(embed_one(pauli::x(), 1, 2) - kron(pauli::identity(), pauli::x())) == 0.0);
}
