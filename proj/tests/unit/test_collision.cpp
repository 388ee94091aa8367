#include <doctest.h>

#include <cmath>
#include <vector>

#include "../oracles/statevector.hpp"
#include "helpers.hpp"
#include "steerlab/collision.hpp"
#include "steerlab/errors.hpp"

using namespace steerlab;

TEST_CASE("collision config derives step and coupling") {
  for (int n = 1; n <= 4; ++n) {
    const CollisionConfig c(2.0, n);
    CHECK(std::abs(-std::log(std::cos(c.coupling())) - c.step()) < 1e-12);
    CHECK(c.coupling() > 0.0);
    CHECK(c.coupling() < std::numbers::pi / 2);
  }
  CHECK_THROWS_AS(CollisionConfig(2.0, 0), DomainError);
  CHECK_THROWS_AS(CollisionConfig(-1.0, 2), DomainError);
}

TEST_CASE("collision unitary") {
  // Zero rotation leaves the ancilla-controlled NOT.
  CHECK(testing::max_abs(collision_unitary_unchecked(0.0) - cnot(1, 0, 2)) < 1e-15);
  CHECK_THROWS_AS(collision_unitary(0.0), DomainError);
  CHECK_THROWS_AS(collision_unitary(1.6), DomainError);

  for (double g : {1.435, 1.194, 1.032, 0.919}) {
    const ComplexMatrix w = collision_unitary(g);
    CHECK(testing::max_abs(w.adjoint() * w - ComplexMatrix::Identity(4, 4)) <= 1e-12);
    // W|00> = cos(g/2)|00> + sin(g/2)|11>.
    const Eigen::VectorXcd out = w.col(0);
    CHECK(std::abs(out(0) - Complex(std::cos(g / 2))) < 1e-15);
    CHECK(std::abs(out(3) - Complex(std::sin(g / 2))) < 1e-15);
    CHECK(std::abs(out(1)) + std::abs(out(2)) < 1e-15);
  }
}

TEST_CASE("one collision at N = 1 leaves z = cos(1.435) = e^-2") {
  const CollisionConfig c(2.0, 1);
  const DensityMatrix joint = evolve_joint(DensityMatrix::ground_state(1), c);
  const std::vector<int> keep{0};
  const double z = bloch_from_density(partial_trace(joint, keep)).r.z();
  CHECK(std::abs(z - std::exp(-2.0)) < 1e-12);
  CHECK(std::abs(std::cos(1.435) - 0.1353) < 1e-3);
}

TEST_CASE("joint state matches the statevector oracle") {
  for (int n = 1; n <= 4; ++n) {
    const auto psi = oracle::collision_state(2.0, n);
    const DensityMatrix joint = evolve_joint(DensityMatrix::ground_state(1), CollisionConfig(2.0, n));
    double err = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
      for (std::size_t j = 0; j < psi.size(); ++j) {
        err = std::max(err, std::abs(joint.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                     psi[i] * std::conj(psi[j])));
      }
    }
    CHECK(err < 1e-13);
    CHECK(std::abs(joint.matrix().trace().real() - 1.0) < 1e-13);
  }
}

TEST_CASE("reduced system endpoint is (0, 0, e^-2) for every N") {
  for (int n = 1; n <= 4; ++n) {
    const DensityMatrix joint = evolve_joint(DensityMatrix::ground_state(1), CollisionConfig(2.0, n));
    const std::vector<int> keep{0};
    const Vec3 r = bloch_from_density(partial_trace(joint, keep)).r;
    CHECK((r - Vec3(0, 0, std::exp(-2.0))).norm() < 1e-10);
  }
}

TEST_CASE("N = 2 ancilla marginals are exchange symmetric") {
  const DensityMatrix joint = evolve_joint(DensityMatrix::ground_state(1), CollisionConfig(2.0, 2));
  const std::vector<int> ancillas{1, 2};
  const ComplexMatrix pair = partial_trace(joint, ancillas).matrix();
  const ComplexMatrix z1 = kron(pauli::z(), pauli::identity()), z2 = kron(pauli::identity(), pauli::z());
  CHECK(std::abs((pair * z1).trace() - (pair * z2).trace()) < 1e-14);
  // Swapping the two ancillas leaves the pair state invariant.
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1;
  CHECK(testing::max_abs(swap * pair * swap - pair) < 1e-14);
}

TEST_CASE("evolve_joint enforces the qubit budget") {
  CHECK_THROWS_AS(evolve_joint(DensityMatrix::ground_state(1), CollisionConfig(2.0, 6)), ResourceError);
  CHECK_NOTHROW(evolve_joint(DensityMatrix::ground_state(1), CollisionConfig(2.0, 2), 2));
  CHECK_THROWS_AS(evolve_joint(DensityMatrix::ground_state(2), CollisionConfig(2.0, 1)), DomainError);
}

TEST_CASE("single-step channel is diag(1, 1, cos g, cos g)") {
  for (double g : {0.3, 1.194, 1.435}) {
    const ChannelMatrix l = single_step_channel(g);
    ChannelMatrix expected = ChannelMatrix::Zero();
    expected.diagonal() << 1, 1, std::cos(g), std::cos(g);
    CHECK((l - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(is_cptp(l));
  }
  CHECK(std::abs(single_step_channel(1.194)(2, 2) - 0.3679) < 1e-4);
  CHECK((single_step_channel(1e-9) - ChannelMatrix::Identity()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("composed channels do not depend on the discretization") {
  ChannelMatrix target = ChannelMatrix::Zero();
  target.diagonal() << 1, 1, std::exp(-2.0), std::exp(-2.0);
  for (int n = 1; n <= 4; ++n) {
    const CollisionConfig c(2.0, n);
    ChannelMatrix composed = ChannelMatrix::Identity();
    for (int k = 0; k < n; ++k) composed = single_step_channel(c.coupling()) * composed;
    CHECK((composed - target).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("channel from the joint state equals repeated single steps") {
  std::mt19937_64 rng(41);
  for (int n = 1; n <= 3; ++n) {
    const CollisionConfig c(2.0, n);
    const ChannelMatrix step = single_step_channel(c.coupling());
    for (int t = 0; t < 5; ++t) {
      const BlochVector b0{testing::random_bloch(rng)};
      const DensityMatrix joint = evolve_joint(density_from_bloch(b0), c);
      const std::vector<int> keep{0};
      const Vec3 r = bloch_from_density(partial_trace(joint, keep)).r;
      Eigen::Vector4d k = b0.extended();
      for (int i = 0; i < n; ++i) k = step * k;
      CHECK((r - k.tail<3>()).norm() < 1e-10);
    }
  }
}

TEST_CASE("CPTP check rejects non-physical maps") {
  ChannelMatrix amplify = ChannelMatrix::Identity();
  amplify(3, 3) = 1.5;
  CHECK_FALSE(is_cptp(amplify));
  ChannelMatrix not_trace_preserving = ChannelMatrix::Identity();
  not_trace_preserving(0, 0) = 0.9;
  CHECK_FALSE(is_cptp(not_trace_preserving));
}

TEST_CASE("stroboscopic trajectory") {
  const auto traj = stroboscopic_trajectory(CollisionConfig(2.0, 4));
  REQUIRE(traj.size() == 5);
  CHECK(traj[0].r.z() == 1.0);
  CHECK(std::abs(traj[2].r.z() - std::exp(-1.0)) < 1e-10);
  CHECK(std::abs(traj[2].r.z() - std::pow(std::cos(0.919), 2)) < 1e-3);
  CHECK(std::abs(traj[4].r.z() - 0.1353) < 1e-4);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    CHECK(std::abs(traj[k].r.z() - std::exp(-0.5 * static_cast<double>(k))) < 1e-10);
    CHECK(std::abs(traj[k].r.x()) + std::abs(traj[k].r.y()) < 1e-15);
  }
}
