#include <doctest.h>

#include <cmath>

#include "../oracles/random_assemblage.hpp"
#include "../oracles/statevector.hpp"
#include "helpers.hpp"
#include "steerlab/assemblage.hpp"
#include "steerlab/errors.hpp"
#include "steerlab/steering.hpp"

using namespace steerlab;

namespace {

DensityMatrix joint_for(int n) { return evolve_joint(DensityMatrix::ground_state(1), CollisionConfig(2.0, n)); }

std::vector<std::array<double, 3>> as_arrays(const MeasurementStrategy& s) {
  std::vector<std::array<double, 3>> out;
  for (const auto& d : s.directions) out.push_back({d.x(), d.y(), d.z()});
  return out;
}

}  // namespace

TEST_CASE("builtin strategies") {
  for (int n = 1; n <= 4; ++n) {
    const CollisionConfig c(2.0, n);
    const auto s = builtin_strategies(c, reference_third_angle(n));
    CHECK(s[0].label == "x1");
    CHECK(s[1].label == "x2");
    CHECK(s[2].label == "x3");
    for (const auto& strategy : s) {
      REQUIRE(strategy.directions.size() == static_cast<std::size_t>(n));
      for (const auto& d : strategy.directions) CHECK(std::abs(d.norm() - 1.0) <= 1e-12);
    }
    CHECK((s[0].directions[0] - Vec3(0, 0, 1)).norm() == 0.0);
    CHECK((s[1].directions[0] - Vec3(std::sin(c.coupling()), 0, std::cos(c.coupling()))).norm() < 1e-15);
  }
  const auto s1 = builtin_strategies(CollisionConfig(2.0, 1), reference_third_angle(1));
  CHECK(reference_third_angle(1) == doctest::Approx(1.570));
  CHECK((s1[2].directions[0] - Vec3(0, 1, 0)).norm() < 1e-3);
  const auto s4 = builtin_strategies(CollisionConfig(2.0, 4), reference_third_angle(4));
  CHECK(std::abs(s4[1].directions[0].x() - std::sin(0.919)) < 1e-3);
  CHECK_THROWS_AS(reference_third_angle(5), DomainError);
}

TEST_CASE("measurement strategies require unit directions") {
  MeasurementStrategy s{"bad", {Vec3(0, 0, 1.1)}};
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("outcome labels put ancilla 1 on the left") {
  CHECK(outcome_label(1, 3) == "001");
  CHECK(outcome_label(4, 3) == "100");
  CHECK(outcome_index("110") == 6);
  CHECK_THROWS_AS(outcome_index("1a"), InputError);
}

TEST_CASE("N = 1 ideal assemblage for x1") {
  const double g = CollisionConfig(2.0, 1).coupling();
  const auto s = builtin_strategies(CollisionConfig(2.0, 1), 1.570);
  const Assemblage a = ideal_assemblage(joint_for(1), s);
  const auto& x1 = a.settings[0].members;
  CHECK(std::abs(x1[0].p - std::pow(std::cos(g / 2), 2)) < 1e-14);
  CHECK(std::abs(x1[0].p - 0.5677) < 1e-3);
  CHECK((x1[0].bloch - Vec3(0, 0, 1)).norm() < 1e-12);
  CHECK((x1[1].bloch - Vec3(0, 0, -1)).norm() < 1e-12);
  CHECK(std::abs(x1[1].p - 0.4323) < 1e-3);
}

TEST_CASE("ideal assemblages match the statevector oracle") {
  for (int n = 1; n <= 3; ++n) {
    const CollisionConfig c(2.0, n);
    const auto strategies = builtin_strategies(c, reference_third_angle(n));
    const Assemblage a = ideal_assemblage(joint_for(n), strategies);
    const auto psi = oracle::collision_state(2.0, n);
    for (std::size_t x = 0; x < 3; ++x) {
      const auto dirs = as_arrays(strategies[x]);
      for (std::size_t o = 0; o < a.settings[x].members.size(); ++o) {
        const auto tb = oracle::trace_and_bloch(oracle::conditional_state(psi, n, dirs, o));
        const auto& m = a.settings[x].members[o];
        CHECK(std::abs(m.p - tb[0]) < 1e-13);
        CHECK((m.bloch - Vec3(tb[1], tb[2], tb[3])).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("ideal assemblage invariants") {
  for (int n = 1; n <= 3; ++n) {
    const CollisionConfig c(2.0, n);
    const Assemblage a = ideal_assemblage(joint_for(n), builtin_strategies(c, reference_third_angle(n)));
    CHECK(no_signaling_defect(a) <= 1e-12);
    for (std::size_t x = 0; x < a.num_settings(); ++x) {
      double total = 0.0;
      for (const auto& m : a.settings[x].members) {
        total += m.p;
        CHECK(min_eigenvalue(m.sigma()) >= -1e-10);
      }
      CHECK(std::abs(total - 1.0) < 1e-12);
      const Vec3 marginal = pauli_coefficients(a.marginal(x)).tail<3>();
      CHECK((marginal - Vec3(0, 0, std::exp(-2.0))).norm() < 1e-12);
    }
    // {x1, x2} steered states are pure.
    for (std::size_t x = 0; x < 2; ++x) {
      for (const auto& m : a.settings[x].members) CHECK(std::abs(m.bloch.norm() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("product joint states steer nothing") {
  std::mt19937_64 rng(7);
  const DensityMatrix rho_s = testing::random_density(1, rng), rho_e = testing::random_density(2, rng);
  const DensityMatrix joint(kron(rho_s.matrix(), rho_e.matrix()));
  MeasurementStrategy s{"r", {testing::random_unit(rng), testing::random_unit(rng)}};
  const Assemblage a = ideal_assemblage(joint, std::vector<MeasurementStrategy>{s});
  const Vec3 r = bloch_from_density(rho_s).r;
  for (const auto& m : a.settings[0].members) CHECK((m.bloch - r).norm() < 1e-12);
}

TEST_CASE("ideal assemblage checks dimensions") {
  MeasurementStrategy s{"x", {Vec3(0, 0, 1)}};
  CHECK_THROWS_AS(ideal_assemblage(joint_for(2), std::vector<MeasurementStrategy>{s}), DomainError);
}

TEST_CASE("white noise on members") {
  const CollisionConfig c(2.0, 2);
  const Assemblage a = ideal_assemblage(joint_for(2), builtin_strategies(c, reference_third_angle(2)));
  const Assemblage same = add_white_noise(a, 0.0);
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t o = 0; o < 4; ++o) {
      CHECK(same.settings[x].members[o].bloch == a.settings[x].members[o].bloch);
    }
  }
  const Assemblage mixed = add_white_noise(a, 1.0);
  for (const auto& s : mixed.settings) {
    for (const auto& m : s.members) CHECK(m.bloch.norm() == 0.0);
  }
  CHECK(steering_weight(mixed).steering_weight <= 1e-8);
  const Assemblage noisy = add_white_noise(a, 0.05);
  CHECK(std::abs(no_signaling_defect(noisy) - no_signaling_defect(a)) <= 1e-12);
  const double sw = steering_weight(noisy).steering_weight;
  CHECK(sw > 0.0);
  CHECK(sw < 1.0);
  CHECK_THROWS_AS(add_white_noise(a, 1.5), DomainError);
}

TEST_CASE("no-signaling defect conventions") {
  std::mt19937_64 rng(13);
  const Assemblage one = oracle::random_assemblage({3}, rng);
  CHECK(no_signaling_defect(one) == 0.0);
  Assemblage a = oracle::random_assemblage({2, 2}, rng);
  CHECK(no_signaling_defect(a) < 1e-12);
  // Moving weight between outcomes of one setting breaks no-signaling.
  a.settings[0].members[0].p += 0.01;
  a.settings[0].members[1].p -= 0.01;
  CHECK(no_signaling_defect(a) > 1e-4);
}

TEST_CASE("assemblage JSON round trip is bit exact") {
  const CollisionConfig c(2.0, 3);
  Assemblage a = ideal_assemblage(joint_for(3), builtin_strategies(c, reference_third_angle(3)));
  a = add_white_noise(a, 0.0123456789);
  a.meta["note"] = "round trip";
  const auto text = to_json(a).dump();
  const Assemblage b = assemblage_from_json(nlohmann::json::parse(text));
  REQUIRE(b.num_settings() == a.num_settings());
  CHECK(b.outcome_bits == 3);
  CHECK(b.meta.at("note") == "round trip");
  for (std::size_t x = 0; x < a.num_settings(); ++x) {
    CHECK(b.settings[x].label == a.settings[x].label);
    for (std::size_t o = 0; o < 8; ++o) {
      CHECK(b.settings[x].members[o].p == a.settings[x].members[o].p);
      CHECK(b.settings[x].members[o].bloch == a.settings[x].members[o].bloch);
    }
  }
}

TEST_CASE("assemblage JSON errors carry the location") {
  const auto doc = nlohmann::json::parse(
      R"({"settings":["x1"],"members":[{"x":"x1","a":"0","p":1.0,"bloch":[0,0]}],"meta":{"outcome_bits":1}})");
  try {
    assemblage_from_json(doc);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("/members/0/bloch") != std::string::npos);
  }
  const auto unknown = nlohmann::json::parse(
      R"({"settings":["x1"],"members":[{"x":"x9","a":"0","p":1.0,"bloch":[0,0,1]}],"meta":{"outcome_bits":1}})");
  CHECK_THROWS_AS(assemblage_from_json(unknown), InputError);
}
