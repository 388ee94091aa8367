#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steerlab/collision.hpp"
#include "steerlab/qmath.hpp"

namespace steerlab {

/// Local dichotomic projective measurement on each ancilla. Outcome "0" of
/// ancilla i corresponds to 0.5 * (I + directions[i] . sigma).
struct MeasurementStrategy {
  std::string label;
  std::vector<Vec3> directions;

  /// Throws DomainError if any direction is not a unit vector.
  void validate(const NumericPolicy& policy = kDefaultPolicy) const;
};

/// Unit vector (sin t cos p, sin t sin p, cos t).
Vec3 direction_from_angles(double polar, double azimuth);

/// x1 (all z), x2 (sin g, 0, cos g) and x3 (0, sin theta, cos theta).
std::array<MeasurementStrategy, 3> builtin_strategies(const CollisionConfig& config, double theta);

/// Table-of-record polar angle of the third strategy for N = 1..4.
/// Throws DomainError for other N.
double reference_third_angle(int collisions);

/// Subnormalized qubit state p * 0.5 * (I + bloch . sigma).
struct Member {
  double p = 0.0;
  Vec3 bloch = Vec3::Zero();

  ComplexMatrix sigma() const;
  static Member from_operator(const ComplexMatrix& sigma);
};

struct Setting {
  std::string label;
  std::vector<Member> members;  ///< indexed by outcome
};

/// Conditional states of Bob's qubit for each of Alice's settings.
/// Outcome indices of ancilla-measurement settings are N-bit strings with
/// ancilla 1 as the most significant (leftmost) bit.
struct Assemblage {
  std::vector<Setting> settings;
  int outcome_bits = 0;  ///< 0 for assemblages whose outcomes are not bit strings
  nlohmann::json meta = nlohmann::json::object();

  std::size_t num_settings() const { return settings.size(); }
  std::vector<int> outcome_counts() const;

  /// sum_a sigma_{a|x}
  ComplexMatrix marginal(std::size_t setting) const;
};

/// Outcome label of index `a` for `bits` ancillas (ancilla 1 leftmost).
std::string outcome_label(std::size_t a, int bits);
std::size_t outcome_index(const std::string& label);

/// sigma_{a|x} = Tr_E[rho_SE (I_S (x) A^x_a)] for every strategy and outcome.
/// Throws DomainError on dimension mismatch.
Assemblage ideal_assemblage(const DensityMatrix& joint, std::span<const MeasurementStrategy> strategies);

/// Scales every member's Bloch vector by (1 - lambda); probabilities unchanged.
Assemblage add_white_noise(const Assemblage& asm_in, double lambda);

/// Max pairwise trace distance 0.5 * ||sum_a sigma_{a|x} - sum_a sigma_{a|x'}||_1.
/// Zero for fewer than two settings.
double no_signaling_defect(const Assemblage& asm_in);

nlohmann::json to_json(const Assemblage& a);
/// Throws InputError with the offending JSON path.
Assemblage assemblage_from_json(const nlohmann::json& doc);

}  // namespace steerlab
