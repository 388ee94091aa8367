#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steerlab/assemblage.hpp"
#include "steerlab/collision.hpp"

namespace steerlab {

/// Asymmetric classical readout error of one qubit.
struct ReadoutError {
  double p01 = 0.0;  ///< P(read 1 | prepared 0)
  double p10 = 0.0;  ///< P(read 0 | prepared 1)
};

struct NoiseModel {
  /// Two-qubit depolarizing probability after every CNOT of the collision ladder.
  double two_qubit_depolarizing = 0.0;
  /// Collision indices (1-based, repeats allowed) after which one more
  /// depolarizing channel acts on the same pair, standing in for SWAP overhead.
  std::vector<int> extra_two_qubit_after;
  /// Empty: ideal readout. One entry: applied to every qubit. Otherwise one
  /// entry per qubit, qubit 0 (Bob) first.
  std::vector<ReadoutError> readout;
  /// rho -> (1 - lambda) rho + lambda I / d on the final joint state.
  double white_noise = 0.0;

  bool is_ideal() const;
  /// Throws DomainError for probabilities outside [0, 1] or bad indices.
  void validate(int collisions) const;
};

/// Bob's tomography settings: 1 = sigma_x, 2 = sigma_y, 3 = sigma_z.
inline constexpr int kBobSettings = 3;

/// Unitary that maps a measurement of `direction . sigma` onto a
/// computational-basis measurement: R_y(-theta) R_z(-phi) in general, which
/// reduces to R_y(-theta) in the x-z plane.
ComplexMatrix premeasurement_rotation(const Vec3& direction);

/// Bob's gates: R_y(-pi/2) for sigma_x, R_x(pi/2) for sigma_y, identity for sigma_z.
ComplexMatrix bob_premeasurement_rotation(int bob_setting);

/// Joint state of the collision circuit including depolarizing and white noise.
DensityMatrix noisy_joint_state(const CollisionConfig& config, const NoiseModel& noise);

/// Exact outcome probabilities of one circuit, indexed [a * 2 + b] where a
/// is Alice's N-bit outcome (ancilla 1 most significant) and b is Bob's bit.
std::vector<double> outcome_distribution(const DensityMatrix& joint, const MeasurementStrategy& strategy,
                                         int bob_setting, const NoiseModel& noise);

struct CountsRecord {
  std::string x;
  int bob_setting = 3;
  std::int64_t shots = 0;
  int outcome_bits = 0;
  std::vector<std::int64_t> table;  ///< indexed [a * 2 + b]

  std::int64_t count(std::size_t a, int b) const { return table[a * 2 + static_cast<std::size_t>(b)]; }
};

/// Multinomial draw of `shots` outcomes. The stream is derived from (seed,
/// strategy label, Bob setting) so circuits can be sampled in any order.
CountsRecord sample_counts(std::span<const double> distribution, int outcome_bits, const std::string& label,
                           int bob_setting, std::int64_t shots, std::uint64_t seed);

/// Convenience: every (strategy, Bob setting) circuit of an experiment.
std::vector<CountsRecord> sample_experiment(const CollisionConfig& config,
                                            std::span<const MeasurementStrategy> strategies,
                                            const NoiseModel& noise, std::int64_t shots, std::uint64_t seed);

/// Shots per circuit used on hardware: job repetitions * 8 * 8192 with
/// 10, 16, 30, 60 repetitions for N = 1..4. Throws DomainError otherwise.
std::int64_t default_shots(int collisions);

struct OutcomeEstimate {
  double p = 0.0;                                ///< p(a|x)
  std::array<std::optional<double>, 3> bob_zero;  ///< p_i(0|a,x); empty when count_i(a) = 0
  bool empty() const;
};

struct StrategyEstimate {
  std::string label;
  std::vector<OutcomeEstimate> outcomes;
};

struct ProbabilityEstimates {
  int outcome_bits = 0;
  std::vector<StrategyEstimate> settings;
};

/// Bins Bob's outcomes by Alice's outcome. Alice's marginal is pooled over the
/// three Bob settings unless `per_setting_marginals`, which averages the
/// per-record frequencies instead. Throws InputError for missing or duplicate
/// Bob settings.
ProbabilityEstimates estimate_probabilities(std::span<const CountsRecord> records,
                                            bool per_setting_marginals = false);

/// Infinite-shot estimates straight from the exact circuit distributions.
ProbabilityEstimates exact_estimates(const CollisionConfig& config, std::span<const MeasurementStrategy> strategies,
                                     const NoiseModel& noise = {});

struct CountsFile {
  int collisions = 0;
  double total_time = 0.0;
  std::vector<CountsRecord> records;
  nlohmann::json meta;                ///< free-form provenance block, written only when set
  std::vector<std::string> warnings;  ///< filled on read (unknown fields)
};

nlohmann::json to_json(const CountsFile& file);
/// Throws InputError naming the JSON location of malformed content.
CountsFile counts_from_json(const nlohmann::json& doc);

void write_counts(const CountsFile& file, const std::filesystem::path& path);
CountsFile read_counts(const std::filesystem::path& path);

}  // namespace steerlab
