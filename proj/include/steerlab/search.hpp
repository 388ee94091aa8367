#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "steerlab/counts.hpp"
#include "steerlab/optimize.hpp"
#include "steerlab/steering.hpp"
#include "steerlab/tomography.hpp"

namespace steerlab {

/// projective3: b_i = b0_i = 1, free angles (theta1, theta2, phi2).
/// full9: additionally the biases b0_i and lengths b_i, subject to
/// b_i <= min(b0_i, 2 - b0_i).
enum class LbMode { projective3, full9 };

LbMode parse_lb_mode(const std::string& name);
std::string to_string(LbMode mode);

enum class LocalMethod { nelder_mead, gradient_descent };

struct LbOptions {
  LbMode mode = LbMode::projective3;
  /// Random restarts on top of the start at the ideal angles. Negative means
  /// "automatic": 8 for N <= 2, none (descent from the ideal set) for N >= 3.
  int restarts = -1;
  /// Automatic: Nelder-Mead for N <= 2, gradient descent for N >= 3.
  std::optional<LocalMethod> method;
  std::uint64_t seed = 1;
  NelderMeadOptions nelder_mead{};
  GradientDescentOptions gradient{};
  SteeringOptions steering{};
};

/// Penalized lower-bound objective: SW of the reconstructed assemblage for a
/// valid candidate set, 1 + worst_violation otherwise.
class LbObjective {
 public:
  LbObjective(const ProbabilityEstimates& estimates, LbMode mode, const SteeringOptions& steering = {});

  double operator()(const Eigen::VectorXd& params) const;

  /// Candidate set for a parameter vector (angles first, then b0, then b).
  TomographySet set_for(const Eigen::VectorXd& params) const;
  /// Parameters of the ideal set.
  Eigen::VectorXd ideal_parameters() const;
  int dimension() const { return mode_ == LbMode::projective3 ? 3 : 9; }

  int evaluations() const { return evaluations_; }
  int infeasible_evaluations() const { return infeasible_; }
  int solver_failures() const { return solver_failures_; }

 private:
  ProbabilityEstimates estimates_;
  LbMode mode_;
  SteeringOptions steering_;
  StrategyTable table_;
  mutable int evaluations_ = 0;
  mutable int infeasible_ = 0;
  mutable int solver_failures_ = 0;
};

struct LbResult {
  double lb = 1.0;
  LbMode mode = LbMode::projective3;
  CanonicalAngles angles;  ///< radians, canonical chart
  std::array<double, 3> bias{1, 1, 1};
  std::array<double, 3> lengths{1, 1, 1};
  bool projective = true;  ///< b_i and b0_i within 1e-2 of 1
  bool converged = false;
  int restarts = 0;
  int evaluations = 0;
  int infeasible_evaluations = 0;
  int solver_failures = 0;
  std::vector<double> best_per_restart;
};

/// LB = min over valid tomography sets of SW(reconstruction). Throws
/// SearchError when no candidate produced a valid reconstruction.
LbResult lower_bound(const ProbabilityEstimates& estimates, const LbOptions& options = {});

/// Where the regularizing white noise acts: on the joint system-ancilla state
/// (all generalized Bloch components scaled by 1 - lambda) or on the Bloch
/// vectors of the individual assemblage members.
enum class NoiseTarget { joint_state, members };

struct StrategySearchOptions {
  double white_noise = 0.05;
  NoiseTarget noise_target = NoiseTarget::joint_state;
  /// Restrict x3 to one (theta, phi) shared by all ancillas.
  bool shared_angles = false;
  /// Pin every azimuth to this value and search over polar angles only.
  std::optional<double> azimuth;
  int restarts = 8;
  std::uint64_t seed = 1;
  NelderMeadOptions nelder_mead{0.3, 1e-11, 1e-6, 4000};
  SteeringOptions steering{};
};

struct StrategySearchResult {
  double theta = 0.0;               ///< mean polar angle over ancillas (canonical)
  double phi = 0.0;                 ///< mean azimuth over ancillas (canonical)
  std::vector<double> thetas;       ///< per ancilla
  std::vector<double> phis;         ///< per ancilla
  double steering_weight = 0.0;     ///< with x3 at the optimum
  double baseline_weight = 0.0;     ///< {x1, x2} alone, same white noise
  bool converged = false;
  int evaluations = 0;
  std::vector<double> best_per_restart;
  std::vector<std::vector<double>> thetas_per_restart;  ///< canonical, per restart
};

/// Maximizes SW({x1, x2, x3}) of the white-noise-regularized ideal assemblage
/// over per-ancilla x3 directions (theta_i, phi_i). Directions are reported
/// in a canonical form: each ancilla's direction is flipped to z >= 0 (an
/// outcome relabeling) and the whole set reflected to y >= 0 (complex
/// conjugation of a real joint state), neither of which changes SW.
StrategySearchResult find_third_strategy(const CollisionConfig& config, const StrategySearchOptions& options = {});

nlohmann::json to_json(const LbResult& r);
nlohmann::json to_json(const StrategySearchResult& r);

}  // namespace steerlab
