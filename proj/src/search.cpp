#include "steerlab/search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steerlab/errors.hpp"

namespace steerlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInfeasible = 2.0;

double degrees(double rad) { return rad * 180.0 / kPi; }

StrategyTable table_for(const ProbabilityEstimates& estimates) {
  std::vector<int> outcomes;
  for (const auto& s : estimates.settings) outcomes.push_back(static_cast<int>(s.outcomes.size()));
  return enumerate_deterministic_strategies(outcomes);
}

}  // namespace

LbMode parse_lb_mode(const std::string& name) {
  if (name == "projective3") return LbMode::projective3;
  if (name == "full9") return LbMode::full9;
  throw InputError("unknown lower-bound mode '" + name + "' (expected projective3 or full9)");
}

std::string to_string(LbMode mode) { return mode == LbMode::projective3 ? "projective3" : "full9"; }

LbObjective::LbObjective(const ProbabilityEstimates& estimates, LbMode mode, const SteeringOptions& steering)
    : estimates_(estimates), mode_(mode), steering_(steering), table_(table_for(estimates)) {}

TomographySet LbObjective::set_for(const Eigen::VectorXd& params) const {
  if (params.size() != dimension()) throw DomainError("LbObjective: wrong parameter count");
  const CanonicalAngles angles{params(0), params(1), params(2)};
  if (mode_ == LbMode::projective3) return TomographySet::from_canonical(angles);
  return TomographySet::from_canonical(angles, {params(6), params(7), params(8)}, {params(3), params(4), params(5)});
}

Eigen::VectorXd LbObjective::ideal_parameters() const {
  Eigen::VectorXd p(dimension());
  p.head<3>() << kPi / 2, kPi / 2, 0.0;
  if (mode_ == LbMode::full9) p.tail<6>().setOnes();
  return p;
}

double LbObjective::operator()(const Eigen::VectorXd& params) const {
  ++evaluations_;
  const TomographySet set = set_for(params);
  double positivity = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    positivity = std::max(positivity, set.vectors[i].norm() - std::min(set.bias[i], 2.0 - set.bias[i]));
  }
  if (positivity > steering_.policy.psd_slack) {
    ++infeasible_;
    return 1.0 + positivity;
  }
  if (!set.is_complete(steering_.policy.completeness_tol)) {
    ++infeasible_;
    return kInfeasible;
  }
  const Reconstruction rec = reconstruct_assemblage(set, estimates_, steering_.policy);
  if (!rec.valid) {
    ++infeasible_;
    return 1.0 + rec.worst_violation;
  }
  try {
    return steering_weight(rec.assemblage, table_, steering_).steering_weight;
  } catch (const SolverError&) {
    ++solver_failures_;
  } catch (const DomainError&) {
    ++infeasible_;
  }
  return kInfeasible;
}

LbResult lower_bound(const ProbabilityEstimates& estimates, const LbOptions& options) {
  const int n = estimates.outcome_bits;
  const LbObjective objective(estimates, options.mode, options.steering);
  const int restarts = options.restarts >= 0 ? options.restarts : (n <= 2 ? 8 : 0);
  const LocalMethod method = options.method.value_or(n <= 2 ? LocalMethod::nelder_mead : LocalMethod::gradient_descent);

  const Objective f = [&](const Eigen::VectorXd& x) { return objective(x); };
  const LocalOptimizer local = [&](const Objective& g, const Eigen::VectorXd& x0) {
    return method == LocalMethod::nelder_mead ? nelder_mead(g, x0, options.nelder_mead)
                                              : finite_difference_gradient_descent(g, x0, options.gradient);
  };
  const LbMode mode = options.mode;
  const StartSampler sampler = [mode](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> polar(0.0, kPi), azimuth(-kPi, kPi), unit(0.0, 1.0);
    Eigen::VectorXd x(mode == LbMode::projective3 ? 3 : 9);
    x(0) = polar(rng);
    x(1) = polar(rng);
    x(2) = azimuth(rng);
    if (mode == LbMode::full9) {
      for (int i = 0; i < 3; ++i) {
        const double b0 = 0.9 + 0.2 * unit(rng);
        x(3 + i) = b0;
        x(6 + i) = std::min(b0, 2.0 - b0) * (0.9 + 0.1 * unit(rng));
      }
    }
    return x;
  };

  const MultiStartResult ms = multi_start(f, local, sampler, restarts, options.seed, {objective.ideal_parameters()});

  LbResult out;
  out.mode = options.mode;
  out.restarts = static_cast<int>(ms.runs.size());
  out.evaluations = ms.evaluations;
  out.infeasible_evaluations = objective.infeasible_evaluations();
  out.solver_failures = objective.solver_failures();
  out.converged = ms.best.converged;
  for (const auto& r : ms.runs) out.best_per_restart.push_back(r.value);
  if (!(ms.best.value <= 1.0)) {
    throw SearchError("lower_bound: no valid tomography set found (best penalized value " +
                      std::to_string(ms.best.value) + " after " + std::to_string(out.evaluations) +
                      " evaluations, " + std::to_string(out.infeasible_evaluations) + " infeasible, " +
                      std::to_string(out.solver_failures) + " solver failures)");
  }
  out.lb = ms.best.value;
  const TomographySet set = objective.set_for(ms.best.x);
  out.angles = set.canonical_angles();
  for (std::size_t i = 0; i < 3; ++i) {
    out.bias[i] = set.bias[i];
    out.lengths[i] = set.vectors[i].norm();
    out.projective = out.projective && std::abs(out.bias[i] - 1.0) <= 1e-2 && std::abs(out.lengths[i] - 1.0) <= 1e-2;
  }
  return out;
}

// ---------------------------------------------------------------------------

StrategySearchResult find_third_strategy(const CollisionConfig& config, const StrategySearchOptions& options) {
  const int n = config.collisions();
  const bool on_joint = options.noise_target == NoiseTarget::joint_state;
  NoiseModel noise;
  if (on_joint) noise.white_noise = options.white_noise;
  const DensityMatrix joint = noisy_joint_state(config, noise);
  const double member_noise = on_joint ? 0.0 : options.white_noise;
  // theta is irrelevant for x1 and x2; any admissible value will do.
  const auto builtin = builtin_strategies(config, kPi / 2);
  const Assemblage base = add_white_noise(ideal_assemblage(joint, std::span(builtin.data(), 2)), member_noise);
  const std::vector<int> outcomes(3, 1 << n);
  const StrategyTable table = enumerate_deterministic_strategies(outcomes);

  const int free_directions = options.shared_angles ? 1 : n;
  const std::optional<double> pinned = options.azimuth;
  const int per_direction = pinned ? 1 : 2;
  const auto strategy_for = [n, free_directions, pinned, per_direction](const Eigen::VectorXd& x) {
    MeasurementStrategy s{"x3", {}};
    for (int i = 0; i < n; ++i) {
      const int k = (i % free_directions) * per_direction;
      s.directions.push_back(direction_from_angles(x(k), pinned ? *pinned : x(k + 1)));
    }
    return s;
  };
  const auto weight = [&](const MeasurementStrategy& x3) {
    Assemblage full = base;
    const Assemblage third = add_white_noise(ideal_assemblage(joint, std::span(&x3, 1)), member_noise);
    full.settings.push_back(third.settings.front());
    return steering_weight(full, table, options.steering).steering_weight;
  };

  const Objective f = [&](const Eigen::VectorXd& x) { return -weight(strategy_for(x)); };
  const LocalOptimizer local = [&](const Objective& g, const Eigen::VectorXd& x0) {
    return nelder_mead(g, x0, options.nelder_mead);
  };
  const StartSampler sampler = [free_directions, per_direction](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> polar(0.0, kPi), azimuth(-kPi, kPi);
    Eigen::VectorXd x(per_direction * free_directions);
    for (int i = 0; i < free_directions; ++i) {
      x(per_direction * i) = polar(rng);
      if (per_direction == 2) x(2 * i + 1) = azimuth(rng);
    }
    return x;
  };
  if (options.restarts < 1) throw DomainError("find_third_strategy: at least one restart is required");
  const MultiStartResult ms = multi_start(f, local, sampler, options.restarts, options.seed);

  const auto canonical = [&](const Eigen::VectorXd& x) {
    std::vector<Vec3> dirs = strategy_for(x).directions;
    double ysum = 0.0;
    for (auto& d : dirs) {
      if (d.z() < 0.0) d = -d;
      ysum += d.y();
    }
    if (ysum < 0.0) {
      for (auto& d : dirs) d.y() = -d.y();
    }
    return dirs;
  };

  StrategySearchResult out;
  out.evaluations = ms.evaluations;
  out.converged = ms.best.converged;
  for (const auto& r : ms.runs) {
    out.best_per_restart.push_back(-r.value);
    std::vector<double> th;
    for (const auto& d : canonical(r.x)) th.push_back(std::acos(std::clamp(d.z(), -1.0, 1.0)));
    out.thetas_per_restart.push_back(std::move(th));
  }
  for (const auto& d : canonical(ms.best.x)) {
    out.thetas.push_back(std::acos(std::clamp(d.z(), -1.0, 1.0)));
    out.phis.push_back(std::atan2(d.y(), d.x()));
  }
  for (int i = 0; i < n; ++i) {
    out.theta += out.thetas[static_cast<std::size_t>(i)] / n;
    out.phi += out.phis[static_cast<std::size_t>(i)] / n;
  }
  out.steering_weight = -ms.best.value;
  out.baseline_weight = steering_weight(base, options.steering).steering_weight;
  return out;
}

nlohmann::json to_json(const LbResult& r) {
  return {{"lb", r.lb},
          {"mode", to_string(r.mode)},
          {"theta1_deg", degrees(r.angles.theta1)},
          {"theta2_deg", degrees(r.angles.theta2)},
          {"phi2_deg", degrees(r.angles.phi2)},
          {"bias", r.bias},
          {"lengths", r.lengths},
          {"projective", r.projective},
          {"converged", r.converged},
          {"restarts", r.restarts},
          {"evaluations", r.evaluations},
          {"infeasible_evaluations", r.infeasible_evaluations},
          {"solver_failures", r.solver_failures},
          {"best_per_restart", r.best_per_restart}};
}

nlohmann::json to_json(const StrategySearchResult& r) {
  std::vector<double> th_deg, ph_deg;
  for (double t : r.thetas) th_deg.push_back(degrees(t));
  for (double p : r.phis) ph_deg.push_back(degrees(p));
  return {{"theta", r.theta},
          {"phi", r.phi},
          {"theta_deg", degrees(r.theta)},
          {"phi_deg", degrees(r.phi)},
          {"thetas_deg", th_deg},
          {"phis_deg", ph_deg},
          {"steering_weight", r.steering_weight},
          {"baseline_weight", r.baseline_weight},
          {"converged", r.converged},
          {"evaluations", r.evaluations},
          {"best_per_restart", r.best_per_restart}};
}

}  // namespace steerlab
