#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace steerlab {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct OptimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  double initial_step = 0.25;  ///< edge length of the starting simplex
  double f_tol = 1e-10;        ///< spread of simplex values
  double x_tol = 1e-7;         ///< largest vertex distance from the best vertex
  int max_evaluations = 5000;
};

/// Downhill simplex with the standard reflection/expansion/contraction/shrink
/// coefficients (1, 2, 1/2, 1/2). Exhausting the budget returns the best
/// point with converged = false.
OptimizeResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& options = {});

struct GradientDescentOptions {
  double fd_step = 1e-5;        ///< central-difference step
  double initial_rate = 0.5;    ///< first trial step along -grad
  double grad_tol = 1e-7;
  double x_tol = 1e-9;          ///< stop when the accepted step is shorter
  double armijo = 1e-4;
  int max_iterations = 200;
  int max_evaluations = 20000;
};

/// Steepest descent on central-difference gradients with a backtracking
/// Armijo line search.
OptimizeResult finite_difference_gradient_descent(const Objective& f, const Eigen::VectorXd& x0,
                                                  const GradientDescentOptions& options = {});

using LocalOptimizer = std::function<OptimizeResult(const Objective&, const Eigen::VectorXd&)>;
using StartSampler = std::function<Eigen::VectorXd(std::mt19937_64&)>;

struct MultiStartResult {
  OptimizeResult best;
  std::vector<OptimizeResult> runs;  ///< one per start, in start order
  int evaluations = 0;
};

/// Runs `local` from every fixed start followed by `restarts` sampled ones.
/// The winner is chosen by value, ties broken by lexicographic parameters, so
/// the outcome does not depend on the order runs finish in.
MultiStartResult multi_start(const Objective& f, const LocalOptimizer& local, const StartSampler& sampler,
                             int restarts, std::uint64_t seed, const std::vector<Eigen::VectorXd>& fixed_starts = {});

}  // namespace steerlab
