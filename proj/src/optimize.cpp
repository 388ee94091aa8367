#include "steerlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "steerlab/errors.hpp"

namespace steerlab {

namespace {

bool lexicographically_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

bool better(const OptimizeResult& a, const OptimizeResult& b) {
  if (a.value != b.value) return a.value < b.value;
  return lexicographically_less(a.x, b.x);
}

}  // namespace

OptimizeResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& options) {
  const Eigen::Index n = x0.size();
  if (n == 0) throw DomainError("nelder_mead: empty parameter vector");
  OptimizeResult out;
  const auto eval = [&](const Eigen::VectorXd& x) {
    ++out.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> values(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) simplex[static_cast<std::size_t>(i + 1)](i) += options.initial_step;
  for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(simplex.size());
  const auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> s2;
    std::vector<double> v2;
    for (std::size_t i : order) {
      s2.push_back(simplex[i]);
      v2.push_back(values[i]);
    }
    simplex.swap(s2);
    values.swap(v2);
  };

  while (true) {
    sort_simplex();
    ++out.iterations;
    double size = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      size = std::max(size, (simplex[i] - simplex[0]).cwiseAbs().maxCoeff());
    }
    const double spread = values.back() - values.front();
    if (std::isfinite(spread) && spread <= options.f_tol && size <= options.x_tol) {
      out.converged = true;
      break;
    }
    if (size <= 1e-3 * options.x_tol) {
      // Collapsed simplex on a discontinuous objective; nothing left to learn.
      out.converged = spread <= options.f_tol;
      break;
    }
    if (out.evaluations >= options.max_evaluations) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i];
    centroid /= static_cast<double>(n);
    const Eigen::VectorXd& worst = simplex.back();

    const Eigen::VectorXd xr = centroid + (centroid - worst);
    const double fr = eval(xr);
    if (fr < values.front()) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex.back() = xe;
        values.back() = fe;
      } else {
        simplex.back() = xr;
        values.back() = fr;
      }
      continue;
    }
    if (fr < values[values.size() - 2]) {
      simplex.back() = xr;
      values.back() = fr;
      continue;
    }
    const bool outside = fr < values.back();
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (worst - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : values.back())) {
      simplex.back() = xc;
      values.back() = fc;
      continue;
    }
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
      values[i] = eval(simplex[i]);
    }
  }
  out.x = simplex.front();
  out.value = values.front();
  return out;
}

OptimizeResult finite_difference_gradient_descent(const Objective& f, const Eigen::VectorXd& x0,
                                                  const GradientDescentOptions& options) {
  OptimizeResult out;
  const auto eval = [&](const Eigen::VectorXd& x) {
    ++out.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  Eigen::VectorXd x = x0;
  double fx = eval(x);
  double rate = options.initial_rate;
  const Eigen::Index n = x.size();
  for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
    if (out.evaluations >= options.max_evaluations) break;
    Eigen::VectorXd grad(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp(i) += options.fd_step;
      xm(i) -= options.fd_step;
      grad(i) = (eval(xp) - eval(xm)) / (2.0 * options.fd_step);
    }
    if (!grad.allFinite()) break;
    const double gnorm = grad.norm();
    if (gnorm <= options.grad_tol) {
      out.converged = true;
      break;
    }
    // Backtrack from a slightly enlarged version of the last accepted rate.
    double t = std::min(rate * 2.0, options.initial_rate * 16.0);
    bool accepted = false;
    while (t * gnorm > options.x_tol) {
      const Eigen::VectorXd trial = x - t * grad;
      const double ft = eval(trial);
      if (ft <= fx - options.armijo * t * gnorm * gnorm) {
        x = trial;
        fx = ft;
        rate = t;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // No decrease along the numerical gradient at resolution x_tol.
      out.converged = true;
      break;
    }
  }
  out.x = x;
  out.value = fx;
  return out;
}

MultiStartResult multi_start(const Objective& f, const LocalOptimizer& local, const StartSampler& sampler,
                             int restarts, std::uint64_t seed, const std::vector<Eigen::VectorXd>& fixed_starts) {
  std::vector<Eigen::VectorXd> starts = fixed_starts;
  std::mt19937_64 rng(seed);
  for (int r = 0; r < restarts; ++r) starts.push_back(sampler(rng));
  if (starts.empty()) throw DomainError("multi_start: no starting points");

  MultiStartResult out;
  out.runs.reserve(starts.size());
  for (const auto& x0 : starts) {
    out.runs.push_back(local(f, x0));
    out.evaluations += out.runs.back().evaluations;
  }
  out.best = *std::min_element(out.runs.begin(), out.runs.end(), better);
  return out;
}

}  // namespace steerlab
