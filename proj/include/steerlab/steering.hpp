#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "steerlab/assemblage.hpp"
#include "steerlab/numeric_policy.hpp"

namespace steerlab {

/// All deterministic response functions lambda -> (a_1, ..., a_|X|), one
/// outcome per setting. Row l lists the outcome chosen for every setting;
/// rows are in lexicographic order with setting 0 most significant.
class StrategyTable {
 public:
  StrategyTable() = default;
  StrategyTable(std::vector<int> outcomes_per_setting, std::size_t budget);

  std::size_t size() const noexcept { return count_; }
  std::size_t num_settings() const noexcept { return outcomes_.size(); }
  const std::vector<int>& outcomes() const noexcept { return outcomes_; }
  int response(std::size_t lambda, std::size_t setting) const {
    return responses_[lambda * outcomes_.size() + setting];
  }

 private:
  std::vector<int> outcomes_;
  std::vector<int> responses_;
  std::size_t count_ = 0;
};

inline constexpr std::size_t kDefaultStrategyBudget = 10000;

/// Throws ResourceError (quoting the count) when the table would exceed `budget`.
StrategyTable enumerate_deterministic_strategies(std::span<const int> outcomes_per_setting,
                                                 std::size_t budget = kDefaultStrategyBudget);

struct SteeringOptions {
  int max_iterations = 200;
  double gap_tol = 1e-8;          ///< relative duality gap
  double feasibility_tol = 1e-9;  ///< relative primal and dual residuals
  double signaling_gate = 0.05;   ///< reject inputs whose no-signaling defect exceeds this
  double signaling_warn = 1e-3;
  NumericPolicy policy{};
};

struct SdpSolution {
  double steering_weight = 0.0;  ///< from the primal decomposition
  double dual_bound = 0.0;       ///< certified lower bound 1 - sum Tr F sigma
  double gap = 0.0;              ///< |steering_weight - dual_bound|
  int iterations = 0;
  bool converged = false;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double no_signaling_defect = 0.0;

  std::vector<ComplexMatrix> hidden_states;              ///< sigma_lambda (subnormalized)
  std::vector<std::vector<ComplexMatrix>> steering_part; ///< gamma_{a|x}
  std::vector<std::vector<ComplexMatrix>> lhs_part;      ///< sigma^LHS_{a|x}
  std::vector<std::vector<ComplexMatrix>> dual;          ///< F_{a|x}
  std::vector<std::string> warnings;
};

/// Steering weight of an assemblage of qubit states:
///   SW = 1 - max sum_l Tr sigma_l  s.t.  sum_l D_l(a|x) sigma_l <= sigma_{a|x}, sigma_l >= 0.
/// Solved as a second-order cone program (2x2 PSD blocks are Lorentz cones)
/// by a primal-dual interior-point method with Nesterov-Todd scaling.
///
/// Throws DomainError for members with negative eigenvalues below
/// -policy.lift_tol or a no-signaling defect above the gate, and SolverError
/// if the iteration does not converge.
SdpSolution steering_weight(const Assemblage& asm_in, const SteeringOptions& options = {});

/// Same, reusing a precomputed strategy table (must match the outcome counts).
SdpSolution steering_weight(const Assemblage& asm_in, const StrategyTable& table,
                            const SteeringOptions& options = {});

struct CertificateCheck {
  bool passed = false;
  double dual_psd_margin = 0.0;    ///< min over (a,x) of lambda_min(F_{a|x})
  double dual_cover_margin = 0.0;  ///< min over lambda of lambda_min(sum D F) - 1
  double dual_value = 0.0;         ///< 1 - sum Tr F sigma on the given assemblage
  double gap = 0.0;                ///< |steering_weight - dual_value|
};

/// Re-evaluates the dual functional of `solution` on `asm_in`.
CertificateCheck dual_certificate_check(const Assemblage& asm_in, const SdpSolution& solution,
                                        double gap_tol = 1e-6, double feasibility_tol = 1e-9);

nlohmann::json to_json(const SdpSolution& s);

}  // namespace steerlab
