#include "steerlab/steering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "steerlab/detail/lorentz.hpp"
#include "steerlab/errors.hpp"

namespace steerlab {

using detail::Mat4;
using detail::Vec4;

StrategyTable::StrategyTable(std::vector<int> outcomes_per_setting, std::size_t budget)
    : outcomes_(std::move(outcomes_per_setting)) {
  if (outcomes_.empty()) throw DomainError("strategy table: at least one setting is required");
  double count = 1.0;
  for (int o : outcomes_) {
    if (o < 1) throw DomainError("strategy table: every setting needs at least one outcome");
    count *= o;
  }
  if (count > static_cast<double>(budget)) {
    std::ostringstream msg;
    msg << "strategy table: " << static_cast<unsigned long long>(count)
        << " deterministic strategies exceed the budget of " << budget;
    throw ResourceError(msg.str());
  }
  count_ = static_cast<std::size_t>(count);
  const std::size_t nx = outcomes_.size();
  responses_.resize(count_ * nx);
  std::vector<int> digits(nx, 0);
  for (std::size_t l = 0; l < count_; ++l) {
    std::copy(digits.begin(), digits.end(), responses_.begin() + static_cast<std::ptrdiff_t>(l * nx));
    for (std::size_t x = nx; x-- > 0;) {
      if (++digits[x] < outcomes_[x]) break;
      digits[x] = 0;
    }
  }
}

StrategyTable enumerate_deterministic_strategies(std::span<const int> outcomes_per_setting, std::size_t budget) {
  return StrategyTable(std::vector<int>(outcomes_per_setting.begin(), outcomes_per_setting.end()), budget);
}

namespace {

/// Factor by which the stopping tolerances may be exceeded when the iteration
/// stagnates at the precision floor.
constexpr double kRelaxation = 100.0;

Vec4 coefficients(const Member& m) {
  return {m.p, m.p * m.bloch.x(), m.p * m.bloch.y(), m.p * m.bloch.z()};
}

/// Conic form of the steering-weight program.
///   minimize   -sum_l x_l(0)
///   subject to slack_k + sum_{l : k in blocks(l)} x_l = b_k     for every block k
///              x_l, slack_k in Q
/// A block is one (x, a) pair with a non-zero member.
struct ConeProgram {
  std::size_t settings = 0;
  std::size_t blocks = 0;
  std::vector<std::size_t> hidden_blocks;  ///< hidden l -> block per setting, row-major
  std::vector<std::size_t> hidden_origin;  ///< hidden l -> strategy-table row
  std::vector<Vec4> rhs;

  std::size_t hidden() const { return hidden_origin.size(); }
  std::size_t cones() const { return hidden() + blocks; }

  /// A u, u laid out as [hidden..., slack...]
  std::vector<Vec4> apply(const std::vector<Vec4>& u) const {
    std::vector<Vec4> out(u.begin() + static_cast<std::ptrdiff_t>(hidden()), u.end());
    for (std::size_t l = 0; l < hidden(); ++l) {
      for (std::size_t x = 0; x < settings; ++x) out[hidden_blocks[l * settings + x]] += u[l];
    }
    return out;
  }

  /// A^T y
  std::vector<Vec4> apply_transpose(const std::vector<Vec4>& y) const {
    std::vector<Vec4> out(cones(), Vec4::Zero());
    for (std::size_t l = 0; l < hidden(); ++l) {
      for (std::size_t x = 0; x < settings; ++x) out[l] += y[hidden_blocks[l * settings + x]];
    }
    for (std::size_t k = 0; k < blocks; ++k) out[hidden() + k] = y[k];
    return out;
  }

  Vec4 cost(std::size_t cone) const { return cone < hidden() ? Vec4(-1, 0, 0, 0) : Vec4::Zero(); }
};

double norm(const std::vector<Vec4>& v) {
  double s = 0.0;
  for (const auto& e : v) s += e.squaredNorm();
  return std::sqrt(s);
}

double dot(const std::vector<Vec4>& a, const std::vector<Vec4>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

struct IpmResult {
  std::vector<Vec4> x;
  std::vector<Vec4> y;
  std::vector<Vec4> s;
  int iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  bool at_precision_floor = false;  ///< stopped on stagnation within the relaxed tolerances
  std::string failure;
};

class InteriorPoint {
 public:
  InteriorPoint(const ConeProgram& prog, const SteeringOptions& opt) : prog_(prog), opt_(opt) {}

  IpmResult run() {
    const std::size_t nc = prog_.cones();
    const std::size_t nb = prog_.blocks;
    IpmResult r;
    r.x.assign(nc, Vec4(1, 0, 0, 0));
    r.s.assign(nc, Vec4(1, 0, 0, 0));
    r.y.assign(nb, Vec4::Zero());
    if (nb == 0) {
      r.converged = true;
      return r;
    }

    double b_norm = norm(prog_.rhs);
    double c_norm = std::sqrt(static_cast<double>(prog_.hidden()));
    scalings_.resize(nc);
    int stalls = 0;

    // Close to the optimum of degenerate problems the iterates can stagnate
    // just short of the tolerances (or break down in round-off). The best
    // iterate is kept and accepted if it meets the relaxed tolerances.
    IpmResult best;
    double best_merit = std::numeric_limits<double>::infinity();
    int since_best = 0;
    const auto finish = [&](IpmResult current, std::string failure) {
      if (best_merit <= kRelaxation) {
        best.converged = true;
        best.at_precision_floor = true;
        return best;
      }
      current.failure = std::move(failure);
      return current;
    };

    for (int it = 0; it <= opt_.max_iterations; ++it) {
      const std::vector<Vec4> ax = prog_.apply(r.x);
      std::vector<Vec4> rp(nb);
      for (std::size_t k = 0; k < nb; ++k) rp[k] = prog_.rhs[k] - ax[k];
      const std::vector<Vec4> aty = prog_.apply_transpose(r.y);
      std::vector<Vec4> rd(nc);
      for (std::size_t i = 0; i < nc; ++i) rd[i] = prog_.cost(i) - aty[i] - r.s[i];

      double pobj = 0.0;
      for (std::size_t l = 0; l < prog_.hidden(); ++l) pobj -= r.x[l](0);
      double dobj = 0.0;
      for (std::size_t k = 0; k < nb; ++k) dobj += prog_.rhs[k].dot(r.y[k]);
      const double complementarity = dot(r.x, r.s);
      const double mu = complementarity / static_cast<double>(nc);

      r.iterations = it;
      r.primal_residual = norm(rp) / (1.0 + b_norm);
      r.dual_residual = norm(rd) / (1.0 + c_norm);
      const double rel_gap = std::max(complementarity, std::abs(pobj - dobj)) /
                             (1.0 + std::min(std::abs(pobj), std::abs(dobj)));
      r.gap = rel_gap;
      if (!std::isfinite(r.primal_residual) || !std::isfinite(r.dual_residual) || !std::isfinite(rel_gap)) {
        return finish(r, "numerical breakdown");
      }
      if (r.primal_residual <= opt_.feasibility_tol && r.dual_residual <= opt_.feasibility_tol &&
          rel_gap <= opt_.gap_tol) {
        r.converged = true;
        return r;
      }
      const double merit = std::max({r.primal_residual / opt_.feasibility_tol, r.dual_residual / opt_.feasibility_tol,
                                     rel_gap / opt_.gap_tol});
      if (merit < 0.5 * best_merit) since_best = 0;
      else ++since_best;
      if (merit < best_merit) {
        best_merit = merit;
        best = r;
      }
      if (since_best >= 3 && best_merit <= kRelaxation) return finish(r, "stagnation");
      if (it == opt_.max_iterations) break;

      for (std::size_t i = 0; i < nc; ++i) scalings_[i] = detail::nt_scaling(r.x[i], r.s[i]);
      if (!factor()) return finish(r, "normal equations are numerically singular");

      // Predictor (affine scaling).
      // lambda o (W dx + W^{-1} ds) = -lambda o lambda  gives  q = -lambda.
      std::vector<Vec4> q(nc);
      for (std::size_t i = 0; i < nc; ++i) q[i] = -scalings_[i].lambda;
      std::vector<Vec4> dx, dy, ds;
      solve(rp, rd, q, dx, dy, ds);
      const double alpha_aff = std::min(1.0, step_length(r.x, dx, r.s, ds));
      double mu_aff = 0.0;
      for (std::size_t i = 0; i < nc; ++i) {
        mu_aff += (r.x[i] + alpha_aff * dx[i]).dot(r.s[i] + alpha_aff * ds[i]);
      }
      mu_aff /= static_cast<double>(nc);
      const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

      // Corrector.
      for (std::size_t i = 0; i < nc; ++i) {
        const Vec4 sdx = scalings_[i].w * dx[i];
        const Vec4 sds = scalings_[i].winv * ds[i];
        const Vec4 rc = -detail::jprod(scalings_[i].lambda, scalings_[i].lambda) - detail::jprod(sds, sdx) +
                        Vec4(sigma * mu, 0, 0, 0);
        q[i] = detail::jsolve(scalings_[i].lambda, rc);
      }
      solve(rp, rd, q, dx, dy, ds);
      const double alpha = std::min(1.0, 0.99 * step_length(r.x, dx, r.s, ds));
      if (!(alpha > 0.0) || !std::isfinite(alpha)) return finish(r, "step length collapsed");
      stalls = alpha < 1e-8 ? stalls + 1 : 0;
      if (stalls > 5) return finish(r, "no progress along the search direction");
      for (std::size_t i = 0; i < nc; ++i) {
        r.x[i] += alpha * dx[i];
        r.s[i] += alpha * ds[i];
      }
      for (std::size_t k = 0; k < nb; ++k) r.y[k] += alpha * dy[k];
    }
    return finish(r, "iteration limit reached");
  }

 private:
  bool factor() {
    const std::size_t nb = prog_.blocks;
    const std::size_t nh = prog_.hidden();
    const std::size_t nx = prog_.settings;
    winv2_.resize(prog_.cones());
    for (std::size_t i = 0; i < prog_.cones(); ++i) {
      winv2_[i] = scalings_[i].winv * scalings_[i].winv;
    }
    normal_.setZero(static_cast<Eigen::Index>(4 * nb), static_cast<Eigen::Index>(4 * nb));
    for (std::size_t k = 0; k < nb; ++k) {
      normal_.block<4, 4>(static_cast<Eigen::Index>(4 * k), static_cast<Eigen::Index>(4 * k)) += winv2_[nh + k];
    }
    for (std::size_t l = 0; l < nh; ++l) {
      const std::size_t* row = &prog_.hidden_blocks[l * nx];
      for (std::size_t a = 0; a < nx; ++a) {
        for (std::size_t b = 0; b < nx; ++b) {
          normal_.block<4, 4>(static_cast<Eigen::Index>(4 * row[a]), static_cast<Eigen::Index>(4 * row[b])) +=
              winv2_[l];
        }
      }
    }
    llt_.compute(normal_);
    if (llt_.info() == Eigen::Success) return true;
    const double shift = 1e-14 * normal_.diagonal().cwiseAbs().maxCoeff();
    normal_.diagonal().array() += shift;
    llt_.compute(normal_);
    return llt_.info() == Eigen::Success;
  }

  /// Solves  A dx = rp,  A^T dy + ds = rd,  W dx + W^{-1} ds = q  through the
  /// normal equations, followed by iterative refinement.
  void solve(const std::vector<Vec4>& rp, const std::vector<Vec4>& rd, const std::vector<Vec4>& q,
             std::vector<Vec4>& dx, std::vector<Vec4>& dy, std::vector<Vec4>& ds) const {
    solve_once(rp, rd, q, dx, dy, ds);
    const std::size_t nc = prog_.cones();
    const std::size_t nb = prog_.blocks;
    for (int round = 0; round < 2; ++round) {
      const std::vector<Vec4> adx = prog_.apply(dx);
      const std::vector<Vec4> atdy = prog_.apply_transpose(dy);
      std::vector<Vec4> e1(nb), e2(nc), e3(nc);
      for (std::size_t k = 0; k < nb; ++k) e1[k] = rp[k] - adx[k];
      for (std::size_t i = 0; i < nc; ++i) {
        e2[i] = rd[i] - atdy[i] - ds[i];
        e3[i] = q[i] - scalings_[i].w * dx[i] - scalings_[i].winv * ds[i];
      }
      std::vector<Vec4> cx, cy, cs;
      solve_once(e1, e2, e3, cx, cy, cs);
      for (std::size_t i = 0; i < nc; ++i) {
        dx[i] += cx[i];
        ds[i] += cs[i];
      }
      for (std::size_t k = 0; k < nb; ++k) dy[k] += cy[k];
    }
  }

  void solve_once(const std::vector<Vec4>& rp, const std::vector<Vec4>& rd, const std::vector<Vec4>& q,
                  std::vector<Vec4>& dx, std::vector<Vec4>& dy, std::vector<Vec4>& ds) const {
    const std::size_t nc = prog_.cones();
    const std::size_t nb = prog_.blocks;
    std::vector<Vec4> t(nc);
    for (std::size_t i = 0; i < nc; ++i) t[i] = scalings_[i].winv * q[i] - winv2_[i] * rd[i];
    const std::vector<Vec4> at = prog_.apply(t);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(4 * nb));
    for (std::size_t k = 0; k < nb; ++k) rhs.segment<4>(static_cast<Eigen::Index>(4 * k)) = rp[k] - at[k];
    const Eigen::VectorXd sol = llt_.solve(rhs);
    dy.resize(nb);
    for (std::size_t k = 0; k < nb; ++k) dy[k] = sol.segment<4>(static_cast<Eigen::Index>(4 * k));
    const std::vector<Vec4> atdy = prog_.apply_transpose(dy);
    dx.resize(nc);
    ds.resize(nc);
    for (std::size_t i = 0; i < nc; ++i) {
      ds[i] = rd[i] - atdy[i];
      dx[i] = t[i] + winv2_[i] * atdy[i];
    }
  }

  static double step_length(const std::vector<Vec4>& x, const std::vector<Vec4>& dx, const std::vector<Vec4>& s,
                            const std::vector<Vec4>& ds) {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      alpha = std::min(alpha, detail::max_step(x[i], dx[i]));
      alpha = std::min(alpha, detail::max_step(s[i], ds[i]));
    }
    return alpha;
  }

  const ConeProgram& prog_;
  const SteeringOptions& opt_;
  std::vector<detail::NtScaling> scalings_;
  std::vector<Mat4> winv2_;
  Eigen::MatrixXd normal_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Members after clamping floating-point dust; throws for genuinely
/// unphysical input.
std::vector<std::vector<Member>> sanitized_members(const Assemblage& asm_in, const NumericPolicy& policy,
                                                   std::vector<std::string>& warnings) {
  std::vector<std::vector<Member>> out;
  out.reserve(asm_in.num_settings());
  for (std::size_t x = 0; x < asm_in.num_settings(); ++x) {
    const auto& setting = asm_in.settings[x];
    std::vector<Member> members = setting.members;
    for (std::size_t a = 0; a < members.size(); ++a) {
      Member& m = members[a];
      const std::string where = setting.label + "/" + outcome_label(a, asm_in.outcome_bits);
      if (!std::isfinite(m.p) || !m.bloch.allFinite()) throw DomainError("steering_weight: member " + where + " is not finite");
      if (m.p < 0.0) {
        if (m.p < -policy.lift_tol) throw DomainError("steering_weight: member " + where + " has negative trace");
        m.p = 0.0;
        m.bloch.setZero();
        continue;
      }
      const double r = m.bloch.norm();
      const double min_eig = 0.5 * m.p * (1.0 - r);
      if (min_eig < 0.0) {
        if (min_eig < -policy.lift_tol) {
          std::ostringstream msg;
          msg << "steering_weight: member " << where << " is not positive semidefinite (min eigenvalue "
              << min_eig << ")";
          throw DomainError(msg.str());
        }
        m.bloch /= r;
        std::ostringstream msg;
        msg << "lifted member " << where << " by " << -min_eig << " to restore positivity";
        warnings.push_back(msg.str());
      }
    }
    out.push_back(std::move(members));
  }
  return out;
}

}  // namespace

SdpSolution steering_weight(const Assemblage& asm_in, const SteeringOptions& options) {
  const std::vector<int> outcomes = asm_in.outcome_counts();
  return steering_weight(asm_in, enumerate_deterministic_strategies(outcomes), options);
}

SdpSolution steering_weight(const Assemblage& asm_in, const StrategyTable& table, const SteeringOptions& options) {
  if (asm_in.num_settings() == 0) throw DomainError("steering_weight: empty assemblage");
  if (table.outcomes() != asm_in.outcome_counts()) {
    throw DomainError("steering_weight: strategy table does not match the assemblage outcome counts");
  }
  SdpSolution sol;
  sol.no_signaling_defect = no_signaling_defect(asm_in);
  if (sol.no_signaling_defect > options.signaling_gate) {
    std::ostringstream msg;
    msg << "steering_weight: no-signaling defect " << sol.no_signaling_defect << " exceeds the gate "
        << options.signaling_gate;
    throw DomainError(msg.str());
  }
  if (sol.no_signaling_defect > options.signaling_warn) {
    std::ostringstream msg;
    msg << "no-signaling defect " << sol.no_signaling_defect << " above " << options.signaling_warn;
    sol.warnings.push_back(msg.str());
  }
  const auto members = sanitized_members(asm_in, options.policy, sol.warnings);

  const std::size_t nx = asm_in.num_settings();
  double total_trace = 0.0;
  for (const auto& setting : members) {
    double t = 0.0;
    for (const auto& m : setting) t += m.p;
    if (std::abs(t - 1.0) > 1e-8) {
      std::ostringstream msg;
      msg << "setting total probability " << t << " differs from 1";
      sol.warnings.push_back(msg.str());
    }
    total_trace += t;
  }
  total_trace /= static_cast<double>(nx);
  if (!(total_trace > 0.0)) throw DomainError("steering_weight: assemblage has zero total weight");

  // Blocks with a zero member force every hidden state touching them to vanish.
  ConeProgram prog;
  prog.settings = nx;
  std::vector<std::vector<std::ptrdiff_t>> block_of(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    block_of[x].assign(members[x].size(), -1);
    for (std::size_t a = 0; a < members[x].size(); ++a) {
      if (members[x][a].p > 0.0) {
        block_of[x][a] = static_cast<std::ptrdiff_t>(prog.blocks++);
        prog.rhs.push_back(coefficients(members[x][a]));
      }
    }
  }
  for (std::size_t l = 0; l < table.size(); ++l) {
    bool alive = true;
    for (std::size_t x = 0; x < nx && alive; ++x) {
      alive = block_of[x][static_cast<std::size_t>(table.response(l, x))] >= 0;
    }
    if (!alive) continue;
    prog.hidden_origin.push_back(l);
    for (std::size_t x = 0; x < nx; ++x) {
      prog.hidden_blocks.push_back(static_cast<std::size_t>(block_of[x][static_cast<std::size_t>(table.response(l, x))]));
    }
  }

  const IpmResult ipm = InteriorPoint(prog, options).run();
  sol.iterations = ipm.iterations;
  sol.primal_infeasibility = ipm.primal_residual;
  sol.dual_infeasibility = ipm.dual_residual;
  if (!ipm.converged) {
    std::ostringstream msg;
    msg << "steering_weight: interior-point method failed after " << ipm.iterations
        << " iterations (" << ipm.failure << "; primal residual " << ipm.primal_residual << ", dual residual "
        << ipm.dual_residual << ", relative gap " << ipm.gap << ")";
    throw SolverError(msg.str());
  }
  if (ipm.at_precision_floor) {
    std::ostringstream msg;
    msg << "interior-point iteration stagnated at relative gap " << ipm.gap << ", primal residual "
        << ipm.primal_residual << ", dual residual " << ipm.dual_residual << "; accepted within "
        << kRelaxation << "x of the stopping tolerances";
    sol.warnings.push_back(msg.str());
  }
  sol.converged = true;

  // Hidden states and primal value.
  sol.hidden_states.assign(table.size(), ComplexMatrix::Zero(2, 2));
  double hidden_trace = 0.0;
  for (std::size_t j = 0; j < prog.hidden(); ++j) {
    sol.hidden_states[prog.hidden_origin[j]] = from_pauli_coefficients(ipm.x[j]);
    hidden_trace += ipm.x[j](0);
  }
  sol.steering_weight = std::clamp(1.0 - hidden_trace / total_trace, 0.0, 1.0);

  // Dual functional F = f0 I + f . sigma with f = -y, made exactly feasible.
  sol.dual.resize(nx);
  std::vector<std::vector<Vec4>> f(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    f[x].assign(members[x].size(), Vec4(1, 0, 0, 0));
    for (std::size_t a = 0; a < members[x].size(); ++a) {
      if (block_of[x][a] >= 0) f[x][a] = -ipm.y[static_cast<std::size_t>(block_of[x][a])];
    }
  }
  for (auto& fx : f) {
    for (auto& fk : fx) {
      const double margin = detail::cone_margin(fk);
      if (margin < 0.0) fk(0) -= margin;
    }
  }
  double cover = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < table.size(); ++l) {
    Vec4 sum = Vec4::Zero();
    for (std::size_t x = 0; x < nx; ++x) sum += f[x][static_cast<std::size_t>(table.response(l, x))];
    cover = std::min(cover, detail::cone_margin(sum));
  }
  if (cover < 1.0 && cover > 0.0) {
    for (auto& fx : f) {
      for (auto& fk : fx) fk /= cover;
    }
  }
  double dual_value = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    sol.dual[x].reserve(members[x].size());
    for (std::size_t a = 0; a < members[x].size(); ++a) {
      dual_value += f[x][a].dot(coefficients(members[x][a]));
      sol.dual[x].push_back(from_pauli_coefficients(2.0 * f[x][a]));
    }
  }
  sol.dual_bound = 1.0 - dual_value / total_trace;
  sol.gap = std::abs(sol.steering_weight - std::clamp(sol.dual_bound, 0.0, 1.0));

  // Decomposition sigma = p gamma + (1 - p) sigma^LHS.
  const double p = sol.steering_weight;
  sol.steering_part.resize(nx);
  sol.lhs_part.resize(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    std::vector<ComplexMatrix> lhs_raw(members[x].size(), ComplexMatrix::Zero(2, 2));
    for (std::size_t l = 0; l < table.size(); ++l) {
      lhs_raw[static_cast<std::size_t>(table.response(l, x))] += sol.hidden_states[l];
    }
    for (std::size_t a = 0; a < members[x].size(); ++a) {
      const ComplexMatrix target = members[x][a].sigma();
      sol.lhs_part[x].push_back(p < 1.0 ? ComplexMatrix(lhs_raw[a] / (1.0 - p)) : ComplexMatrix::Zero(2, 2));
      sol.steering_part[x].push_back(p > 0.0 ? ComplexMatrix((target - lhs_raw[a]) / p)
                                             : ComplexMatrix::Zero(2, 2));
    }
  }
  return sol;
}

CertificateCheck dual_certificate_check(const Assemblage& asm_in, const SdpSolution& solution, double gap_tol,
                                        double feasibility_tol) {
  CertificateCheck out;
  const std::vector<int> outcomes = asm_in.outcome_counts();
  if (solution.dual.size() != outcomes.size()) return out;
  for (std::size_t x = 0; x < outcomes.size(); ++x) {
    if (solution.dual[x].size() != static_cast<std::size_t>(outcomes[x])) return out;
  }
  const StrategyTable table = enumerate_deterministic_strategies(outcomes);
  out.dual_psd_margin = std::numeric_limits<double>::infinity();
  double value = 0.0;
  double total = 0.0;
  for (std::size_t x = 0; x < outcomes.size(); ++x) {
    for (std::size_t a = 0; a < solution.dual[x].size(); ++a) {
      out.dual_psd_margin = std::min(out.dual_psd_margin, min_eigenvalue(solution.dual[x][a]));
      const ComplexMatrix sigma = asm_in.settings[x].members[a].sigma();
      value += (solution.dual[x][a] * sigma).trace().real();
      total += asm_in.settings[x].members[a].p;
    }
  }
  total /= static_cast<double>(outcomes.size());
  out.dual_cover_margin = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < table.size(); ++l) {
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (std::size_t x = 0; x < outcomes.size(); ++x) {
      sum += solution.dual[x][static_cast<std::size_t>(table.response(l, x))];
    }
    out.dual_cover_margin = std::min(out.dual_cover_margin, min_eigenvalue(sum) - 1.0);
  }
  out.dual_value = 1.0 - value / total;
  out.gap = std::abs(solution.steering_weight - out.dual_value);
  out.passed = out.dual_psd_margin >= -feasibility_tol && out.dual_cover_margin >= -feasibility_tol &&
               out.gap <= gap_tol;
  return out;
}

nlohmann::json to_json(const SdpSolution& s) {
  nlohmann::json dual = nlohmann::json::array();
  for (const auto& fx : s.dual) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& f : fx) {
      const Eigen::Vector4d v = pauli_coefficients(f);
      row.push_back({v(0), v(1), v(2), v(3)});
    }
    dual.push_back(row);
  }
  return {{"steering_weight", s.steering_weight},
          {"dual_bound", s.dual_bound},
          {"gap", s.gap},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"primal_infeasibility", s.primal_infeasibility},
          {"dual_infeasibility", s.dual_infeasibility},
          {"no_signaling_defect", s.no_signaling_defect},
          {"dual_functional_pauli", dual},
          {"warnings", s.warnings}};
}

}  // namespace steerlab
