#pragma once

// First-order steering-weight oracle: ADMM on the conic form
//   minimize c.x  s.t.  A x + s = b,  s in K
// where x collects the hidden states sigma_l, K is a product of 2x2 PSD
// cones, and the rows of A encode sigma_l >= 0 and
// sigma_{a|x} - sum_l D_l(a|x) sigma_l >= 0.
//
// A Hermitian 2x2 X is stored as w_i = Tr(sigma_i X) / sqrt(2), an
// orthonormal chart in which the PSD cone is the Lorentz cone w0 >= |w|.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "steerlab/assemblage.hpp"

namespace oracle {

struct AdmmResult {
  double steering_weight = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline Eigen::Vector4d project_psd(const Eigen::Vector4d& w) {
  const double t = w(0);
  const double r = w.tail<3>().norm();
  if (r <= t) return w;
  if (r <= -t) return Eigen::Vector4d::Zero();
  Eigen::Vector4d out;
  const double h = 0.5 * (t + r);
  out(0) = h;
  out.tail<3>() = w.tail<3>() * (h / r);
  return out;
}

inline AdmmResult admm_steering_weight(const steerlab::Assemblage& a, double tol = 1e-10, int max_iter = 400000) {
  const std::size_t nx = a.settings.size();
  std::vector<int> k(nx);
  std::size_t num_l = 1;
  for (std::size_t x = 0; x < nx; ++x) {
    k[x] = static_cast<int>(a.settings[x].members.size());
    num_l *= static_cast<std::size_t>(k[x]);
  }
  // resp[l][x]: mixed-radix digits of l with setting 0 least significant.
  std::vector<std::vector<int>> resp(num_l, std::vector<int>(nx));
  for (std::size_t l = 0; l < num_l; ++l) {
    std::size_t r = l;
    for (std::size_t x = 0; x < nx; ++x) {
      resp[l][x] = static_cast<int>(r % static_cast<std::size_t>(k[x]));
      r /= static_cast<std::size_t>(k[x]);
    }
  }
  struct Row { std::size_t x; int out; Eigen::Vector4d b; };
  std::vector<Row> rows;
  const double s2 = std::sqrt(2.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (int o = 0; o < k[x]; ++o) {
      const auto& m = a.settings[x].members[static_cast<std::size_t>(o)];
      Eigen::Vector4d b;
      b << m.p, m.p * m.bloch.x(), m.p * m.bloch.y(), m.p * m.bloch.z();
      rows.push_back({x, o, b / s2});
    }
  }
  const std::size_t nr = rows.size();

  // A^T A = M (x) I_4 with M = I + sum_rows d d^T.
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(num_l), static_cast<Eigen::Index>(num_l));
  for (std::size_t i = 0; i < num_l; ++i) {
    for (std::size_t j = 0; j < num_l; ++j) {
      for (std::size_t x = 0; x < nx; ++x) {
        if (resp[i][x] == resp[j][x]) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += 1.0;
      }
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> chol(m);
  const auto row_members = [&](std::size_t r) {
    std::vector<std::size_t> ls;
    for (std::size_t l = 0; l < num_l; ++l) {
      if (resp[l][rows[r].x] == rows[r].out) ls.push_back(l);
    }
    return ls;
  };
  std::vector<std::vector<std::size_t>> members(nr);
  for (std::size_t r = 0; r < nr; ++r) members[r] = row_members(r);

  // Stacked slack layout: first the num_l hidden-state blocks, then the rows.
  const std::size_t ns = num_l + nr;
  using Blocks = std::vector<Eigen::Vector4d>;
  Blocks s(ns, Eigen::Vector4d::Zero()), u(ns, Eigen::Vector4d::Zero()), bvec(ns, Eigen::Vector4d::Zero());
  for (std::size_t r = 0; r < nr; ++r) bvec[num_l + r] = rows[r].b;
  Eigen::Vector4d c_block(-s2, 0, 0, 0);
  Blocks xv(num_l, Eigen::Vector4d::Zero());

  const auto apply_a = [&](const Blocks& xin) {
    Blocks out(ns);
    for (std::size_t l = 0; l < num_l; ++l) out[l] = -xin[l];
    for (std::size_t r = 0; r < nr; ++r) {
      Eigen::Vector4d acc = Eigen::Vector4d::Zero();
      for (std::size_t l : members[r]) acc += xin[l];
      out[num_l + r] = acc;
    }
    return out;
  };
  const auto apply_at = [&](const Blocks& yin) {
    Blocks out(num_l);
    for (std::size_t l = 0; l < num_l; ++l) out[l] = -yin[l];
    for (std::size_t r = 0; r < nr; ++r) {
      for (std::size_t l : members[r]) out[l] += yin[num_l + r];
    }
    return out;
  };

  double rho = 1.0;
  const double alpha = 1.6;
  AdmmResult res;
  for (int it = 1; it <= max_iter; ++it) {
    Blocks rhs(ns);
    for (std::size_t i = 0; i < ns; ++i) rhs[i] = bvec[i] - s[i] - u[i];
    Blocks atr = apply_at(rhs);
    Eigen::MatrixXd rhs_mat(static_cast<Eigen::Index>(num_l), 4);
    for (std::size_t l = 0; l < num_l; ++l) rhs_mat.row(static_cast<Eigen::Index>(l)) = (atr[l] - c_block / rho).transpose();
    const Eigen::MatrixXd sol = chol.solve(rhs_mat);
    for (std::size_t l = 0; l < num_l; ++l) xv[l] = sol.row(static_cast<Eigen::Index>(l)).transpose();

    const Blocks ax = apply_a(xv);
    const Blocks s_old = s;
    Blocks ax_rel(ns);
    for (std::size_t i = 0; i < ns; ++i) ax_rel[i] = alpha * ax[i] + (1.0 - alpha) * (bvec[i] - s[i]);
    for (std::size_t i = 0; i < ns; ++i) s[i] = project_psd(bvec[i] - ax_rel[i] - u[i]);
    for (std::size_t i = 0; i < ns; ++i) u[i] += ax_rel[i] + s[i] - bvec[i];

    if (it % 50 != 0 && it != max_iter) continue;
    double pres = 0.0, objective = 0.0, dual_obj = 0.0;
    for (std::size_t i = 0; i < ns; ++i) pres = std::max(pres, (ax[i] + s[i] - bvec[i]).cwiseAbs().maxCoeff());
    Blocks ds(ns);
    for (std::size_t i = 0; i < ns; ++i) ds[i] = s[i] - s_old[i];
    const Blocks atds = apply_at(ds);
    double dres = 0.0;
    for (std::size_t l = 0; l < num_l; ++l) dres = std::max(dres, rho * atds[l].cwiseAbs().maxCoeff());
    for (std::size_t l = 0; l < num_l; ++l) objective += c_block.dot(xv[l]);
    for (std::size_t i = 0; i < ns; ++i) dual_obj -= bvec[i].dot(rho * u[i]);
    res.iterations = it;
    res.primal_residual = pres;
    res.dual_residual = dres;
    res.gap = std::abs(objective - dual_obj);
    res.steering_weight = 1.0 + objective;
    if (pres < tol && dres < tol && res.gap < tol) {
      res.converged = true;
      break;
    }
    // Residual balancing. A^T A does not involve rho, so the factorization stays valid.
    if (pres > 10.0 * dres) {
      rho *= 2.0;
      for (auto& v : u) v /= 2.0;
    } else if (dres > 10.0 * pres) {
      rho /= 2.0;
      for (auto& v : u) v *= 2.0;
    }
  }
  return res;
}

}  // namespace oracle
