#include "steerlab/tomography.hpp"

#include <algorithm>
#include <cmath>

#include "steerlab/errors.hpp"

namespace steerlab {

TomographySet TomographySet::ideal() { return {}; }

TomographySet TomographySet::from_canonical(const CanonicalAngles& a, const std::array<double, 3>& lengths,
                                            const std::array<double, 3>& bias) {
  TomographySet s;
  s.bias = bias;
  s.vectors[0] = lengths[0] * Vec3(std::sin(a.theta1), 0.0, std::cos(a.theta1));
  s.vectors[1] = lengths[1] * Vec3(-std::sin(a.phi2) * std::sin(a.theta2), std::cos(a.phi2) * std::sin(a.theta2),
                                   std::cos(a.theta2));
  s.vectors[2] = lengths[2] * Vec3::UnitZ();
  return s;
}

Eigen::Matrix3d TomographySet::direction_matrix() const {
  Eigen::Matrix3d b;
  for (int i = 0; i < 3; ++i) b.row(i) = vectors[static_cast<std::size_t>(i)].transpose();
  return b;
}

CanonicalAngles TomographySet::canonical_angles() const {
  const Vec3& b1 = vectors[0];
  const Vec3& b2 = vectors[1];
  const Vec3& b3 = vectors[2];
  if (b1.norm() == 0.0 || b3.norm() == 0.0) throw DomainError("canonical_angles: b1 and b3 must be non-zero");
  const Vec3 ez = b3.normalized();
  const Vec3 perp = b1 - b1.dot(ez) * ez;
  if (perp.norm() <= 1e-12 * b1.norm()) throw DomainError("canonical_angles: b1 is parallel to b3");
  const Vec3 ex = perp.normalized();
  const Vec3 ey = ez.cross(ex);
  CanonicalAngles out;
  out.theta1 = std::acos(std::clamp(b1.normalized().dot(ez), -1.0, 1.0));
  if (b2.norm() > 0.0) {
    const Vec3 u = b2.normalized();
    out.theta2 = std::acos(std::clamp(u.dot(ez), -1.0, 1.0));
    out.phi2 = std::atan2(-u.dot(ex), u.dot(ey));
  }
  return out;
}

bool TomographySet::is_positive(double tol) const {
  for (std::size_t i = 0; i < 3; ++i) {
    if (vectors[i].norm() > std::min(bias[i], 2.0 - bias[i]) + tol) return false;
  }
  return true;
}

bool TomographySet::is_complete(double tol) const { return std::abs(direction_matrix().determinant()) > tol; }

Eigen::Vector3d born_probabilities(const TomographySet& set, const BlochVector& r) {
  Eigen::Vector3d p;
  for (std::size_t i = 0; i < 3; ++i) p(static_cast<Eigen::Index>(i)) = 0.5 * (set.bias[i] + set.vectors[i].dot(r.r));
  return p;
}

BlochVector linear_inversion(const TomographySet& set, const Eigen::Vector3d& p, const NumericPolicy& policy) {
  const Eigen::Matrix3d b = set.direction_matrix();
  const double det = b.determinant();
  if (!(std::abs(det) > policy.completeness_tol)) {
    throw CompletenessError("linear_inversion: tomography set is not informationally complete (|det B| = " +
                            std::to_string(std::abs(det)) + ")");
  }
  const Eigen::Vector3d b0(set.bias[0], set.bias[1], set.bias[2]);
  return BlochVector{b.partialPivLu().solve(2.0 * p - b0)};
}

Reconstruction reconstruct_assemblage(const TomographySet& set, const ProbabilityEstimates& estimates,
                                      const NumericPolicy& policy) {
  Reconstruction out;
  out.assemblage.outcome_bits = estimates.outcome_bits;
  double worst_norm = 0.0;
  for (const auto& est : estimates.settings) {
    Setting setting{est.label, {}};
    setting.members.reserve(est.outcomes.size());
    for (const auto& o : est.outcomes) {
      Member m;
      if (o.empty() || o.p <= 0.0) {
        ++out.empty_members;
        setting.members.push_back(m);
        continue;
      }
      const Eigen::Vector3d p(*o.bob_zero[0], *o.bob_zero[1], *o.bob_zero[2]);
      m.p = o.p;
      m.bloch = linear_inversion(set, p, policy).r;
      worst_norm = std::max(worst_norm, m.bloch.norm());
      setting.members.push_back(m);
    }
    out.assemblage.settings.push_back(std::move(setting));
  }
  out.worst_violation = std::max(0.0, worst_norm - 1.0);
  out.valid = worst_norm <= 1.0 + policy.validity_tol;
  return out;
}

}  // namespace steerlab
