#pragma once

#include <array>

#include <Eigen/Dense>

#include "steerlab/assemblage.hpp"
#include "steerlab/counts.hpp"
#include "steerlab/numeric_policy.hpp"

namespace steerlab {

/// Angles of a tomography set in the frame where b3 lies along +z and b1 in
/// the x-z half-plane with positive x. phi2 is measured from the y axis.
struct CanonicalAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi2 = 0.0;
};

/// Three dichotomic POVMs {B_i, I - B_i} with B_i = 0.5 (b0_i I + b_i . sigma).
struct TomographySet {
  std::array<double, 3> bias{1.0, 1.0, 1.0};
  std::array<Vec3, 3> vectors{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};

  /// Pauli measurements: b0_i = 1, b_i = e_i.
  static TomographySet ideal();
  static TomographySet from_canonical(const CanonicalAngles& angles, const std::array<double, 3>& lengths = {1, 1, 1},
                                      const std::array<double, 3>& bias = {1, 1, 1});

  /// Rows are b_i^T.
  Eigen::Matrix3d direction_matrix() const;
  /// Throws DomainError when b1 or b3 vanish or are parallel.
  CanonicalAngles canonical_angles() const;

  /// b_i <= min(b0_i, 2 - b0_i) for every i, up to `tol`.
  bool is_positive(double tol = kDefaultPolicy.psd_slack) const;
  /// |det B| > tol.
  bool is_complete(double tol = kDefaultPolicy.completeness_tol) const;
};

/// p_i(0) = 0.5 (b0_i + b_i . r).
Eigen::Vector3d born_probabilities(const TomographySet& set, const BlochVector& r);

/// r = B^{-1} (2p - b0). The result is not clamped to the Bloch ball.
/// Throws CompletenessError when |det B| <= policy.completeness_tol.
BlochVector linear_inversion(const TomographySet& set, const Eigen::Vector3d& p,
                             const NumericPolicy& policy = kDefaultPolicy);

struct Reconstruction {
  Assemblage assemblage;
  bool valid = true;
  double worst_violation = 0.0;  ///< max(0, max |r| - 1) over non-empty members
  std::size_t empty_members = 0;
};

/// sigma_{a|x} = p(a|x) rho_{a|x} with rho_{a|x} from linear inversion.
/// Members with an empty bin become zero and are excluded from validity.
Reconstruction reconstruct_assemblage(const TomographySet& set, const ProbabilityEstimates& estimates,
                                      const NumericPolicy& policy = kDefaultPolicy);

}  // namespace steerlab
