#pragma once

namespace steerlab {

/// Every tolerance used by the library lives here so that tests and reports
/// quote one source of truth.
struct NumericPolicy {
  double hermitian_tol = 1e-12;   ///< elementwise |M - M^dagger|
  double trace_tol = 1e-10;       ///< |Tr rho - 1| for normalized states
  double psd_slack = 1e-10;       ///< minimum eigenvalue allowed for PSD checks
  double unit_norm_tol = 1e-12;   ///< measurement directions
  double validity_tol = 1e-9;     ///< |r| <= 1 + tol for reconstructed states
  double completeness_tol = 1e-10;///< |det B| for informational completeness
  double lift_tol = 1e-9;         ///< negative eigenvalues lifted before an SDP solve
};

inline constexpr NumericPolicy kDefaultPolicy{};

}  // namespace steerlab
