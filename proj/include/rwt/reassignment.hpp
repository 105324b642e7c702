#pragma once

#include <complex>

#include <Eigen/Dense>

#include "rwt/cwt.hpp"
#include "rwt/wavelet_model.hpp"

namespace rwt {

/// Log-modulus and phase derivatives of a transform, pixel-aligned with its grid.
struct DerivativeField {
  Eigen::MatrixXd d_tau_r;    ///< d ln|WT| / d tau, 1/s
  Eigen::MatrixXd d_s_r;      ///< d ln|WT| / d s
  Eigen::MatrixXd d_tau_phi;  ///< d arg WT / d tau, rad/s
  Eigen::MatrixXd d_s_phi;    ///< d arg WT / d s
  Mask valid;                 ///< |WT| above the floor and derivatives finite
};

/// Default derivative validity floor, relative to the grid maximum of |WT|.
inline constexpr double kDerivativeFloor = 1e-3;

/// Central differences of ln|WT| along tau (per second) and along s (through ln s, then / s);
/// one-sided at the edges. Only d_tau_r, d_s_r and valid are filled.
/// Throws Error(input) if either axis has fewer than 2 nodes.
DerivativeField log_derivatives(const TransformGrid& grid, double floor = kDerivativeFloor);

/// Structure equations for nu = c = 1 applied on valid pixels:
///   D_tau_phi = omega0/s - (beta D_tau_r + omega0 D_s_r) / kappa
///   s D_s_phi = alpha - (s/omega0) (beta D_tau_phi - kappa D_tau_r)
/// Throws Error(unsupported) unless nu == 1 and c == 1.
void phase_derivatives(DerivativeField& d, const Eigen::VectorXd& scales, const WaveletParams& p);

/// log_derivatives followed by phase_derivatives.
DerivativeField structure_derivatives(const TransformGrid& grid, const WaveletParams& p,
                                      double floor = kDerivativeFloor);

/// Complex weight of a pixel moved from (s, tau) to (s_new, tau + dtau).
inline std::complex<double> reassignment_weight(std::complex<double> wt, double s, double s_new,
                                                double dtau, double omega0) {
  return wt * std::polar(1.0, 0.5 * omega0 * (1.0 / s_new + 1.0 / s) * dtau);
}

/// Complex-weighted histogram over (s~, tau~). The scale axis is the source axis; the tau axis
/// keeps the source step but starts tau_R (the source span) earlier, because the causal
/// wavelet's delay moves energy up to tau_R before the window.
struct ReassignedMap {
  Eigen::VectorXd scales;
  Eigen::VectorXd shifts;
  Eigen::MatrixXcd weights;
  /// Per source pixel: linear bin index (column-major in weights) or -1 when discarded.
  Eigen::MatrixXi target;
  long mapped = 0;
  long discarded_floor = 0;  ///< invalid derivative (below the floor)
  long discarded_scale = 0;  ///< D_tau_phi <= 0 or s~ off the scale axis
  long discarded_time = 0;   ///< tau~ off the tau axis
};

/// Bins each valid pixel to the nearest (ln s, tau) node, ties toward the smaller index.
ReassignedMap reassign(const TransformGrid& grid, const DerivativeField& d, const WaveletParams& p);

/// Default importance threshold on accumulated |weight|.
inline constexpr double kImportanceThreshold = 1e-12;

/// Source pixels whose target bin accumulated |weight| >= threshold; discarded pixels are false.
Mask importance_mask(const ReassignedMap& map, double threshold = kImportanceThreshold);

/// Bin-level mask of the map: |weight| >= threshold.
Mask bin_mask(const ReassignedMap& map, double threshold = kImportanceThreshold);

/// Transform of exp(i omega_s t) in closed form, sqrt(s) h(s omega_s) exp(i omega_s tau),
/// evaluated on the given axes (holomorphic normalization).
TransformGrid harmonic_transform(const Eigen::VectorXd& scales, const Eigen::VectorXd& shifts,
                                 double omega_s, const WaveletParams& p);

}  // namespace rwt
