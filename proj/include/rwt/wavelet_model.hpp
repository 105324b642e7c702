#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "rwt/config.hpp"

namespace rwt {

enum class PhaseVariant { kink_free, raw };

/// Which normalization constant a wavelet carries: the real wavelet integrates
/// over both frequency signs, the holomorphic one over positive frequencies only.
enum class NormalizationKind { real_wavelet, holomorphic };

/// Parameter vector of the Reimann wavelet family plus its derived constants.
///
/// Immutable: the derived constants (y_m, y_t, epsilon, both normalizations and
/// the admissibility constant) are computed once in the constructor. Any change
/// builds a new vector.
class WaveletParams {
 public:
  /// Throws Error(parameter_domain) unless alpha, beta, kappa, nu, c, omega0 are
  /// positive and finite, and Error(admissibility) unless kappa*nu > 1/2.
  WaveletParams(double alpha, double beta, double phi_m, double kappa, double nu = 1.0,
                double c = 1.0, double omega0 = 2.0 * std::numbers::pi * 880.0);

  /// Same parameters with alpha, beta and phi_m given in units of pi, omega0 as a frequency.
  static WaveletParams from_pi_scaled(double alpha_over_pi, double beta_over_pi,
                                      double phi_m_over_pi, double kappa, double nu = 1.0,
                                      double c = 1.0, double f0_hz = 880.0);

  /// Final optimized vector (alpha=1.041pi, beta=8.851pi, phi_m=-1.831pi, kappa=6.209).
  static WaveletParams standard();
  /// Starting vector of the calibration (alpha=pi, beta=8.5pi, phi_m=-2pi, kappa=8).
  static WaveletParams initial_guess();

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double phi_m() const noexcept { return phi_m_; }
  double kappa() const noexcept { return kappa_; }
  double nu() const noexcept { return nu_; }
  double c() const noexcept { return c_; }
  double omega0() const noexcept { return omega0_; }

  /// Location of the phase maximum, alpha/beta.
  double y_m() const noexcept { return y_m_; }
  /// Tangent point of the line through the origin, y_m exp(-phi_m/alpha).
  double y_t() const noexcept { return y_t_; }
  /// Constant term of the phase, phi_m - alpha (ln y_m - 1).
  double epsilon() const noexcept { return epsilon_; }
  /// Slope of the tangent through the origin, beta (exp(phi_m/alpha) - 1).
  double tangent_slope() const noexcept { return tangent_slope_; }
  double k(NormalizationKind kind) const noexcept {
    return kind == NormalizationKind::real_wavelet ? k_real_ : k_holo_;
  }
  /// Admissibility constant c_psi^2, in seconds.
  double c_psi2() const noexcept { return c_psi2_; }

  /// Copy with one of (beta, phi_m, alpha, kappa) replaced; index order matches the calibrator.
  WaveletParams with_coordinate(int index, double value) const;
  double coordinate(int index) const;

  bool operator==(const WaveletParams& other) const noexcept;

 private:
  double alpha_, beta_, phi_m_, kappa_, nu_, c_, omega0_;
  double y_m_, y_t_, epsilon_, tangent_slope_;
  double k_real_, k_holo_, c_psi2_;
};

/// Angular-frequency range of the tonotopic axis, xi(x) = omega_max exp(-gamma x).
struct TonotopicMap {
  double omega_max = 2.0 * std::numbers::pi * 20000.0;
  double omega_min = 2.0 * std::numbers::pi * 60.0;

  double gamma() const;
};

double phase(double y, const WaveletParams& p, PhaseVariant variant = PhaseVariant::kink_free);
/// d phase / dy. The raw variant diverges at y = 0; it returns +inf there.
double phase_derivative(double y, const WaveletParams& p,
                        PhaseVariant variant = PhaseVariant::kink_free);

template <typename Derived>
auto phase(const Eigen::ArrayBase<Derived>& y, const WaveletParams& p,
           PhaseVariant variant = PhaseVariant::kink_free) {
  return y.unaryExpr([&p, variant](double v) { return phase(v, p, variant); });
}

/// Frequency-domain wavelet h(s omega) at dimensionless scale s and angular frequency omega.
std::complex<double> spectrum(double s, double omega, const WaveletParams& p,
                              PhaseVariant variant = PhaseVariant::kink_free,
                              NormalizationKind kind = NormalizationKind::real_wavelet);

/// |h| at (s, omega); independent of the phase variant.
double spectrum_modulus(double s, double omega, const WaveletParams& p,
                        NormalizationKind kind = NormalizationKind::real_wavelet);

/// Mode of the spectral envelope in y = s omega / omega0: (nu - 1/(2 kappa))^(1/c).
double envelope_mode(const WaveletParams& p);

/// Closed-form normalization constant. Throws Error(range) if the gamma function overflows.
double normalization_k(const WaveletParams& p, NormalizationKind kind);
double normalization_k(double kappa, double nu, double c, NormalizationKind kind);

/// Closed-form admissibility constant, in seconds.
double admissibility(const WaveletParams& p);
double admissibility(double kappa, double nu, double c, double omega0);

/// xi(x) for x in [0, 1]; Error(parameter_domain) outside.
double tonotopic(double x, const TonotopicMap& map = {});

/// s_j = omega0 / xi(j / segments), j = 0..segments. Strictly increasing.
Eigen::VectorXd scale_grid(const TonotopicMap& map, const WaveletParams& p, int segments);

WaveletParams params_from_config(const KeyValueConfig& cfg,
                                 const WaveletParams& defaults = WaveletParams::standard());
void params_to_config(const WaveletParams& p, KeyValueConfig& cfg);

}  // namespace rwt
