#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rwt/wavelet_model.hpp"

namespace rwt {

enum class WaveletKind { real_wavelet, holomorphic };

struct SynthesisOptions {
  PhaseVariant phase = PhaseVariant::kink_free;
  /// Fraction of the envelope peak that defines the cutoff omega_c.
  double envelope_threshold = 1e-6;
  /// Optional hard upper integration limit (rad/s), e.g. the Nyquist frequency of a sampled bank.
  std::optional<double> band_limit;
  /// Overrides the kind-matched normalization constant.
  std::optional<NormalizationKind> normalization;
  /// No integration interval is wider than this fraction of the upper limit.
  double max_interval_fraction = 1.0 / 32.0;
  /// Relative disagreement tolerated between the two quadrature estimates of one interval.
  double interval_tolerance = 1e-8;
};

/// Integration layout for one time sample: upper limit, bracketing roots, quadrature order.
struct IntegrationPlan {
  double cutoff = 0.0;
  std::vector<double> roots;
  int order = 16;
};

/// Daughter wavelet psi_{s tau} sampled on a time grid.
struct SampledWavelet {
  double scale = 1.0;
  double shift = 0.0;
  Eigen::VectorXd times;
  Eigen::VectorXcd values;
  WaveletKind kind = WaveletKind::holomorphic;
};

/// omega > omega_peak where the envelope exp(-kappa (s omega/omega0)^c / c) omega^(kappa nu - 1/2)
/// falls to `threshold` of its maximum. Found by bisection on the monotone tail.
double cutoff_frequency(double s, const WaveletParams& p, double threshold = 1e-6);

/// Envelope of the synthesis integrand, without the normalization prefactor.
double synthesis_envelope(double omega, double s, const WaveletParams& p);

/// Crossings of omega*u - phase(s omega/omega0) through pi/2 + n pi in (0, omega_c], increasing.
/// `u` is t - tau in seconds.
std::vector<double> oscillation_roots(double u, double s, const WaveletParams& p, double omega_c,
                                      PhaseVariant variant = PhaseVariant::kink_free);

IntegrationPlan plan_integration(double u, double s, const WaveletParams& p,
                                 const SynthesisOptions& opts = {});

/// Complex integral of exp(i(omega u - phase)) * envelope over [a, b]: GL16 checked against GL8,
/// one bisection refinement, Error(integration) if the estimates still disagree.
std::complex<double> integrate_interval(double a, double b, double u, double s,
                                        const WaveletParams& p, const SynthesisOptions& opts);

/// One sample psi_{s,0}(u) of the daughter wavelet (u = t - tau).
std::complex<double> synthesize_value(double u, double s, const WaveletParams& p,
                                      WaveletKind kind = WaveletKind::holomorphic,
                                      const SynthesisOptions& opts = {});

SampledWavelet synthesize(double s, double tau, const Eigen::VectorXd& times,
                          const WaveletParams& p, WaveletKind kind = WaveletKind::holomorphic,
                          const SynthesisOptions& opts = {});

/// Holomorphic daughter samples psi_{s,0}(n dt), n in [first, last], from a frequency-sampled
/// inverse DFT of the same spectrum. Independent of the root-bracketed route.
Eigen::VectorXcd synthesize_spectral(double s, double dt, long first, long last,
                                     const WaveletParams& p, const SynthesisOptions& opts = {});

/// Positive-time energy fraction: sum_{t > tau} |psi|^2 / sum |psi|^2.
double causality_score(const SampledWavelet& w);

/// Default causality threshold on causality_score.
inline constexpr double kCausalityThreshold = 1e-4;

/// Mother wavelet (s = 1, tau = 0) on [-span_before, span_after] with step dt.
SampledWavelet mother_wavelet(const WaveletParams& p, double dt, double span_before,
                              double span_after, WaveletKind kind = WaveletKind::holomorphic,
                              const SynthesisOptions& opts = {});

/// Causality check of the mother wavelet on a span wide enough for its tails.
bool is_causal(const WaveletParams& p, double threshold = kCausalityThreshold);

}  // namespace rwt
