#include "rwt/wavelet_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rwt/error.hpp"

namespace rwt {
namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCategory::parameter_domain,
                std::string(name) + " must be positive and finite, got " + std::to_string(v));
  }
}

double log_normalization_k(double kappa, double nu, double c, NormalizationKind kind) {
  const double x = 2.0 * kappa * nu / c;
  const double numer = kind == NormalizationKind::real_wavelet ? c * kPi : 2.0 * kPi * c;
  return (kappa * nu / c) * std::log(2.0 * kappa / c) + 0.5 * (std::log(numer) - std::lgamma(x));
}

}  // namespace

WaveletParams::WaveletParams(double alpha, double beta, double phi_m, double kappa, double nu,
                             double c, double omega0)
    : alpha_(alpha), beta_(beta), phi_m_(phi_m), kappa_(kappa), nu_(nu), c_(c), omega0_(omega0) {
  require_positive(alpha, "alpha");
  require_positive(beta, "beta");
  require_positive(kappa, "kappa");
  require_positive(nu, "nu");
  require_positive(c, "c");
  require_positive(omega0, "omega0");
  if (!std::isfinite(phi_m)) throw Error(ErrorCategory::parameter_domain, "phi_m must be finite");
  if (!(kappa * nu > 0.5)) {
    throw Error(ErrorCategory::admissibility,
                "kappa*nu must exceed 1/2, got " + std::to_string(kappa * nu));
  }
  y_m_ = alpha / beta;
  y_t_ = y_m_ * std::exp(-phi_m / alpha);
  epsilon_ = phi_m - alpha * (std::log(y_m_) - 1.0);
  tangent_slope_ = beta * (std::exp(phi_m / alpha) - 1.0);
  k_real_ = normalization_k(kappa, nu, c, NormalizationKind::real_wavelet);
  k_holo_ = normalization_k(kappa, nu, c, NormalizationKind::holomorphic);
  c_psi2_ = admissibility(kappa, nu, c, omega0);
}

WaveletParams WaveletParams::from_pi_scaled(double alpha_over_pi, double beta_over_pi,
                                            double phi_m_over_pi, double kappa, double nu,
                                            double c, double f0_hz) {
  return {alpha_over_pi * kPi, beta_over_pi * kPi, phi_m_over_pi * kPi, kappa, nu, c,
          2.0 * kPi * f0_hz};
}

WaveletParams WaveletParams::standard() {
  return from_pi_scaled(1.041, 8.851, -1.831, 6.209);
}

WaveletParams WaveletParams::initial_guess() { return from_pi_scaled(1.0, 8.5, -2.0, 8.0); }

WaveletParams WaveletParams::with_coordinate(int index, double value) const {
  switch (index) {
    case 0: return {alpha_, value, phi_m_, kappa_, nu_, c_, omega0_};
    case 1: return {alpha_, beta_, value, kappa_, nu_, c_, omega0_};
    case 2: return {value, beta_, phi_m_, kappa_, nu_, c_, omega0_};
    case 3: return {alpha_, beta_, phi_m_, value, nu_, c_, omega0_};
    default: throw Error(ErrorCategory::parameter_domain, "coordinate index out of range");
  }
}

double WaveletParams::coordinate(int index) const {
  switch (index) {
    case 0: return beta_;
    case 1: return phi_m_;
    case 2: return alpha_;
    case 3: return kappa_;
    default: throw Error(ErrorCategory::parameter_domain, "coordinate index out of range");
  }
}

bool WaveletParams::operator==(const WaveletParams& o) const noexcept {
  return alpha_ == o.alpha_ && beta_ == o.beta_ && phi_m_ == o.phi_m_ && kappa_ == o.kappa_ &&
         nu_ == o.nu_ && c_ == o.c_ && omega0_ == o.omega0_;
}

double TonotopicMap::gamma() const {
  require_positive(omega_max, "omega_max");
  require_positive(omega_min, "omega_min");
  if (!(omega_max > omega_min)) {
    throw Error(ErrorCategory::parameter_domain, "omega_max must exceed omega_min");
  }
  return std::log(omega_max / omega_min);
}

double phase(double y, const WaveletParams& p, PhaseVariant variant) {
  const double a = std::abs(y);
  if (a == 0.0) return 0.0;  // convention for the raw variant; exact for kink_free
  double v;
  if (variant == PhaseVariant::kink_free && a <= p.y_t()) {
    v = p.tangent_slope() * a;
  } else {
    const double r = a / p.y_m();
    v = p.phi_m() + p.alpha() * (std::log(r) + 1.0 - r);
  }
  return y < 0.0 ? -v : v;
}

double phase_derivative(double y, const WaveletParams& p, PhaseVariant variant) {
  const double a = std::abs(y);
  if (variant == PhaseVariant::kink_free && a <= p.y_t()) return p.tangent_slope();
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  // phase is odd, so its derivative is even
  return p.alpha() / a - p.beta();
}

double spectrum_modulus(double s, double omega, const WaveletParams& p, NormalizationKind kind) {
  require_positive(s, "s");
  const double so = std::abs(s * omega);
  if (so == 0.0) return 0.0;
  const double y = so / p.omega0();
  const double kn = p.kappa() * p.nu();
  const double log_mag = std::log(p.k(kind)) - kn * std::log(p.omega0()) -
                         (p.kappa() / p.c()) * std::pow(y, p.c()) + (kn - 0.5) * std::log(so);
  return std::exp(log_mag);
}

std::complex<double> spectrum(double s, double omega, const WaveletParams& p,
                              PhaseVariant variant, NormalizationKind kind) {
  const double mag = spectrum_modulus(s, omega, p, kind);
  if (mag == 0.0) return {0.0, 0.0};
  return std::polar(mag, phase(s * omega / p.omega0(), p, variant));
}

double envelope_mode(const WaveletParams& p) {
  const double base = p.nu() - 1.0 / (2.0 * p.kappa());
  return std::pow(base, 1.0 / p.c());
}

double normalization_k(double kappa, double nu, double c, NormalizationKind kind) {
  const double lk = log_normalization_k(kappa, nu, c, kind);
  const double k = std::exp(lk);
  if (!std::isfinite(lk) || !std::isfinite(k) || k == 0.0) {
    throw Error(ErrorCategory::range, "normalization constant out of floating-point range");
  }
  return k;
}

double normalization_k(const WaveletParams& p, NormalizationKind kind) { return p.k(kind); }

double admissibility(double kappa, double nu, double c, double omega0) {
  if (!(kappa * nu > 0.5) || !(c > 0.0)) {
    throw Error(ErrorCategory::admissibility, "admissibility requires kappa*nu > 1/2 and c > 0");
  }
  const double x = 2.0 * kappa * nu;
  const double v = (2.0 * kPi / omega0) * std::pow(2.0 * kappa / c, 1.0 / c) *
                   std::exp(std::lgamma((x - 1.0) / c) - std::lgamma(x / c));
  if (!std::isfinite(v) || v <= 0.0) {
    throw Error(ErrorCategory::admissibility, "admissibility constant not finite");
  }
  return v;
}

double admissibility(const WaveletParams& p) { return p.c_psi2(); }

double tonotopic(double x, const TonotopicMap& map) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCategory::parameter_domain,
                "tonotopic position must lie in [0, 1], got " + std::to_string(x));
  }
  return map.omega_max * std::exp(-map.gamma() * x);
}

Eigen::VectorXd scale_grid(const TonotopicMap& map, const WaveletParams& p, int segments) {
  if (segments < 1) throw Error(ErrorCategory::parameter_domain, "segments must be >= 1");
  const double g = map.gamma();
  const double s0 = p.omega0() / map.omega_max;
  Eigen::VectorXd s(segments + 1);
  for (int j = 0; j <= segments; ++j) s[j] = s0 * std::exp(g * j / segments);
  return s;
}

WaveletParams params_from_config(const KeyValueConfig& cfg, const WaveletParams& d) {
  return WaveletParams::from_pi_scaled(
      cfg.get_double("alpha_over_pi", d.alpha() / kPi), cfg.get_double("beta_over_pi", d.beta() / kPi),
      cfg.get_double("phi_m_over_pi", d.phi_m() / kPi), cfg.get_double("kappa", d.kappa()),
      cfg.get_double("nu", d.nu()), cfg.get_double("c", d.c()),
      cfg.get_double("f0_hz", d.omega0() / (2.0 * kPi)));
}

void params_to_config(const WaveletParams& p, KeyValueConfig& cfg) {
  cfg.set("alpha_over_pi", p.alpha() / kPi);
  cfg.set("beta_over_pi", p.beta() / kPi);
  cfg.set("phi_m_over_pi", p.phi_m() / kPi);
  cfg.set("kappa", p.kappa());
  cfg.set("nu", p.nu());
  cfg.set("c", p.c());
  cfg.set("f0_hz", p.omega0() / (2.0 * kPi));
}

}  // namespace rwt
