#include "rwt/synthesis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "rwt/error.hpp"

namespace rwt {
namespace {

constexpr double kPi = std::numbers::pi;

template <int N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};

  GaussLegendre() {
    for (int i = 0; i < N; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= N; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = N * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre<16>& gl16() {
  static const GaussLegendre<16> r;
  return r;
}
const GaussLegendre<8>& gl8() {
  static const GaussLegendre<8> r;
  return r;
}

// exp(i(omega u - phase(y))) * y^(kappa nu - 1/2) exp(-kappa y^c / c), y = s omega / omega0.
// The omega^(kappa nu - 1/2) factor is written in y; the difference goes into the prefactor.
struct Integrand {
  double u, s_over_w0, e, kappa_over_c, c;
  double slope, y_t, eps, alpha, beta;
  bool kink_free;

  Integrand(double u_, double s, const WaveletParams& p, PhaseVariant v)
      : u(u_),
        s_over_w0(s / p.omega0()),
        e(p.kappa() * p.nu() - 0.5),
        kappa_over_c(p.kappa() / p.c()),
        c(p.c()),
        slope(p.tangent_slope()),
        y_t(p.y_t()),
        eps(p.epsilon()),
        alpha(p.alpha()),
        beta(p.beta()),
        kink_free(v == PhaseVariant::kink_free) {}

  double phase_at(double y, double ly) const {
    if (kink_free && y <= y_t) return slope * y;
    return eps + alpha * ly - beta * y;
  }

  double theta(double omega) const {
    const double y = s_over_w0 * omega;
    if (y <= 0.0) return 0.0;
    if (kink_free && y <= y_t) return omega * u - slope * y;
    return omega * u - (eps + alpha * std::log(y) - beta * y);
  }

  std::complex<double> operator()(double omega) const {
    const double y = s_over_w0 * omega;
    if (y <= 0.0) return {0.0, 0.0};
    const double ly = std::log(y);
    const double yc = c == 1.0 ? y : std::exp(c * ly);
    const double amp = std::exp(e * ly - kappa_over_c * yc);
    const double th = omega * u - phase_at(y, ly);
    return {amp * std::cos(th), amp * std::sin(th)};
  }

  double envelope(double omega) const {
    const double y = s_over_w0 * omega;
    if (y <= 0.0) return 0.0;
    const double ly = std::log(y);
    const double yc = c == 1.0 ? y : std::exp(c * ly);
    return std::exp(e * ly - kappa_over_c * yc);
  }

  // Upper bound of |d phase/dy| on [y, infinity).
  double phase_slope_bound(double y) const {
    if (kink_free) return std::max(std::abs(slope), beta);
    return alpha / y + beta;
  }
};

template <int N>
std::complex<double> gauss(const Integrand& f, const GaussLegendre<N>& r, double a, double b,
                           double* env = nullptr) {
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  std::complex<double> acc{0.0, 0.0};
  double e = 0.0;
  for (int i = 0; i < N; ++i) {
    const auto v = f(m + h * r.x[i]);
    acc += r.w[i] * v;
    e += r.w[i] * std::abs(v);
  }
  if (env) *env = e * h;
  return acc * h;
}

// Total envelope mass, integral over omega of y^e exp(-kappa y^c / c); used as absolute floor.
double envelope_mass(double s, const WaveletParams& p) {
  const double e = p.kappa() * p.nu() - 0.5;
  const double c = p.c();
  const double ln_mass = std::lgamma((e + 1.0) / c) - std::log(c) +
                         ((e + 1.0) / c) * std::log(c / p.kappa());
  return (p.omega0() / s) * std::exp(ln_mass);
}

std::complex<double> integrate_checked(const Integrand& f, double a, double b, double tol,
                                       double floor) {
  double env = 0.0;
  const auto i16 = gauss(f, gl16(), a, b, &env);
  const auto i8 = gauss(f, gl8(), a, b);
  const double bound = tol * (env + floor);
  if (std::abs(i16 - i8) <= bound) return i16;
  const double m = 0.5 * (a + b);
  const auto split = gauss(f, gl16(), a, m) + gauss(f, gl16(), m, b);
  if (std::abs(split - i16) <= bound) return split;
  std::ostringstream msg;
  msg.precision(10);
  msg << "quadrature did not converge at t = " << f.u << " s on [" << a << ", " << b
      << "] rad/s";
  throw Error(ErrorCategory::integration, msg.str());
}

double upper_limit(double s, const WaveletParams& p, const SynthesisOptions& opts) {
  double w = cutoff_frequency(s, p, opts.envelope_threshold);
  if (opts.band_limit) {
    if (!(*opts.band_limit > 0.0)) {
      throw Error(ErrorCategory::parameter_domain, "band limit must be positive");
    }
    w = std::min(w, *opts.band_limit);
  }
  return w;
}

double prefactor(double s, const WaveletParams& p, WaveletKind kind, const SynthesisOptions& opts) {
  const NormalizationKind nk =
      opts.normalization.value_or(kind == WaveletKind::real_wavelet
                                      ? NormalizationKind::real_wavelet
                                      : NormalizationKind::holomorphic);
  return p.k(nk) / (2.0 * kPi) * std::sqrt(s / p.omega0());
}

void require_scale(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorCategory::parameter_domain, "scale must be positive and finite");
  }
}

}  // namespace

double synthesis_envelope(double omega, double s, const WaveletParams& p) {
  return Integrand(0.0, s, p, PhaseVariant::kink_free).envelope(omega);
}

double cutoff_frequency(double s, const WaveletParams& p, double threshold) {
  require_scale(s);
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCategory::parameter_domain, "envelope threshold must lie in (0, 1)");
  }
  const double e = p.kappa() * p.nu() - 0.5;
  const double c = p.c();
  const double kc = p.kappa() / c;
  auto log_env = [&](double y) { return e * std::log(y) - kc * std::pow(y, c); };
  const double ye = envelope_mode(p);
  const double target = log_env(ye) + std::log(threshold);
  double lo = ye, hi = 2.0 * ye;
  while (log_env(hi) > target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (log_env(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) * p.omega0() / s;
}

std::vector<double> oscillation_roots(double u, double s, const WaveletParams& p, double omega_c,
                                      PhaseVariant variant) {
  require_scale(s);
  const Integrand f(u, s, p, variant);
  std::vector<double> roots;
  // The raw phase winds without bound as omega -> 0; the integrand is negligible below y = 1e-4.
  double w = variant == PhaseVariant::raw ? 1e-4 / f.s_over_w0 : 0.0;
  auto level = [](double th) { return std::floor((th - 0.5 * kPi) / kPi); };
  double th = f.theta(w);
  while (w < omega_c) {
    const double y = std::max(f.s_over_w0 * w, 1e-300);
    const double h = 0.5 * kPi / (std::abs(u) + f.s_over_w0 * f.phase_slope_bound(y));
    const double w2 = std::min(w + h, omega_c);
    const double th2 = f.theta(w2);
    const double n1 = level(th), n2 = level(th2);
    if (n1 != n2) {
      const double target = 0.5 * kPi + kPi * std::max(n1, n2);
      const bool rising = th2 > th;
      double a = w, b = w2;
      const double tol = 4e-3 * h;  // 1e-3 of the shortest local period 4h
      while (b - a > tol) {
        const double m = 0.5 * (a + b);
        const bool below = f.theta(m) < target;
        (below == rising ? a : b) = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    w = w2;
    th = th2;
  }
  return roots;
}

IntegrationPlan plan_integration(double u, double s, const WaveletParams& p,
                                 const SynthesisOptions& opts) {
  IntegrationPlan plan;
  plan.cutoff = upper_limit(s, p, opts);
  plan.roots = oscillation_roots(u, s, p, plan.cutoff, opts.phase);
  plan.order = 16;
  return plan;
}

std::complex<double> integrate_interval(double a, double b, double u, double s,
                                        const WaveletParams& p, const SynthesisOptions& opts) {
  const Integrand f(u, s, p, opts.phase);
  return integrate_checked(f, a, b, opts.interval_tolerance, 1e-6 * envelope_mass(s, p));
}

std::complex<double> synthesize_value(double u, double s, const WaveletParams& p,
                                      WaveletKind kind, const SynthesisOptions& opts) {
  const IntegrationPlan plan = plan_integration(u, s, p, opts);
  const Integrand f(u, s, p, opts.phase);
  const double floor = 1e-6 * envelope_mass(s, p);
  const double max_width = plan.cutoff * opts.max_interval_fraction;
  std::complex<double> acc{0.0, 0.0};
  double a = 0.0;
  auto add = [&](double b) {
    if (!(b > a)) return;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
    const double width = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i) {
      const double lo = a + i * width;
      const double hi = i + 1 == pieces ? b : lo + width;
      acc += integrate_checked(f, lo, hi, opts.interval_tolerance, floor);
    }
    a = b;
  };
  // the kink-free phase has a jump in curvature at y_t; keep it on an interval boundary
  const double w_t = p.y_t() * p.omega0() / s;
  const bool split_t = opts.phase == PhaseVariant::kink_free && w_t < plan.cutoff;
  for (double r : plan.roots) {
    if (split_t && a < w_t && w_t < r) add(w_t);
    add(r);
  }
  if (split_t && a < w_t) add(w_t);
  add(plan.cutoff);
  const double pref = prefactor(s, p, kind, opts);
  if (kind == WaveletKind::real_wavelet) return {2.0 * pref * acc.real(), 0.0};
  return pref * acc;
}

SampledWavelet synthesize(double s, double tau, const Eigen::VectorXd& times,
                          const WaveletParams& p, WaveletKind kind, const SynthesisOptions& opts) {
  SampledWavelet out;
  out.scale = s;
  out.shift = tau;
  out.times = times;
  out.kind = kind;
  out.values.resize(times.size());
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    out.values[i] = synthesize_value(times[i] - tau, s, p, kind, opts);
  }
  return out;
}

Eigen::VectorXcd synthesize_spectral(double s, double dt, long first, long last,
                                     const WaveletParams& p, const SynthesisOptions& opts) {
  require_scale(s);
  if (!(dt > 0.0)) throw Error(ErrorCategory::parameter_domain, "dt must be positive");
  if (last < first) throw Error(ErrorCategory::parameter_domain, "empty sample range");
  const long span = last - first + 1;
  long n = 65536;
  while (n < 8 * span) n *= 2;
  const double dw = 2.0 * kPi / (n * dt);
  const double top = upper_limit(s, p, opts);
  const Integrand f(0.0, s, p, opts.phase);
  const long m_max = static_cast<long>(std::floor(top / dw + 1e-9));
  const bool on_grid = std::abs(m_max * dw - top) <= 1e-9 * top;

  Eigen::VectorXcd spec = Eigen::VectorXcd::Zero(n);
  for (long m = 1; m <= m_max; ++m) {
    const double w = m * dw;
    auto v = f(w);  // u = 0: exp(-i phase) * envelope
    if (m == m_max && on_grid) v *= 0.5;
    spec[m % n] += v;
  }
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  Eigen::VectorXcd time(n);
  fft.inv(time, spec);

  const double pref = prefactor(s, p, WaveletKind::holomorphic, opts) * dw;
  Eigen::VectorXcd out(span);
  for (long k = 0; k < span; ++k) {
    const long idx = ((first + k) % n + n) % n;
    out[k] = pref * time[idx];
  }
  return out;
}

double causality_score(const SampledWavelet& w) {
  double pos = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < w.values.size(); ++i) {
    const double e = std::norm(w.values[i]);
    total += e;
    if (w.times[i] > w.shift) pos += e;
  }
  if (!(total > 0.0)) throw Error(ErrorCategory::undefined, "wavelet has zero energy");
  return pos / total;
}

SampledWavelet mother_wavelet(const WaveletParams& p, double dt, double span_before,
                              double span_after, WaveletKind kind, const SynthesisOptions& opts) {
  if (!(dt > 0.0)) throw Error(ErrorCategory::parameter_domain, "dt must be positive");
  const long first = -static_cast<long>(std::ceil(span_before / dt));
  const long last = static_cast<long>(std::ceil(span_after / dt));
  Eigen::VectorXd times =
      Eigen::VectorXd::LinSpaced(last - first + 1, first * dt, last * dt);
  return synthesize(1.0, 0.0, times, p, kind, opts);
}

bool is_causal(const WaveletParams& p, double threshold) {
  // 64 samples per reference period keeps the whole spectrum below Nyquist.
  const double period = 2.0 * kPi / p.omega0();
  const double dt = period / 64.0;
  const long first = -64 * 64, last = 32 * 64;
  SampledWavelet w;
  w.scale = 1.0;
  w.shift = 0.0;
  w.times = Eigen::VectorXd::LinSpaced(last - first + 1, first * dt, last * dt);
  w.values = synthesize_spectral(1.0, dt, first, last, p);
  return causality_score(w) <= threshold;
}

}  // namespace rwt
