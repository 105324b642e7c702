#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "rwt/error.hpp"
#include "rwt/synthesis.hpp"

using namespace rwt;
using doctest::Approx;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRate = 28160.0;

// psi_s(u) = sqrt(s)/(2 pi) * integral_0^wc conj(h(s w)) exp(i w u) dw, by plain Romberg.
cd romberg_oracle(double u, double s, const WaveletParams& p, double wc) {
  auto f = [&](double w) {
    return std::sqrt(s) / (2 * kPi) *
           std::conj(spectrum(s, w, p, PhaseVariant::kink_free, NormalizationKind::holomorphic)) *
           std::polar(1.0, w * u);
  };
  const int levels = 18;
  std::vector<std::vector<cd>> r(levels, std::vector<cd>(levels));
  double h = wc;
  r[0][0] = 0.5 * h * (f(0.0) + f(wc));
  for (int i = 1; i < levels; ++i) {
    h *= 0.5;
    cd sum = 0.0;
    const long n = 1L << (i - 1);
    for (long k = 1; k <= n; ++k) sum += f((2 * k - 1) * h);
    r[i][0] = 0.5 * r[i - 1][0] + h * sum;
    double p4 = 4.0;
    for (int j = 1; j <= i; ++j, p4 *= 4.0) r[i][j] = r[i][j - 1] + (r[i][j - 1] - r[i - 1][j - 1]) / (p4 - 1.0);
  }
  return r[levels - 1][levels - 1];
}

double rms(const Eigen::VectorXcd& v) { return std::sqrt(v.squaredNorm() / v.size()); }

Eigen::VectorXd grid(double t0, double t1, double dt) {
  const long n = std::lround((t1 - t0) / dt) + 1;
  return Eigen::VectorXd::LinSpaced(n, t0, t0 + (n - 1) * dt);
}

}  // namespace

TEST_CASE("cutoff frequency sits at 1e-6 of the envelope peak") {
  const auto p = WaveletParams::standard();
  for (double s : {0.1, 1.0, 3.7}) {
    const double wc = cutoff_frequency(s, p);
    // numeric peak of the envelope
    double peak = 0.0;
    for (int i = 1; i <= 20000; ++i) peak = std::max(peak, synthesis_envelope(wc * i / 20000.0, s, p));
    const double ratio = synthesis_envelope(wc, s, p) / peak;
    // ratio -> 1e-6 within 1e-3 relative in omega
    CHECK(synthesis_envelope(wc * (1 - 1e-3), s, p) / peak > 1e-6);
    CHECK(synthesis_envelope(wc * (1 + 1e-3), s, p) / peak < 1e-6);
    CHECK(ratio == Approx(1e-6).epsilon(1e-6));
    CHECK(wc > envelope_mode(p) * p.omega0() / s);
  }
  CHECK(cutoff_frequency(2.0, p) == Approx(cutoff_frequency(1.0, p) / 2).epsilon(1e-10));
  CHECK_THROWS_AS(cutoff_frequency(-1.0, p), Error);
}

TEST_CASE("oscillation roots") {
  const auto p = WaveletParams::standard();
  const double s = 1.0;
  const double wc = cutoff_frequency(s, p);

  SUBCASE("roots sit on the crossings pi/2 + n pi") {
    const double u = 3e-3;
    const auto roots = oscillation_roots(u, s, p, wc);
    REQUIRE(roots.size() > 10);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const double w = roots[i];
      const double th = w * u - phase(s * w / p.omega0(), p);
      const double frac = (th - kPi / 2) / kPi;
      const double dth = u - (s / p.omega0()) * phase_derivative(s * w / p.omega0(), p);
      // bisection tolerance is 1e-3 of the local period in omega
      CHECK(std::abs(frac - std::round(frac)) * kPi < 1e-3 * 2 * kPi + 1e-9 + std::abs(dth) * 0.0);
      if (i) CHECK(roots[i] > roots[i - 1]);
      CHECK(w <= wc);
    }
  }

  SUBCASE("spacing tends to 2 pi / |t - tau|") {
    // the phase keeps a term -beta y linear in omega, so the exact asymptote is
    // 2 pi / |u + s beta / omega0|; it reduces to 2 pi / |u| where s beta / omega0 << |u|
    const double u = 10e-3;
    for (double sc : {0.01, 1.0}) {
      const auto roots = oscillation_roots(u, sc, p, 20 * cutoff_frequency(sc, p));
      REQUIRE(roots.size() > 20);
      const double rate = u + sc * p.beta() / p.omega0();
      // successive roots are half a period apart
      for (std::size_t i = roots.size() - 10; i < roots.size(); ++i) {
        const double spacing = roots[i] - roots[i - 2];
        CHECK(spacing * rate / (2 * kPi) == Approx(1.0).epsilon(0.01));
        if (sc == 0.01) CHECK(spacing * u / (2 * kPi) == Approx(1.0).epsilon(0.01));
      }
    }
  }

  SUBCASE("no time offset: one root per level the monotone phase passes") {
    const auto roots = oscillation_roots(0.0, s, p, wc);
    const double top = -phase(s * wc / p.omega0(), p);
    CHECK(roots.size() == static_cast<std::size_t>(std::floor((top - kPi / 2) / kPi) + 1));
    // a short cutoff below the first level gives no roots
    CHECK(oscillation_roots(0.0, s, p, 0.01 * p.omega0()).empty());
  }
}

TEST_CASE("root-bracketed synthesis matches a plain Romberg oracle near the origin") {
  const auto p = WaveletParams::standard();
  const double wc = cutoff_frequency(1.0, p);
  const auto t = grid(-2e-3, 2e-3, 1.0 / kRate);
  const auto w = synthesize(1.0, 0.0, t, p);
  Eigen::VectorXcd ref(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) ref[i] = romberg_oracle(t[i], 1.0, p, wc);
  CHECK(rms(w.values - ref) / rms(ref) < 1e-4);
}

TEST_CASE("mother wavelet normalization and spectrum") {
  const auto p = WaveletParams::standard();
  const double dt = 1.0 / (64 * 880.0);
  const auto t = grid(-30e-3, 6e-3, dt);
  const auto holo = synthesize(1.0, 0.0, t, p);

  CHECK(holo.values.squaredNorm() * dt == Approx(1.0).epsilon(1e-3));

  const auto re = synthesize(1.0, 0.0, t, p, WaveletKind::real_wavelet);
  CHECK(re.values.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(re.values.squaredNorm() * dt == Approx(1.0).epsilon(1e-3));

  SynthesisOptions shared;
  shared.normalization = NormalizationKind::real_wavelet;
  const auto h_real_k = synthesize(1.0, 0.0, t, p, WaveletKind::holomorphic, shared);
  CHECK((re.values.real() - 2.0 * h_real_k.values.real()).cwiseAbs().maxCoeff() <
        1e-10 * re.values.cwiseAbs().maxCoeff());

  // DFT of the samples vs |h|
  const long n = 1L << 15;
  Eigen::VectorXcd buf = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const long k = std::lround(t[i] / dt);
    buf[(k % n + n) % n] = holo.values[i];
  }
  Eigen::FFT<double> fft;
  Eigen::VectorXcd spec(n);
  fft.fwd(spec, buf);  // exp(-i w t) convention
  const double dw = 2 * kPi / (n * dt);
  double neg = 0.0, total = 0.0;
  for (long m = 0; m < n; ++m) {
    const double e = std::norm(spec[m]);
    total += e;
    if (m > n / 2) neg += e;
  }
  CHECK(neg / total < 1e-4);

  const double peak = spectrum_modulus(1.0, envelope_mode(p) * p.omega0(), p, NormalizationKind::holomorphic);
  double num = 0.0, den = 0.0;
  for (long m = 1; m < n / 2; ++m) {
    const double ref = spectrum_modulus(1.0, m * dw, p, NormalizationKind::holomorphic);
    if (ref < 1e-3 * peak) continue;
    const double got = std::abs(spec[m]) * dt;
    num += (got - ref) * (got - ref);
    den += ref * ref;
  }
  CHECK(std::sqrt(num / den) < 0.01);
}

TEST_CASE("synthesis is insensitive to the cutoff") {
  const auto p = WaveletParams::standard();
  const auto t = grid(-8e-3, 2e-3, 1.0 / kRate);
  const auto base = synthesize(0.7, 0.0, t, p);

  SynthesisOptions loose;
  loose.envelope_threshold = 1e-4;
  const auto l = synthesize(0.7, 0.0, t, p, WaveletKind::holomorphic, loose);
  CHECK(rms(l.values - base.values) / rms(base.values) < 1e-3);

  // threshold that puts the cutoff at twice the default
  const double wc = cutoff_frequency(0.7, p);
  double peak = 0.0;
  for (int i = 1; i <= 20000; ++i) peak = std::max(peak, synthesis_envelope(wc * i / 20000.0, 0.7, p));
  SynthesisOptions wide;
  wide.envelope_threshold = synthesis_envelope(2 * wc, 0.7, p) / peak;
  CHECK(cutoff_frequency(0.7, p, wide.envelope_threshold) == Approx(2 * wc).epsilon(1e-8));
  const auto d = synthesize(0.7, 0.0, t, p, WaveletKind::holomorphic, wide);
  CHECK(rms(d.values - base.values) / rms(base.values) < 1e-6);
}

TEST_CASE("splitting an interval does not change its integral") {
  const auto p = WaveletParams::standard();
  const double u = -4e-3, s = 1.3;
  const auto plan = plan_integration(u, s, p);
  // stay above the curvature jump of the kink-free phase
  const double w_t = p.y_t() * p.omega0() / s;
  std::size_t first = 1;
  while (first < plan.roots.size() && plan.roots[first - 1] < w_t) ++first;
  REQUIRE(plan.roots.size() > first + 4);
  for (std::size_t i = first; i < first + 4; ++i) {
    const double a = plan.roots[i - 1], b = plan.roots[i];
    const double m = a + 0.37 * (b - a);
    const cd whole = integrate_interval(a, b, u, s, p, {});
    const cd parts = integrate_interval(a, m, u, s, p, {}) + integrate_interval(m, b, u, s, p, {});
    CHECK(std::abs(whole - parts) < 1e-10 * std::abs(whole));
  }
}

TEST_CASE("non-convergent quadrature reports the offending sample") {
  const auto p = WaveletParams::standard();
  SynthesisOptions strict;
  strict.interval_tolerance = 0.0;
  strict.max_interval_fraction = 1.0;
  try {
    synthesize_value(3e-3, 1.0, p, WaveletKind::holomorphic, strict);
    FAIL("expected an integration error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::integration);
    CHECK(std::string(e.what()).find("t = 0.003") != std::string::npos);
  }
}

TEST_CASE("spectral route agrees with the root-bracketed route") {
  const auto p = WaveletParams::standard();
  const double dt = 1.0 / kRate;
  SynthesisOptions opts;
  opts.band_limit = kPi / dt;
  for (double s : {0.05, 0.3, 2.0}) {
    const long first = -300, last = 60;
    const auto spec = synthesize_spectral(s, dt, first, last, p, opts);
    Eigen::VectorXcd osc(last - first + 1);
    for (long n = first; n <= last; ++n) {
      osc[n - first] = synthesize_value(n * dt, s, p, WaveletKind::holomorphic, opts);
    }
    CHECK((spec - osc).cwiseAbs().maxCoeff() < 1e-6 * osc.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("causality score") {
  const auto p = WaveletParams::standard();
  CHECK(is_causal(p));

  SampledWavelet w;
  w.times = Eigen::VectorXd::LinSpaced(201, -1.0, 1.0);
  w.values = (-w.times.array().square() * 20.0).exp().cast<cd>();
  // even wavelet: the t = 0 sample belongs to neither side, so compare halves
  const double centre = std::norm(w.values[100]);
  const double total = w.values.squaredNorm();
  CHECK(causality_score(w) == Approx(0.5 * (total - centre) / total).epsilon(1e-12));

  SampledWavelet a;
  a.times = Eigen::VectorXd::LinSpaced(200, -1.005, 0.985).array() + 0.01;
  a.values = (-(a.times.array() + 0.3).square() * 10.0).exp().cast<cd>();
  SampledWavelet b = a;
  b.values = a.values.reverse();
  b.times = -a.times.reverse();
  CHECK(causality_score(a) + causality_score(b) == Approx(1.0).epsilon(1e-12));

  SampledWavelet z = a;
  z.values.setZero();
  try {
    causality_score(z);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::undefined);
  }

  // initial vector of the calibration is also causal; a strongly positive phase is not
  CHECK(is_causal(WaveletParams::initial_guess()));
  CHECK_FALSE(is_causal(WaveletParams(kPi, 0.3 * kPi, 6 * kPi, 6.0)));
}
