#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "rwt/cwt.hpp"
#include "rwt/error.hpp"
#include "rwt/pearson.hpp"

using namespace rwt;
using doctest::Approx;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

const WaveletBank& standard_bank() {
  static const WaveletBank bank(WaveletParams::standard(), WindowSettings{}, BankMethod::spectral);
  return bank;
}

Eigen::VectorXd sine(double f, long n, double rate = 28160.0, double phase0 = 0.0) {
  Eigen::VectorXd x(n);
  for (long i = 0; i < n; ++i) x[i] = std::sin(2 * kPi * f * i / rate + phase0);
  return x;
}

Mask full(const TransformGrid& g) { return Mask::Constant(g.coeffs.rows(), g.coeffs.cols(), true); }

// Grid scale nearest s, and the shift minimizing the truncation bound
// sum over offsets outside the window of |psi| dt, which bounds |windowed - untruncated|.
std::pair<Eigen::Index, Eigen::Index> least_truncated(const WaveletBank& bank, double s) {
  Eigen::Index j;
  (bank.scales().array().log() - std::log(s)).abs().minCoeff(&j);
  const auto& ws = bank.settings();
  Eigen::Index best_k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ws.shift_count(); ++k) {
    double outside = 0.0;
    for (long n = bank.first_offset(); n <= bank.last_offset(); ++n) {
      const long m = n + k * ws.shift_step;
      if (m < 0 || m >= ws.window) outside += std::abs(bank.sample(j, n));
    }
    if (outside < best) best = outside, best_k = k;
  }
  return {j, best_k};
}

}  // namespace

TEST_CASE("window settings") {
  WindowSettings ws;
  CHECK_NOTHROW(ws.validate());
  CHECK(ws.stride() == 32);
  CHECK(ws.central_offset() == 48);
  CHECK(ws.shift_count() == 256);
  CHECK(window_count(28160, ws) == (28160 - 128) / 32 + 1);
  CHECK(window_count(100, ws) == 0);

  auto bad = ws;
  bad.overlap = 0.7;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ws;
  bad.tau_range = 1022;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ws;
  bad.shift_step = 0;
  CHECK_THROWS_AS(bad.validate(), Error);

  KeyValueConfig cfg;
  ws.shift_step = 2;
  settings_to_config(ws, cfg);
  std::stringstream ss;
  cfg.write(ss);
  const auto back = settings_from_config(KeyValueConfig::parse(ss));
  CHECK(back.shift_step == 2);
  CHECK(back.window == 128);
  CHECK(back.dt == Approx(ws.dt).epsilon(1e-15));
  CHECK(back.map.omega_min == Approx(ws.map.omega_min).epsilon(1e-15));
}

TEST_CASE("spectral and oscillatory banks agree") {
  WindowSettings ws;
  ws.scale_segments = 12;
  ws.tau_range = 256;
  const WaveletBank a(WaveletParams::standard(), ws, BankMethod::oscillatory);
  const WaveletBank b(WaveletParams::standard(), ws, BankMethod::spectral);
  const double peak = a.samples().cwiseAbs().maxCoeff();
  CHECK((a.samples() - b.samples()).cwiseAbs().maxCoeff() < 1e-6 * peak);
  CHECK(a.gain() == Approx(b.gain()).epsilon(1e-6));
}

TEST_CASE("forward transform basics") {
  const auto& bank = standard_bank();
  const auto& ws = bank.settings();

  const auto zero = forward(Eigen::VectorXd::Zero(ws.window), bank);
  CHECK(zero.coeffs.cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero.coeffs.rows() == 201);
  CHECK(zero.coeffs.cols() == 256);

  const auto g = forward(Eigen::VectorXd::Ones(ws.window), bank, 320);
  CHECK(g.window_origin == 320);
  CHECK(g.shifts[0] == Approx(320 * ws.dt));
  CHECK(g.shifts[1] - g.shifts[0] == Approx(4 * ws.dt));

  CHECK_THROWS_AS(forward(Eigen::VectorXd::Zero(100), bank), Error);
}

TEST_CASE("forward transform is linear") {
  const auto& bank = standard_bank();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  Eigen::VectorXd f(128), h(128);
  for (int i = 0; i < 128; ++i) f[i] = n01(rng), h[i] = n01(rng);
  const double a = 0.7, b = -2.3;
  const auto lhs = forward(a * f + b * h, bank).coeffs;
  const auto rhs = (a * forward(f, bank).coeffs + b * forward(h, bank).coeffs).eval();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * rhs.cwiseAbs().maxCoeff());
}

TEST_CASE("forward transform is shift covariant") {
  const auto& bank = standard_bank();
  // support inside both windows so neither truncates it
  Eigen::VectorXd sig = Eigen::VectorXd::Zero(256);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  for (int i = 60; i < 120; ++i) sig[i] = n01(rng);
  for (int m : {1, 3, 7}) {
    const int shift = 4 * m;
    const auto ga = forward(sig.segment(0, 128), bank, 0);
    const auto gb = forward(sig.segment(shift, 128), bank, shift);
    const auto& A = ga.coeffs;
    const auto& B = gb.coeffs;
    const double scale = A.cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Eigen::Index k = 0; k + m < A.cols(); ++k) {
      worst = std::max(worst, (B.col(k) - A.col(k + m)).cwiseAbs().maxCoeff());
      CHECK(gb.shifts[k] == Approx(ga.shifts[k + m]));
    }
    CHECK(worst < 1e-10 * scale);
  }
}

TEST_CASE("windowed harmonic coefficients match the closed form at the ridge") {
  const auto& bank = standard_bank();
  const auto& p = bank.params();
  const auto& ws = bank.settings();
  const double ws_rad = 2 * kPi * 440.0;
  const long origin = 4096;
  Eigen::VectorXd c(128), s(128);
  for (int n = 0; n < 128; ++n) {
    const double t = (origin + n) * ws.dt;
    c[n] = std::cos(ws_rad * t);
    s[n] = std::sin(ws_rad * t);
  }
  // transform of exp(i w t) by linearity
  const Eigen::MatrixXcd wt = forward(c, bank, origin).coeffs + cd(0, 1) * forward(s, bank, origin).coeffs;
  const auto [j, k] = least_truncated(bank, p.omega0() / ws_rad);
  const double sj = bank.scales()[j];
  const double tau = (origin + 4.0 * k) * ws.dt;
  const cd closed = std::sqrt(sj) *
                    spectrum(sj, ws_rad, p, PhaseVariant::kink_free, NormalizationKind::holomorphic) *
                    std::polar(1.0, ws_rad * tau);
  CHECK(std::abs(wt(j, k) - closed) / std::abs(closed) < 0.02);
}

TEST_CASE("inverse transform") {
  const auto& bank = standard_bank();
  const auto g = forward(sine(440, 128), bank);
  const Mask none = Mask::Constant(g.coeffs.rows(), g.coeffs.cols(), false);
  CHECK(inverse(g, none, bank).cwiseAbs().maxCoeff() == 0.0);
  CHECK(inverse(g, bank).size() == 32);

  // explicit forward + inverse equals the precomposed round trip
  Eigen::VectorXd x = sine(1234, 128);
  x.array() -= x.mean();
  const Eigen::VectorXd a = inverse(forward(x, bank), bank);
  const Eigen::VectorXd b = bank.round_trip() * x;
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * b.cwiseAbs().maxCoeff());

  // the discretized inverse already carries nearly unit gain
  CHECK(bank.gain() == Approx(1.0).epsilon(0.05));
}

TEST_CASE("single ridge pixel reconstructs a 440 Hz oscillation") {
  const auto& bank = standard_bank();
  const long n = 28160;
  const Eigen::VectorXd x = sine(440, n);
  const auto probe = forward(x.head(128), bank);
  Eigen::Index j, k;
  probe.coeffs.cwiseAbs().maxCoeff(&j, &k);
  const auto r = process_windows(x, bank, [&](const TransformGrid& g) {
    Mask m = Mask::Constant(g.coeffs.rows(), g.coeffs.cols(), false);
    m(j, k) = true;
    return m;
  });
  const long len = r.last - r.first;
  Eigen::VectorXcd in = r.output.segment(r.first, len).cast<cd>();
  Eigen::VectorXcd spec;
  Eigen::FFT<double> fft;
  fft.fwd(spec, in);
  Eigen::Index peak;
  spec.head(len / 2).cwiseAbs().maxCoeff(&peak);
  const double bin_hz = 28160.0 / len;
  CHECK(std::abs(peak * bin_hz - 440.0) <= bin_hz);
}

TEST_CASE("stream processing") {
  const auto& bank = standard_bank();
  const Eigen::VectorXd x = sine(440, 4000);

  CHECK_THROWS_AS(process_windows(x.head(100), bank), Error);

  const auto r = process_windows(x, bank);
  CHECK(r.windows == window_count(4000, bank.settings()));
  CHECK(r.first == 48);
  CHECK(r.last == (r.windows - 1) * 32 + 80);
  CHECK(r.output.head(48) == x.head(48));
  CHECK(r.output.tail(4000 - r.last) == x.tail(4000 - r.last));
  CHECK(r.rho > 0.9999);

  // full-mask masked path equals the precomposed path
  const auto m = process_windows(x, bank, full);
  CHECK((m.output - r.output).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(m.pixels_kept == m.pixels_total);

  // rho is invariant under positive scaling of the input
  const auto scaled = process_windows(3.7 * x, bank);
  CHECK(scaled.rho == Approx(r.rho).epsilon(1e-12));

  // zero input: rho undefined
  const auto z = process_windows(Eigen::VectorXd::Zero(400), bank);
  CHECK(std::isnan(z.rho));
  CHECK(z.output.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("masked stream is bit-identical across thread counts") {
  const auto& bank = standard_bank();
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  Eigen::VectorXd x = sine(440, 3000);
  for (auto& v : x) v += 0.1 * n01(rng);
  auto masker = [](const TransformGrid& g) { return (g.coeffs.cwiseAbs().array() > 1e-4).eval(); };
  StreamOptions one, three;
  three.threads = 3;
  const auto a = process_windows(x, bank, masker, one);
  const auto b = process_windows(x, bank, masker, three);
  CHECK((a.output.array() == b.output.array()).all());
  CHECK(a.pixels_kept == b.pixels_kept);
  CHECK(a.pixels_kept < a.pixels_total);
}

TEST_CASE("finer resolution does not lose quality") {
  const auto p = WaveletParams::standard();
  WindowSettings coarse, fine_tau, fine_s;
  fine_tau.shift_step = 2;
  fine_s.scale_segments = 400;
  const WaveletBank& base = standard_bank();
  const WaveletBank bt(p, fine_tau, BankMethod::spectral);
  const WaveletBank bs(p, fine_s, BankMethod::spectral);
  for (double f : {110.0, 220.0, 440.0, 880.0, 1760.0, 3520.0, 7040.0}) {
    const Eigen::VectorXd x = sine(f, 28160);
    const double r0 = process_windows(x, base).rho;
    CHECK(process_windows(x, bt).rho >= r0 - 1e-4);
    CHECK(process_windows(x, bs).rho >= r0 - 1e-4);
  }
}

TEST_CASE("log-scale derivative of the transform follows the harmonic structure") {
  const auto& bank = standard_bank();
  const auto& p = bank.params();
  const double w = 2 * kPi * 440.0;
  const long origin = 2048;
  Eigen::VectorXd c(128), s(128);
  for (int n = 0; n < 128; ++n) {
    c[n] = std::cos(w * (origin + n) * bank.settings().dt);
    s[n] = std::sin(w * (origin + n) * bank.settings().dt);
  }
  const Eigen::MatrixXcd wt =
      forward(c, bank, origin).coeffs + cd(0, 1) * forward(s, bank, origin).coeffs;
  const auto [j, k] = least_truncated(bank, p.omega0() / w);
  const double h = std::log(bank.scales()[1] / bank.scales()[0]);
  const cd fd = std::log(wt(j + 1, k) / wt(j - 1, k)) / (2 * h);
  const double y = bank.scales()[j] * w / p.omega0();
  const cd rhs(p.kappa() - p.kappa() * y, p.alpha() - p.beta() * y);
  CHECK(std::abs(fd - rhs) / std::abs(rhs) < 0.02);
}
