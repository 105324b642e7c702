#include "rwt/cwt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "rwt/error.hpp"
#include "rwt/pearson.hpp"

namespace rwt {
namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void bad_settings(const std::string& what) {
  throw Error(ErrorCategory::configuration, what);
}

}  // namespace

void WindowSettings::validate() const {
  if (window < 2) bad_settings("window must hold at least 2 samples");
  if (!(overlap >= 0.0 && overlap < 1.0)) bad_settings("overlap must lie in [0, 1)");
  const double st = (1.0 - overlap) * window;
  if (std::abs(st - std::round(st)) > 1e-9 || std::round(st) < 1) {
    bad_settings("(1 - overlap) * window must be a positive integer");
  }
  if (scale_segments < 1) bad_settings("scale_segments must be >= 1");
  if (shift_step < 1) bad_settings("shift_step must be >= 1 sample");
  if (tau_range < shift_step || tau_range % shift_step != 0) {
    bad_settings("tau_range must be a positive multiple of shift_step");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) bad_settings("sampling interval must be positive");
  if (!(map.omega_max > map.omega_min) || !(map.omega_min > 0.0)) {
    bad_settings("tonotopic range needs 0 < omega_min < omega_max");
  }
}

int WindowSettings::stride() const {
  return static_cast<int>(std::lround((1.0 - overlap) * window));
}

int WindowSettings::central_offset() const { return (window - stride()) / 2; }

WindowSettings settings_from_config(const KeyValueConfig& cfg, const WindowSettings& d) {
  WindowSettings ws = d;
  ws.window = static_cast<int>(cfg.get_int("window", d.window));
  ws.overlap = cfg.get_double("overlap", d.overlap);
  ws.scale_segments = static_cast<int>(cfg.get_int("scale_segments", d.scale_segments));
  ws.shift_step = static_cast<int>(cfg.get_int("shift_step", d.shift_step));
  ws.tau_range = static_cast<int>(cfg.get_int("tau_range", 8L * ws.window));
  ws.dt = 1.0 / cfg.get_double("rate_hz", d.rate());
  ws.map.omega_max = 2.0 * kPi * cfg.get_double("f_max_hz", d.map.omega_max / (2.0 * kPi));
  ws.map.omega_min = 2.0 * kPi * cfg.get_double("f_min_hz", d.map.omega_min / (2.0 * kPi));
  ws.validate();
  return ws;
}

void settings_to_config(const WindowSettings& ws, KeyValueConfig& cfg) {
  cfg.set("window", std::to_string(ws.window));
  cfg.set("overlap", ws.overlap);
  cfg.set("scale_segments", std::to_string(ws.scale_segments));
  cfg.set("shift_step", std::to_string(ws.shift_step));
  cfg.set("tau_range", std::to_string(ws.tau_range));
  cfg.set("rate_hz", ws.rate());
  cfg.set("f_max_hz", ws.map.omega_max / (2.0 * kPi));
  cfg.set("f_min_hz", ws.map.omega_min / (2.0 * kPi));
}

long window_count(long length, const WindowSettings& ws) {
  if (length < ws.window) return 0;
  return (length - ws.window) / ws.stride() + 1;
}

void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
  const long workers = std::min<long>(std::max(threads, 1), n);
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto run = [&] {
    for (long i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (long w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

WaveletBank::WaveletBank(const WaveletParams& p, const WindowSettings& ws, BankMethod method)
    : params_(p), settings_(ws), method_(method) {
  ws.validate();
  scales_ = scale_grid(ws.map, p, ws.scale_segments);
  const Eigen::Index ns = scales_.size();
  const long nsh = ws.shift_count();
  const long step = ws.shift_step;
  first_ = -(nsh - 1) * step;
  last_ = ws.window - 1;
  const long span = last_ - first_ + 1;

  SynthesisOptions opts;
  opts.band_limit = kPi / ws.dt;
  samples_.resize(ns, span);
  for (Eigen::Index j = 0; j < ns; ++j) {
    if (method == BankMethod::spectral) {
      samples_.row(j) = synthesize_spectral(scales_[j], ws.dt, first_, last_, p, opts).transpose();
    } else {
      for (long n = first_; n <= last_; ++n) {
        samples_(j, n - first_) =
            synthesize_value(n * ws.dt, scales_[j], p, WaveletKind::holomorphic, opts);
      }
    }
  }

  const double cpsi2 = p.c_psi2();
  if (!std::isfinite(cpsi2) || !(cpsi2 > 0.0)) {
    throw Error(ErrorCategory::admissibility, "admissibility constant not finite");
  }
  const double ratio = std::exp(ws.map.gamma() / ws.scale_segments) - 1.0;
  weights_ = (2.0 / cpsi2) * ratio * (step * ws.dt) * scales_.array().inverse();

  const long P = ns * nsh;
  const int N = ws.window, C = ws.stride(), lo = ws.central_offset();
  fwd_re_.resize(P, N);
  fwd_im_.resize(P, N);
  inv_re_.resize(C, P);
  inv_im_.resize(C, P);
  for (long k = 0; k < nsh; ++k) {
    for (Eigen::Index j = 0; j < ns; ++j) {
      const long row = k * ns + j;
      for (int n = 0; n < N; ++n) {
        const auto v = sample(j, n - k * step);
        fwd_re_(row, n) = v.real() * ws.dt;
        fwd_im_(row, n) = -v.imag() * ws.dt;
      }
      for (int c = 0; c < C; ++c) {
        const auto v = sample(j, lo + c - k * step);
        inv_re_(c, row) = weights_[j] * v.real();
        inv_im_(c, row) = weights_[j] * v.imag();
      }
    }
  }
  round_trip_.noalias() = inv_re_ * fwd_re_;
  round_trip_.noalias() -= inv_im_ * fwd_im_;

  // Reference: unit harmonic at the wavelet's reference frequency, 64 windows.
  if (!(p.omega0() < kPi / ws.dt)) {
    bad_settings("reference frequency of the wavelet must lie below Nyquist");
  }
  const long windows = 64;
  double num = 0.0, den = 0.0;
  Eigen::VectorXd x(N);
  for (long w = 0; w < windows; ++w) {
    for (int n = 0; n < N; ++n) x[n] = std::sin(p.omega0() * (w * C + n) * ws.dt);
    x.array() -= x.mean();
    const Eigen::VectorXd raw = round_trip_ * x;
    num += x.segment(lo, C).squaredNorm();
    den += raw.squaredNorm();
  }
  if (!(den > 0.0)) throw Error(ErrorCategory::undefined, "reference reconstruction is zero");
  gain_ = std::sqrt(num / den);
}

TransformGrid forward(const Eigen::Ref<const Eigen::VectorXd>& window, const WaveletBank& bank,
                      long window_origin) {
  const auto& ws = bank.settings();
  if (window.size() != ws.window) {
    throw Error(ErrorCategory::configuration, "window length does not match the bank's N_M");
  }
  const Eigen::Index ns = bank.scales().size();
  const long nsh = ws.shift_count();
  TransformGrid g;
  g.scales = bank.scales();
  g.shifts = (Eigen::VectorXd::LinSpaced(nsh, 0.0, nsh - 1.0) * ws.shift_step).array() +
             static_cast<double>(window_origin);
  g.shifts *= ws.dt;
  g.window_origin = window_origin;
  const Eigen::VectorXd re = bank.forward_re() * window;
  const Eigen::VectorXd im = bank.forward_im() * window;
  g.coeffs.resize(ns, nsh);
  g.coeffs.real() = Eigen::Map<const Eigen::MatrixXd>(re.data(), ns, nsh);
  g.coeffs.imag() = Eigen::Map<const Eigen::MatrixXd>(im.data(), ns, nsh);
  return g;
}

Eigen::VectorXd inverse(const TransformGrid& grid, const Mask& mask, const WaveletBank& bank) {
  const Eigen::Index ns = bank.scales().size();
  const long nsh = bank.settings().shift_count();
  if (grid.coeffs.rows() != ns || grid.coeffs.cols() != nsh || mask.rows() != ns ||
      mask.cols() != nsh) {
    throw Error(ErrorCategory::configuration, "grid or mask shape does not match the bank");
  }
  Eigen::MatrixXd re = mask.select(grid.coeffs.real(), 0.0);
  Eigen::MatrixXd im = mask.select(grid.coeffs.imag(), 0.0);
  const Eigen::Map<const Eigen::VectorXd> vre(re.data(), re.size());
  const Eigen::Map<const Eigen::VectorXd> vim(im.data(), im.size());
  Eigen::VectorXd out = bank.inverse_re() * vre;
  out.noalias() -= bank.inverse_im() * vim;
  return out;
}

Eigen::VectorXd inverse(const TransformGrid& grid, const WaveletBank& bank) {
  return inverse(grid, Mask::Constant(grid.coeffs.rows(), grid.coeffs.cols(), true), bank);
}

StreamResult process_windows(const Eigen::Ref<const Eigen::VectorXd>& signal,
                             const WaveletBank& bank, const WindowMasker& masker,
                             const StreamOptions& opts) {
  const auto& ws = bank.settings();
  const long L = signal.size();
  if (L < ws.window) {
    throw Error(ErrorCategory::input, "signal is shorter than one analysis window");
  }
  const int N = ws.window, C = ws.stride(), lo = ws.central_offset();
  const long nwin = window_count(L, ws);
  const Eigen::Index ns = bank.scales().size();
  const long nsh = ws.shift_count();
  const long P = ns * nsh;
  const long batch = std::max(opts.batch, 1);

  StreamResult r;
  r.output = signal;
  r.windows = nwin;
  r.first = lo;
  r.last = (nwin - 1) * C + lo + C;
  r.pixels_total = nwin * P;

  std::vector<long> kept(nwin, P);
  Eigen::MatrixXd X(N, batch), Yre, Yim, raw;
  Eigen::VectorXd means(batch);
  for (long w0 = 0; w0 < nwin; w0 += batch) {
    const long b = std::min(batch, nwin - w0);
    for (long i = 0; i < b; ++i) {
      const auto seg = signal.segment((w0 + i) * C, N);
      means[i] = seg.mean();
      X.col(i) = seg.array() - means[i];
    }
    const auto Xb = X.leftCols(b);
    if (!masker) {
      raw.noalias() = bank.round_trip() * Xb;
    } else {
      Yre.noalias() = bank.forward_re() * Xb;
      Yim.noalias() = bank.forward_im() * Xb;
      parallel_for(b, opts.threads, [&](long i) {
        TransformGrid g;
        const long origin = (w0 + i) * C;
        g.scales = bank.scales();
        g.shifts = (Eigen::VectorXd::LinSpaced(nsh, 0.0, nsh - 1.0) * ws.shift_step).array() +
                   static_cast<double>(origin);
        g.shifts *= ws.dt;
        g.window_origin = origin;
        g.coeffs.resize(ns, nsh);
        g.coeffs.real() = Eigen::Map<const Eigen::MatrixXd>(Yre.col(i).data(), ns, nsh);
        g.coeffs.imag() = Eigen::Map<const Eigen::MatrixXd>(Yim.col(i).data(), ns, nsh);
        const Mask m = masker(g);
        if (m.rows() != ns || m.cols() != nsh) {
          throw Error(ErrorCategory::configuration, "mask shape does not match the grid");
        }
        const Eigen::Map<const Eigen::Array<bool, Eigen::Dynamic, 1>> flat(m.data(), P);
        Yre.col(i) = flat.select(Yre.col(i).array(), 0.0).matrix();
        Yim.col(i) = flat.select(Yim.col(i).array(), 0.0).matrix();
        kept[w0 + i] = flat.count();
      });
      raw.noalias() = bank.inverse_re() * Yre.leftCols(b);
      raw.noalias() -= bank.inverse_im() * Yim.leftCols(b);
    }
    for (long i = 0; i < b; ++i) {
      r.output.segment((w0 + i) * C + lo, C) = bank.gain() * raw.col(i).array() + means[i];
    }
  }
  r.pixels_kept = 0;
  for (long k : kept) r.pixels_kept += k;
  const long len = r.last - r.first;
  r.rho = std::numeric_limits<double>::quiet_NaN();
  try {
    r.rho = pearson(signal.segment(r.first, len), r.output.segment(r.first, len));
  } catch (const Error&) {
    // constant input or output: correlation undefined, reported as NaN
  }
  return r;
}

}  // namespace rwt
