#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rwt/config.hpp"
#include "rwt/synthesis.hpp"
#include "rwt/wavelet_model.hpp"

namespace rwt {

/// Windowing of the sliding transform. Lengths are in samples so the integer constraints hold
/// by construction; the shift step and range become seconds through dt.
struct WindowSettings {
  int window = 128;          ///< N_M
  double overlap = 0.75;     ///< d
  int scale_segments = 200;  ///< half-semitone grid
  int shift_step = 4;        ///< delta tau / dt
  int tau_range = 1024;      ///< tau_R / dt, default 8 N_M
  double dt = 1.0 / 28160.0;
  TonotopicMap map;

  /// Throws Error(configuration) when an integer constraint or range fails.
  void validate() const;

  int stride() const;          ///< (1 - d) N_M
  int central_offset() const;  ///< d N_M / 2, first reconstructed sample of a window
  int shift_count() const { return tau_range / shift_step; }
  double rate() const { return 1.0 / dt; }
};

WindowSettings settings_from_config(const KeyValueConfig& cfg, const WindowSettings& defaults = {});
void settings_to_config(const WindowSettings& ws, KeyValueConfig& cfg);

/// Boolean pixel grid aligned with a TransformGrid.
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct TransformGrid {
  Eigen::VectorXd scales;
  Eigen::VectorXd shifts;  ///< absolute tau in seconds
  Eigen::MatrixXcd coeffs;  ///< (scale, shift)
  long window_origin = 0;   ///< absolute sample index of the window's first sample
};

enum class BankMethod { oscillatory, spectral };

/// Holomorphic daughter wavelets psi_s(n dt) for every grid scale and every offset a window can
/// see, plus the transform kernels derived from them. Immutable after construction.
class WaveletBank {
 public:
  WaveletBank(const WaveletParams& p, const WindowSettings& ws,
              BankMethod method = BankMethod::oscillatory);

  const WaveletParams& params() const { return params_; }
  const WindowSettings& settings() const { return settings_; }
  const Eigen::VectorXd& scales() const { return scales_; }
  BankMethod method() const { return method_; }

  long first_offset() const { return first_; }
  long last_offset() const { return last_; }
  /// psi_{s_j}(offset dt); offset in [first_offset, last_offset].
  std::complex<double> sample(Eigen::Index j, long offset) const {
    return samples_(j, offset - first_);
  }
  const Eigen::MatrixXcd& samples() const { return samples_; }

  /// Inverse weight of scale j: (2 / c_psi^2) s^-2 ds_j dtau.
  double inverse_weight(Eigen::Index j) const { return weights_[j]; }

  /// Rows k * scales + j: conj(psi_j(n - k step)) dt, split in real and imaginary parts.
  const Eigen::MatrixXd& forward_re() const { return fwd_re_; }
  const Eigen::MatrixXd& forward_im() const { return fwd_im_; }
  /// Columns k * scales + j: weight_j psi_j(lo + c - k step), c over the central samples.
  const Eigen::MatrixXd& inverse_re() const { return inv_re_; }
  const Eigen::MatrixXd& inverse_im() const { return inv_im_; }
  /// Full-mask forward followed by inverse, central samples x window samples.
  const Eigen::MatrixXd& round_trip() const { return round_trip_; }

  /// Output gain matching reconstructed to input RMS on the reference harmonic.
  double gain() const { return gain_; }

 private:
  WaveletParams params_;
  WindowSettings settings_;
  BankMethod method_;
  Eigen::VectorXd scales_;
  long first_ = 0, last_ = 0;
  Eigen::MatrixXcd samples_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd fwd_re_, fwd_im_, inv_re_, inv_im_, round_trip_;
  double gain_ = 1.0;
};

/// Wavelet coefficients of one window. The tau axis starts at the window's first sample and
/// spans tau_R. Throws Error(configuration) if the window length differs from N_M.
TransformGrid forward(const Eigen::Ref<const Eigen::VectorXd>& window, const WaveletBank& bank,
                      long window_origin = 0);

/// Central (1 - d) N_M samples reconstructed from the masked coefficients, before gain.
Eigen::VectorXd inverse(const TransformGrid& grid, const Mask& mask, const WaveletBank& bank);
Eigen::VectorXd inverse(const TransformGrid& grid, const WaveletBank& bank);

/// Per-window mask decision; receives the window's grid and returns the pixels to keep.
using WindowMasker = std::function<Mask(const TransformGrid&)>;

struct StreamOptions {
  int threads = 1;
  /// Windows transformed per kernel product; fixed so results do not depend on `threads`.
  int batch = 64;
};

struct StreamResult {
  Eigen::VectorXd output;
  long first = 0;  ///< reconstructed region [first, last)
  long last = 0;
  long windows = 0;
  long pixels_kept = 0;
  long pixels_total = 0;
  double rho = 0.0;  ///< input vs output over the reconstructed region; NaN if undefined
};

/// Sliding-window analysis/synthesis. Each window has its mean removed before the forward
/// transform and restored after the inverse; edge samples are copied from the input.
/// A null masker keeps every pixel. Throws Error(input) if the signal is shorter than N_M.
StreamResult process_windows(const Eigen::Ref<const Eigen::VectorXd>& signal,
                             const WaveletBank& bank, const WindowMasker& masker = nullptr,
                             const StreamOptions& opts = {});

/// Window count for a signal of `length` samples.
long window_count(long length, const WindowSettings& ws);

/// Run fn(i) for i in [0, n) on up to `threads` threads. Deterministic when fn writes disjoint data.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

}  // namespace rwt
