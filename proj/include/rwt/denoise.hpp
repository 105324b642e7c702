#pragma once

#include <optional>

#include <Eigen/Dense>

#include "rwt/cwt.hpp"
#include "rwt/reassignment.hpp"

namespace rwt {

/// Per-pixel number of true 8-neighbours, 0..8. Out-of-grid neighbours count as false.
struct ConnectivityMap {
  Eigen::ArrayXXi counts;
};

/// Throws Error(input) for an empty mask.
ConnectivityMap connectivity_map(const Mask& mask);

/// Keeps true pixels with at least `min_neighbours` true neighbours; applied once.
/// Throws Error(parameter_domain) unless 0 <= min_neighbours <= 8.
Mask connectivity_cut(const Mask& mask, int min_neighbours = 4);

enum class StreamMode { plain, reassign, connectivity };

struct MaskingOptions {
  double derivative_floor = kDerivativeFloor;
  double importance_threshold = kImportanceThreshold;
  int min_neighbours = 4;
};

/// Everything the masking of one window produces.
struct WindowAnalysis {
  ReassignedMap map;
  Mask bins;                      ///< reassigned-plane importance
  ConnectivityMap connectivity;   ///< of `bins` (connectivity mode only)
  Mask kept;                      ///< source pixels passed to the inverse
};

/// reassign: source pixel kept iff its target bin is important.
/// connectivity: the neighbour cut runs on the reassigned-plane importance; a source pixel is
/// kept iff its target bin survives. plain keeps every pixel.
WindowAnalysis analyze_window(const TransformGrid& grid, const WaveletParams& p, StreamMode mode,
                              const MaskingOptions& opts = {});

/// Masker for process_windows; null for plain mode.
WindowMasker make_masker(const WaveletParams& p, StreamMode mode, const MaskingOptions& opts = {});

struct PipelineResult {
  StreamResult stream;
  std::optional<double> rho_clean;  ///< vs the clean reference over the reconstructed region
};

/// Sliding-window reconstruction in the given mode. With a clean reference (same length as the
/// signal) the result also carries rho(clean, output). Throws Error(input) on length mismatch.
PipelineResult process_stream(const Eigen::Ref<const Eigen::VectorXd>& signal,
                              const WaveletBank& bank, StreamMode mode,
                              const MaskingOptions& masking = {},
                              const StreamOptions& stream = {},
                              const Eigen::VectorXd* clean = nullptr);

}  // namespace rwt
