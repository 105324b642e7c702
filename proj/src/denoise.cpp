#include "rwt/denoise.hpp"

#include "rwt/error.hpp"
#include "rwt/pearson.hpp"

namespace rwt {

ConnectivityMap connectivity_map(const Mask& mask) {
  if (mask.size() == 0) throw Error(ErrorCategory::input, "connectivity of an empty mask");
  const Eigen::Index R = mask.rows(), C = mask.cols();
  ConnectivityMap m;
  m.counts = Eigen::ArrayXXi::Zero(R, C);
  for (Eigen::Index c = 0; c < C; ++c) {
    for (Eigen::Index r = 0; r < R; ++r) {
      if (!mask(r, c)) continue;
      // credit every in-grid neighbour of a true pixel
      for (Eigen::Index dc = -1; dc <= 1; ++dc) {
        for (Eigen::Index dr = -1; dr <= 1; ++dr) {
          const Eigen::Index rr = r + dr, cc = c + dc;
          if ((dr || dc) && rr >= 0 && rr < R && cc >= 0 && cc < C) ++m.counts(rr, cc);
        }
      }
    }
  }
  return m;
}

Mask connectivity_cut(const Mask& mask, int min_neighbours) {
  if (min_neighbours < 0 || min_neighbours > 8) {
    throw Error(ErrorCategory::parameter_domain, "min_neighbours must lie in [0, 8]");
  }
  if (min_neighbours == 0) return mask;
  return mask && (connectivity_map(mask).counts >= min_neighbours);
}

WindowAnalysis analyze_window(const TransformGrid& grid, const WaveletParams& p, StreamMode mode,
                              const MaskingOptions& opts) {
  WindowAnalysis a;
  if (mode == StreamMode::plain) {
    a.kept = Mask::Constant(grid.coeffs.rows(), grid.coeffs.cols(), true);
    return a;
  }
  a.map = reassign(grid, structure_derivatives(grid, p, opts.derivative_floor), p);
  a.bins = bin_mask(a.map, opts.importance_threshold);
  Mask survivors = a.bins;
  if (mode == StreamMode::connectivity) {
    a.connectivity = connectivity_map(a.bins);
    survivors = a.bins && (a.connectivity.counts >= opts.min_neighbours);
    if (opts.min_neighbours == 0) survivors = a.bins;
  }
  a.kept = Mask::Constant(grid.coeffs.rows(), grid.coeffs.cols(), false);
  for (Eigen::Index k = 0; k < a.kept.cols(); ++k) {
    for (Eigen::Index j = 0; j < a.kept.rows(); ++j) {
      const int t = a.map.target(j, k);
      if (t >= 0) a.kept(j, k) = survivors.data()[t];
    }
  }
  return a;
}

WindowMasker make_masker(const WaveletParams& p, StreamMode mode, const MaskingOptions& opts) {
  if (mode == StreamMode::plain) return nullptr;
  if (opts.min_neighbours < 0 || opts.min_neighbours > 8) {
    throw Error(ErrorCategory::parameter_domain, "min_neighbours must lie in [0, 8]");
  }
  return [p, mode, opts](const TransformGrid& g) { return analyze_window(g, p, mode, opts).kept; };
}

PipelineResult process_stream(const Eigen::Ref<const Eigen::VectorXd>& signal,
                              const WaveletBank& bank, StreamMode mode,
                              const MaskingOptions& masking, const StreamOptions& stream,
                              const Eigen::VectorXd* clean) {
  if (clean && clean->size() != signal.size()) {
    throw Error(ErrorCategory::input, "clean reference length differs from the signal");
  }
  PipelineResult r;
  r.stream = process_windows(signal, bank, make_masker(bank.params(), mode, masking), stream);
  if (clean) {
    const long len = r.stream.last - r.stream.first;
    r.rho_clean = pearson(clean->segment(r.stream.first, len),
                          r.stream.output.segment(r.stream.first, len));
  }
  return r;
}

}  // namespace rwt
