#include "rwt/reassignment.hpp"

#include <cmath>

#include "rwt/error.hpp"

namespace rwt {
namespace {

// Nearest node of a uniform axis, ties toward the smaller index.
long nearest(double x) { return static_cast<long>(std::ceil(x - 0.5)); }

}  // namespace

DerivativeField log_derivatives(const TransformGrid& grid, double floor) {
  const Eigen::Index ns = grid.coeffs.rows(), nt = grid.coeffs.cols();
  if (ns < 2 || nt < 2) {
    throw Error(ErrorCategory::input, "derivatives need at least 2 scales and 2 shifts");
  }
  if (grid.scales.size() != ns || grid.shifts.size() != nt) {
    throw Error(ErrorCategory::input, "grid axes do not match the coefficient matrix");
  }
  const Eigen::MatrixXd mod = grid.coeffs.cwiseAbs();
  const Eigen::MatrixXd lr = mod.array().log().matrix();
  const Eigen::VectorXd ls = grid.scales.array().log();

  DerivativeField d;
  d.d_tau_r.setZero(ns, nt);
  d.d_s_r.setZero(ns, nt);
  d.d_tau_phi.setZero(ns, nt);
  d.d_s_phi.setZero(ns, nt);
  for (Eigen::Index k = 0; k < nt; ++k) {
    const Eigen::Index a = k == 0 ? 0 : k - 1, b = k + 1 == nt ? k : k + 1;
    d.d_tau_r.col(k) = (lr.col(b) - lr.col(a)) / (grid.shifts[b] - grid.shifts[a]);
  }
  for (Eigen::Index j = 0; j < ns; ++j) {
    const Eigen::Index a = j == 0 ? 0 : j - 1, b = j + 1 == ns ? j : j + 1;
    d.d_s_r.row(j) = (lr.row(b) - lr.row(a)) / ((ls[b] - ls[a]) * grid.scales[j]);
  }
  const double threshold = floor * mod.maxCoeff();
  d.valid = (mod.array() >= threshold) && (mod.array() > 0.0) && d.d_tau_r.array().isFinite() &&
            d.d_s_r.array().isFinite();
  return d;
}

void phase_derivatives(DerivativeField& d, const Eigen::VectorXd& scales, const WaveletParams& p) {
  if (p.nu() != 1.0 || p.c() != 1.0) {
    throw Error(ErrorCategory::unsupported, "structure equations are implemented for nu = c = 1");
  }
  const double w0 = p.omega0(), a = p.alpha(), b = p.beta(), k = p.kappa();
  for (Eigen::Index t = 0; t < d.d_tau_r.cols(); ++t) {
    for (Eigen::Index j = 0; j < d.d_tau_r.rows(); ++j) {
      if (!d.valid(j, t)) continue;
      const double s = scales[j];
      const double dtr = d.d_tau_r(j, t);
      const double dtp = w0 / s - (b * dtr + w0 * d.d_s_r(j, t)) / k;
      d.d_tau_phi(j, t) = dtp;
      d.d_s_phi(j, t) = (a - (s / w0) * (b * dtp - k * dtr)) / s;
    }
  }
}

DerivativeField structure_derivatives(const TransformGrid& grid, const WaveletParams& p,
                                      double floor) {
  auto d = log_derivatives(grid, floor);
  phase_derivatives(d, grid.scales, p);
  return d;
}

ReassignedMap reassign(const TransformGrid& grid, const DerivativeField& d, const WaveletParams& p) {
  const Eigen::Index ns = grid.coeffs.rows(), nt = grid.coeffs.cols();
  if (d.valid.rows() != ns || d.valid.cols() != nt) {
    throw Error(ErrorCategory::input, "derivative field does not match the grid");
  }
  if (ns < 2 || nt < 2) throw Error(ErrorCategory::input, "reassignment needs a 2-D grid");
  const double w0 = p.omega0();
  const double ls0 = std::log(grid.scales[0]);
  const double hs = (std::log(grid.scales[ns - 1]) - ls0) / (ns - 1);
  const double dtau = (grid.shifts[nt - 1] - grid.shifts[0]) / (nt - 1);

  ReassignedMap m;
  m.scales = grid.scales;
  const Eigen::Index mt = 2 * nt;
  const double t0 = grid.shifts[0] - nt * dtau;
  m.shifts = Eigen::VectorXd::LinSpaced(mt, 0.0, mt - 1.0) * dtau;
  m.shifts.array() += t0;
  m.weights = Eigen::MatrixXcd::Zero(ns, mt);
  m.target = Eigen::MatrixXi::Constant(ns, nt, -1);

  for (Eigen::Index k = 0; k < nt; ++k) {
    for (Eigen::Index j = 0; j < ns; ++j) {
      if (!d.valid(j, k)) {
        ++m.discarded_floor;
        continue;
      }
      const double dtp = d.d_tau_phi(j, k);
      if (!(dtp > 0.0) || !std::isfinite(dtp)) {
        ++m.discarded_scale;
        continue;
      }
      const double s = grid.scales[j];
      const double s_new = w0 / dtp;
      const long jb = nearest((std::log(s_new) - ls0) / hs);
      if (jb < 0 || jb >= ns) {
        ++m.discarded_scale;
        continue;
      }
      const double shift = s * s * d.d_s_phi(j, k) / w0;
      const double tau_new = grid.shifts[k] + shift;
      const double x = (tau_new - t0) / dtau;
      const long kb = std::isfinite(x) ? nearest(x) : -1;
      if (kb < 0 || kb >= mt) {
        ++m.discarded_time;
        continue;
      }
      m.weights(jb, kb) += reassignment_weight(grid.coeffs(j, k), s, s_new, shift, w0);
      m.target(j, k) = static_cast<int>(kb * ns + jb);
      ++m.mapped;
    }
  }
  return m;
}

Mask bin_mask(const ReassignedMap& map, double threshold) {
  return map.weights.cwiseAbs().array() >= threshold;
}

Mask importance_mask(const ReassignedMap& map, double threshold) {
  const Mask bins = bin_mask(map, threshold);
  Mask out = Mask::Constant(map.target.rows(), map.target.cols(), false);
  for (Eigen::Index k = 0; k < out.cols(); ++k) {
    for (Eigen::Index j = 0; j < out.rows(); ++j) {
      const int t = map.target(j, k);
      if (t >= 0) out(j, k) = bins.data()[t];
    }
  }
  return out;
}

TransformGrid harmonic_transform(const Eigen::VectorXd& scales, const Eigen::VectorXd& shifts,
                                 double omega_s, const WaveletParams& p) {
  TransformGrid g;
  g.scales = scales;
  g.shifts = shifts;
  g.coeffs.resize(scales.size(), shifts.size());
  for (Eigen::Index j = 0; j < scales.size(); ++j) {
    const auto h = std::sqrt(scales[j]) * spectrum(scales[j], omega_s, p, PhaseVariant::kink_free,
                                                   NormalizationKind::holomorphic);
    for (Eigen::Index k = 0; k < shifts.size(); ++k) {
      g.coeffs(j, k) = h * std::polar(1.0, omega_s * shifts[k]);
    }
  }
  return g;
}

}  // namespace rwt
