#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "rwt/error.hpp"

namespace rwt {

/// Product-moment correlation of two equally long sample arrays.
/// Throws Error(input) on length mismatch and Error(undefined) if either array is constant.
template <typename A, typename B>
double pearson(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(ErrorCategory::input, "pearson needs two arrays of equal length >= 2");
  }
  const auto x = a.derived().array().template cast<double>();
  const auto y = b.derived().array().template cast<double>();
  const double mx = x.mean(), my = y.mean();
  const double sxy = ((x - mx) * (y - my)).sum();
  const double sxx = (x - mx).square().sum();
  const double syy = (y - my).square().sum();
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(ErrorCategory::undefined, "correlation undefined for a constant array");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace rwt
