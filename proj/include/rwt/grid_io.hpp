#pragma once

#include <filesystem>
#include <iosfwd>

#include <Eigen/Dense>

#include "rwt/cwt.hpp"
#include "rwt/denoise.hpp"
#include "rwt/reassignment.hpp"

namespace rwt {

enum class GridPayload { complex, modulus, count };

/// Whitespace-delimited text: a header line, then one row per pixel in scale-major order with
/// columns s, ln_s, tau and the payload (re im | modulus | count). Full round-trip precision.
void export_grid(std::ostream& out, const Eigen::VectorXd& scales, const Eigen::VectorXd& shifts,
                 const Eigen::MatrixXcd& values, GridPayload payload);
void export_grid(const std::filesystem::path& path, const TransformGrid& grid,
                 GridPayload payload = GridPayload::complex);
void export_grid(const std::filesystem::path& path, const ReassignedMap& map,
                 GridPayload payload = GridPayload::modulus);
void export_counts(const std::filesystem::path& path, const Eigen::VectorXd& scales,
                   const Eigen::VectorXd& shifts, const ConnectivityMap& map);

struct ImportedGrid {
  GridPayload payload = GridPayload::complex;
  Eigen::VectorXd scales;
  Eigen::VectorXd shifts;
  Eigen::MatrixXcd values;  ///< modulus and count payloads land in the real part
};

/// Throws Error(format) for a malformed file, Error(io) if unreadable.
ImportedGrid import_grid(std::istream& in);
ImportedGrid import_grid(const std::filesystem::path& path);

}  // namespace rwt
