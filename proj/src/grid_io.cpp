#include "rwt/grid_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rwt/error.hpp"

namespace rwt {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCategory::io, "write failed for " + path.string());
}

}  // namespace

void export_grid(std::ostream& out, const Eigen::VectorXd& scales, const Eigen::VectorXd& shifts,
                 const Eigen::MatrixXcd& values, GridPayload payload) {
  if (values.rows() != scales.size() || values.cols() != shifts.size()) {
    throw Error(ErrorCategory::input, "grid values do not match the axes");
  }
  out << "s ln_s tau";
  switch (payload) {
    case GridPayload::complex: out << " re im\n"; break;
    case GridPayload::modulus: out << " modulus\n"; break;
    case GridPayload::count: out << " count\n"; break;
  }
  for (Eigen::Index j = 0; j < scales.size(); ++j) {
    const std::string axis = num(scales[j]) + ' ' + num(std::log(scales[j])) + ' ';
    for (Eigen::Index k = 0; k < shifts.size(); ++k) {
      out << axis << num(shifts[k]);
      const auto v = values(j, k);
      switch (payload) {
        case GridPayload::complex: out << ' ' << num(v.real()) << ' ' << num(v.imag()); break;
        case GridPayload::modulus: out << ' ' << num(std::abs(v)); break;
        case GridPayload::count: out << ' ' << std::lround(v.real()); break;
      }
      out << '\n';
    }
  }
}

void export_grid(const std::filesystem::path& path, const TransformGrid& grid, GridPayload payload) {
  auto out = open_out(path);
  export_grid(out, grid.scales, grid.shifts, grid.coeffs, payload);
  finish(out, path);
}

void export_grid(const std::filesystem::path& path, const ReassignedMap& map, GridPayload payload) {
  auto out = open_out(path);
  export_grid(out, map.scales, map.shifts, map.weights, payload);
  finish(out, path);
}

void export_counts(const std::filesystem::path& path, const Eigen::VectorXd& scales,
                   const Eigen::VectorXd& shifts, const ConnectivityMap& map) {
  auto out = open_out(path);
  export_grid(out, scales, shifts, map.counts.cast<double>().matrix().cast<std::complex<double>>(),
              GridPayload::count);
  finish(out, path);
}

ImportedGrid import_grid(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCategory::format, "grid file: missing header");
  ImportedGrid g;
  int payload_cols = 0;
  if (header == "s ln_s tau re im") {
    g.payload = GridPayload::complex;
    payload_cols = 2;
  } else if (header == "s ln_s tau modulus") {
    g.payload = GridPayload::modulus;
    payload_cols = 1;
  } else if (header == "s ln_s tau count") {
    g.payload = GridPayload::count;
    payload_cols = 1;
  } else {
    throw Error(ErrorCategory::format, "grid file: unrecognized header '" + header + "'");
  }
  std::vector<double> s_col, t_col;
  std::vector<std::complex<double>> vals;
  std::string line;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    double s, lns, t, a = 0.0, b = 0.0;
    ls >> s >> lns >> t >> a;
    if (payload_cols == 2) ls >> b;
    if (!ls) throw Error(ErrorCategory::format, "grid file: bad row " + std::to_string(row));
    s_col.push_back(s);
    t_col.push_back(t);
    vals.emplace_back(a, b);
  }
  if (vals.empty()) throw Error(ErrorCategory::format, "grid file: no rows");
  // scale-major: the shift axis repeats with every scale
  std::size_t nt = 1;
  while (nt < s_col.size() && s_col[nt] == s_col[0]) ++nt;
  if (s_col.size() % nt != 0) throw Error(ErrorCategory::format, "grid file: ragged rows");
  const std::size_t ns = s_col.size() / nt;
  g.scales.resize(ns);
  g.shifts.resize(nt);
  g.values.resize(ns, nt);
  for (std::size_t j = 0; j < ns; ++j) {
    g.scales[j] = s_col[j * nt];
    for (std::size_t k = 0; k < nt; ++k) {
      const std::size_t i = j * nt + k;
      if (s_col[i] != g.scales[j] || (j > 0 && t_col[i] != t_col[k])) {
        throw Error(ErrorCategory::format, "grid file: rows are not scale-major");
      }
      g.values(j, k) = vals[i];
    }
  }
  for (std::size_t k = 0; k < nt; ++k) g.shifts[k] = t_col[k];
  return g;
}

ImportedGrid import_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path.string());
  return import_grid(in);
}

}  // namespace rwt
