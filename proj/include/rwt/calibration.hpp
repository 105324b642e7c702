#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rwt/cwt.hpp"
#include "rwt/wavelet_model.hpp"

namespace rwt {

/// Plain-mode reconstruction rho of `corpus` under a bank built for `p`.
/// Errors propagate; the search maps them to -inf.
double objective(const WaveletParams& p, const Eigen::Ref<const Eigen::VectorXd>& corpus,
                 const WindowSettings& ws, BankMethod method = BankMethod::spectral,
                 int threads = 1);

struct TraceRow {
  WaveletParams params;
  double rho;
  std::string comment;
};

struct OptimizationTrace {
  std::vector<TraceRow> rows;

  /// Header `alpha_over_pi,beta_over_pi,phi_m_over_pi,kappa,nu,c,rho,comment`, one row per entry.
  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
};

/// Outcome of one bracketed coordinate step.
struct StepResult {
  WaveletParams params;
  double rho;
  bool vertex_accepted = false;
  bool aborted = false;
  int substitutions = 0;
  std::string comment;
};

struct SearchOptions {
  std::uint64_t seed = 1;
  int max_walk = 50;
  int max_draws = 32;
  /// Probes of one bracketing stage evaluated concurrently.
  int threads = 1;
};

/// Bracketed coordinate search with quadratic refinement over (beta, phi_m, alpha, kappa).
///
/// The objective is memoized on the full parameter vector. Candidates failing the causality
/// check are replaced by a seeded uniform draw from [v - h, v + h] that passes it.
class CoordinateSearch {
 public:
  using Objective = std::function<double(const WaveletParams&)>;
  using Causality = std::function<bool(const WaveletParams&)>;

  CoordinateSearch(Objective objective, Causality causal, SearchOptions opts = {});

  /// Objective value, or -inf if it throws or is not finite.
  double evaluate(const WaveletParams& p);

  /// One step along coordinate `index` with step h = fraction |centre|.
  StepResult step(const WaveletParams& centre, int index, double fraction);

  /// Passes at 10%, 3% and 1% over every coordinate; first trace row is the input.
  WaveletParams optimize(const WaveletParams& p0, OptimizationTrace& trace,
                         const std::vector<double>& fractions = {0.10, 0.03, 0.01});

  long evaluations() const { return evaluations_; }

 private:
  struct Candidate {
    WaveletParams params;
    bool ok;
  };
  Candidate causal_candidate(const WaveletParams& base, int index, double value, double h,
                             int& substitutions);
  std::vector<double> evaluate_all(const std::vector<Candidate>& c);

  Objective objective_;
  Causality causal_;
  SearchOptions opts_;
  std::mt19937_64 rng_;
  std::map<std::vector<double>, double> memo_;
  long evaluations_ = 0;
};

/// Vertex of the parabola through three points with distinct abscissae; NaN if degenerate.
double parabola_vertex(double x0, double f0, double x1, double f1, double x2, double f2);

inline constexpr const char* kCoordinateNames[4] = {"beta", "phi_m", "alpha", "kappa"};

}  // namespace rwt
