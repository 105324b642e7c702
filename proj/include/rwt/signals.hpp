#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace rwt {

/// Mono sample sequence with its rate.
struct Signal {
  Eigen::VectorXd samples;
  double rate = 28160.0;

  double dt() const { return 1.0 / rate; }
  long size() const { return static_cast<long>(samples.size()); }
};

/// amplitude * sin(2 pi freq n / rate). Throws Error(range) if freq >= rate / 2.
Signal gen_harmonic(double freq, double duration, double rate = 28160.0, double amplitude = 1.0);

/// Joins parts so each seam goes from the last local maximum of one part to the first local
/// maximum of the next. A local maximum is strictly greater than both neighbours.
/// Throws Error(input) for a part without one or for mismatched rates.
Signal patch_at_maxima(const std::vector<Signal>& parts);

/// Six unit A notes, 110 * 2^k Hz for k = 0..5, each `duration` seconds, patched at maxima.
Signal six_a_corpus(double duration = 5.0, double rate = 28160.0);

/// Standard normal variates by the Marsaglia polar method over mt19937_64.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}
  double operator()();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// What the noise level is relative to: the signal's peak |x| or its RMS.
enum class NoiseReference { peak, rms };

/// Adds i.i.d. N(0, sigma^2) noise with sigma = level * reference amplitude.
/// Throws Error(parameter_domain) for a negative level.
Signal add_white_noise(const Signal& sig, double level, std::uint64_t seed,
                       NoiseReference ref = NoiseReference::peak);

}  // namespace rwt
