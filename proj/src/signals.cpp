#include "rwt/signals.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rwt/error.hpp"

namespace rwt {

Signal gen_harmonic(double freq, double duration, double rate, double amplitude) {
  if (!(rate > 0.0)) throw Error(ErrorCategory::parameter_domain, "rate must be positive");
  if (!(freq >= 0.0)) throw Error(ErrorCategory::parameter_domain, "frequency must be >= 0");
  if (!(freq < 0.5 * rate)) {
    throw Error(ErrorCategory::range, "frequency " + std::to_string(freq) +
                                          " Hz aliases at rate " + std::to_string(rate) + " Hz");
  }
  if (!(duration >= 0.0)) throw Error(ErrorCategory::parameter_domain, "duration must be >= 0");
  const long n = std::lround(duration * rate);
  Signal s;
  s.rate = rate;
  s.samples.resize(n);
  const double w = 2.0 * std::numbers::pi * freq / rate;
  for (long i = 0; i < n; ++i) s.samples[i] = amplitude * std::sin(w * i);
  return s;
}

namespace {

std::vector<long> local_maxima(const Eigen::VectorXd& x) {
  std::vector<long> out;
  for (long i = 1; i + 1 < x.size(); ++i) {
    if (x[i] > x[i - 1] && x[i] > x[i + 1]) out.push_back(i);
  }
  return out;
}

}  // namespace

Signal patch_at_maxima(const std::vector<Signal>& parts) {
  if (parts.empty()) throw Error(ErrorCategory::input, "nothing to patch");
  Signal out;
  out.rate = parts.front().rate;
  std::vector<std::pair<long, long>> ranges;
  long total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].rate != out.rate) throw Error(ErrorCategory::input, "parts differ in rate");
    const auto maxima = local_maxima(parts[i].samples);
    if (maxima.empty()) {
      throw Error(ErrorCategory::input, "part " + std::to_string(i) + " has no local maximum");
    }
    const long first = i == 0 ? 0 : maxima.front();
    const long last = maxima.back();
    ranges.emplace_back(first, last);
    total += last - first + 1;
  }
  out.samples.resize(total);
  long at = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const long n = ranges[i].second - ranges[i].first + 1;
    out.samples.segment(at, n) = parts[i].samples.segment(ranges[i].first, n);
    at += n;
  }
  return out;
}

Signal six_a_corpus(double duration, double rate) {
  std::vector<Signal> parts;
  for (int k = 0; k < 6; ++k) parts.push_back(gen_harmonic(110.0 * (1 << k), duration, rate));
  return patch_at_maxima(parts);
}

double NormalSource::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 53-bit uniform in [0, 1) from the raw engine output, independent of library distributions
  auto uniform = [this] { return (engine_() >> 11) * 0x1.0p-53; };
  double u, v, q;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    q = u * u + v * v;
  } while (q >= 1.0 || q == 0.0);
  const double f = std::sqrt(-2.0 * std::log(q) / q);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

Signal add_white_noise(const Signal& sig, double level, std::uint64_t seed, NoiseReference ref) {
  if (!(level >= 0.0)) throw Error(ErrorCategory::parameter_domain, "noise level must be >= 0");
  Signal out = sig;
  if (level == 0.0 || sig.samples.size() == 0) return out;
  const double amp = ref == NoiseReference::peak
                         ? sig.samples.cwiseAbs().maxCoeff()
                         : std::sqrt(sig.samples.squaredNorm() / sig.samples.size());
  const double sigma = level * amp;
  NormalSource normal(seed);
  for (auto& v : out.samples) v += sigma * normal();
  return out;
}

}  // namespace rwt
