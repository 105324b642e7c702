#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "rwt/calibration.hpp"
#include "rwt/config.hpp"
#include "rwt/cwt.hpp"
#include "rwt/denoise.hpp"
#include "rwt/error.hpp"
#include "rwt/grid_io.hpp"
#include "rwt/pearson.hpp"
#include "rwt/reassignment.hpp"
#include "rwt/signals.hpp"
#include "rwt/synthesis.hpp"
#include "rwt/wav.hpp"

using namespace rwt;

namespace {

struct Global {
  std::string config;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string bank = "spectral";
  std::optional<int> window, scale_segments, shift_step, tau_range;
  std::optional<double> overlap, f_max, f_min;
};

KeyValueConfig load_config(const Global& g) {
  KeyValueConfig cfg;
  if (!g.config.empty()) cfg = KeyValueConfig::load(g.config);
  if (g.window) cfg.set("window", std::to_string(*g.window));
  if (g.overlap) cfg.set("overlap", *g.overlap);
  if (g.scale_segments) cfg.set("scale_segments", std::to_string(*g.scale_segments));
  if (g.shift_step) cfg.set("shift_step", std::to_string(*g.shift_step));
  if (g.tau_range) cfg.set("tau_range", std::to_string(*g.tau_range));
  if (g.f_max) cfg.set("f_max_hz", *g.f_max);
  if (g.f_min) cfg.set("f_min_hz", *g.f_min);
  return cfg;
}

WindowSettings settings_for(const Global& g, double rate) {
  auto cfg = load_config(g);
  cfg.set("rate_hz", rate);
  auto ws = settings_from_config(cfg);
  ws.validate();
  return ws;
}

WaveletParams params_for(const Global& g) { return params_from_config(load_config(g)); }

BankMethod bank_method(const Global& g) {
  return g.bank == "oscillatory" ? BankMethod::oscillatory : BankMethod::spectral;
}

StreamOptions stream_options(const Global& g) {
  StreamOptions so;
  so.threads = g.threads;
  return so;
}

int exit_code(ErrorCategory c) { return 10 + static_cast<int>(c); }

void print_rho(const char* label, double rho) { std::printf("%s %.6f\n", label, rho); }

// Window of `signal` starting at `start`, mean removed as the stream does.
TransformGrid window_grid(const Signal& s, long start, const WaveletBank& bank) {
  const int n = bank.settings().window;
  if (start < 0 || start + n > s.size()) {
    throw Error(ErrorCategory::input, "window start " + std::to_string(start) + " outside the signal");
  }
  Eigen::VectorXd x = s.samples.segment(start, n);
  x.array() -= x.mean();
  return forward(x, bank, start);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reimann wavelet transform toolkit"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--config", g.config, "key = value file with wavelet parameters and settings")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "seed for noise and causal-neighbour draws");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  app.add_option("--bank", g.bank, "wavelet sampling route")
      ->check(CLI::IsMember({"spectral", "oscillatory"}));
  app.add_option("--window", g.window, "N_M, samples per window");
  app.add_option("--overlap", g.overlap, "window overlap d");
  app.add_option("--scale-segments", g.scale_segments, "log-scale segments");
  app.add_option("--shift-step", g.shift_step, "tau step in samples");
  app.add_option("--tau-range", g.tau_range, "tau_R in samples");
  app.add_option("--f-max", g.f_max, "highest analysed frequency, Hz");
  app.add_option("--f-min", g.f_min, "lowest analysed frequency, Hz");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a harmonic, the six-A corpus, or add noise");
  std::string gen_kind = "harmonic", gen_out, gen_in, noise_ref = "peak";
  double freq = 440, duration = 5, rate = 28160, amplitude = 1, level = 0.05;
  gen->add_option("kind", gen_kind)->check(CLI::IsMember({"harmonic", "corpus", "noise"}));
  gen->add_option("--out,-o", gen_out)->required();
  gen->add_option("--freq", freq, "Hz");
  gen->add_option("--duration", duration, "seconds (per part for corpus)");
  gen->add_option("--rate", rate, "Hz");
  gen->add_option("--amplitude", amplitude);
  gen->add_option("--in", gen_in, "input WAV for noise")->check(CLI::ExistingFile);
  gen->add_option("--level", level, "noise sigma relative to the reference");
  gen->add_option("--noise-reference", noise_ref)->check(CLI::IsMember({"peak", "rms"}));

  // wavelet
  auto* wav = app.add_subcommand("wavelet", "sample the mother or a daughter wavelet as text");
  std::string wav_kind = "holomorphic", wav_out;
  double scale = 1.0, before = 0.01, after = 0.002, wav_rate = 28160;
  wav->add_option("--kind", wav_kind)->check(CLI::IsMember({"holomorphic", "real"}));
  wav->add_option("--scale", scale);
  wav->add_option("--before", before, "seconds before tau");
  wav->add_option("--after", after, "seconds after tau");
  wav->add_option("--rate", wav_rate, "sampling rate, Hz");
  wav->add_option("--out,-o", wav_out, "output file (default stdout)");

  // transform
  auto* tr = app.add_subcommand("transform", "transform one window and write the grid");
  std::string tr_in, tr_out;
  long tr_start = 0;
  tr->add_option("--in,-i", tr_in)->required()->check(CLI::ExistingFile);
  tr->add_option("--start", tr_start, "first sample of the window");
  tr->add_option("--out,-o", tr_out)->required();

  // reconstruct
  auto* rc = app.add_subcommand("reconstruct", "full-mask analysis and synthesis of a WAV file");
  std::string rc_in, rc_out;
  rc->add_option("--in,-i", rc_in)->required()->check(CLI::ExistingFile);
  rc->add_option("--out,-o", rc_out)->required();

  // reassign
  auto* ra = app.add_subcommand("reassign", "reassigned map of one window");
  std::string ra_in, ra_out;
  long ra_start = 0;
  ra->add_option("--in,-i", ra_in)->required()->check(CLI::ExistingFile);
  ra->add_option("--start", ra_start, "first sample of the window");
  ra->add_option("--out,-o", ra_out)->required();

  // denoise
  auto* dn = app.add_subcommand("denoise", "masked reconstruction of a WAV file");
  std::string dn_in, dn_out, dn_method = "connectivity", dn_clean, dn_map;
  long dn_map_start = 0;
  int min_neighbours = 4;
  dn->add_option("--in,-i", dn_in)->required()->check(CLI::ExistingFile);
  dn->add_option("--out,-o", dn_out)->required();
  dn->add_option("--method", dn_method)->check(CLI::IsMember({"plain", "reassign", "connectivity"}));
  dn->add_option("--min-neighbours", min_neighbours)->check(CLI::Range(0, 8));
  dn->add_option("--clean-ref", dn_clean, "clean WAV for the rho report")->check(CLI::ExistingFile);
  dn->add_option("--map-out", dn_map, "write the connectivity map of one window");
  dn->add_option("--map-start", dn_map_start, "first sample of that window");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "three-pass coordinate search for the wavelet parameters");
  std::string corpus, init, cal_out, trace_out;
  double part = 5.0;
  cal->add_option("--corpus", corpus, "corpus WAV (default: generated six-A corpus)")
      ->check(CLI::ExistingFile);
  cal->add_option("--part-duration", part, "seconds per generated corpus part");
  cal->add_option("--init", init, "starting parameters (default: 1, 8.5, -2, 8)")->check(CLI::ExistingFile);
  cal->add_option("--out,-o", cal_out)->required();
  cal->add_option("--trace", trace_out);

  // rho
  auto* rh = app.add_subcommand("rho", "Pearson correlation of two WAV files");
  std::string rho_a, rho_b;
  rh->add_option("a", rho_a)->required()->check(CLI::ExistingFile);
  rh->add_option("b", rho_b)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  if (g.threads == 0) g.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  try {
    if (*gen) {
      Signal s;
      if (gen_kind == "harmonic") {
        s = gen_harmonic(freq, duration, rate, amplitude);
      } else if (gen_kind == "corpus") {
        s = six_a_corpus(duration, rate);
      } else {
        if (gen_in.empty()) throw Error(ErrorCategory::input, "noise needs --in");
        s = add_white_noise(read_wav(gen_in), level, g.seed,
                            noise_ref == "rms" ? NoiseReference::rms : NoiseReference::peak);
      }
      write_wav(gen_out, s);
      std::printf("wrote %ld samples at %g Hz\n", s.size(), s.rate);
    } else if (*wav) {
      const auto p = params_for(g);
      const auto kind = wav_kind == "real" ? WaveletKind::real_wavelet : WaveletKind::holomorphic;
      const double dt = 1.0 / wav_rate;
      const long lo = -std::lround(before / dt), hi = std::lround(after / dt);
      Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(hi - lo + 1, lo * dt, hi * dt);
      const auto w = synthesize(scale, 0.0, t, p, kind);
      std::ofstream file;
      if (!wav_out.empty()) {
        file.open(wav_out);
        if (!file) throw Error(ErrorCategory::io, "cannot write " + wav_out);
      }
      std::ostream& out = wav_out.empty() ? std::cout : file;
      out << (kind == WaveletKind::real_wavelet ? "t value\n" : "t re im\n");
      char buf[96];
      for (Eigen::Index i = 0; i < t.size(); ++i) {
        if (kind == WaveletKind::real_wavelet) {
          std::snprintf(buf, sizeof buf, "%.17g %.17g\n", t[i], w.values[i].real());
        } else {
          std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", t[i], w.values[i].real(),
                        w.values[i].imag());
        }
        out << buf;
      }
      std::fprintf(stderr, "causality score %.3g\n", causality_score(w));
    } else if (*tr) {
      const auto s = read_wav(tr_in);
      const WaveletBank bank(params_for(g), settings_for(g, s.rate), bank_method(g));
      export_grid(tr_out, window_grid(s, tr_start, bank));
    } else if (*rc) {
      const auto s = read_wav(rc_in);
      const WaveletBank bank(params_for(g), settings_for(g, s.rate), bank_method(g));
      const auto r = process_windows(s.samples, bank, nullptr, stream_options(g));
      write_wav(rc_out, Signal{r.output, s.rate});
      std::printf("windows %ld\n", r.windows);
      print_rho("rho", r.rho);
    } else if (*ra) {
      const auto s = read_wav(ra_in);
      const auto p = params_for(g);
      const WaveletBank bank(p, settings_for(g, s.rate), bank_method(g));
      const auto grid = window_grid(s, ra_start, bank);
      const auto map = reassign(grid, structure_derivatives(grid, p), p);
      export_grid(ra_out, map);
      const long total = grid.coeffs.size();
      std::printf("pixels %ld\nmapped %ld\ndiscarded_floor %ld\ndiscarded_scale %ld\ndiscarded_time %ld\n",
                  total, map.mapped, map.discarded_floor, map.discarded_scale, map.discarded_time);
    } else if (*dn) {
      const auto s = read_wav(dn_in);
      const auto p = params_for(g);
      const WaveletBank bank(p, settings_for(g, s.rate), bank_method(g));
      const auto mode = dn_method == "plain"      ? StreamMode::plain
                        : dn_method == "reassign" ? StreamMode::reassign
                                                  : StreamMode::connectivity;
      MaskingOptions mo;
      mo.min_neighbours = min_neighbours;
      std::optional<Signal> clean;
      if (!dn_clean.empty()) clean = read_wav(dn_clean);
      const auto r = process_stream(s.samples, bank, mode, mo, stream_options(g),
                                    clean ? &clean->samples : nullptr);
      write_wav(dn_out, Signal{r.stream.output, s.rate});
      std::printf("windows %ld\npixels_kept %ld of %ld\n", r.stream.windows, r.stream.pixels_kept,
                  r.stream.pixels_total);
      print_rho("rho_input", r.stream.rho);
      if (r.rho_clean) print_rho("rho_clean", *r.rho_clean);
      if (!dn_map.empty()) {
        const auto a = analyze_window(window_grid(s, dn_map_start, bank), p, StreamMode::connectivity, mo);
        export_counts(dn_map, a.map.scales, a.map.shifts, a.connectivity);
      }
    } else if (*cal) {
      const Signal c = corpus.empty() ? six_a_corpus(part) : read_wav(corpus);
      WaveletParams p0 = WaveletParams::initial_guess();
      if (!init.empty()) p0 = params_from_config(KeyValueConfig::load(init), p0);
      const auto ws = settings_for(g, c.rate);
      const auto method = bank_method(g);
      SearchOptions so;
      so.seed = g.seed;
      so.threads = g.threads;
      CoordinateSearch search([&](const WaveletParams& p) { return objective(p, c.samples, ws, method); },
                              [](const WaveletParams& p) { return is_causal(p); }, so);
      OptimizationTrace trace;
      const auto best = search.optimize(p0, trace);
      trace.write(std::cout);
      if (!trace_out.empty()) trace.save(trace_out);
      KeyValueConfig out;
      params_to_config(best, out);
      out.save(cal_out);
      std::printf("evaluations %ld\n", search.evaluations());
    } else if (*rh) {
      const auto a = read_wav(rho_a), b = read_wav(rho_b);
      print_rho("rho", pearson(a.samples, b.samples));
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", std::string(to_string(e.category())).c_str(), e.what());
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error [internal]: %s\n", e.what());
    return 1;
  }
  return 0;
}
