#include "rwt/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "rwt/error.hpp"

namespace rwt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> key_of(const WaveletParams& p) {
  return {p.alpha(), p.beta(), p.phi_m(), p.kappa(), p.nu(), p.c(), p.omega0()};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

double objective(const WaveletParams& p, const Eigen::Ref<const Eigen::VectorXd>& corpus,
                 const WindowSettings& ws, BankMethod method, int threads) {
  const WaveletBank bank(p, ws, method);
  StreamOptions so;
  so.threads = threads;
  const auto r = process_windows(corpus, bank, nullptr, so);
  if (!std::isfinite(r.rho)) throw Error(ErrorCategory::undefined, "reconstruction rho undefined");
  return r.rho;
}

void OptimizationTrace::write(std::ostream& out) const {
  out << "alpha_over_pi,beta_over_pi,phi_m_over_pi,kappa,nu,c,rho,comment\n";
  constexpr double pi = std::numbers::pi;
  for (const auto& r : rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6g,%.6g,%.9f,", r.params.alpha() / pi,
                  r.params.beta() / pi, r.params.phi_m() / pi, r.params.kappa(), r.params.nu(),
                  r.params.c(), r.rho);
    out << buf << r.comment << '\n';
  }
}

void OptimizationTrace::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::io, "cannot write trace " + path.string());
  write(out);
  if (!out) throw Error(ErrorCategory::io, "failed writing trace " + path.string());
}

double parabola_vertex(double x0, double f0, double x1, double f1, double x2, double f2) {
  const double d01 = (f1 - f0) / (x1 - x0);
  const double d12 = (f2 - f1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  if (!(curv < 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return 0.5 * (x0 + x1) - d01 / (2.0 * curv);
}

CoordinateSearch::CoordinateSearch(Objective objective, Causality causal, SearchOptions opts)
    : objective_(std::move(objective)), causal_(std::move(causal)), opts_(opts), rng_(opts.seed) {}

double CoordinateSearch::evaluate(const WaveletParams& p) {
  const auto key = key_of(p);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  double v = kNegInf;
  try {
    v = objective_(p);
    if (!std::isfinite(v)) v = kNegInf;
  } catch (const Error&) {
  }
  ++evaluations_;
  memo_.emplace(key, v);
  return v;
}

std::vector<double> CoordinateSearch::evaluate_all(const std::vector<Candidate>& c) {
  std::vector<double> out(c.size(), kNegInf);
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c[i].ok) continue;
    if (auto it = memo_.find(key_of(c[i].params)); it != memo_.end()) {
      out[i] = it->second;
    } else {
      todo.push_back(i);
    }
  }
  if (opts_.threads > 1 && todo.size() > 1) {
    std::vector<double> vals(todo.size(), kNegInf);
    parallel_for(static_cast<long>(todo.size()), opts_.threads, [&](long t) {
      try {
        const double v = objective_(c[todo[t]].params);
        if (std::isfinite(v)) vals[t] = v;
      } catch (const Error&) {
      }
    });
    for (std::size_t t = 0; t < todo.size(); ++t) {
      memo_.emplace(key_of(c[todo[t]].params), vals[t]);
      ++evaluations_;
      out[todo[t]] = vals[t];
    }
  } else {
    for (auto i : todo) out[i] = evaluate(c[i].params);
  }
  return out;
}

CoordinateSearch::Candidate CoordinateSearch::causal_candidate(const WaveletParams& base,
                                                               int index, double value, double h,
                                                               int& substitutions) {
  auto build = [&](double v) -> std::optional<WaveletParams> {
    try {
      return base.with_coordinate(index, v);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  if (auto p = build(value); p && causal_(*p)) return {*p, true};
  std::uniform_real_distribution<double> u(value - h, value + h);
  for (int d = 0; d < opts_.max_draws; ++d) {
    if (auto p = build(u(rng_)); p && causal_(*p)) {
      ++substitutions;
      return {*p, true};
    }
  }
  return {base, false};
}

StepResult CoordinateSearch::step(const WaveletParams& centre, int index, double fraction) {
  if (index < 0 || index > 3) throw Error(ErrorCategory::parameter_domain, "coordinate index");
  if (!(fraction > 0.0)) throw Error(ErrorCategory::parameter_domain, "step fraction must be > 0");
  const std::string name = kCoordinateNames[index];
  const double x0 = centre.coordinate(index);
  const double h = fraction * std::abs(x0);
  StepResult r{centre, evaluate(centre), false, false, 0, {}};
  if (h == 0.0) {
    r.comment = name + " zero step";
    return r;
  }

  std::vector<Candidate> probes = {causal_candidate(centre, index, x0 - h, h, r.substitutions),
                                   causal_candidate(centre, index, x0 + h, h, r.substitutions)};
  const auto pf = evaluate_all(probes);
  if (!std::isfinite(r.rho) && pf[0] == kNegInf && pf[1] == kNegInf) {
    r.aborted = true;
    r.comment = name + " aborted: objective failed at every probe";
    return r;
  }

  // bracket (a, b, c) with f(b) >= f(a), f(b) >= f(c); b is the incumbent
  struct Pt {
    double x, f;
    WaveletParams p;
  };
  Pt a{probes[0].params.coordinate(index), pf[0], probes[0].params};
  Pt b{x0, r.rho, centre};
  Pt c{probes[1].params.coordinate(index), pf[1], probes[1].params};
  int walked = 0;
  bool bracketed = b.f >= a.f && b.f >= c.f;
  if (!bracketed) {
    const double dir = pf[1] > pf[0] ? 1.0 : -1.0;
    Pt best = dir > 0 ? c : a;
    Pt prev = b;
    while (walked < opts_.max_walk) {
      ++walked;
      const double xn = best.x + dir * h;
      const auto cand = causal_candidate(centre, index, xn, h, r.substitutions);
      const double fn = evaluate_all({cand})[0];
      const Pt next{cand.ok ? cand.params.coordinate(index) : xn, fn, cand.params};
      if (fn <= best.f) {
        a = prev;
        b = best;
        c = next;
        bracketed = true;
        break;
      }
      prev = best;
      best = next;
    }
    if (!bracketed) {
      r.params = best.p;
      r.rho = best.f;
      r.comment = name + " walk limit reached after " + std::to_string(walked) + " steps";
      return r;
    }
    if (a.x > c.x) std::swap(a, c);
  }

  r.params = b.p;
  r.rho = b.f;
  r.comment = name;
  if (walked) r.comment += " walked " + std::to_string(walked);
  const double v = (std::isfinite(a.f) && std::isfinite(c.f))
                       ? parabola_vertex(a.x, a.f, b.x, b.f, c.x, c.f)
                       : std::numeric_limits<double>::quiet_NaN();
  if (!std::isfinite(v)) {
    r.comment += " no vertex";
  } else {
    const auto cand = causal_candidate(centre, index, v, h, r.substitutions);
    const double fv = evaluate_all({cand})[0];
    if (cand.ok && fv > b.f) {
      r.params = cand.params;
      r.rho = fv;
      r.vertex_accepted = true;
      r.comment += " vertex accepted";
    } else {
      r.comment += " vertex rejected";
    }
  }
  if (r.substitutions) r.comment += " causal substitutions " + std::to_string(r.substitutions);
  return r;
}

WaveletParams CoordinateSearch::optimize(const WaveletParams& p0, OptimizationTrace& trace,
                                         const std::vector<double>& fractions) {
  WaveletParams p = p0;
  trace.rows.push_back({p, evaluate(p), "initial input"});
  int pass = 0;
  for (double f : fractions) {
    ++pass;
    for (int i = 0; i < 4; ++i) {
      const auto s = step(p, i, f);
      p = s.params;
      trace.rows.push_back({p, s.rho, "pass " + std::to_string(pass) + " step " + fmt(f) + " " +
                                          s.comment});
    }
    trace.rows.push_back({p, evaluate(p), "output of pass " + std::to_string(pass)});
  }
  return p;
}

}  // namespace rwt
