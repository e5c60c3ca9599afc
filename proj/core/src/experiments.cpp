#include "modehunt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace modehunt {

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

double rate_exponent(const DensitySpec& spec) {
  return std::visit(
      [](const auto& s) {
        return 1.0 / (static_cast<double>(s.d) + 2.0 * s.beta);
      },
      spec);
}

namespace {

int density_dim(const DensitySpec& spec) {
  return std::visit([](const auto& s) { return s.d; }, spec);
}

double density_beta(const DensitySpec& spec) {
  return std::visit([](const auto& s) { return s.beta; }, spec);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.ns.empty()) throw std::invalid_argument("experiment config: no sample sizes");
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    if (cfg.ns[i] < 1) throw std::invalid_argument("experiment config: sample sizes must be >= 1");
    if (i > 0 && cfg.ns[i] <= cfg.ns[i - 1]) {
      throw std::invalid_argument("experiment config: sample sizes must be strictly increasing");
    }
  }
  if (cfg.reps < 1) throw std::invalid_argument("experiment config: reps must be >= 1");
  if (!cfg.t_values.empty() && cfg.reps < 100) {
    throw std::invalid_argument(
        "experiment config: tail frequencies need reps >= 100 to be meaningful");
  }
  for (double t : cfg.t_values) {
    if (!(t > 0.0)) throw std::invalid_argument("experiment config: t values must be > 0");
  }
  if (cfg.subsample_gamma && !(*cfg.subsample_gamma > 0.0 && *cfg.subsample_gamma <= 1.0)) {
    throw std::invalid_argument("experiment config: subsample gamma must lie in (0, 1]");
  }
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PowerPeakSpec>) {
          if (!s.mode && !(s.mode_range.first < s.mode_range.second)) {
            throw std::invalid_argument("experiment config: empty mode range");
          }
        }
      },
      cfg.density);
}

/// Everything fixed across trials: the normalized density prototype (mode
/// placement is the only per-trial variation, and translation is free).
struct DensityPrototype {
  std::unique_ptr<Density> fixed;       // used when the mode never moves
  std::optional<PowerPeakDensity> base;  // translated per trial
  std::pair<double, double> mode_range;
  bool randomize = false;
};

DensityPrototype make_prototype(const DensitySpec& spec) {
  DensityPrototype proto;
  if (const auto* pp = std::get_if<PowerPeakSpec>(&spec)) {
    Point m = pp->mode ? *pp->mode : Point(static_cast<std::size_t>(pp->d), 0.0);
    proto.base = PowerPeakDensity(pp->d, pp->beta, pp->h0, std::move(m), pp->peak, pp->wobble);
    proto.randomize = !pp->mode.has_value();
    proto.mode_range = pp->mode_range;
  } else {
    const auto& f2 = std::get<F2Spec>(spec);
    proto.fixed = TwoPointPair(f2.d, f2.beta, f2.h0, f2.h).f2_density();
  }
  return proto;
}

struct TrialDensity {
  const Density* density;  // points into `holder` or the prototype
  std::optional<PowerPeakDensity> holder;
  Point mode;
};

TrialDensity trial_density(const DensityPrototype& proto, Rng& rng) {
  TrialDensity out;
  if (proto.fixed) {
    out.density = proto.fixed.get();
    out.mode = proto.fixed->mode();
    return out;
  }
  if (proto.randomize) {
    Point m(static_cast<std::size_t>(proto.base->dim()));
    for (double& v : m) v = rng.uniform(proto.mode_range.first, proto.mode_range.second);
    out.holder = proto.base->with_mode(std::move(m));
  } else {
    out.holder = *proto.base;
  }
  out.density = &*out.holder;
  out.mode = out.holder->mode();
  return out;
}

Estimator make_estimator(const EstimatorSpec& spec, int d, double default_beta) {
  if (const auto* mono = std::get_if<MonoSpec>(&spec)) {
    if (mono->h) {
      const double h = *mono->h;
      if (!(h > 0.0)) throw std::invalid_argument("mono estimator: h must be > 0");
      return [h](const PointSet& pts) { return mono_mode(pts, MonoParams{h}); };
    }
    const double beta = mono->beta.value_or(default_beta);
    const double c = mono->c;
    if (!(beta > 0.0)) throw std::invalid_argument("mono estimator: beta must be > 0");
    if (!(c > 0.0)) throw std::invalid_argument("mono estimator: c must be > 0");
    return [c, beta, d](const PointSet& pts) {
      const double h = theoretical_bandwidth(pts.size(), d, beta, c);
      return mono_mode(pts, MonoParams{h});
    };
  }
  if (const auto* multi = std::get_if<MultiSpec>(&spec)) {
    MultiParams params{multi->b, multi->kappa};
    return [params](const PointSet& pts) { return multi_mode(pts, params); };
  }
  return {};  // oracle: handled inline by the trial loop
}

}  // namespace

ExperimentReport run_trials(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const DensityPrototype proto = make_prototype(cfg.density);
  const int d = density_dim(cfg.density);
  const bool oracle = std::holds_alternative<OracleSpec>(cfg.estimator);
  const Estimator estimator = make_estimator(cfg.estimator, d, density_beta(cfg.density));
  const double gamma = cfg.subsample_gamma.value_or(1.0);
  const bool subsampling = cfg.subsample_gamma.has_value();

  const std::size_t num_ns = cfg.ns.size();
  const std::size_t total = num_ns * static_cast<std::size_t>(cfg.reps);
  std::vector<TrialRecord> trials(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    using clock = std::chrono::steady_clock;
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      const std::size_t ni = task / static_cast<std::size_t>(cfg.reps);
      const int rep = static_cast<int>(task % static_cast<std::size_t>(cfg.reps));
      const std::int64_t n = cfg.ns[ni];

      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(ni),
                          static_cast<std::uint64_t>(rep)));
      TrialDensity td = trial_density(proto, rng);
      PointSet pts = sample(*td.density, n, rng);

      Point estimate;
      double seconds;
      if (oracle) {
        const auto t0 = clock::now();
        estimate = td.mode;
        seconds = std::chrono::duration<double>(clock::now() - t0).count();
      } else if (subsampling) {
        const std::int64_t k = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), gamma))));
        const auto t0 = clock::now();
        estimate = subsampled(estimator, pts, std::min(k, n));
        seconds = std::chrono::duration<double>(clock::now() - t0).count();
      } else {
        const auto t0 = clock::now();
        estimate = estimator(pts);
        seconds = std::chrono::duration<double>(clock::now() - t0).count();
      }
      trials[task] = {n, rep, sup_dist(estimate, td.mode), seconds};
    }
  };

  unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(total));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ExperimentReport report;
  report.trials = std::move(trials);
  report.seed = cfg.seed;
  report.version = std::string(kVersion);

  const double exponent = rate_exponent(cfg.density);
  for (std::size_t ni = 0; ni < num_ns; ++ni) {
    const std::int64_t n = cfg.ns[ni];
    std::vector<double> errors, times;
    errors.reserve(static_cast<std::size_t>(cfg.reps));
    times.reserve(static_cast<std::size_t>(cfg.reps));
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const TrialRecord& t = report.trials[ni * static_cast<std::size_t>(cfg.reps) +
                                            static_cast<std::size_t>(rep)];
      errors.push_back(t.error);
      times.push_back(t.seconds);
    }
    PerNSummary s;
    s.n = n;
    s.median_error = quantile(errors, 0.5);
    s.q90_error = quantile(errors, 0.9);
    s.median_seconds = quantile(times, 0.5);
    const double scale = std::pow(static_cast<double>(n), -exponent);
    for (double t : cfg.t_values) {
      const double threshold = t * scale;
      std::int64_t over = 0;
      for (double e : errors) {
        if (e > threshold) ++over;
      }
      s.tail_freq.push_back(static_cast<double>(over) / static_cast<double>(errors.size()));
    }
    report.per_n.push_back(std::move(s));
  }
  return report;
}

namespace {

SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& xy) {
  const int m = static_cast<int>(xy.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : xy) {
    sx += x;
    sy += y;
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0;
  for (const auto& [x, y] : xy) {
    const double r = y - (intercept + slope * x);
    ssr += r * r;
  }
  const double var = m > 2 ? ssr / (m - 2) : 0.0;
  return {slope, std::sqrt(std::max(0.0, var) / sxx), m};
}

SlopeFit fit_against_n(const ExperimentReport& report, bool use_time) {
  if (report.per_n.size() < 4) {
    throw std::invalid_argument("slope fit requires at least 4 sample sizes");
  }
  std::vector<std::pair<double, double>> xy;
  for (const auto& s : report.per_n) {
    const double v = use_time ? s.median_seconds : s.median_error;
    if (!(v > 0.0)) {
      throw std::runtime_error("degenerate: increase resolution or reduce c");
    }
    xy.emplace_back(std::log(static_cast<double>(s.n)), std::log(v));
  }
  return fit_loglog(xy);
}

}  // namespace

SlopeFit fit_rate_slope(const ExperimentReport& report) { return fit_against_n(report, false); }

SlopeFit runtime_scaling(const ExperimentReport& report) { return fit_against_n(report, true); }

TwoPointResult two_point_experiment(const TwoPointPair& pair, std::int64_t n, int reps,
                                    std::uint64_t seed) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (n < 1) throw std::invalid_argument("two_point_experiment: n must be >= 1");
  const std::unique_ptr<Density> f2 = pair.f2_density();
  const PowerPeakDensity& f1 = pair.f1();
  const double h = pair.h();

  TwoPointResult result;
  result.mistakes.resize(static_cast<std::size_t>(reps));
  result.seconds.resize(static_cast<std::size_t>(reps));
  std::int64_t wrong = 0;
  using clock = std::chrono::steady_clock;

  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(derive_seed(seed, 0x7705, static_cast<std::uint64_t>(rep)));
    const bool truth_f2 = rng.bernoulli(0.5);
    const PointSet pts = truth_f2 ? sample(*f2, n, rng) : sample(f1, n, rng);

    const auto t0 = clock::now();
    // densities agree outside (-h, h)^d, so only points inside contribute
    double llr = 0.0;
    for (std::int64_t i = 0; i < pts.size(); ++i) {
      const std::span<const double> t = pts[i];
      bool inside = true;
      for (double v : t) {
        if (!(v > -h && v < h)) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      llr += std::log(pair.eval_f2(t) / pair.eval_f1(t));
    }
    const bool guess_f2 = llr > 0.0;
    result.seconds[static_cast<std::size_t>(rep)] =
        std::chrono::duration<double>(clock::now() - t0).count();
    const bool mistake = guess_f2 != truth_f2;
    result.mistakes[static_cast<std::size_t>(rep)] = mistake ? 1 : 0;
    if (mistake) ++wrong;
  }
  result.error_rate = static_cast<double>(wrong) / static_cast<double>(reps);
  return result;
}

SublinearResult sublinear_demo(const ExperimentConfig& cfg, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("sublinear_demo: gamma must lie in (0, 1]");
  }
  SublinearResult out;
  ExperimentConfig full_cfg = cfg;
  full_cfg.subsample_gamma.reset();
  out.full = run_trials(full_cfg);
  ExperimentConfig sub_cfg = cfg;
  sub_cfg.subsample_gamma = gamma;
  out.sub = run_trials(sub_cfg);
  out.full_fit = fit_rate_slope(out.full);
  out.sub_fit = fit_rate_slope(out.sub);
  return out;
}

}  // namespace modehunt
