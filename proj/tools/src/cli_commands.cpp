#include "cli_commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>

#include <json.hpp>

#include "modehunt/config.hpp"
#include "modehunt/densities.hpp"
#include "modehunt/estimators.hpp"
#include "modehunt/experiments.hpp"
#include "modehunt/point_io.hpp"

namespace modehunt::cli {

namespace {

using nlohmann::json;
using clock_type = std::chrono::steady_clock;

std::string format_summary(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

json point_to_json(const Point& p) {
  json arr = json::array();
  for (double v : p) arr.push_back(v);
  return arr;
}

// ---------------------------------------------------------------- estimate

void validate_estimate(const EstimateOptions& opt) {
  if (opt.algo != "mono" && opt.algo != "multi") {
    throw UsageError("--algo must be 'mono' or 'multi', got '" + opt.algo + "'");
  }
  if (opt.algo == "mono") {
    if (opt.h && opt.auto_h) throw UsageError("--h conflicts with --auto-h; pass exactly one");
    if (!opt.h && !opt.auto_h) throw UsageError("--algo mono needs --h or --auto-h");
    if (opt.auto_h && !opt.beta) throw UsageError("--auto-h needs --beta");
    if (opt.b || opt.kappa) throw UsageError("--b/--kappa apply to --algo multi only");
  } else {
    if (opt.h || opt.auto_h || opt.beta || opt.c) {
      throw UsageError("--h/--auto-h/--beta/--c apply to --algo mono only");
    }
  }
}

void run_estimate_impl(const EstimateOptions& opt) {
  validate_estimate(opt);
  PointSet pts = parse_points(opt.input);

  json params;
  Point estimate;
  double seconds = 0.0;
  if (opt.algo == "mono") {
    double h;
    if (opt.h) {
      h = *opt.h;
      params["rule"] = "fixed";
    } else {
      h = theoretical_bandwidth(pts.size(), pts.dim(), *opt.beta, opt.c.value_or(1.0));
      params["rule"] = "auto";
      params["beta"] = *opt.beta;
      params["c"] = opt.c.value_or(1.0);
    }
    params["h"] = h;
    const auto t0 = clock_type::now();
    estimate = mono_mode(pts, MonoParams{h});
    seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  } else {
    MultiParams mp{opt.b.value_or(2.0), opt.kappa.value_or(2)};
    params["b"] = mp.b;
    params["kappa"] = mp.kappa;
    const auto t0 = clock_type::now();
    estimate = multi_mode(pts, mp);
    seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  }

  std::string line;
  for (std::size_t j = 0; j < estimate.size(); ++j) {
    if (j > 0) line += ' ';
    line += format_double(estimate[j]);
  }
  std::cout << line << "\n";

  if (!opt.out.empty()) {
    json result{{"estimate", point_to_json(estimate)},
                {"algo", opt.algo},
                {"params", params},
                {"n", pts.size()},
                {"d", pts.dim()},
                {"wall_seconds", seconds}};
    write_file_atomic(opt.out, result.dump(2) + "\n");
  }
}

// ------------------------------------------------------------------ sample

void forbid(const char* flag, bool present, const std::string& family) {
  if (present) throw UsageError(std::string(flag) + " does not apply to --family " + family);
}

void run_sample_impl(const SampleOptions& opt) {
  if (opt.out.empty()) throw UsageError("--out is required");
  if (opt.n < 1) throw UsageError("--n must be >= 1");

  std::unique_ptr<Density> density;
  if (opt.family == "power-peak") {
    if (!opt.beta || !opt.h0) throw UsageError("--family power-peak needs --beta and --h0");
    if (opt.mode.empty()) throw UsageError("--family power-peak needs --mode (d coordinates)");
    forbid("--h", opt.h.has_value(), opt.family);
    const int d = opt.d.value_or(static_cast<int>(opt.mode.size()));
    if (d != static_cast<int>(opt.mode.size())) {
      throw UsageError("--mode must have exactly --d coordinates");
    }
    density = std::make_unique<PowerPeakDensity>(d, *opt.beta, *opt.h0, opt.mode,
                                                 opt.peak.value_or(1.0));
  } else if (opt.family == "f1") {
    if (!opt.beta || !opt.h0 || !opt.d) throw UsageError("--family f1 needs --d, --beta, --h0");
    forbid("--mode", !opt.mode.empty(), opt.family);
    forbid("--peak", opt.peak.has_value(), opt.family);
    forbid("--h", opt.h.has_value(), opt.family);
    density = std::make_unique<PowerPeakDensity>(
        *opt.d, *opt.beta, *opt.h0, Point(static_cast<std::size_t>(*opt.d), 0.0), 1.0);
  } else if (opt.family == "f2") {
    if (!opt.beta || !opt.h0 || !opt.d || !opt.h) {
      throw UsageError("--family f2 needs --d, --beta, --h0, --h");
    }
    forbid("--mode", !opt.mode.empty(), opt.family);
    forbid("--peak", opt.peak.has_value(), opt.family);
    density = TwoPointPair(*opt.d, *opt.beta, *opt.h0, *opt.h).f2_density();
  } else {
    throw UsageError("--family must be one of power-peak, f1, f2; got '" + opt.family + "'");
  }

  PointSet pts = sample(*density, opt.n, opt.seed);
  write_file_atomic(opt.out, format_points(pts));
  std::cout << "wrote " << pts.size() << " points (d=" << pts.dim() << ") to " << opt.out << "\n";
}

// -------------------------------------------------------------- experiment

struct ExperimentPlan {
  std::string kind;
  ExperimentConfig cfg;
  double gamma = 0.5;        // sublinear only
  double c_two_point = 0.0;  // two-point only: h = c * n^{-1/(d+2 beta)}
  int two_point_d = 1;
  double two_point_beta = 1.0;
  double two_point_h0 = 0.5;
};

DensitySpec load_density(const ConfigFile& file, const std::string& kind) {
  const std::string family = file.get_string_or("density", "family", "power-peak");
  const int d = static_cast<int>(file.get_int_or("density", "d", 1));
  const double beta = file.get_double("density", "beta");
  const double h0 = file.get_double_or("density", "h0", 0.5);

  if (family == "power-peak") {
    PowerPeakSpec spec;
    spec.d = d;
    spec.beta = beta;
    spec.h0 = h0;
    spec.peak = file.get_double_or("density", "peak", 1.0);
    if (file.has("density", "mode")) {
      const std::string mode = file.get_string("density", "mode");
      if (mode != "random") {
        auto coords = file.get_doubles("density", "mode");
        if (static_cast<int>(coords.size()) != d) {
          file.fail_at("density", "mode",
                       "mode needs exactly d = " + std::to_string(d) + " coordinates");
        }
        spec.mode = Point(coords.begin(), coords.end());
      }
    }
    if (file.has("density", "mode_range")) {
      auto range = file.get_doubles("density", "mode_range");
      if (range.size() != 2 || !(range[0] < range[1])) {
        file.fail_at("density", "mode_range", "mode_range needs two increasing numbers");
      }
      spec.mode_range = {range[0], range[1]};
    }
    if (file.has("density", "c0") || file.has("density", "C0")) {
      PeakWobble w;
      w.c0 = file.get_double_or("density", "c0", 1.0);
      w.C0 = file.get_double_or("density", "C0", 1.0);
      w.cycles = file.get_double_or("density", "cycles", 1.0);
      spec.wobble = w;
    }
    return spec;
  }
  if (family == "f2") {
    F2Spec spec;
    spec.d = d;
    spec.beta = beta;
    spec.h0 = h0;
    if (kind != "two-point") {
      spec.h = file.get_double("density", "h");
    }
    return spec;
  }
  file.fail_at("density", "family", "unknown density family '" + family +
                                        "'; valid families: power-peak, f2");
}

EstimatorSpec load_estimator(const ConfigFile& file) {
  const std::string algo = file.get_string("estimator", "algo");
  if (algo == "mono") {
    MonoSpec spec;
    const bool auto_h = file.get_bool_or("estimator", "auto_h", false);
    if (file.has("estimator", "h")) {
      if (auto_h) file.fail_at("estimator", "h", "h conflicts with auto_h; pick one");
      spec.h = file.get_double("estimator", "h");
    } else if (!auto_h) {
      throw ConfigError(file.origin() +
                        ": [estimator] with algo = mono needs either h or auto_h = true");
    }
    spec.c = file.get_double_or("estimator", "c", 1.0);
    if (file.has("estimator", "beta")) spec.beta = file.get_double("estimator", "beta");
    return spec;
  }
  if (algo == "multi") {
    MultiSpec spec;
    spec.b = file.get_double_or("estimator", "b", 2.0);
    spec.kappa = static_cast<int>(file.get_int_or("estimator", "kappa", 2));
    return spec;
  }
  if (algo == "oracle") return OracleSpec{};
  file.fail_at("estimator", "algo",
               "unknown estimator '" + algo + "'; valid: mono, multi, oracle");
}

ExperimentPlan load_plan(const ConfigFile& file, const ExperimentOptions& opt) {
  ExperimentPlan plan;
  plan.kind = file.get_string("experiment", "kind");
  const bool slope_kind =
      plan.kind == "rate" || plan.kind == "runtime" || plan.kind == "sublinear";
  if (!slope_kind && plan.kind != "two-point") {
    file.fail_at("experiment", "kind",
                 "unknown experiment kind '" + plan.kind +
                     "'; valid kinds: rate, runtime, two-point, sublinear");
  }

  auto ns = file.get_ints("experiment", "ns");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) file.fail_at("experiment", "ns", "sample sizes must be >= 1");
    if (i > 0 && ns[i] <= ns[i - 1]) {
      file.fail_at("experiment", "ns", "sample sizes must be strictly increasing");
    }
  }
  if (slope_kind) {
    if (ns.size() < 4) file.fail_at("experiment", "ns", "at least 4 sample sizes required");
    const double span = static_cast<double>(ns.back()) / static_cast<double>(ns.front());
    if (plan.kind == "runtime") {
      if (span < 50.0) {
        file.fail_at("experiment", "ns",
                     "runtime sweeps need max(n)/min(n) >= 50 for a stable slope");
      }
    } else if (span < 100.0) {
      file.fail_at("experiment", "ns",
                   "sample sizes must span at least two decades for slope fits");
    }
  }
  plan.cfg.ns.assign(ns.begin(), ns.end());
  plan.cfg.reps = static_cast<int>(file.get_int_or("experiment", "reps", 100));
  plan.cfg.seed = opt.seed.value_or(
      static_cast<std::uint64_t>(file.get_int_or("experiment", "seed", 0)));
  if (file.has("experiment", "t_values")) {
    plan.cfg.t_values = file.get_doubles("experiment", "t_values");
  }
  plan.cfg.workers = opt.workers.value_or(
      static_cast<int>(file.get_int_or("experiment", "workers", 0)));
  if (plan.kind == "runtime") plan.cfg.workers = 1;  // keep timings clean

  plan.cfg.density = load_density(file, plan.kind);

  if (plan.kind == "two-point") {
    const auto* f2 = std::get_if<F2Spec>(&plan.cfg.density);
    if (f2 == nullptr) {
      file.fail_at("density", "family", "kind = two-point needs family = f2");
    }
    plan.two_point_d = f2->d;
    plan.two_point_beta = f2->beta;
    plan.two_point_h0 = f2->h0;
    plan.c_two_point = file.get_double("experiment", "c");
    if (!(plan.c_two_point > 0.0)) file.fail_at("experiment", "c", "c must be > 0");
    const double h_max = plan.c_two_point * std::pow(static_cast<double>(ns.front()),
                                                     -rate_exponent(plan.cfg.density));
    if (h_max > f2->h0) {
      file.fail_at("experiment", "c",
                   "c too large: h = " + format_summary(h_max) + " exceeds h0 at n = " +
                       std::to_string(ns.front()));
    }
    if (!file.keys("estimator").empty()) {
      throw ConfigError(file.origin() +
                        ": [estimator] does not apply to kind = two-point (the exact "
                        "likelihood-ratio test is the procedure)");
    }
  } else {
    plan.cfg.estimator = load_estimator(file);
  }

  if (plan.kind == "sublinear") {
    plan.gamma = file.get_double("experiment", "gamma");
    if (!(plan.gamma > 0.0 && plan.gamma <= 1.0)) {
      file.fail_at("experiment", "gamma", "gamma must lie in (0, 1]");
    }
  }
  file.require_all_consumed();
  return plan;
}

json per_n_json(const ExperimentReport& report, const std::vector<double>& t_values) {
  json arr = json::array();
  for (const auto& s : report.per_n) {
    json row{{"n", s.n},
             {"median_error", s.median_error},
             {"q90_error", s.q90_error},
             {"median_seconds", s.median_seconds}};
    if (!t_values.empty()) {
      row["t_values"] = t_values;
      row["tail_freq"] = s.tail_freq;
    }
    arr.push_back(row);
  }
  return arr;
}

json slope_json(const SlopeFit& fit) {
  return json{{"value", fit.slope}, {"se", fit.se}, {"points", fit.points}};
}

std::string table_csv(const ExperimentReport& report) {
  std::string out = "n,rep,error,time\n";
  for (const auto& t : report.trials) {
    out += std::to_string(t.n);
    out += ',';
    out += std::to_string(t.rep);
    out += ',';
    out += format_double(t.error);
    out += ',';
    out += format_double(t.seconds);
    out += '\n';
  }
  return out;
}

void run_experiment_impl(const ExperimentOptions& opt) {
  const ConfigFile file = ConfigFile::load(opt.config_path);
  const ExperimentPlan plan = load_plan(file, opt);

  json report_json{{"kind", plan.kind},
                   {"seed", plan.cfg.seed},
                   {"version", std::string(kVersion)},
                   {"config", file.raw_text()},
                   {"timing_note", "estimator call only; sampling and I/O excluded"}};
  std::vector<std::pair<std::string, std::string>> files;  // path -> content

  if (plan.kind == "rate" || plan.kind == "runtime") {
    const ExperimentReport report = run_trials(plan.cfg);
    const SlopeFit fit =
        plan.kind == "rate" ? fit_rate_slope(report) : runtime_scaling(report);
    report_json["slope"] = slope_json(fit);
    report_json["per_n"] = per_n_json(report, plan.cfg.t_values);
    if (plan.kind == "runtime") report_json["workers"] = 1;
    files.emplace_back(opt.out_prefix + "_table.csv", table_csv(report));
    std::cout << plan.kind << ": slope " << format_summary(fit.slope) << " (se "
              << format_summary(fit.se) << ") over " << fit.points << " sample sizes\n";
  } else if (plan.kind == "two-point") {
    json per_n = json::array();
    std::string table = "n,rep,error,time\n";
    const double exponent = rate_exponent(plan.cfg.density);
    for (std::size_t i = 0; i < plan.cfg.ns.size(); ++i) {
      const std::int64_t n = plan.cfg.ns[i];
      const double h =
          plan.c_two_point * std::pow(static_cast<double>(n), -exponent);
      TwoPointPair pair(plan.two_point_d, plan.two_point_beta, plan.two_point_h0, h);
      const TwoPointResult result = two_point_experiment(
          pair, n, plan.cfg.reps, derive_seed(plan.cfg.seed, 0xbadc0de, i));
      per_n.push_back(json{{"n", n},
                           {"h", h},
                           {"n_h_power", static_cast<double>(n) * std::pow(h, 1.0 / exponent)},
                           {"error_rate", result.error_rate}});
      for (int rep = 0; rep < plan.cfg.reps; ++rep) {
        table += std::to_string(n) + ',' + std::to_string(rep) + ',' +
                 std::to_string(result.mistakes[static_cast<std::size_t>(rep)]) + ',' +
                 format_double(result.seconds[static_cast<std::size_t>(rep)]) + '\n';
      }
      std::cout << "two-point: n " << n << " h " << format_summary(h) << " error rate "
                << format_summary(result.error_rate) << "\n";
    }
    report_json["c"] = plan.c_two_point;
    report_json["per_n"] = per_n;
    files.emplace_back(opt.out_prefix + "_table.csv", std::move(table));
  } else {  // sublinear
    const SublinearResult result = sublinear_demo(plan.cfg, plan.gamma);
    report_json["gamma"] = plan.gamma;
    report_json["full"] =
        json{{"slope", slope_json(result.full_fit)},
             {"per_n", per_n_json(result.full, plan.cfg.t_values)}};
    report_json["subsampled"] =
        json{{"slope", slope_json(result.sub_fit)},
             {"per_n", per_n_json(result.sub, plan.cfg.t_values)}};
    const double gap = std::fabs(result.full_fit.slope - result.sub_fit.slope);
    const double combined = std::sqrt(result.full_fit.se * result.full_fit.se +
                                      result.sub_fit.se * result.sub_fit.se);
    report_json["gap_z"] = combined > 0.0 ? gap / combined : 0.0;
    files.emplace_back(opt.out_prefix + "_table_full.csv", table_csv(result.full));
    files.emplace_back(opt.out_prefix + "_table_subsampled.csv", table_csv(result.sub));
    std::cout << "sublinear: full slope " << format_summary(result.full_fit.slope)
              << ", subsampled " << format_summary(result.sub_fit.slope) << " (gamma "
              << format_summary(plan.gamma) << ")\n";
  }

  // everything computed; only now touch the filesystem
  write_file_atomic(opt.out_prefix + "_report.json", report_json.dump(2) + "\n");
  for (const auto& [path, content] : files) write_file_atomic(path, content);
}

}  // namespace

void run_estimate(const EstimateOptions& opt) { run_estimate_impl(opt); }
void run_sample(const SampleOptions& opt) { run_sample_impl(opt); }
void run_experiment(const ExperimentOptions& opt) { run_experiment_impl(opt); }

int run_command(const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "modehunt: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "modehunt: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "modehunt: internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::runtime_error& e) {
    std::cerr << "modehunt: error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "modehunt: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace modehunt::cli
