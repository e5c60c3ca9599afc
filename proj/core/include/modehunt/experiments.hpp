#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "modehunt/densities.hpp"
#include "modehunt/estimators.hpp"

namespace modehunt {

inline constexpr std::string_view kVersion = "0.1.0";

/// Power-peak test-bed density. When `mode` is unset, each trial draws the
/// mode uniformly from mode_range^d (seeded), which washes the grid-phase
/// aliasing out of error medians; with a fixed mode the bin grid keeps a
/// fixed phase relative to it and medians inherit that phase.
struct PowerPeakSpec {
  int d = 1;
  double beta = 2.0;
  double h0 = 0.5;
  double peak = 1.0;
  std::optional<Point> mode;
  std::pair<double, double> mode_range{0.2, 0.8};
  std::optional<PeakWobble> wobble;
};

/// The perturbed density f2 of the two-point construction, as a test-bed
/// density with known mode (h/2, ..., h/2).
struct F2Spec {
  int d = 1;
  double beta = 1.0;
  double h0 = 0.5;
  double h = 0.1;
};

using DensitySpec = std::variant<PowerPeakSpec, F2Spec>;

/// Mono-scale estimator. Fixed bandwidth when `h` is set; otherwise the
/// oracle rule h = c * m^{-1/(d+2*beta)} with m the sample size actually
/// seen (so a subsampled run recomputes its own bandwidth).
struct MonoSpec {
  std::optional<double> h;
  double c = 1.0;
  std::optional<double> beta;  // defaults to the density's beta
};

struct MultiSpec {
  double b = 2.0;
  int kappa = 2;
};

/// Returns the trial's true mode; exercises degenerate harness paths.
struct OracleSpec {};

using EstimatorSpec = std::variant<MonoSpec, MultiSpec, OracleSpec>;

struct ExperimentConfig {
  DensitySpec density;
  EstimatorSpec estimator;
  std::vector<std::int64_t> ns;  // strictly increasing sample sizes
  int reps = 100;
  std::uint64_t seed = 0;
  /// Radius multipliers t for tail-frequency reporting: the report records
  /// the frequency of sup_dist(x_hat, x0) > t * n^{-1/(d+2*beta)} per n.
  std::vector<double> t_values;
  /// When set, the estimator sees only the first floor(n^gamma) points.
  std::optional<double> subsample_gamma;
  int workers = 0;  // 0 = hardware concurrency
};

struct TrialRecord {
  std::int64_t n;
  int rep;
  double error;    // sup-norm distance to the trial's true mode
  double seconds;  // estimator call only (monotonic clock)
};

struct PerNSummary {
  std::int64_t n;
  double median_error;
  double q90_error;
  double median_seconds;
  std::vector<double> tail_freq;  // aligned with config t_values
};

struct SlopeFit {
  double slope;
  double se;  // OLS standard error of the slope
  int points;
};

struct ExperimentReport {
  std::vector<TrialRecord> trials;  // ordered by (n, rep)
  std::vector<PerNSummary> per_n;
  std::uint64_t seed = 0;
  std::string version;
};

/// Runs reps trials per sample size: each trial draws a fresh seeded sample
/// from the configured density, times the estimator invocation alone, and
/// records the sup-norm error against the trial's known mode. Trials may be
/// executed by several workers; results are keyed by (n, rep), so the
/// report is identical for any worker count (timings aside).
ExperimentReport run_trials(const ExperimentConfig& cfg);

/// OLS of log(median error) on log(n). Requires >= 4 sample sizes with
/// positive median errors.
SlopeFit fit_rate_slope(const ExperimentReport& report);

/// OLS of log(median wall-time) on log(n); same preconditions on times.
SlopeFit runtime_scaling(const ExperimentReport& report);

struct TwoPointResult {
  double error_rate;
  std::vector<std::uint8_t> mistakes;  // one per rep
  std::vector<double> seconds;
};

/// Per rep: a fair coin picks f1 or f2, n points are drawn, and the exact
/// likelihood-ratio test decides which density generated them. Returns the
/// empirical error probability of this optimal test.
TwoPointResult two_point_experiment(const TwoPointPair& pair, std::int64_t n, int reps,
                                    std::uint64_t seed);

struct SublinearResult {
  ExperimentReport full;
  ExperimentReport sub;
  SlopeFit full_fit;
  SlopeFit sub_fit;
};

/// Runs the configured sweep twice, full-sample and restricted to the first
/// floor(n^gamma) points, and fits both error slopes. The subsampled slope
/// should be gamma times the full one.
SublinearResult sublinear_demo(const ExperimentConfig& cfg, double gamma);

/// Exponent 1/(d + 2*beta) of the configured density (used for the error
/// radius thresholds and the oracle bandwidth).
double rate_exponent(const DensitySpec& spec);

/// Interpolated sample quantile (linear between order statistics).
double quantile(std::vector<double> values, double p);

}  // namespace modehunt
