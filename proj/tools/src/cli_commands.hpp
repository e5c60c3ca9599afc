#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace modehunt::cli {

// exit codes: 0 success, 2 usage error, 3 data error, 4 internal invariant
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInternal = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EstimateOptions {
  std::string input;
  std::string algo;  // mono | multi
  std::optional<double> h;
  bool auto_h = false;
  std::optional<double> beta;
  std::optional<double> c;
  std::optional<double> b;
  std::optional<int> kappa;
  std::string out;  // optional JSON result path
};

struct SampleOptions {
  std::string family;  // power-peak | f1 | f2
  std::optional<int> d;
  std::optional<double> beta;
  std::optional<double> h0;
  std::vector<double> mode;
  std::optional<double> peak;
  std::optional<double> h;  // f2 perturbation width
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct ExperimentOptions {
  std::string config_path;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::string out_prefix = "experiment";
};

void run_estimate(const EstimateOptions& opt);
void run_sample(const SampleOptions& opt);
void run_experiment(const ExperimentOptions& opt);

/// Runs a command and maps exceptions onto the exit-code contract, with a
/// single-line diagnostic on stderr.
int run_command(const std::function<void()>& body);

}  // namespace modehunt::cli
