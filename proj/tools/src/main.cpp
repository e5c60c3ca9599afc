#include <CLI11.hpp>

#include <iostream>

#include "cli_commands.hpp"

int main(int argc, char** argv) {
  using namespace modehunt::cli;

  CLI::App app{"modehunt: histogram-based estimation of a density's global mode"};
  app.require_subcommand(1);

  EstimateOptions est;
  double est_h = 0, est_beta = 0, est_c = 0, est_b = 0;
  int est_kappa = 0;
  auto* estimate = app.add_subcommand(
      "estimate", "Estimate the mode of a point file (mono- or multi-scale)");
  estimate->add_option("input", est.input, "point file (one point per row)")->required();
  estimate->add_option("--algo", est.algo, "estimator: mono | multi")->required();
  auto* opt_h = estimate->add_option("--h", est_h, "fixed bin width (mono)");
  auto* opt_autoh =
      estimate->add_flag("--auto-h", est.auto_h, "bandwidth c*n^{-1/(d+2*beta)} (mono)");
  auto* opt_beta = estimate->add_option("--beta", est_beta, "peak exponent for --auto-h");
  auto* opt_c = estimate->add_option("--c", est_c, "bandwidth constant for --auto-h");
  auto* opt_b = estimate->add_option("--b", est_b, "scale multiplier >= 2 (multi)");
  auto* opt_kappa = estimate->add_option("--kappa", est_kappa, "margin in bins >= 0 (multi)");
  estimate->add_option("--out", est.out, "write a JSON run result here");
  (void)opt_autoh;

  SampleOptions smp;
  double smp_beta = 0, smp_h0 = 0, smp_peak = 0, smp_h = 0;
  int smp_d = 0;
  long long smp_seed = 0;
  auto* sample = app.add_subcommand("sample", "Draw seeded points from a synthetic density");
  sample->add_option("--family", smp.family, "power-peak | f1 | f2")->required();
  auto* opt_d = sample->add_option("--d", smp_d, "dimension");
  auto* opt_sbeta = sample->add_option("--beta", smp_beta, "peak exponent");
  auto* opt_h0 = sample->add_option("--h0", smp_h0, "peak region radius in (0,1)");
  sample->add_option("--mode", smp.mode, "mode coordinates (d values)")->expected(-1);
  auto* opt_peak = sample->add_option("--peak", smp_peak, "peak value (power-peak)");
  auto* opt_sh = sample->add_option("--h", smp_h, "perturbation width (f2)");
  sample->add_option("--n", smp.n, "number of draws")->required();
  sample->add_option("--seed", smp_seed, "RNG seed");
  sample->add_option("--out", smp.out, "output point file")->required();

  ExperimentOptions exp;
  int exp_workers = 0;
  long long exp_seed = 0;
  auto* experiment =
      app.add_subcommand("experiment", "Run a configured Monte Carlo experiment");
  experiment->add_option("--config", exp.config_path, "experiment config file")->required();
  auto* opt_workers =
      experiment->add_option("--workers", exp_workers, "worker threads (0 = all cores)");
  auto* opt_eseed = experiment->add_option("--seed", exp_seed, "override the config seed");
  experiment->add_option("--out", exp.out_prefix, "output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "modehunt: error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (estimate->parsed()) {
    if (opt_h->count() > 0) est.h = est_h;
    if (opt_beta->count() > 0) est.beta = est_beta;
    if (opt_c->count() > 0) est.c = est_c;
    if (opt_b->count() > 0) est.b = est_b;
    if (opt_kappa->count() > 0) est.kappa = est_kappa;
    return run_command([&] { run_estimate(est); });
  }
  if (sample->parsed()) {
    if (opt_d->count() > 0) smp.d = smp_d;
    if (opt_sbeta->count() > 0) smp.beta = smp_beta;
    if (opt_h0->count() > 0) smp.h0 = smp_h0;
    if (opt_peak->count() > 0) smp.peak = smp_peak;
    if (opt_sh->count() > 0) smp.h = smp_h;
    smp.seed = static_cast<std::uint64_t>(smp_seed);
    return run_command([&] { run_sample(smp); });
  }
  if (opt_workers->count() > 0) exp.workers = exp_workers;
  if (opt_eseed->count() > 0) exp.seed = static_cast<std::uint64_t>(exp_seed);
  return run_command([&] { run_experiment(exp); });
}
