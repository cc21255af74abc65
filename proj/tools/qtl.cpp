// qtl: run equilibration experiments on gas/container models.
//
//   qtl predict|histogram|evolve|sweep --config <file> [--seed N] [--samples N] [--bins N] [--out DIR] [--threads N]
//
// --config accepts a scenario JSON file or any CSV/gnuplot file written by a
// previous run (the embedded "# config:" header is used).

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qtl/lab/experiments.hpp"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> bins;
  std::optional<std::string> out;
  unsigned threads = 0;
};

qtl::lab::ScenarioConfig resolve(const Options& o, qtl::lab::ExperimentKind kind) {
  auto cfg = qtl::lab::load_config(o.config);
  cfg.kind = kind;
  if (o.seed) cfg.seeds = {*o.seed};
  if (o.samples) {
    if (*o.samples < 1) throw qtl::lab::ConfigError("--samples", "must be >= 1");
    cfg.histogram_samples = *o.samples;
  }
  if (o.bins) {
    if (*o.bins < 1) throw qtl::lab::ConfigError("--bins", "must be >= 1");
    cfg.histogram_bins = *o.bins;
  }
  if (o.out) cfg.output = *o.out;
  if (kind == qtl::lab::ExperimentKind::Sweep && cfg.sweep_sizes.size() < 3)
    throw qtl::lab::ConfigError("sweep.sizes", "at least three sizes are required for the scaling fit");
  return cfg;
}

void report(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibration of weakly coupled gas/container quantum systems"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Scenario JSON, or an output file with an embedded config")->required();
    sub->add_option("--seed", opt.seed, "Replace the configured seeds by a single seed");
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
  };
  auto* predict = app.add_subcommand("predict", "Closed-form predictions");
  auto* histogram = app.add_subcommand("histogram", "Entropy histogram over the accessible region");
  auto* evolve = app.add_subcommand("evolve", "Exact time evolution of local observables");
  auto* sweep = app.add_subcommand("sweep", "Fluctuation scaling with container size");
  for (auto* s : {predict, histogram, evolve, sweep}) add_common(s);
  histogram->add_option("--samples", opt.samples, "Number of sampled states");
  histogram->add_option("--bins", opt.bins, "Number of entropy bins");

  CLI11_PARSE(app, argc, argv);

  using qtl::lab::ExperimentKind;
  try {
    if (predict->parsed()) {
      const auto cfg = resolve(opt, ExperimentKind::Predict);
      report(qtl::lab::write_predict(cfg, qtl::lab::predict(cfg)));
    } else if (histogram->parsed()) {
      const auto cfg = resolve(opt, ExperimentKind::Histogram);
      report(qtl::lab::write_histogram(cfg, qtl::lab::run_histogram(cfg, opt.threads)));
    } else if (evolve->parsed()) {
      const auto cfg = resolve(opt, ExperimentKind::Evolve);
      report(qtl::lab::write_evolve(cfg, qtl::lab::run_evolve(cfg, opt.threads)));
    } else if (sweep->parsed()) {
      const auto cfg = resolve(opt, ExperimentKind::Sweep);
      report(qtl::lab::write_sweep(cfg, qtl::lab::run_sweep(cfg, opt.threads)));
    }
  } catch (const qtl::lab::ConfigError& e) {
    std::cerr << "qtl: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qtl: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
