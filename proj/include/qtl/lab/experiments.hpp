#pragma once

// The four experiment kinds behind the CLI. Each run_* function returns its
// data in memory; the matching write_* function emits CSV tables and a
// gnuplot script. Randomness is addressed by (seed, purpose, index) streams,
// so results do not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qtl/dynamics.hpp"
#include "qtl/interactions.hpp"
#include "qtl/lab/scenario.hpp"
#include "qtl/parallel.hpp"
#include "qtl/random.hpp"
#include "qtl/states.hpp"
#include "qtl/theory.hpp"

namespace qtl::lab {

template <class Rng>
HermitianOperator make_interaction(const InteractionSpec& spec, const CompositeSystem& sys, Rng& rng) {
  switch (spec.kind) {
    case InteractionKind::Microcanonical: return microcanonical_interaction(sys, spec.delta_i, rng);
    case InteractionKind::Shell: return shell_restricted_interaction(sys, spec.delta_i, rng);
    case InteractionKind::Full: break;
  }
  return random_hermitian(static_cast<Eigen::Index>(sys.dimension()), spec.delta_i, rng);
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr r;
  if (xs.empty()) return r;
  for (double x : xs) r.mean += x;
  r.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double v = 0.0;
    for (double x : xs) v += (x - r.mean) * (x - r.mean);
    v /= static_cast<double>(xs.size() - 1);
    r.stderr_ = std::sqrt(v / static_cast<double>(xs.size()));
  }
  return r;
}

// --- predict ------------------------------------------------------------------

struct Prediction {
  std::vector<double> gas_initial;
  std::vector<double> container_initial;
  double min_purity = 0.0;
  double hs_average_purity_exact = 0.0;
  double hs_average_purity_approx = 0.0;
  double max_entropy = 0.0;
  TotalEnergyDistribution total_energy;
  std::vector<double> dominant;            // gas
  std::vector<double> dominant_container;
  double dominant_min_purity = 0.0;
  double dominant_max_entropy = 0.0;
  double dominant_hs_average_purity_approx = 0.0;
  std::optional<ExponentialFit> degeneracy_fit;  // container with >= 2 levels
  std::vector<double> canonical;                  // from the fitted rate, if any
  std::optional<double> spectral_beta;            // of the dominant distribution
  std::vector<double> predicted;                  // equilibrium gas distribution
  double predicted_max_entropy = 0.0;
};

inline Prediction predict(const ScenarioConfig& cfg, std::size_t initial_index = 0) {
  const auto sys = cfg.composite();
  const auto& g = sys.gas();
  const auto& c = sys.container();
  const auto& init = cfg.initial_states.at(initial_index);
  const auto wa = gas_marginal(init, g);
  const auto wb = container_marginal(init, c);

  Prediction p;
  p.gas_initial = wa.weights();
  p.container_initial = wb.weights();
  p.min_purity = min_purity(wa, g);
  p.hs_average_purity_exact = hs_average_purity_exact(wa, wb, g, c);
  p.hs_average_purity_approx = hs_average_purity_approx(wa, wb, g, c);
  p.max_entropy = max_entropy(wa, g);
  p.total_energy = total_energy_distribution(wa, wb, sys);
  const auto wd = dominant_distribution(p.total_energy, sys);
  const auto wdc = dominant_container_distribution(p.total_energy, sys);
  p.dominant = wd.weights();
  p.dominant_container = wdc.weights();
  p.dominant_min_purity = min_purity(wd, g);
  p.dominant_max_entropy = max_entropy(wd, g);
  p.dominant_hs_average_purity_approx = hs_average_purity_approx(wd, wdc, g, c);
  if (c.level_count() >= 2) {
    p.degeneracy_fit = fit_exponential_degeneracy(c);
    p.canonical = canonical_distribution(g, p.degeneracy_fit->alpha).weights();
  }
  if (g.level_count() >= 2) {
    try {
      p.spectral_beta = spectral_temperature(wd, g);
    } catch (const std::domain_error&) {
      p.spectral_beta.reset();
    }
  }
  // A block-diagonal coupling cannot move energy between the subsystems.
  const bool frozen = cfg.interaction.kind == InteractionKind::Microcanonical;
  p.predicted = frozen ? p.gas_initial : p.dominant;
  p.predicted_max_entropy = frozen ? p.max_entropy : p.dominant_max_entropy;
  return p;
}

// --- histogram ----------------------------------------------------------------

struct HistogramResult {
  double s_max = 0.0;
  double hs_average_purity_exact = 0.0;
  double hs_average_purity_approx = 0.0;
  std::vector<double> entropies;  // one per sample, in sample order
  std::vector<double> purities;
  std::vector<double> frequencies;  // per bin, sums to 1
  double bin_width = 0.0;

  double fraction_above(double s) const {
    return static_cast<double>(std::count_if(entropies.begin(), entropies.end(), [s](double x) { return x > s; })) /
           static_cast<double>(entropies.size());
  }
  double fraction_below(double s) const {
    return static_cast<double>(std::count_if(entropies.begin(), entropies.end(), [s](double x) { return x < s; })) /
           static_cast<double>(entropies.size());
  }
  MeanStderr purity_stats() const { return mean_stderr(purities); }
  MeanStderr entropy_stats() const { return mean_stderr(entropies); }
};

/// Samples the accessible region of the first initial state's marginals and
/// bins the gas entropy over [0, S_max]. Sample i uses stream (seeds[0], i).
inline HistogramResult run_histogram(const ScenarioConfig& cfg, unsigned threads = 0) {
  if (cfg.histogram_samples < 1) throw ConfigError("histogram.samples", "must be >= 1");
  const auto sys = cfg.composite();
  const auto& init = cfg.initial_states.front();
  const auto wa = gas_marginal(init, sys.gas());
  const auto wb = container_marginal(init, sys.container());
  const auto target = JointDistribution::product(wa.as_vector(), wb.as_vector());

  HistogramResult h;
  h.s_max = max_entropy(wa, sys.gas());
  h.hs_average_purity_exact = hs_average_purity_exact(wa, wb, sys.gas(), sys.container());
  h.hs_average_purity_approx = hs_average_purity_approx(wa, wb, sys.gas(), sys.container());
  const std::size_t n = cfg.histogram_samples;
  h.entropies.resize(n);
  h.purities.resize(n);
  const std::uint64_t seed = cfg.seeds.front();
  parallel_for(n, threads, [&](std::size_t i) {
    auto rng = make_stream(seed, StreamTag::AccessibleSample, i);
    const auto psi = sample_accessible_region(sys, target, rng);
    const auto rho = partial_trace_gas(psi, sys);
    h.entropies[i] = von_neumann_entropy(rho);
    h.purities[i] = purity(rho);
  });

  const std::size_t bins = cfg.histogram_bins;
  h.frequencies.assign(bins, 0.0);
  h.bin_width = h.s_max / static_cast<double>(bins);
  for (double s : h.entropies) {
    std::size_t b = 0;
    if (h.s_max > 0.0) {
      const double x = std::floor(s / h.bin_width);
      b = x <= 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(x));
    }
    h.frequencies[b] += 1.0;
  }
  for (double& f : h.frequencies) f /= static_cast<double>(n);
  return h;
}

// --- evolve -------------------------------------------------------------------

struct EvolveRun {
  std::uint64_t seed = 0;
  std::size_t initial_state = 0;
  Trajectory trajectory;
  std::vector<double> plateau_occupations;  // window average of W^g_A
  double plateau_entropy = 0.0;
  double plateau_purity = 0.0;
  double plateau_distance = 0.0;
  double relaxation_time = 0.0;  // of W^g_0 towards its plateau
  double max_joint_drift = 0.0;  // max |W_AB(t) - W_AB(0)|
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;  // of <H_g + H_c>, physical units
};

struct EvolveResult {
  Prediction prediction;
  std::vector<EvolveRun> runs;  // ordered by (seed index, initial state)
};

inline double window_average(const std::vector<double>& xs, const std::vector<double>& ts, double t0, double t1) {
  return time_average(xs, ts, t0, t1);
}

/// One interaction realization per seed (stream (seed, Interaction, 0)),
/// shared by every initial state; initial state k uses (seed, InitialState, k).
inline EvolveResult run_evolve(const ScenarioConfig& cfg, unsigned threads = 0) {
  const auto sys = cfg.composite();
  EvolveResult res;
  res.prediction = predict(cfg);
  const auto times = uniform_time_grid(cfg.time.t_end, cfg.time.samples);
  const std::size_t n_init = cfg.initial_states.size();
  res.runs.resize(cfg.seeds.size() * n_init);

  parallel_for(cfg.seeds.size(), threads, [&](std::size_t si) {
    const std::uint64_t seed = cfg.seeds[si];
    auto irng = make_stream(seed, StreamTag::Interaction, 0);
    const auto interaction = make_interaction(cfg.interaction, sys, irng);
    const Propagator prop(assemble_hamiltonian(sys, interaction));
    for (std::size_t k = 0; k < n_init; ++k) {
      auto srng = make_stream(seed, StreamTag::InitialState, k);
      const auto psi0 = make_initial_state(cfg.initial_states[k], sys, srng);
      const auto pred = predict(cfg, k);
      const auto eq = equilibrium_state(LevelDistribution(pred.predicted), sys.gas());

      EvolveRun run;
      run.seed = seed;
      run.initial_state = k;
      run.trajectory = propagate(prop, sys, psi0, times, eq);
      run.trajectory.meta = {cfg.id, seed, cfg.interaction.delta_i, k};
      const auto& tr = run.trajectory;
      const double t0 = cfg.window_start(), t1 = cfg.window_end();
      for (std::size_t a = 0; a < sys.gas().level_count(); ++a)
        run.plateau_occupations.push_back(window_average(tr.gas_occupation_series(a), tr.times, t0, t1));
      run.plateau_entropy = window_average(tr.entropy, tr.times, t0, t1);
      run.plateau_purity = window_average(tr.purity, tr.times, t0, t1);
      run.plateau_distance = window_average(tr.distance, tr.times, t0, t1);
      run.relaxation_time = relaxation_time(tr.gas_occupation_series(0), tr.times, run.plateau_occupations[0]);
      for (std::size_t i = 0; i < tr.size(); ++i) {
        run.max_joint_drift = std::max(
            run.max_joint_drift, (tr.joint_occupations[i] - tr.joint_occupations[0]).cwiseAbs().maxCoeff());
        run.max_norm_drift = std::max(run.max_norm_drift, std::abs(tr.norm[i] - 1.0));
        run.max_energy_drift =
            std::max(run.max_energy_drift, std::abs(tr.decoupled_energy[i] - tr.decoupled_energy[0]));
      }
      res.runs[si * n_init + k] = std::move(run);
    }
  });
  return res;
}

// --- fluctuation sweep --------------------------------------------------------

struct SweepRun {
  std::size_t size = 0;  // N^c_1
  std::uint64_t seed = 0;
  double deviation = 0.0;  // Delta_t W^g_0
};

struct SweepPoint {
  std::size_t size = 0;
  double deviation = 0.0;  // root mean square over seeds
  double stderr_ = 0.0;
  std::size_t runs = 0;
};

struct SweepResult {
  std::vector<SweepRun> runs;  // ordered by (size, seed)
  std::vector<SweepPoint> points;
  SizeScalingFit fit;
};

/// For each container size N builds degeneracies (N/2, N, 2N) on energies
/// 0,1,2, evolves the first initial state once per seed, and measures the
/// temporal fluctuation of W^g_0 over the configured window.
inline SweepResult run_sweep(const ScenarioConfig& cfg, unsigned threads = 0) {
  if (cfg.sweep_sizes.size() < 3) throw ConfigError("sweep.sizes", "at least three sizes are required for the scaling fit");
  const auto times = uniform_time_grid(cfg.time.t_end, cfg.time.samples);
  const std::size_t n_seeds = cfg.seeds.size();
  SweepResult res;
  res.runs.resize(cfg.sweep_sizes.size() * n_seeds);

  parallel_for(res.runs.size(), threads, [&](std::size_t job) {
    const std::size_t n1 = cfg.sweep_sizes[job / n_seeds];
    const std::uint64_t seed = cfg.seeds[job % n_seeds];
    const CompositeSystem sys(cfg.gas_spectrum(), Spectrum(sweep_container(n1), cfg.quantum));
    auto irng = make_stream(seed, StreamTag::Interaction, n1);
    const auto interaction = make_interaction(cfg.interaction, sys, irng);
    auto srng = make_stream(seed, StreamTag::InitialState, n1);
    const auto psi0 = make_initial_state(cfg.initial_states.front(), sys, srng);
    const auto tr = propagate(assemble_hamiltonian(sys, interaction), sys, psi0, times);
    const double var = time_fluctuation(tr.gas_occupation_series(0), tr.times, cfg.window_start(), cfg.window_end());
    res.runs[job] = {n1, seed, std::sqrt(var)};
  });

  std::vector<double> sizes, devs;
  for (std::size_t s = 0; s < cfg.sweep_sizes.size(); ++s) {
    std::vector<double> d;
    double sq = 0.0;
    for (std::size_t k = 0; k < n_seeds; ++k) {
      const double x = res.runs[s * n_seeds + k].deviation;
      d.push_back(x);
      sq += x * x;
    }
    SweepPoint p;
    p.size = cfg.sweep_sizes[s];
    p.deviation = std::sqrt(sq / static_cast<double>(n_seeds));
    p.stderr_ = mean_stderr(d).stderr_;
    p.runs = n_seeds;
    res.points.push_back(p);
    sizes.push_back(static_cast<double>(p.size));
    devs.push_back(p.deviation);
  }
  res.fit = fit_inverse_size_scaling(sizes, devs);
  return res;
}

// --- output -------------------------------------------------------------------

inline constexpr int kCsvPrecision = 12;

/// Comment header carried by every output file: re-running from it reproduces the data.
inline void write_header(std::ostream& os, const ScenarioConfig& cfg, const std::string& what) {
  os << "# qtl " << what << ' ' << cfg.id << '\n';
  os << "# seed:";
  for (auto s : cfg.seeds) os << ' ' << s;
  os << '\n' << kConfigHeaderPrefix << to_json(cfg).dump() << '\n';
  os << std::setprecision(kCsvPrecision);
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

inline void kv(std::ostream& os, const std::string& key, double v) { os << key << ',' << v << '\n'; }

}  // namespace detail

/// key,value table.
inline void write_prediction_csv(std::ostream& os, const Prediction& p) {
  using detail::kv;
  os << "key,value\n";
  kv(os, "min_purity", p.min_purity);
  kv(os, "hs_average_purity_exact", p.hs_average_purity_exact);
  kv(os, "hs_average_purity_approx", p.hs_average_purity_approx);
  kv(os, "max_entropy", p.max_entropy);
  for (const auto& [e, w] : p.total_energy) kv(os, "total_energy_W_E" + std::to_string(e), w);
  for (std::size_t a = 0; a < p.dominant.size(); ++a) kv(os, "dominant_W" + std::to_string(a), p.dominant[a]);
  for (std::size_t b = 0; b < p.dominant_container.size(); ++b)
    kv(os, "dominant_container_W" + std::to_string(b), p.dominant_container[b]);
  kv(os, "dominant_min_purity", p.dominant_min_purity);
  kv(os, "dominant_max_entropy", p.dominant_max_entropy);
  kv(os, "dominant_hs_average_purity_approx", p.dominant_hs_average_purity_approx);
  const double nan = std::nan("");
  kv(os, "alpha", p.degeneracy_fit ? p.degeneracy_fit->alpha : nan);
  kv(os, "N0", p.degeneracy_fit ? p.degeneracy_fit->n0 : nan);
  kv(os, "fit_residual", p.degeneracy_fit ? p.degeneracy_fit->residual : nan);
  for (std::size_t a = 0; a < p.canonical.size(); ++a) kv(os, "canonical_W" + std::to_string(a), p.canonical[a]);
  kv(os, "spectral_beta", p.spectral_beta.value_or(nan));
}

inline std::vector<std::filesystem::path> write_predict(const ScenarioConfig& cfg, const Prediction& p) {
  const std::filesystem::path path = std::filesystem::path(cfg.output) / (cfg.id + "_predict.csv");
  auto os = detail::open_output(path);
  write_header(os, cfg, "predict");
  write_prediction_csv(os, p);
  return {path};
}

inline std::vector<std::filesystem::path> write_histogram(const ScenarioConfig& cfg, const HistogramResult& h) {
  const std::filesystem::path dir(cfg.output);
  const auto csv = dir / (cfg.id + "_histogram.csv");
  const auto summary = dir / (cfg.id + "_histogram_summary.csv");
  const auto gp = dir / (cfg.id + "_histogram.gp");
  {
    auto os = detail::open_output(csv);
    write_header(os, cfg, "histogram");
    os << "bin_lo,bin_hi,center,frequency\n";
    for (std::size_t b = 0; b < h.frequencies.size(); ++b) {
      const double lo = h.bin_width * static_cast<double>(b);
      os << lo << ',' << lo + h.bin_width << ',' << lo + 0.5 * h.bin_width << ',' << h.frequencies[b] << '\n';
    }
  }
  {
    auto os = detail::open_output(summary);
    write_header(os, cfg, "histogram");
    const auto ps = h.purity_stats();
    const auto es = h.entropy_stats();
    os << "key,value\n";
    detail::kv(os, "samples", static_cast<double>(h.entropies.size()));
    detail::kv(os, "s_max", h.s_max);
    detail::kv(os, "mean_entropy", es.mean);
    detail::kv(os, "entropy_stderr", es.stderr_);
    detail::kv(os, "mean_purity", ps.mean);
    detail::kv(os, "purity_stderr", ps.stderr_);
    detail::kv(os, "hs_average_purity_exact", h.hs_average_purity_exact);
    detail::kv(os, "hs_average_purity_approx", h.hs_average_purity_approx);
    detail::kv(os, "fraction_above_0.95_s_max", h.fraction_above(0.95 * h.s_max));
  }
  {
    auto os = detail::open_output(gp);
    write_header(os, cfg, "histogram");
    os << "set datafile separator ','\n"
       << "set terminal pngcairo size 800,600\n"
       << "set output '" << cfg.id << "_histogram.png'\n"
       << "set xlabel 'S [k_B]'\nset ylabel 'relative frequency'\n"
       << "set style fill solid 0.6\nset boxwidth " << h.bin_width << "\n"
       << "set arrow from " << h.s_max << ", graph 0 to " << h.s_max << ", graph 1 nohead dt 2\n"
       << "plot '" << csv.filename().string() << "' every ::1 using 3:4 with boxes title 'accessible region'\n";
  }
  return {csv, summary, gp};
}

inline std::string run_file_name(const ScenarioConfig& cfg, std::uint64_t seed, std::size_t init) {
  return cfg.id + "_seed" + std::to_string(seed) + "_init" + std::to_string(init) + ".csv";
}

inline std::vector<std::filesystem::path> write_evolve(const ScenarioConfig& cfg, const EvolveResult& r) {
  const std::filesystem::path dir(cfg.output);
  std::vector<std::filesystem::path> out;
  for (const auto& run : r.runs) {
    const auto p = dir / run_file_name(cfg, run.seed, run.initial_state);
    auto os = detail::open_output(p);
    write_header(os, cfg, "evolve");
    write_trajectory_csv(os, run.trajectory);
    out.push_back(p);
  }
  const std::size_t levels = r.prediction.dominant.size();
  {
    const auto p = dir / (cfg.id + "_evolve_summary.csv");
    auto os = detail::open_output(p);
    write_header(os, cfg, "evolve");
    os << "seed,init";
    for (std::size_t a = 0; a < levels; ++a) os << ",W" << a << "_plateau";
    os << ",S_plateau,P_plateau,d_plateau,relaxation_time,max_joint_drift,max_norm_drift,max_energy_drift\n";
    for (const auto& run : r.runs) {
      os << run.seed << ',' << run.initial_state;
      for (double w : run.plateau_occupations) os << ',' << w;
      os << ',' << run.plateau_entropy << ',' << run.plateau_purity << ',' << run.plateau_distance << ','
         << run.relaxation_time << ',' << run.max_joint_drift << ',' << run.max_norm_drift << ','
         << run.max_energy_drift << '\n';
    }
    out.push_back(p);
  }
  {
    // Mean and standard error across seeds, per initial state.
    const auto p = dir / (cfg.id + "_evolve_aggregate.csv");
    auto os = detail::open_output(p);
    write_header(os, cfg, "evolve");
    os << "init,quantity,mean,stderr,prediction\n";
    const std::size_t n_init = cfg.initial_states.size();
    for (std::size_t k = 0; k < n_init; ++k) {
      for (std::size_t a = 0; a <= levels; ++a) {
        std::vector<double> xs;
        for (const auto& run : r.runs)
          if (run.initial_state == k) xs.push_back(a < levels ? run.plateau_occupations[a] : run.plateau_entropy);
        const auto ms = mean_stderr(xs);
        const double pred = a < levels ? r.prediction.predicted[a] : r.prediction.predicted_max_entropy;
        os << k << ',' << (a < levels ? "W" + std::to_string(a) : std::string("S")) << ',' << ms.mean << ','
           << ms.stderr_ << ',' << pred << '\n';
      }
    }
    out.push_back(p);
  }
  {
    const auto p = dir / (cfg.id + "_evolve.gp");
    auto os = detail::open_output(p);
    write_header(os, cfg, "evolve");
    os << "set datafile separator ','\n"
       << "set terminal pngcairo size 1200,500\n"
       << "set output '" << cfg.id << "_evolve.png'\n"
       << "set multiplot layout 1,2\n"
       << "set xlabel 't [hbar/dE]'\nset ylabel 'W^g_A'\n";
    for (std::size_t a = 0; a < levels; ++a)
      os << "set arrow from graph 0, first " << r.prediction.predicted[a] << " to graph 1, first "
         << r.prediction.predicted[a] << " nohead dt 2\n";
    os << "plot";
    bool first = true;
    for (const auto& run : r.runs)
      for (std::size_t a = 0; a < levels; ++a) {
        os << (first ? " " : ", \\\n     ") << '\'' << run_file_name(cfg, run.seed, run.initial_state)
           << "' every ::1 using 1:" << 2 + a << " with lines title 'seed " << run.seed << " init "
           << run.initial_state << " W" << a << '\'';
        first = false;
      }
    os << "\nunset arrow\nset ylabel 'S [k_B]'\n"
       << "set arrow from graph 0, first " << r.prediction.predicted_max_entropy << " to graph 1, first "
       << r.prediction.predicted_max_entropy << " nohead dt 2\n"
       << "plot";
    first = true;
    for (const auto& run : r.runs) {
      os << (first ? " " : ", \\\n     ") << '\'' << run_file_name(cfg, run.seed, run.initial_state)
         << "' every ::1 using 1:" << 3 + levels << " with lines title 'seed " << run.seed << " init "
         << run.initial_state << '\'';
      first = false;
    }
    os << "\nunset multiplot\n";
    out.push_back(p);
  }
  return out;
}

inline std::vector<std::filesystem::path> write_sweep(const ScenarioConfig& cfg, const SweepResult& r) {
  const std::filesystem::path dir(cfg.output);
  const auto runs = dir / (cfg.id + "_sweep.csv");
  const auto points = dir / (cfg.id + "_sweep_points.csv");
  const auto fit = dir / (cfg.id + "_sweep_fit.csv");
  const auto gp = dir / (cfg.id + "_sweep.gp");
  {
    auto os = detail::open_output(runs);
    write_header(os, cfg, "sweep");
    os << "N1,seed,delta\n";
    for (const auto& x : r.runs) os << x.size << ',' << x.seed << ',' << x.deviation << '\n';
  }
  {
    auto os = detail::open_output(points);
    write_header(os, cfg, "sweep");
    os << "N1,delta_rms,delta_stderr,runs\n";
    for (const auto& p : r.points) os << p.size << ',' << p.deviation << ',' << p.stderr_ << ',' << p.runs << '\n';
  }
  {
    auto os = detail::open_output(fit);
    write_header(os, cfg, "sweep");
    os << "key,value\n";
    detail::kv(os, "coefficient", r.fit.coefficient);
    detail::kv(os, "exponent", r.fit.exponent);
    detail::kv(os, "rms_residual", r.fit.rms_residual);
    detail::kv(os, "coefficient_fixed_half", r.fit.coefficient_fixed);
    detail::kv(os, "rms_residual_fixed_half", r.fit.rms_residual_fixed);
  }
  {
    auto os = detail::open_output(gp);
    write_header(os, cfg, "sweep");
    os << "set datafile separator ','\n"
       << "set terminal pngcairo size 800,600\n"
       << "set output '" << cfg.id << "_sweep.png'\n"
       << "set logscale xy\nset xlabel 'N^c_1'\nset ylabel 'Delta_t W^g_0'\n"
       << "f(x) = sqrt(" << r.fit.coefficient << ") * x**(-" << r.fit.exponent << ")\n"
       << "g(x) = sqrt(" << r.fit.coefficient_fixed << " / x)\n"
       << "plot '" << points.filename().string() << "' every ::1 using 1:2:3 with yerrorbars title 'simulation', \\\n"
       << "     f(x) title 'free exponent', g(x) dt 2 title 'exponent 1/2'\n";
  }
  return {runs, points, fit, gp};
}

}  // namespace qtl::lab
