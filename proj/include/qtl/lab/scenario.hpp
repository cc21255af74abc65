#pragma once

// Scenario configuration: one JSON document per experiment.
//
//   {
//     "id": "canonical-2x3",
//     "kind": "evolve",                       // predict | histogram | evolve | fluctuation-sweep
//     "quantum": 1.0,
//     "gas": [[0, 1], [1, 1]],                // [grid energy, degeneracy] pairs
//     "container": [[0, 50], [1, 100], [2, 200]],
//     "interaction": {"kind": "full", "deltaI": 0.0075},   // full | microcanonical | shell
//     "initial_states": [{"gas_weights": [0.5, 0.5], "container_level": 1}],
//     "time": {"t_end": 200, "samples": 1000},
//     "window": {"start_fraction": 0.25},
//     "seeds": [1, 2, 3],
//     "histogram": {"samples": 100000, "bins": 50},
//     "sweep": {"sizes": [8, 16, 32, 64, 128]},
//     "output": "out"
//   }
//
// Every parse failure is reported as a ConfigError naming the offending field.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "qtl/random.hpp"
#include "qtl/spectra.hpp"
#include "qtl/states.hpp"
#include "qtl/theory.hpp"

namespace qtl::lab {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ExperimentKind { Predict, Histogram, Evolve, Sweep };
enum class InteractionKind { Full, Microcanonical, Shell };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Predict: return "predict";
    case ExperimentKind::Histogram: return "histogram";
    case ExperimentKind::Evolve: return "evolve";
    case ExperimentKind::Sweep: return "fluctuation-sweep";
  }
  return "?";
}

inline const char* to_string(InteractionKind k) {
  switch (k) {
    case InteractionKind::Full: return "full";
    case InteractionKind::Microcanonical: return "microcanonical";
    case InteractionKind::Shell: return "shell";
  }
  return "?";
}

struct InteractionSpec {
  InteractionKind kind = InteractionKind::Full;
  double delta_i = 0.01;
};

/// Product initial state. The gas part is either level weights (each level
/// gets a Haar-random vector scaled by sqrt(W_A)) or explicit amplitudes; the
/// container part likewise, or a single occupied level.
struct InitialStateSpec {
  std::optional<std::vector<double>> gas_weights;
  std::optional<std::vector<std::complex<double>>> gas_amplitudes;
  std::optional<std::size_t> container_level;
  std::optional<std::vector<double>> container_weights;
  std::optional<std::vector<std::complex<double>>> container_amplitudes;
};

struct TimeGrid {
  double t_end = 200.0;
  std::size_t samples = 1000;
};

struct ScenarioConfig {
  std::string id = "scenario";
  ExperimentKind kind = ExperimentKind::Predict;
  double quantum = 1.0;
  std::vector<EnergyLevel> gas;
  std::vector<EnergyLevel> container;  // may be empty for sweeps
  InteractionSpec interaction;
  std::vector<InitialStateSpec> initial_states;
  TimeGrid time;
  double window_start_fraction = 0.25;
  std::vector<std::uint64_t> seeds{1};
  std::size_t histogram_samples = 100000;
  std::size_t histogram_bins = 50;
  std::vector<std::size_t> sweep_sizes;
  std::string output = "out";

  Spectrum gas_spectrum() const { return Spectrum(gas, quantum); }
  Spectrum container_spectrum() const { return Spectrum(container, quantum); }
  CompositeSystem composite() const { return CompositeSystem(gas_spectrum(), container_spectrum()); }

  double window_start() const { return window_start_fraction * time.t_end; }
  double window_end() const { return time.t_end; }
};

/// Container of the size sweep: energies 0,1,2 with degeneracies N/2, N, 2N.
inline std::vector<EnergyLevel> sweep_container(std::size_t n1) {
  if (n1 < 2 || n1 % 2 != 0) throw ConfigError("sweep.sizes", "container size " + std::to_string(n1) + " must be even and >= 2");
  return {{0, n1 / 2}, {1, n1}, {2, 2 * n1}};
}

namespace detail {

inline std::string at(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
inline std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

inline double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

inline std::uint64_t get_unsigned(const json& j, const std::string& field) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    throw ConfigError(field, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline std::vector<EnergyLevel> parse_spectrum(const json& j, const std::string& field, bool required) {
  if (j.is_null()) {
    if (required) throw ConfigError(field, "missing spectrum");
    return {};
  }
  if (!j.is_array()) throw ConfigError(field, "expected an array of [energy, degeneracy] pairs");
  if (j.empty()) throw ConfigError(field, "spectrum must contain at least one level");
  std::vector<EnergyLevel> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    const auto f = at(field, i);
    if (!p.is_array() || p.size() != 2) throw ConfigError(f, "expected [energy, degeneracy]");
    if (!p[0].is_number_integer()) throw ConfigError(at(f, 0), "energy must be an integer grid index");
    const auto e = p[0].get<std::int64_t>();
    if (e < 0) throw ConfigError(at(f, 0), "energy must be non-negative");
    const auto n = get_unsigned(p[1], at(f, 1));
    if (n < 1) throw ConfigError(at(f, 1), "degeneracy must be >= 1");
    if (!out.empty() && e <= out.back().energy) throw ConfigError(f, "levels must be strictly ascending in energy");
    out.push_back({e, static_cast<std::size_t>(n)});
  }
  return out;
}

inline std::vector<double> parse_weights(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array of weights");
  std::vector<double> w;
  double s = 0.0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const double x = get_number(j[i], at(field, i));
    if (x < 0.0) throw ConfigError(at(field, i), "weights must be non-negative");
    w.push_back(x);
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) throw ConfigError(field, "weights must sum to 1");
  return w;
}

inline std::vector<std::complex<double>> parse_amplitudes(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a non-empty array of [re, im] pairs");
  std::vector<std::complex<double>> v;
  double s = 0.0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    const auto f = at(field, i);
    if (p.is_number()) {
      v.emplace_back(p.get<double>(), 0.0);
    } else if (p.is_array() && p.size() == 2) {
      v.emplace_back(get_number(p[0], at(f, 0)), get_number(p[1], at(f, 1)));
    } else {
      throw ConfigError(f, "expected a number or [re, im]");
    }
    s += std::norm(v.back());
  }
  if (std::abs(s - 1.0) > 1e-12) throw ConfigError(field, "amplitudes must be normalized");
  return v;
}

inline InitialStateSpec parse_initial(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  InitialStateSpec s;
  if (j.contains("gas_weights")) s.gas_weights = parse_weights(j["gas_weights"], at(field, "gas_weights"));
  if (j.contains("gas_amplitudes")) s.gas_amplitudes = parse_amplitudes(j["gas_amplitudes"], at(field, "gas_amplitudes"));
  if (s.gas_weights.has_value() == s.gas_amplitudes.has_value())
    throw ConfigError(field, "exactly one of gas_weights or gas_amplitudes is required");
  int container_parts = 0;
  if (j.contains("container_level")) {
    s.container_level = get_unsigned(j["container_level"], at(field, "container_level"));
    ++container_parts;
  }
  if (j.contains("container_weights")) {
    s.container_weights = parse_weights(j["container_weights"], at(field, "container_weights"));
    ++container_parts;
  }
  if (j.contains("container_amplitudes")) {
    s.container_amplitudes = parse_amplitudes(j["container_amplitudes"], at(field, "container_amplitudes"));
    ++container_parts;
  }
  if (container_parts != 1)
    throw ConfigError(field, "exactly one of container_level, container_weights or container_amplitudes is required");
  return s;
}

inline json amplitudes_to_json(const std::vector<std::complex<double>>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

inline json spectrum_to_json(const std::vector<EnergyLevel>& levels) {
  json a = json::array();
  for (const auto& l : levels) a.push_back({l.energy, l.degeneracy});
  return a;
}

// Checks an initial state spec against the spectra it will be applied to.
inline void check_initial(const InitialStateSpec& s, const std::vector<EnergyLevel>& gas,
                          const std::vector<EnergyLevel>& container, const std::string& field) {
  const Spectrum g(gas);
  if (s.gas_weights && s.gas_weights->size() != g.level_count())
    throw ConfigError(at(field, "gas_weights"), "length must equal the number of gas levels");
  if (s.gas_amplitudes && s.gas_amplitudes->size() != g.dimension())
    throw ConfigError(at(field, "gas_amplitudes"), "length must equal the gas dimension");
  if (container.empty()) return;
  const Spectrum c(container);
  if (s.container_level && *s.container_level >= c.level_count())
    throw ConfigError(at(field, "container_level"), "no such container level");
  if (s.container_weights && s.container_weights->size() != c.level_count())
    throw ConfigError(at(field, "container_weights"), "length must equal the number of container levels");
  if (s.container_amplitudes && s.container_amplitudes->size() != c.dimension())
    throw ConfigError(at(field, "container_amplitudes"), "length must equal the container dimension");
}

}  // namespace detail

inline ScenarioConfig parse_config(const json& j) {
  using detail::at;
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  ScenarioConfig c;
  if (j.contains("id")) {
    if (!j["id"].is_string() || j["id"].get<std::string>().empty()) throw ConfigError("id", "expected a non-empty string");
    c.id = j["id"].get<std::string>();
  }
  if (j.contains("kind")) {
    const auto k = j["kind"].is_string() ? j["kind"].get<std::string>() : std::string();
    if (k == "predict") c.kind = ExperimentKind::Predict;
    else if (k == "histogram") c.kind = ExperimentKind::Histogram;
    else if (k == "evolve") c.kind = ExperimentKind::Evolve;
    else if (k == "fluctuation-sweep" || k == "sweep") c.kind = ExperimentKind::Sweep;
    else throw ConfigError("kind", "expected predict, histogram, evolve or fluctuation-sweep");
  }
  if (j.contains("quantum")) {
    c.quantum = detail::get_number(j["quantum"], "quantum");
    if (!(c.quantum > 0.0)) throw ConfigError("quantum", "must be positive");
  }
  c.gas = detail::parse_spectrum(j.value("gas", json()), "gas", true);
  c.container = detail::parse_spectrum(j.value("container", json()), "container", c.kind != ExperimentKind::Sweep);

  if (j.contains("interaction")) {
    const auto& ji = j["interaction"];
    if (!ji.is_object()) throw ConfigError("interaction", "expected an object");
    if (ji.contains("kind")) {
      const auto k = ji["kind"].is_string() ? ji["kind"].get<std::string>() : std::string();
      if (k == "full") c.interaction.kind = InteractionKind::Full;
      else if (k == "microcanonical") c.interaction.kind = InteractionKind::Microcanonical;
      else if (k == "shell") c.interaction.kind = InteractionKind::Shell;
      else throw ConfigError("interaction.kind", "expected full, microcanonical or shell");
    }
    if (ji.contains("deltaI")) {
      c.interaction.delta_i = detail::get_number(ji["deltaI"], "interaction.deltaI");
      if (!(c.interaction.delta_i >= 0.0)) throw ConfigError("interaction.deltaI", "must be >= 0");
    }
  }

  if (!j.contains("initial_states")) throw ConfigError("initial_states", "at least one initial state is required");
  const auto& js = j["initial_states"];
  if (!js.is_array() || js.empty()) throw ConfigError("initial_states", "expected a non-empty array");
  for (std::size_t i = 0; i < js.size(); ++i) {
    c.initial_states.push_back(detail::parse_initial(js[i], at("initial_states", i)));
    detail::check_initial(c.initial_states.back(), c.gas, c.container, at("initial_states", i));
  }

  if (j.contains("time")) {
    const auto& jt = j["time"];
    if (!jt.is_object()) throw ConfigError("time", "expected an object");
    if (jt.contains("t_end")) c.time.t_end = detail::get_number(jt["t_end"], "time.t_end");
    if (jt.contains("samples")) c.time.samples = detail::get_unsigned(jt["samples"], "time.samples");
    if (!(c.time.t_end > 0.0)) throw ConfigError("time.t_end", "must be positive");
    if (c.time.samples < 2) throw ConfigError("time.samples", "must be >= 2");
  }
  if (j.contains("window")) {
    const auto& jw = j["window"];
    if (!jw.is_object()) throw ConfigError("window", "expected an object");
    if (jw.contains("start_fraction"))
      c.window_start_fraction = detail::get_number(jw["start_fraction"], "window.start_fraction");
    if (!(c.window_start_fraction >= 0.0 && c.window_start_fraction < 1.0))
      throw ConfigError("window.start_fraction", "must lie in [0, 1)");
  }
  if (j.contains("seeds")) {
    const auto& jsd = j["seeds"];
    if (!jsd.is_array() || jsd.empty()) throw ConfigError("seeds", "expected a non-empty array");
    c.seeds.clear();
    for (std::size_t i = 0; i < jsd.size(); ++i) c.seeds.push_back(detail::get_unsigned(jsd[i], at("seeds", i)));
  }
  if (j.contains("histogram")) {
    const auto& jh = j["histogram"];
    if (!jh.is_object()) throw ConfigError("histogram", "expected an object");
    if (jh.contains("samples")) c.histogram_samples = detail::get_unsigned(jh["samples"], "histogram.samples");
    if (jh.contains("bins")) c.histogram_bins = detail::get_unsigned(jh["bins"], "histogram.bins");
    if (c.histogram_samples < 1) throw ConfigError("histogram.samples", "must be >= 1");
    if (c.histogram_bins < 1) throw ConfigError("histogram.bins", "must be >= 1");
  }
  if (j.contains("sweep")) {
    const auto& jw = j["sweep"];
    if (!jw.is_object() || !jw.contains("sizes") || !jw["sizes"].is_array())
      throw ConfigError("sweep.sizes", "expected an array of container sizes");
    for (std::size_t i = 0; i < jw["sizes"].size(); ++i) {
      const auto n = detail::get_unsigned(jw["sizes"][i], at("sweep.sizes", i));
      if (n < 2 || n % 2 != 0) throw ConfigError(at("sweep.sizes", i), "container size must be even and >= 2");
      c.sweep_sizes.push_back(static_cast<std::size_t>(n));
    }
  }
  if (c.kind == ExperimentKind::Sweep) {
    if (c.sweep_sizes.size() < 3) throw ConfigError("sweep.sizes", "at least three sizes are required for the scaling fit");
    for (std::size_t i = 0; i < c.initial_states.size(); ++i)
      detail::check_initial(c.initial_states[i], c.gas, sweep_container(c.sweep_sizes.front()),
                            at("initial_states", i));
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ConfigError("output", "expected a string");
    c.output = j["output"].get<std::string>();
  }
  return c;
}

/// Fully resolved config, defaults included.
inline json to_json(const ScenarioConfig& c) {
  json j;
  j["id"] = c.id;
  j["kind"] = to_string(c.kind);
  j["quantum"] = c.quantum;
  j["gas"] = detail::spectrum_to_json(c.gas);
  if (!c.container.empty()) j["container"] = detail::spectrum_to_json(c.container);
  j["interaction"] = {{"kind", to_string(c.interaction.kind)}, {"deltaI", c.interaction.delta_i}};
  json inits = json::array();
  for (const auto& s : c.initial_states) {
    json o = json::object();
    if (s.gas_weights) o["gas_weights"] = *s.gas_weights;
    if (s.gas_amplitudes) o["gas_amplitudes"] = detail::amplitudes_to_json(*s.gas_amplitudes);
    if (s.container_level) o["container_level"] = *s.container_level;
    if (s.container_weights) o["container_weights"] = *s.container_weights;
    if (s.container_amplitudes) o["container_amplitudes"] = detail::amplitudes_to_json(*s.container_amplitudes);
    inits.push_back(o);
  }
  j["initial_states"] = inits;
  j["time"] = {{"t_end", c.time.t_end}, {"samples", c.time.samples}};
  j["window"] = {{"start_fraction", c.window_start_fraction}};
  j["seeds"] = c.seeds;
  j["histogram"] = {{"samples", c.histogram_samples}, {"bins", c.histogram_bins}};
  if (!c.sweep_sizes.empty()) j["sweep"] = {{"sizes", c.sweep_sizes}};
  j["output"] = c.output;
  return j;
}

inline constexpr const char* kConfigHeaderPrefix = "# config: ";

/// Reads a scenario from a JSON file, or recovers it from the header of any
/// output file written by the lab.
inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  json j;
  try {
    if (first != std::string::npos && text[first] == '#') {
      std::istringstream lines(text);
      std::string line;
      bool found = false;
      while (std::getline(lines, line)) {
        if (line.rfind(kConfigHeaderPrefix, 0) == 0) {
          j = json::parse(line.substr(std::string(kConfigHeaderPrefix).size()));
          found = true;
          break;
        }
        if (line.empty() || line[0] != '#') break;
      }
      if (!found) throw ConfigError("--config", "no embedded config header in " + path);
    } else {
      j = json::parse(text);
    }
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

// --- Initial-state construction -------------------------------------------

inline LevelDistribution gas_marginal(const InitialStateSpec& s, const Spectrum& gas) {
  if (s.gas_weights) return LevelDistribution(*s.gas_weights);
  std::vector<double> w(gas.level_count(), 0.0);
  for (std::size_t k = 0; k < s.gas_amplitudes->size(); ++k) w[gas.level_of(k)] += std::norm((*s.gas_amplitudes)[k]);
  double t = 0.0;
  for (double x : w) t += x;
  for (double& x : w) x /= t;
  return LevelDistribution(std::move(w));
}

inline LevelDistribution container_marginal(const InitialStateSpec& s, const Spectrum& container) {
  if (s.container_level) return LevelDistribution::delta(container.level_count(), *s.container_level);
  if (s.container_weights) return LevelDistribution(*s.container_weights);
  std::vector<double> w(container.level_count(), 0.0);
  for (std::size_t k = 0; k < s.container_amplitudes->size(); ++k)
    w[container.level_of(k)] += std::norm((*s.container_amplitudes)[k]);
  double t = 0.0;
  for (double x : w) t += x;
  for (double& x : w) x /= t;
  return LevelDistribution(std::move(w));
}

namespace detail {

template <class Rng>
Eigen::VectorXcd weighted_local_vector(const LevelDistribution& w, const Spectrum& s, Rng& rng) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s.dimension()));
  for (std::size_t a = 0; a < s.level_count(); ++a) {
    if (w[a] <= 0.0) continue;
    v.segment(static_cast<Eigen::Index>(s.offset(a)), static_cast<Eigen::Index>(s.degeneracy(a))) =
        haar_vector(static_cast<Eigen::Index>(s.degeneracy(a)), rng) * std::sqrt(w[a]);
  }
  return v.normalized();
}

inline Eigen::VectorXcd to_vector(const std::vector<std::complex<double>>& v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = v[k];
  return out.normalized();
}

}  // namespace detail

/// Product state for an initial-state spec. Level-weight parts draw a
/// Haar-random vector inside each occupied level, gas first.
template <class Rng>
PureState make_initial_state(const InitialStateSpec& s, const CompositeSystem& sys, Rng& rng) {
  const Eigen::VectorXcd g = s.gas_amplitudes ? detail::to_vector(*s.gas_amplitudes)
                                              : detail::weighted_local_vector(gas_marginal(s, sys.gas()), sys.gas(), rng);
  const Eigen::VectorXcd c = s.container_amplitudes
                                 ? detail::to_vector(*s.container_amplitudes)
                                 : detail::weighted_local_vector(container_marginal(s, sys.container()), sys.container(), rng);
  return product_state(g, c, sys);
}

}  // namespace qtl::lab
