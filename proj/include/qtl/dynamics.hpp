#pragma once

// Exact propagation of pure states of the composite system and statistics of
// the resulting local-observable time series.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtl/interactions.hpp"
#include "qtl/spectra.hpp"
#include "qtl/states.hpp"

namespace qtl {

/// H = H_g + H_c + I with diagonal local parts (E_A + E_B) * quantum.
inline HermitianOperator assemble_hamiltonian(const CompositeSystem& sys, const HermitianOperator& interaction) {
  const auto n = static_cast<Eigen::Index>(sys.dimension());
  if (interaction.dimension() != n)
    throw std::invalid_argument("assemble_hamiltonian: interaction dimension does not match the composite system");
  Eigen::MatrixXcd h = interaction.matrix();
  for (Eigen::Index k = 0; k < n; ++k) h(k, k) += static_cast<double>(sys.energy_of(k)) * sys.quantum();
  return HermitianOperator(std::move(h));
}

/// Spectral decomposition H = U diag(lambda) U^dagger, computed once; states
/// are then evolved exactly to any time.
class Propagator {
 public:
  /// Largest dimension accepted; dense eigensolver cost grows as dim^3.
  static constexpr Eigen::Index kMaxDimension = 4096;

  explicit Propagator(const HermitianOperator& h) {
    if (h.dimension() > kMaxDimension)
      throw std::invalid_argument("Propagator: dimension " + std::to_string(h.dimension()) + " exceeds the cap of " +
                                  std::to_string(kMaxDimension));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
    if (es.info() != Eigen::Success) throw std::runtime_error("Propagator: eigensolver failed to converge");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  const Eigen::VectorXd& eigenvalues() const noexcept { return values_; }
  const Eigen::MatrixXcd& eigenvectors() const noexcept { return vectors_; }
  Eigen::Index dimension() const noexcept { return values_.size(); }

  /// Coefficients of a state in the eigenbasis.
  Eigen::VectorXcd to_eigenbasis(const Eigen::VectorXcd& psi) const {
    if (psi.size() != dimension()) throw std::invalid_argument("Propagator: state dimension mismatch");
    return vectors_.adjoint() * psi;
  }

  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi0, double t) const {
    const Eigen::VectorXcd c = to_eigenbasis(psi0);
    return vectors_ * phased(c, t);
  }

  /// States at several times, one column per time.
  Eigen::MatrixXcd evolve_many(const Eigen::VectorXcd& psi0, std::span<const double> times) const {
    const Eigen::VectorXcd c = to_eigenbasis(psi0);
    Eigen::MatrixXcd p(dimension(), static_cast<Eigen::Index>(times.size()));
    for (std::size_t j = 0; j < times.size(); ++j) p.col(static_cast<Eigen::Index>(j)) = phased(c, times[j]);
    return vectors_ * p;
  }

  /// <psi|H|psi> evaluated in the eigenbasis.
  double energy(const Eigen::VectorXcd& psi) const {
    return to_eigenbasis(psi).cwiseAbs2().dot(values_);
  }

 private:
  Eigen::VectorXcd phased(const Eigen::VectorXcd& c, double t) const {
    Eigen::VectorXcd out(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) out(k) = c(k) * std::polar(1.0, -values_(k) * t);
    return out;
  }

  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
};

struct TrajectoryMeta {
  std::string scenario_id;
  std::uint64_t seed = 0;
  double delta_i = 0.0;
  std::size_t initial_state = 0;
};

struct Trajectory {
  TrajectoryMeta meta;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> gas_occupations;  // W^g_A(t)
  std::vector<Eigen::MatrixXd> joint_occupations;  // W_AB(t)
  std::vector<double> purity;                    // gas purity
  std::vector<double> entropy;                   // gas entropy, k_B
  std::vector<double> distance;                  // tr(rho_g - rho_eq)^2, NaN without reference
  std::vector<double> norm;                      // |psi(t)|^2 before renormalization
  std::vector<double> decoupled_energy;          // <H_g + H_c>

  std::size_t size() const noexcept { return times.size(); }

  std::vector<double> gas_occupation_series(std::size_t level) const {
    std::vector<double> out;
    out.reserve(size());
    for (const auto& w : gas_occupations) out.push_back(w(static_cast<Eigen::Index>(level)));
    return out;
  }
};

/// `count` uniform samples over [0, t_end], both ends included.
inline std::vector<double> uniform_time_grid(double t_end, std::size_t count) {
  if (count < 2 || !(t_end > 0.0)) throw std::invalid_argument("uniform_time_grid: need t_end > 0 and >= 2 samples");
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = t_end * static_cast<double>(i) / static_cast<double>(count - 1);
  return t;
}

/// Evolves psi0 under H and records local observables at every requested time.
/// `equilibrium`, when given, is the gas reference state for the distance column.
inline Trajectory propagate(const Propagator& prop, const CompositeSystem& sys, const PureState& psi0,
                            std::span<const double> times,
                            const std::optional<DensityOperator>& equilibrium = std::nullopt) {
  if (static_cast<std::size_t>(prop.dimension()) != sys.dimension() ||
      psi0.dimension() != prop.dimension())
    throw std::invalid_argument("propagate: dimensions of Hamiltonian, state and system differ");
  if (times.empty()) throw std::invalid_argument("propagate: empty time grid");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("propagate: times must be strictly increasing");
  if (equilibrium && static_cast<std::size_t>(equilibrium->dimension()) != sys.gas_dim())
    throw std::invalid_argument("propagate: equilibrium reference has the wrong dimension");

  Eigen::VectorXd diag_energy(static_cast<Eigen::Index>(sys.dimension()));
  for (Eigen::Index k = 0; k < diag_energy.size(); ++k)
    diag_energy(k) = static_cast<double>(sys.energy_of(k)) * sys.quantum();

  Trajectory tr;
  tr.times.assign(times.begin(), times.end());
  const std::size_t n = times.size();
  tr.gas_occupations.reserve(n);
  tr.joint_occupations.reserve(n);

  constexpr std::size_t kChunk = 64;
  for (std::size_t begin = 0; begin < n; begin += kChunk) {
    const std::size_t len = std::min(kChunk, n - begin);
    const Eigen::MatrixXcd states = prop.evolve_many(psi0.amplitudes(), times.subspan(begin, len));
    for (std::size_t j = 0; j < len; ++j) {
      Eigen::VectorXcd v = states.col(static_cast<Eigen::Index>(j));
      const double nrm = v.squaredNorm();
      tr.norm.push_back(nrm);
      tr.decoupled_energy.push_back(v.cwiseAbs2().dot(diag_energy));
      const auto psi = PureState::normalized(std::move(v));
      const auto rho = partial_trace_gas(psi, sys);
      const auto joint = occupations(psi, sys);
      tr.joint_occupations.push_back(joint.weights());
      tr.gas_occupations.push_back(joint.gas_marginal());
      tr.purity.push_back(purity(rho));
      tr.entropy.push_back(von_neumann_entropy(rho));
      tr.distance.push_back(equilibrium ? state_distance(rho, *equilibrium) : std::nan(""));
    }
  }
  return tr;
}

inline Trajectory propagate(const HermitianOperator& h, const CompositeSystem& sys, const PureState& psi0,
                            std::span<const double> times,
                            const std::optional<DensityOperator>& equilibrium = std::nullopt) {
  return propagate(Propagator(h), sys, psi0, times, equilibrium);
}

namespace detail {

struct Window {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

inline Window select_window(std::span<const double> series, std::span<const double> times, double t_start,
                            double t_end, std::size_t min_samples, const char* who) {
  if (series.size() != times.size()) throw std::invalid_argument(std::string(who) + ": series and times differ in length");
  if (!(t_start < t_end)) throw std::invalid_argument(std::string(who) + ": window start must precede its end");
  Window w{times.size(), 0};
  std::size_t count = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_start || times[i] > t_end) continue;
    if (count == 0) w.first = i;
    w.last = i;
    ++count;
  }
  if (count < min_samples)
    throw std::invalid_argument(std::string(who) + ": window holds " + std::to_string(count) + " samples, need " +
                                std::to_string(min_samples));
  return w;
}

// Trapezoidal integral of f(series) over [times[first], times[last]].
template <class F>
double trapezoid(std::span<const double> series, std::span<const double> times, Window w, F f) {
  double acc = 0.0;
  for (std::size_t i = w.first; i < w.last; ++i)
    acc += 0.5 * (f(series[i]) + f(series[i + 1])) * (times[i + 1] - times[i]);
  return acc;
}

}  // namespace detail

/// Trapezoidal time average of a sampled series over [t_start, t_end].
inline double time_average(std::span<const double> series, std::span<const double> times, double t_start,
                           double t_end) {
  const auto w = detail::select_window(series, times, t_start, t_end, 2, "time_average");
  const double span = times[w.last] - times[w.first];
  return detail::trapezoid(series, times, w, [](double x) { return x; }) / span;
}

inline constexpr std::size_t kMinFluctuationSamples = 10;

/// Temporal variance <x^2>_t - <x>_t^2 over [t_start, t_end].
inline double time_fluctuation(std::span<const double> series, std::span<const double> times, double t_start,
                               double t_end) {
  const auto w = detail::select_window(series, times, t_start, t_end, kMinFluctuationSamples, "time_fluctuation");
  const double span = times[w.last] - times[w.first];
  const double mean = detail::trapezoid(series, times, w, [](double x) { return x; }) / span;
  const double mean_sq = detail::trapezoid(series, times, w, [](double x) { return x * x; }) / span;
  return std::max(0.0, mean_sq - mean * mean);
}

/// First sample time at which |x(t) - plateau| has dropped to 1/e of its
/// initial value; the last time if it never does.
inline double relaxation_time(std::span<const double> series, std::span<const double> times, double plateau) {
  if (series.empty() || series.size() != times.size())
    throw std::invalid_argument("relaxation_time: series and times must be non-empty and equally long");
  const double threshold = std::abs(series[0] - plateau) / std::exp(1.0);
  for (std::size_t i = 0; i < series.size(); ++i)
    if (std::abs(series[i] - plateau) <= threshold) return times[i];
  return times.back();
}

struct SizeScalingFit {
  double coefficient = 0.0;      // c in Delta = sqrt(c) * N^-p
  double exponent = 0.0;         // p, free
  double rms_residual = 0.0;     // in ln Delta
  double coefficient_fixed = 0.0;  // c with p pinned to 1/2
  double rms_residual_fixed = 0.0;
};

/// Least squares on ln Delta = (1/2) ln c - p ln N.
inline SizeScalingFit fit_inverse_size_scaling(std::span<const double> sizes, std::span<const double> deviations) {
  if (sizes.size() != deviations.size())
    throw std::invalid_argument("fit_inverse_size_scaling: sizes and deviations differ in length");
  if (sizes.size() < 3) throw std::invalid_argument("fit_inverse_size_scaling: at least three points are required");
  const auto n = static_cast<Eigen::Index>(sizes.size());
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(sizes[i] > 0.0) || !(deviations[i] > 0.0))
      throw std::invalid_argument("fit_inverse_size_scaling: inputs must be positive");
    x(i) = std::log(sizes[i]);
    y(i) = std::log(deviations[i]);
  }
  const Eigen::VectorXd dx = x.array() - x.mean();
  if (dx.squaredNorm() < 1e-24) throw std::invalid_argument("fit_inverse_size_scaling: all sizes are identical");
  const double slope = dx.dot((y.array() - y.mean()).matrix()) / dx.squaredNorm();
  const double intercept = y.mean() - slope * x.mean();
  SizeScalingFit fit;
  fit.exponent = -slope;
  fit.coefficient = std::exp(2.0 * intercept);
  fit.rms_residual = std::sqrt((y.array() - intercept - slope * x.array()).square().mean());
  const double intercept_fixed = (y.array() + 0.5 * x.array()).mean();
  fit.coefficient_fixed = std::exp(2.0 * intercept_fixed);
  fit.rms_residual_fixed = std::sqrt((y.array() - intercept_fixed + 0.5 * x.array()).square().mean());
  return fit;
}

/// Columns: t, W0..W{n-1}, P, S, d.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  const std::size_t levels = tr.gas_occupations.empty() ? 0 : static_cast<std::size_t>(tr.gas_occupations[0].size());
  os << 't';
  for (std::size_t a = 0; a < levels; ++a) os << ",W" << a;
  os << ",P,S,d\n";
  os << std::setprecision(12);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    os << tr.times[i];
    for (std::size_t a = 0; a < levels; ++a) os << ',' << tr.gas_occupations[i](static_cast<Eigen::Index>(a));
    os << ',' << tr.purity[i] << ',' << tr.entropy[i] << ',' << tr.distance[i] << '\n';
  }
}

}  // namespace qtl
