#pragma once

// Closed-form equilibrium predictions for a gas weakly coupled to a container:
// purity bounds and averages over the accessible region, maximum local
// entropy, dominant and canonical level distributions, the equilibrium state
// and the spectral temperature.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtl/spectra.hpp"
#include "qtl/states.hpp"

namespace qtl {

/// Probability per level of one spectrum.
class LevelDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit LevelDistribution(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw std::invalid_argument("LevelDistribution: empty weight vector");
    double s = 0.0;
    for (double x : w_) {
      if (!(x >= 0.0)) throw std::invalid_argument("LevelDistribution: weights must be non-negative");
      s += x;
    }
    if (std::abs(s - 1.0) > kSumTolerance)
      throw std::invalid_argument("LevelDistribution: weights do not sum to one");
  }

  /// One-hot distribution on level i of n.
  static LevelDistribution delta(std::size_t n, std::size_t i) {
    std::vector<double> w(n, 0.0);
    w.at(i) = 1.0;
    return LevelDistribution(std::move(w));
  }

  const std::vector<double>& weights() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_.at(i); }

  Eigen::VectorXd as_vector() const {
    return Eigen::Map<const Eigen::VectorXd>(w_.data(), static_cast<Eigen::Index>(w_.size()));
  }

 private:
  std::vector<double> w_;
};

/// W(E) over shell energies of a composite system.
using TotalEnergyDistribution = std::map<GridEnergy, double>;

namespace detail {

inline void require_match(const LevelDistribution& w, const Spectrum& s, const char* who) {
  if (w.size() != s.level_count())
    throw std::invalid_argument(std::string(who) + ": distribution length does not match the spectrum");
}

inline double sum_sq_over_degeneracy(const LevelDistribution& w, const Spectrum& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * w[i] / static_cast<double>(s.degeneracy(i));
  return acc;
}

inline double sum_sq(const LevelDistribution& w) {
  double acc = 0.0;
  for (double x : w.weights()) acc += x * x;
  return acc;
}

}  // namespace detail

/// Lowest purity of a gas state with level occupations W: sum_A W_A^2 / N_A.
inline double min_purity(const LevelDistribution& w, const Spectrum& gas) {
  detail::require_match(w, gas, "min_purity");
  return detail::sum_sq_over_degeneracy(w, gas);
}

/// Exact average of the gas purity over the accessible region of a product
/// initial state with marginals W_A, W_B.
inline double hs_average_purity_exact(const LevelDistribution& wa, const LevelDistribution& wb,
                                      const Spectrum& gas, const Spectrum& container) {
  detail::require_match(wa, gas, "hs_average_purity_exact");
  detail::require_match(wb, container, "hs_average_purity_exact");
  const double first = detail::sum_sq_over_degeneracy(wa, gas) * (1.0 - detail::sum_sq(wb));
  const double second = detail::sum_sq_over_degeneracy(wb, container) * (1.0 - detail::sum_sq(wa));
  double third = 0.0;
  for (std::size_t a = 0; a < wa.size(); ++a)
    for (std::size_t b = 0; b < wb.size(); ++b) {
      const double na = static_cast<double>(gas.degeneracy(a));
      const double nb = static_cast<double>(container.degeneracy(b));
      third += wa[a] * wa[a] * wb[b] * wb[b] * (na + nb) / (na * nb + 1.0);
    }
  return first + second + third;
}

/// Large-degeneracy form: sum_A W_A^2/N_A + sum_B W_B^2/N_B.
inline double hs_average_purity_approx(const LevelDistribution& wa, const LevelDistribution& wb,
                                       const Spectrum& gas, const Spectrum& container) {
  detail::require_match(wa, gas, "hs_average_purity_approx");
  detail::require_match(wb, container, "hs_average_purity_approx");
  return detail::sum_sq_over_degeneracy(wa, gas) + detail::sum_sq_over_degeneracy(wb, container);
}

/// -sum_A W_A ln(W_A / N_A) in units of k_B; empty levels contribute nothing.
inline double max_entropy(const LevelDistribution& w, const Spectrum& gas) {
  detail::require_match(w, gas, "max_entropy");
  double s = 0.0;
  for (std::size_t a = 0; a < w.size(); ++a)
    if (w[a] > 0.0) s -= w[a] * std::log(w[a] / static_cast<double>(gas.degeneracy(a)));
  return s;
}

inline TotalEnergyDistribution total_energy_distribution(const LevelDistribution& wa, const LevelDistribution& wb,
                                                         const CompositeSystem& sys) {
  detail::require_match(wa, sys.gas(), "total_energy_distribution");
  detail::require_match(wb, sys.container(), "total_energy_distribution");
  TotalEnergyDistribution out;
  for (const auto& [e, pairs] : sys.shells()) {
    double p = 0.0;
    for (const auto& [a, b] : pairs) p += wa[a] * wb[b];
    out[e] = p;
  }
  return out;
}

namespace detail {

inline constexpr double kRenormalizationResidual = 1e-10;

// W^d_i = N_i sum_E N_other(E - E_i) W(E) / N(E) for one side of the composite.
inline LevelDistribution dominant_side(const TotalEnergyDistribution& w_e, const CompositeSystem& sys,
                                       const Spectrum& side, const Spectrum& other) {
  std::vector<double> wd(side.level_count(), 0.0);
  for (const auto& [e, p] : w_e) {
    if (p < 0.0) throw std::invalid_argument("dominant_distribution: negative shell probability");
    if (p == 0.0) continue;
    const double n_shell = static_cast<double>(shell_degeneracy(sys, e));
    for (std::size_t i = 0; i < side.level_count(); ++i) {
      const std::size_t j = other.find_energy(e - side.energy(i));
      if (j == other.level_count()) continue;
      wd[i] += static_cast<double>(side.degeneracy(i)) * static_cast<double>(other.degeneracy(j)) * p / n_shell;
    }
  }
  double s = 0.0;
  for (double x : wd) s += x;
  if (std::abs(s - 1.0) > kRenormalizationResidual)
    throw std::invalid_argument("dominant_distribution: total-energy distribution is not normalized");
  for (double& x : wd) x /= s;
  return LevelDistribution(std::move(wd));
}

}  // namespace detail

/// Dominant gas level distribution for a conserved total-energy distribution.
inline LevelDistribution dominant_distribution(const TotalEnergyDistribution& w_e, const CompositeSystem& sys) {
  return detail::dominant_side(w_e, sys, sys.gas(), sys.container());
}

/// Same construction with the roles of gas and container exchanged.
inline LevelDistribution dominant_container_distribution(const TotalEnergyDistribution& w_e,
                                                         const CompositeSystem& sys) {
  return detail::dominant_side(w_e, sys, sys.container(), sys.gas());
}

/// Boltzmann weights N_A exp(-alpha E_A) / Z with E_A in physical units.
inline LevelDistribution canonical_distribution(const Spectrum& gas, double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("canonical_distribution: alpha must be finite");
  // Shift by the lowest exponent so large alpha does not overflow.
  const double e0 = static_cast<double>(gas.energy(0)) * gas.quantum();
  std::vector<double> w(gas.level_count());
  double z = 0.0;
  for (std::size_t a = 0; a < w.size(); ++a) {
    const double e = static_cast<double>(gas.energy(a)) * gas.quantum();
    w[a] = static_cast<double>(gas.degeneracy(a)) * std::exp(-alpha * (e - e0));
    z += w[a];
  }
  for (double& x : w) x /= z;
  return LevelDistribution(std::move(w));
}

/// Maximum-entropy gas state with the given level occupations: diagonal,
/// W_A / N_A on every state of level A.
inline DensityOperator equilibrium_state(const LevelDistribution& wd, const Spectrum& gas) {
  detail::require_match(wd, gas, "equilibrium_state");
  Eigen::VectorXcd d(static_cast<Eigen::Index>(gas.dimension()));
  for (std::size_t a = 0; a < gas.level_count(); ++a)
    d.segment(static_cast<Eigen::Index>(gas.offset(a)), static_cast<Eigen::Index>(gas.degeneracy(a)))
        .setConstant(wd[a] / static_cast<double>(gas.degeneracy(a)));
  return DensityOperator(d.asDiagonal().toDenseMatrix());
}

struct SpectralLevel {
  GridEnergy energy = 0;
  std::size_t degeneracy = 1;
  double probability = 0.0;
};

inline constexpr double kSpectralProbabilityFloor = 1e-12;

/// Inverse spectral temperature beta = 1/(k_B T) of a level occupation
/// pattern: the pairwise two-level temperatures of neighbouring levels,
/// weighted by the mean occupation of each pair. Probabilities are clamped to
/// `floor` before taking logarithms.
inline double spectral_temperature(const std::vector<SpectralLevel>& levels, double quantum = 1.0,
                                   double floor = kSpectralProbabilityFloor) {
  if (levels.size() < 2) throw std::invalid_argument("spectral_temperature: at least two levels are required");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i].energy <= levels[i - 1].energy)
      throw std::invalid_argument("spectral_temperature: levels must be sorted ascending");
  const double norm = 1.0 - 0.5 * (levels.front().probability + levels.back().probability);
  if (norm < 1e-12)
    throw std::domain_error("spectral_temperature: undefined, all weight sits on the extreme levels");
  double acc = 0.0;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const auto& lo = levels[i - 1];
    const auto& hi = levels[i];
    const double wlo = std::max(lo.probability, floor);
    const double whi = std::max(hi.probability, floor);
    const double de = static_cast<double>(hi.energy - lo.energy) * quantum;
    const double slope = (std::log(whi / wlo) -
                          std::log(static_cast<double>(hi.degeneracy) / static_cast<double>(lo.degeneracy))) / de;
    acc += 0.5 * (lo.probability + hi.probability) * slope;
  }
  return -acc / norm;
}

/// Convenience overload pairing a spectrum with a distribution over it.
inline double spectral_temperature(const LevelDistribution& w, const Spectrum& s,
                                   double floor = kSpectralProbabilityFloor) {
  detail::require_match(w, s, "spectral_temperature");
  std::vector<SpectralLevel> lv;
  for (std::size_t i = 0; i < w.size(); ++i) lv.push_back({s.energy(i), s.degeneracy(i), w[i]});
  return spectral_temperature(lv, s.quantum(), floor);
}

struct ExponentialFit {
  double alpha = 0.0;     // growth rate per unit energy
  double n0 = 0.0;        // degeneracy extrapolated to zero energy
  double residual = 0.0;  // max |ln N_B - fit| over levels
};

/// Least-squares fit of ln N_B = ln N0 + alpha E_B.
inline ExponentialFit fit_exponential_degeneracy(const Spectrum& container) {
  const std::size_t n = container.level_count();
  if (n < 2) throw std::invalid_argument("fit_exponential_degeneracy: at least two levels are required");
  Eigen::VectorXd x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i) = static_cast<double>(container.energy(i)) * container.quantum();
    y(i) = std::log(static_cast<double>(container.degeneracy(i)));
  }
  const double mx = x.mean(), my = y.mean();
  const Eigen::VectorXd dx = x.array() - mx;
  const double alpha = dx.dot(y.array().matrix() - Eigen::VectorXd::Constant(n, my)) / dx.squaredNorm();
  const double intercept = my - alpha * mx;
  const double residual = (y.array() - (intercept + alpha * x.array())).abs().maxCoeff();
  return {alpha, std::exp(intercept), residual};
}

}  // namespace qtl
