#pragma once

// Pure states of the composite system, reduced density operators and the
// local observables computed from them, plus uniform sampling of the region
// of Hilbert space with a fixed joint level distribution.

#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qtl/random.hpp"
#include "qtl/spectra.hpp"

namespace qtl {

using Complex = std::complex<double>;

class PureState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit PureState(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) throw std::invalid_argument("PureState: empty amplitude vector");
    if (std::abs(amps_.squaredNorm() - 1.0) > kNormTolerance)
      throw std::invalid_argument("PureState: amplitudes are not normalized");
  }

  /// Rescales an arbitrary nonzero vector to unit norm.
  static PureState normalized(Eigen::VectorXcd v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw std::invalid_argument("PureState: cannot normalize a zero vector");
    v /= n;
    return PureState(std::move(v));
  }

  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
  Eigen::Index dimension() const noexcept { return amps_.size(); }

 private:
  Eigen::VectorXcd amps_;
};

class DensityOperator {
 public:
  static constexpr double kHermitianTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-10;
  static constexpr double kEigenvalueFloor = -1e-10;

  explicit DensityOperator(Eigen::MatrixXcd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
      throw std::invalid_argument("DensityOperator: matrix must be square and non-empty");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance)
      throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
    if (std::abs(m_.trace() - Complex(1.0)) > kTraceTolerance)
      throw std::invalid_argument("DensityOperator: trace differs from one");
  }

  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  Eigen::Index dimension() const noexcept { return m_.rows(); }

  Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  /// Full spectral check; the constructor only checks hermiticity and trace.
  bool is_positive_semidefinite() const { return eigenvalues().minCoeff() >= kEigenvalueFloor; }

 private:
  Eigen::MatrixXcd m_;
};

/// Joint level occupations W_AB, rows indexed by gas level, columns by container level.
class JointDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit JointDistribution(Eigen::MatrixXd w) : w_(std::move(w)) {
    if (w_.size() == 0) throw std::invalid_argument("JointDistribution: empty weight matrix");
    if (w_.minCoeff() < 0.0) throw std::invalid_argument("JointDistribution: negative weight");
    if (std::abs(w_.sum() - 1.0) > kSumTolerance)
      throw std::invalid_argument("JointDistribution: weights do not sum to one");
  }

  const Eigen::MatrixXd& weights() const noexcept { return w_; }
  double operator()(std::size_t a, std::size_t b) const {
    return w_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  }
  Eigen::VectorXd gas_marginal() const { return w_.rowwise().sum(); }
  Eigen::VectorXd container_marginal() const { return w_.colwise().sum().transpose(); }

  /// W_AB = W_A * W_B for a product initial state.
  static JointDistribution product(const Eigen::VectorXd& gas, const Eigen::VectorXd& container) {
    return JointDistribution(gas * container.transpose());
  }

 private:
  Eigen::MatrixXd w_;
};

namespace detail {

inline void require_dimension(const PureState& psi, const CompositeSystem& sys, const char* who) {
  if (static_cast<std::size_t>(psi.dimension()) != sys.dimension())
    throw std::invalid_argument(std::string(who) + ": state dimension does not match the composite system");
}

// Column-major view X with X(c, g) = psi[g * dimC + c].
inline Eigen::Map<const Eigen::MatrixXcd> as_container_by_gas(const PureState& psi, const CompositeSystem& sys) {
  return {psi.amplitudes().data(), static_cast<Eigen::Index>(sys.container_dim()),
          static_cast<Eigen::Index>(sys.gas_dim())};
}

inline DensityOperator hermitize(Eigen::MatrixXcd rho) {
  // Round-off from the products below is far under the tolerances, but the
  // stored operator should be exactly Hermitian.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityOperator(std::move(rho));
}

}  // namespace detail

inline DensityOperator partial_trace_gas(const PureState& psi, const CompositeSystem& sys) {
  detail::require_dimension(psi, sys, "partial_trace_gas");
  const auto x = detail::as_container_by_gas(psi, sys);
  return detail::hermitize(x.transpose() * x.conjugate());
}

inline DensityOperator partial_trace_container(const PureState& psi, const CompositeSystem& sys) {
  detail::require_dimension(psi, sys, "partial_trace_container");
  const auto x = detail::as_container_by_gas(psi, sys);
  return detail::hermitize(x * x.adjoint());
}

/// tr(rho^2).
inline double purity(const DensityOperator& rho) { return rho.matrix().squaredNorm(); }

/// Eigenvalues below this are treated as exact zeros in the entropy.
inline constexpr double kEntropyEigenvalueFloor = 1e-14;

/// -tr(rho ln rho), in units of k_B.
inline double von_neumann_entropy(const DensityOperator& rho) {
  const Eigen::VectorXd ev = rho.eigenvalues();
  double s = 0.0;
  for (double p : ev)
    if (p > kEntropyEigenvalueFloor) s -= p * std::log(p);
  return s;
}

inline JointDistribution occupations(const PureState& psi, const CompositeSystem& sys) {
  detail::require_dimension(psi, sys, "occupations");
  const auto& g = sys.gas();
  const auto& c = sys.container();
  const auto x = detail::as_container_by_gas(psi, sys);
  Eigen::MatrixXd w(g.level_count(), c.level_count());
  for (std::size_t a = 0; a < g.level_count(); ++a)
    for (std::size_t b = 0; b < c.level_count(); ++b)
      w(a, b) = x.block(c.offset(b), g.offset(a), c.degeneracy(b), g.degeneracy(a)).squaredNorm();
  // Normalization is only as good as the state's norm; absorb the rounding.
  w /= w.sum();
  return JointDistribution(std::move(w));
}

/// Uniform sample from the accessible region fixed by a joint distribution:
/// an independent Haar vector in every occupied (A,B) block, scaled by sqrt(W_AB).
/// Blocks are drawn in (A, B) order; empty blocks consume no randomness.
template <class Rng>
PureState sample_accessible_region(const CompositeSystem& sys, const JointDistribution& target, Rng& rng) {
  const auto& w = target.weights();
  if (static_cast<std::size_t>(w.rows()) != sys.gas().level_count() ||
      static_cast<std::size_t>(w.cols()) != sys.container().level_count())
    throw std::invalid_argument("sample_accessible_region: target shape does not match the level structure");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sys.dimension()));
  for (Eigen::Index a = 0; a < w.rows(); ++a) {
    for (Eigen::Index b = 0; b < w.cols(); ++b) {
      if (w(a, b) <= 0.0) continue;
      const auto idx = sys.block_indices(a, b);
      const Eigen::VectorXcd v = haar_vector(static_cast<Eigen::Index>(idx.size()), rng) * std::sqrt(w(a, b));
      for (std::size_t k = 0; k < idx.size(); ++k) psi(static_cast<Eigen::Index>(idx[k])) = v(k);
    }
  }
  return PureState::normalized(std::move(psi));
}

/// Tensor product of a gas vector and a container vector.
inline PureState product_state(const Eigen::VectorXcd& gas, const Eigen::VectorXcd& container,
                               const CompositeSystem& sys) {
  if (static_cast<std::size_t>(gas.size()) != sys.gas_dim() ||
      static_cast<std::size_t>(container.size()) != sys.container_dim())
    throw std::invalid_argument("product_state: local dimensions do not match the composite system");
  if (std::abs(gas.squaredNorm() - 1.0) > PureState::kNormTolerance ||
      std::abs(container.squaredNorm() - 1.0) > PureState::kNormTolerance)
    throw std::invalid_argument("product_state: local vectors must be normalized");
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(sys.dimension()));
  const auto dc = container.size();
  for (Eigen::Index g = 0; g < gas.size(); ++g) psi.segment(g * dc, dc) = gas(g) * container;
  return PureState(std::move(psi));
}

/// tr[(rho1 - rho2)^2].
inline double state_distance(const DensityOperator& r1, const DensityOperator& r2) {
  if (r1.dimension() != r2.dimension())
    throw std::invalid_argument("state_distance: operator dimensions differ");
  return (r1.matrix() - r2.matrix()).squaredNorm();
}

/// Debug dump: one "index,re,im" row per amplitude.
inline void write_state_csv(std::ostream& os, const PureState& psi) {
  os << "index,re,im\n" << std::setprecision(17);
  for (Eigen::Index k = 0; k < psi.dimension(); ++k)
    os << k << ',' << psi.amplitudes()(k).real() << ',' << psi.amplitudes()(k).imag() << '\n';
}

}  // namespace qtl
