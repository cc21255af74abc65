#pragma once

// Random interaction operators between gas and container.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qtl/spectra.hpp"
#include "qtl/states.hpp"

namespace qtl {

class HermitianOperator {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit HermitianOperator(Eigen::MatrixXcd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
      throw std::invalid_argument("HermitianOperator: matrix must be square and non-empty");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kTolerance)
      throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
  }

  static HermitianOperator zero(Eigen::Index dim) { return HermitianOperator(Eigen::MatrixXcd::Zero(dim, dim)); }

  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  Eigen::Index dimension() const noexcept { return m_.rows(); }

 private:
  Eigen::MatrixXcd m_;
};

/// (G + G^dagger)/2 where every entry of G, diagonal included, has independent
/// N(0, deltaI) real and imaginary parts. Entries are drawn row-major.
template <class Rng>
HermitianOperator random_hermitian(Eigen::Index dim, double delta_i, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("random_hermitian: dimension must be >= 1");
  if (!(delta_i >= 0.0)) throw std::invalid_argument("random_hermitian: deltaI must be non-negative");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) * delta_i;
    }
  Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
  return HermitianOperator(std::move(h));
}

/// Block-diagonal coupling: one independent random_hermitian block per (A,B)
/// pair, blocks drawn in (A, B) order. Commutes with both local Hamiltonians.
template <class Rng>
HermitianOperator microcanonical_interaction(const CompositeSystem& sys, double delta_i, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(sys.dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t a = 0; a < sys.gas().level_count(); ++a)
    for (std::size_t b = 0; b < sys.container().level_count(); ++b) {
      const auto idx = sys.block_indices(a, b);
      const auto blk = random_hermitian(static_cast<Eigen::Index>(idx.size()), delta_i, rng);
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
          m(idx[i], idx[j]) = blk.matrix()(i, j);
    }
  return HermitianOperator(std::move(m));
}

/// Coupling restricted to energy shells: random within each shell of fixed
/// E_A + E_B, zero across shells. Conserves the decoupled energy exactly.
template <class Rng>
HermitianOperator shell_restricted_interaction(const CompositeSystem& sys, double delta_i, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(sys.dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [energy, pairs] : sys.shells()) {
    std::vector<std::size_t> idx;
    for (const auto& [a, b] : pairs) {
      const auto blk = sys.block_indices(a, b);
      idx.insert(idx.end(), blk.begin(), blk.end());
    }
    const auto blk = random_hermitian(static_cast<Eigen::Index>(idx.size()), delta_i, rng);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j)
        m(idx[i], idx[j]) = blk.matrix()(i, j);
  }
  return HermitianOperator(std::move(m));
}

/// Gas Hamiltonian lifted to the full space: diag(E_A * quantum).
inline HermitianOperator lifted_gas_hamiltonian(const CompositeSystem& sys) {
  const auto n = static_cast<Eigen::Index>(sys.dimension());
  Eigen::VectorXcd d(n);
  for (Eigen::Index k = 0; k < n; ++k)
    d(k) = static_cast<double>(sys.gas().energy(sys.tuple_of(k).gas_level)) * sys.quantum();
  return HermitianOperator(d.asDiagonal().toDenseMatrix());
}

/// Container Hamiltonian lifted to the full space: diag(E_B * quantum).
inline HermitianOperator lifted_container_hamiltonian(const CompositeSystem& sys) {
  const auto n = static_cast<Eigen::Index>(sys.dimension());
  Eigen::VectorXcd d(n);
  for (Eigen::Index k = 0; k < n; ++k)
    d(k) = static_cast<double>(sys.container().energy(sys.tuple_of(k).container_level)) * sys.quantum();
  return HermitianOperator(d.asDiagonal().toDenseMatrix());
}

struct CouplingDiagnostics {
  double i_rms = 0.0;             // sqrt(<psi|I^2|psi>)
  double gas_energy = 0.0;        // <psi|H_g|psi>
  double container_energy = 0.0;  // <psi|H_c|psi>
};

inline CouplingDiagnostics coupling_diagnostics(const PureState& psi, const HermitianOperator& interaction,
                                                const HermitianOperator& gas_h,
                                                const HermitianOperator& container_h) {
  const auto n = psi.dimension();
  if (interaction.dimension() != n || gas_h.dimension() != n || container_h.dimension() != n)
    throw std::invalid_argument("coupling_diagnostics: operator dimensions do not match the state");
  const auto& v = psi.amplitudes();
  const Eigen::VectorXcd iv = interaction.matrix() * v;
  return {std::sqrt(iv.squaredNorm()), v.dot(gas_h.matrix() * v).real(), v.dot(container_h.matrix() * v).real()};
}

// Binary layout: "QTLH", uint64 dimension, then dim*dim (re, im) doubles in
// column-major order, native endianness.
inline void save_operator_binary(const std::string& path, const HermitianOperator& op) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write("QTLH", 4);
  const auto dim = static_cast<std::uint64_t>(op.dimension());
  os.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  os.write(reinterpret_cast<const char*>(op.matrix().data()),
           static_cast<std::streamsize>(sizeof(Complex) * op.matrix().size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline HermitianOperator load_operator_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint64_t dim = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&dim), sizeof dim);
  if (!is || std::string(magic, 4) != "QTLH" || dim == 0 || dim > (1u << 16))
    throw std::runtime_error("not an operator file: " + path);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(Complex) * m.size()));
  if (!is) throw std::runtime_error("truncated operator file: " + path);
  return HermitianOperator(std::move(m));
}

/// Sparse CSV dump "row,col,re,im" of the nonzero entries.
inline void write_operator_csv(std::ostream& os, const HermitianOperator& op) {
  os << "row,col,re,im\n" << std::setprecision(17);
  const auto& m = op.matrix();
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != Complex(0.0))
        os << i << ',' << j << ',' << m(i, j).real() << ',' << m(i, j).imag() << '\n';
}

}  // namespace qtl
