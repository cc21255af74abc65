#pragma once

// Subsystem spectra on an integer energy grid, and the product basis of a
// gas/container pair.
//
// Basis convention: a flat index is gas_index * container_dim + container_index,
// so the container index varies fastest. Within a subsystem, states are ordered
// by level, then by the sub-index inside the degenerate level.

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtl {

/// Energies are integer multiples of the spectrum quantum.
using GridEnergy = std::int64_t;

struct EnergyLevel {
  GridEnergy energy = 0;
  std::size_t degeneracy = 1;

  friend bool operator==(const EnergyLevel&, const EnergyLevel&) = default;
};

class Spectrum {
 public:
  Spectrum() = delete;

  explicit Spectrum(std::vector<EnergyLevel> levels, double quantum = 1.0)
      : levels_(std::move(levels)), quantum_(quantum) {
    if (levels_.empty())
      throw std::invalid_argument("Spectrum: at least one level is required");
    if (!(quantum_ > 0.0))
      throw std::invalid_argument("Spectrum: energy quantum must be positive");
    offsets_.reserve(levels_.size() + 1);
    offsets_.push_back(0);
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      const auto& lvl = levels_[i];
      if (lvl.energy < 0)
        throw std::invalid_argument("Spectrum: level energies must be non-negative");
      if (lvl.degeneracy < 1)
        throw std::invalid_argument("Spectrum: degeneracy must be >= 1");
      if (i > 0 && lvl.energy <= levels_[i - 1].energy)
        throw std::invalid_argument("Spectrum: levels must be strictly ascending in energy");
      offsets_.push_back(offsets_.back() + lvl.degeneracy);
    }
  }

  const std::vector<EnergyLevel>& levels() const noexcept { return levels_; }
  std::size_t level_count() const noexcept { return levels_.size(); }
  const EnergyLevel& level(std::size_t i) const { return levels_.at(i); }
  GridEnergy energy(std::size_t i) const { return levels_.at(i).energy; }
  std::size_t degeneracy(std::size_t i) const { return levels_.at(i).degeneracy; }
  double quantum() const noexcept { return quantum_; }

  /// Total Hilbert-space dimension, the sum of all degeneracies.
  std::size_t dimension() const noexcept { return offsets_.back(); }

  /// First basis index belonging to level i.
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }

  /// Level containing basis index k.
  std::size_t level_of(std::size_t k) const {
    if (k >= dimension()) throw std::out_of_range("Spectrum::level_of: index out of range");
    std::size_t lo = 0, hi = levels_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (offsets_[mid] <= k) lo = mid;
      else hi = mid;
    }
    return lo;
  }

  /// Level index with the given grid energy, or level_count() if absent.
  std::size_t find_energy(GridEnergy e) const noexcept {
    for (std::size_t i = 0; i < levels_.size(); ++i)
      if (levels_[i].energy == e) return i;
    return levels_.size();
  }

 private:
  std::vector<EnergyLevel> levels_;
  double quantum_;
  std::vector<std::size_t> offsets_;
};

struct BasisTuple {
  std::size_t gas_level = 0;
  std::size_t gas_sub = 0;
  std::size_t container_level = 0;
  std::size_t container_sub = 0;

  friend bool operator==(const BasisTuple&, const BasisTuple&) = default;
};

/// Pair of level indices (gas level A, container level B).
using LevelPair = std::pair<std::size_t, std::size_t>;

class CompositeSystem {
 public:
  CompositeSystem(Spectrum gas, Spectrum container)
      : gas_(std::move(gas)), container_(std::move(container)) {
    // Shell sums only make sense on a shared grid.
    if (gas_.quantum() != container_.quantum())
      throw std::invalid_argument("CompositeSystem: gas and container must share the energy quantum");
    for (std::size_t a = 0; a < gas_.level_count(); ++a)
      for (std::size_t b = 0; b < container_.level_count(); ++b)
        shells_[gas_.energy(a) + container_.energy(b)].emplace_back(a, b);
  }

  const Spectrum& gas() const noexcept { return gas_; }
  const Spectrum& container() const noexcept { return container_; }
  double quantum() const noexcept { return gas_.quantum(); }

  std::size_t gas_dim() const noexcept { return gas_.dimension(); }
  std::size_t container_dim() const noexcept { return container_.dimension(); }
  std::size_t dimension() const noexcept { return gas_dim() * container_dim(); }

  std::size_t index_of(const BasisTuple& t) const {
    if (t.gas_level >= gas_.level_count() || t.container_level >= container_.level_count() ||
        t.gas_sub >= gas_.degeneracy(t.gas_level) ||
        t.container_sub >= container_.degeneracy(t.container_level))
      throw std::out_of_range("CompositeSystem::index_of: tuple out of range");
    return index_of(gas_.offset(t.gas_level) + t.gas_sub,
                    container_.offset(t.container_level) + t.container_sub);
  }

  std::size_t index_of(std::size_t gas_index, std::size_t container_index) const noexcept {
    return gas_index * container_dim() + container_index;
  }

  BasisTuple tuple_of(std::size_t flat) const {
    if (flat >= dimension()) throw std::out_of_range("CompositeSystem::tuple_of: index out of range");
    const std::size_t g = flat / container_dim();
    const std::size_t c = flat % container_dim();
    const std::size_t a = gas_.level_of(g);
    const std::size_t b = container_.level_of(c);
    return {a, g - gas_.offset(a), b, c - container_.offset(b)};
  }

  /// Grid energy E_A + E_B of a flat basis state.
  GridEnergy energy_of(std::size_t flat) const {
    const auto t = tuple_of(flat);
    return gas_.energy(t.gas_level) + container_.energy(t.container_level);
  }

  /// Dimension N_A * N_B of the (A,B) block.
  std::size_t block_dim(std::size_t a, std::size_t b) const {
    return gas_.degeneracy(a) * container_.degeneracy(b);
  }

  /// Flat indices of the (A,B) block, ordered by (a, b) with b fastest.
  std::vector<std::size_t> block_indices(std::size_t a, std::size_t b) const {
    std::vector<std::size_t> out;
    out.reserve(block_dim(a, b));
    for (std::size_t i = 0; i < gas_.degeneracy(a); ++i)
      for (std::size_t j = 0; j < container_.degeneracy(b); ++j)
        out.push_back(index_of(gas_.offset(a) + i, container_.offset(b) + j));
    return out;
  }

  const std::map<GridEnergy, std::vector<LevelPair>>& shells() const noexcept { return shells_; }

  bool has_shell(GridEnergy e) const noexcept { return shells_.contains(e); }

  const std::vector<LevelPair>& shell(GridEnergy e) const {
    auto it = shells_.find(e);
    if (it == shells_.end())
      throw std::out_of_range("CompositeSystem: empty shell at energy " + std::to_string(e));
    return it->second;
  }

 private:
  Spectrum gas_;
  Spectrum container_;
  std::map<GridEnergy, std::vector<LevelPair>> shells_;
};

inline CompositeSystem build_composite(Spectrum gas, Spectrum container) {
  return CompositeSystem(std::move(gas), std::move(container));
}

/// Shell degeneracy N(E) = sum over the shell of N_A * N_B.
inline std::size_t shell_degeneracy(const CompositeSystem& sys, GridEnergy e) {
  std::size_t n = 0;
  for (const auto& [a, b] : sys.shell(e)) n += sys.block_dim(a, b);
  return n;
}

}  // namespace qtl
