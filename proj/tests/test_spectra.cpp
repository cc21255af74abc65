#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"
#include "qtl/spectra.hpp"

using qtl::CompositeSystem;
using qtl::Spectrum;

namespace {

Spectrum two_level() { return Spectrum({{0, 1}, {1, 1}}); }
Spectrum fig5_container() { return Spectrum({{0, 50}, {1, 100}, {2, 200}}); }

}  // namespace

TEST_CASE("spectrum rejects invalid level lists") {
  CHECK_THROWS_AS(Spectrum(std::vector<qtl::EnergyLevel>{}), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum({{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum({{-1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum({{1, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum({{2, 1}, {1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(Spectrum({{0, 1}}, 0.0), std::invalid_argument);
  CHECK_NOTHROW(Spectrum({{0, 3}, {5, 2}}));  // gaps on the grid are fine
}

TEST_CASE("spectrum offsets and level lookup") {
  const Spectrum s({{0, 2}, {3, 1}, {4, 3}});
  CHECK(s.dimension() == 6);
  CHECK(s.offset(1) == 2);
  CHECK(s.offset(2) == 3);
  CHECK(s.level_of(0) == 0);
  CHECK(s.level_of(2) == 1);
  CHECK(s.level_of(5) == 2);
  CHECK(s.find_energy(3) == 1);
  CHECK(s.find_energy(2) == s.level_count());
  CHECK_THROWS_AS(s.level_of(6), std::out_of_range);
}

TEST_CASE("build_composite examples") {
  SECTION("two-level gas with a single 50-fold container level") {
    const auto sys = qtl::build_composite(two_level(), Spectrum({{0, 50}}));
    CHECK(sys.dimension() == 100);
    REQUIRE(sys.shells().size() == 2);
    CHECK(sys.shell(0) == std::vector<qtl::LevelPair>{{0, 0}});
    CHECK(sys.shell(1) == std::vector<qtl::LevelPair>{{1, 0}});
  }
  SECTION("trivial one-state system") {
    const auto sys = qtl::build_composite(Spectrum({{0, 1}}), Spectrum({{0, 1}}));
    CHECK(sys.dimension() == 1);
    CHECK(sys.shells().size() == 1);
  }
  SECTION("three-level exponential container") {
    const auto sys = qtl::build_composite(two_level(), fig5_container());
    CHECK(sys.dimension() == 700);
    const auto& s1 = sys.shell(1);
    CHECK(std::set<qtl::LevelPair>(s1.begin(), s1.end()) == std::set<qtl::LevelPair>{{0, 1}, {1, 0}});
  }
}

TEST_CASE("composite requires a shared energy quantum") {
  CHECK_THROWS_AS(CompositeSystem(Spectrum({{0, 1}}, 1.0), Spectrum({{0, 1}}, 0.5)), std::invalid_argument);
}

TEST_CASE("shell_degeneracy matches brute-force enumeration") {
  const oracle::Levels gas{{0, 1}, {1, 1}};
  const oracle::Levels cont{{0, 50}, {1, 100}, {2, 200}};
  const auto counts = oracle::shell_counts(gas, cont);
  const auto sys = qtl::build_composite(two_level(), fig5_container());
  CHECK(counts.at(1) == 150);
  CHECK(qtl::shell_degeneracy(sys, 1) == 150);
  for (const auto& [e, n] : counts) CHECK(qtl::shell_degeneracy(sys, e) == n);

  const auto fig2 = qtl::build_composite(two_level(), Spectrum({{0, 50}}));
  CHECK(qtl::shell_degeneracy(fig2, 0) == 50);

  const auto single = qtl::build_composite(Spectrum({{0, 3}}), Spectrum({{0, 7}}));
  CHECK(qtl::shell_degeneracy(single, 0) == 21);
}

TEST_CASE("unknown shell energy is an error") {
  const auto sys = qtl::build_composite(two_level(), Spectrum({{0, 50}}));
  CHECK_THROWS_AS(qtl::shell_degeneracy(sys, 7), std::out_of_range);
  CHECK_FALSE(sys.has_shell(7));
}

TEST_CASE("index map is a bijection with container index fastest") {
  const CompositeSystem sys(Spectrum({{0, 2}, {2, 3}}), Spectrum({{0, 1}, {1, 2}, {4, 2}}));
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < sys.dimension(); ++i) {
    const auto t = sys.tuple_of(i);
    CHECK(sys.index_of(t) == i);
    seen.insert(i);
  }
  CHECK(seen.size() == sys.dimension());
  CHECK(sys.tuple_of(1) == qtl::BasisTuple{0, 0, 1, 0});
  CHECK(sys.tuple_of(sys.container_dim()) == qtl::BasisTuple{0, 1, 0, 0});
}

TEST_CASE("shells partition level pairs and degeneracies sum to the dimension") {
  // A handful of irregular spectra, including gaps and repeated sums.
  const std::vector<std::pair<Spectrum, Spectrum>> cases{
      {two_level(), fig5_container()},
      {Spectrum({{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}), Spectrum({{0, 6}, {1, 12}, {2, 24}, {3, 48}, {4, 96}})},
      {Spectrum({{0, 2}, {3, 4}, {5, 1}}), Spectrum({{1, 3}, {2, 1}, {7, 5}})},
  };
  for (const auto& [g, c] : cases) {
    const CompositeSystem sys(g, c);
    std::set<qtl::LevelPair> pairs;
    std::size_t total = 0;
    for (const auto& [e, ps] : sys.shells()) {
      for (const auto& p : ps) {
        CHECK(pairs.insert(p).second);
        CHECK(g.energy(p.first) + c.energy(p.second) == e);
      }
      total += qtl::shell_degeneracy(sys, e);
    }
    CHECK(pairs.size() == g.level_count() * c.level_count());
    CHECK(total == sys.dimension());
  }
}
