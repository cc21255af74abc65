#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qtl/random.hpp"
#include "qtl/states.hpp"
#include "qtl/theory.hpp"

using qtl::CompositeSystem;
using qtl::LevelDistribution;
using qtl::Spectrum;

namespace {

Spectrum two_level() { return Spectrum({{0, 1}, {1, 1}}); }
Spectrum fig5_container() { return Spectrum({{0, 50}, {1, 100}, {2, 200}}); }

Spectrum five_level() { return Spectrum({{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}); }
Spectrum five_container() { return Spectrum({{0, 6}, {1, 12}, {2, 24}, {3, 48}, {4, 96}}); }

double uniform01(qtl::Philox4x32& rng) { return (rng() + 0.5) / 4294967296.0; }

LevelDistribution random_distribution(std::size_t n, qtl::Philox4x32& rng) {
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& x : w) s += (x = uniform01(rng));
  for (auto& x : w) x /= s;
  return LevelDistribution(w);
}

std::vector<double> as_double(const Spectrum& s) {
  std::vector<double> n;
  for (std::size_t i = 0; i < s.level_count(); ++i) n.push_back(static_cast<double>(s.degeneracy(i)));
  return n;
}

}  // namespace

TEST_CASE("level distribution validation") {
  CHECK_THROWS_AS(LevelDistribution({}), std::invalid_argument);
  CHECK_THROWS_AS(LevelDistribution({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(LevelDistribution({-0.5, 1.5}), std::invalid_argument);
  CHECK(LevelDistribution::delta(3, 1).weights() == std::vector<double>{0, 1, 0});
  CHECK_THROWS_AS(qtl::min_purity(LevelDistribution({1.0}), two_level()), std::invalid_argument);
}

TEST_CASE("min_purity examples") {
  CHECK(qtl::min_purity(LevelDistribution({0.15, 0.85}), two_level()) == Catch::Approx(0.745).epsilon(1e-14));
  CHECK(qtl::min_purity(LevelDistribution({1.0}), Spectrum({{0, 1}})) == 1.0);
  CHECK(qtl::min_purity(LevelDistribution({0.5, 0.5}), Spectrum({{0, 2}, {1, 2}})) == 0.25);
}

TEST_CASE("hs_average_purity examples") {
  const LevelDistribution wa({0.15, 0.85});
  const LevelDistribution wb({1.0});
  const Spectrum c50({{0, 50}});
  CHECK(qtl::hs_average_purity_exact(wa, wb, two_level(), c50) == Catch::Approx(0.7501).epsilon(1e-14));
  CHECK(qtl::hs_average_purity_exact(wa, wb, two_level(), c50) ==
        Catch::Approx(oracle::hs_purity({0.15, 0.85}, {1, 1}, {1.0}, {50})).epsilon(1e-14));
  CHECK(qtl::hs_average_purity_approx(wa, wb, two_level(), c50) == Catch::Approx(0.765).epsilon(1e-14));
  const Spectrum one({{0, 1}});
  CHECK(qtl::hs_average_purity_exact(wb, wb, one, one) == Catch::Approx(1.0).epsilon(1e-15));

  const Spectrum big({{0, 1000}, {1, 1000}});
  const LevelDistribution u({0.5, 0.5});
  CHECK(std::abs(qtl::hs_average_purity_exact(u, u, big, big) - qtl::hs_average_purity_approx(u, u, big, big)) <
        1e-5);

  const LevelDistribution wd({2.0 / 3.0, 1.0 / 3.0});
  CHECK(qtl::hs_average_purity_approx(wd, LevelDistribution({1.0}), two_level(), Spectrum({{0, 1000000}})) ==
        Catch::Approx(5.0 / 9.0 + 1e-6).epsilon(1e-12));
}

TEST_CASE("hs average agrees with the oracle and lies between min purity and one") {
  auto rng = qtl::make_stream(1, qtl::StreamTag::Test, 20);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<qtl::EnergyLevel> gl, cl;
    const std::size_t ng = 1 + rng() % 4, nc = 1 + rng() % 4;
    for (std::size_t i = 0; i < ng; ++i) gl.push_back({static_cast<qtl::GridEnergy>(i), 1 + rng() % 30});
    for (std::size_t i = 0; i < nc; ++i) cl.push_back({static_cast<qtl::GridEnergy>(i), 1 + rng() % 30});
    const Spectrum g(gl), c(cl);
    const auto wa = random_distribution(ng, rng);
    const auto wb = random_distribution(nc, rng);
    const double exact = qtl::hs_average_purity_exact(wa, wb, g, c);
    REQUIRE(exact == Catch::Approx(oracle::hs_purity(wa.weights(), as_double(g), wb.weights(), as_double(c)))
                         .epsilon(1e-13));
    REQUIRE(exact >= qtl::min_purity(wa, g) - 1e-15);
    REQUIRE(exact <= 1.0 + 1e-15);
    // gas <-> container exchange
    REQUIRE(exact == Catch::Approx(qtl::hs_average_purity_exact(wb, wa, c, g)).epsilon(1e-14));
  }
}

TEST_CASE("exact average converges monotonically to the approximation") {
  const LevelDistribution wa({0.3, 0.7});
  const LevelDistribution wb({0.6, 0.4});
  double prev = 1.0;
  for (std::size_t n = 1; n <= 4096; n *= 2) {
    const Spectrum g({{0, n}, {1, n}});
    const Spectrum c({{0, n}, {1, 2 * n}});
    const double gap =
        std::abs(qtl::hs_average_purity_exact(wa, wb, g, c) - qtl::hs_average_purity_approx(wa, wb, g, c));
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-7);
}

TEST_CASE("max_entropy examples") {
  CHECK(qtl::max_entropy(LevelDistribution({0.15, 0.85}), two_level()) == Catch::Approx(0.42271).margin(5e-6));
  CHECK(qtl::max_entropy(LevelDistribution({2.0 / 3.0, 1.0 / 3.0}), two_level()) ==
        Catch::Approx(0.63651).margin(5e-6));
  CHECK(qtl::max_entropy(LevelDistribution({1.0}), Spectrum({{0, 1}})) == 0.0);
  CHECK(qtl::max_entropy(LevelDistribution({0.0, 1.0}), Spectrum({{0, 1}, {1, 4}})) ==
        Catch::Approx(std::log(4.0)));
}

TEST_CASE("total_energy_distribution examples") {
  const CompositeSystem fig5(two_level(), fig5_container());
  const auto we = qtl::total_energy_distribution(LevelDistribution({0, 1}), LevelDistribution({0, 1, 0}), fig5);
  CHECK(we.at(2) == 1.0);
  CHECK(we.at(0) == 0.0);

  const CompositeSystem single(two_level(), Spectrum({{0, 7}}));
  const auto w2 = qtl::total_energy_distribution(LevelDistribution({0.5, 0.5}), LevelDistribution({1.0}), single);
  CHECK(w2.at(0) == 0.5);
  CHECK(w2.at(1) == 0.5);

  const CompositeSystem five(five_level(), five_container());
  const auto w5 = qtl::total_energy_distribution(LevelDistribution::delta(5, 2), LevelDistribution::delta(5, 2), five);
  CHECK(w5.at(4) == 1.0);
}

TEST_CASE("dominant distribution examples") {
  const CompositeSystem fig5(two_level(), fig5_container());
  // gas in the ground level, container at level 1: only shell E=1 is populated
  const auto we = qtl::total_energy_distribution(LevelDistribution({1, 0}), LevelDistribution::delta(3, 1), fig5);
  const auto wg = qtl::dominant_distribution(we, fig5);
  CHECK(wg[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(wg[1] == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
  const auto shell1 = qtl::TotalEnergyDistribution{{1, 1.0}};
  const auto wd = qtl::dominant_distribution(shell1, fig5);
  CHECK(wd[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-15));

  const CompositeSystem micro(two_level(), Spectrum({{0, 50}}));
  const LevelDistribution w({0.15, 0.85});
  const auto wm = qtl::dominant_distribution(qtl::total_energy_distribution(w, LevelDistribution({1.0}), micro), micro);
  CHECK(wm[0] == Catch::Approx(0.15).epsilon(1e-14));

  const CompositeSystem five(five_level(), five_container());
  const auto w5 = qtl::dominant_distribution(qtl::TotalEnergyDistribution{{4, 1.0}}, five);
  for (std::size_t a = 0; a + 1 < 5; ++a) CHECK(w5[a] / w5[a + 1] == Catch::Approx(2.0).epsilon(1e-13));
  CHECK(w5[0] == Catch::Approx(16.0 / 31.0).epsilon(1e-14));

  CHECK_THROWS_AS(qtl::dominant_distribution(qtl::TotalEnergyDistribution{{1, 0.5}}, fig5), std::invalid_argument);
  CHECK_THROWS_AS(qtl::dominant_distribution(qtl::TotalEnergyDistribution{{1, 1.5}, {2, -0.5}}, fig5),
                  std::invalid_argument);
}

TEST_CASE("dominant distribution is symmetric under exchange of the subsystems") {
  auto rng = qtl::make_stream(2, qtl::StreamTag::Test, 20);
  const Spectrum g({{0, 2}, {1, 3}, {3, 1}});
  const Spectrum c({{0, 4}, {2, 5}, {3, 7}});
  const CompositeSystem sys(g, c), swapped(c, g);
  for (int trial = 0; trial < 50; ++trial) {
    const auto we = qtl::total_energy_distribution(random_distribution(3, rng), random_distribution(3, rng), sys);
    const auto a = qtl::dominant_container_distribution(we, sys);
    const auto b = qtl::dominant_distribution(we, swapped);
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(a[i] == Catch::Approx(b[i]).epsilon(1e-13));
  }
}

TEST_CASE("canonical distribution examples") {
  const auto w = qtl::canonical_distribution(two_level(), std::log(2.0));
  CHECK(w[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
  const auto u = qtl::canonical_distribution(Spectrum({{0, 1}, {1, 3}}), 0.0);
  CHECK(u[1] == Catch::Approx(0.75).epsilon(1e-15));
  const auto f = qtl::canonical_distribution(five_level(), std::log(2.0));
  const double expect[] = {16, 8, 4, 2, 1};
  for (std::size_t a = 0; a < 5; ++a) CHECK(f[a] == Catch::Approx(expect[a] / 31.0).epsilon(1e-14));
  CHECK_THROWS_AS(qtl::canonical_distribution(two_level(), std::nan("")), std::invalid_argument);
  CHECK(qtl::canonical_distribution(two_level(), 800.0)[0] == 1.0);
}

TEST_CASE("canonical equals dominant for any energy distribution when container degeneracies are exponential") {
  auto rng = qtl::make_stream(3, qtl::StreamTag::Test, 20);
  const Spectrum g({{0, 1}, {1, 2}, {2, 1}});
  std::vector<qtl::EnergyLevel> cl;
  for (int b = 0; b <= 8; ++b) cl.push_back({b, static_cast<std::size_t>(3) << b});
  const Spectrum c(cl);
  const CompositeSystem sys(g, c);
  const auto canonical = qtl::canonical_distribution(g, std::log(2.0));
  for (int trial = 0; trial < 100; ++trial) {
    // shells 2..8 receive every gas level, so the container ladder is never truncated
    qtl::TotalEnergyDistribution we;
    double s = 0.0;
    for (qtl::GridEnergy e = 2; e <= 8; ++e) s += (we[e] = (rng() % 2) ? uniform01(rng) : 0.0);
    if (s == 0.0) continue;
    for (auto& [e, p] : we) p /= s;
    const auto wd = qtl::dominant_distribution(we, sys);
    for (std::size_t a = 0; a < 3; ++a) REQUIRE(wd[a] == Catch::Approx(canonical[a]).epsilon(1e-12));
  }
}

TEST_CASE("equilibrium state reproduces min purity and max entropy") {
  const auto r = qtl::equilibrium_state(LevelDistribution({2.0 / 3.0, 1.0 / 3.0}), two_level());
  CHECK(r.matrix()(0, 0).real() == Catch::Approx(2.0 / 3.0));
  CHECK(r.matrix()(0, 1) == qtl::Complex(0.0));
  const auto blk = qtl::equilibrium_state(LevelDistribution({1.0}), Spectrum({{0, 4}}));
  CHECK(blk.matrix().isApprox(Eigen::MatrixXcd::Identity(4, 4) / 4.0));

  auto rng = qtl::make_stream(4, qtl::StreamTag::Test, 20);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<qtl::EnergyLevel> lv;
    const std::size_t n = 1 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i) lv.push_back({static_cast<qtl::GridEnergy>(2 * i), 1 + rng() % 6});
    const Spectrum g(lv);
    const auto w = random_distribution(n, rng);
    const auto rho = qtl::equilibrium_state(w, g);
    REQUIRE(std::abs(qtl::purity(rho) - qtl::min_purity(w, g)) < 1e-12);
    REQUIRE(std::abs(qtl::von_neumann_entropy(rho) - qtl::max_entropy(w, g)) < 1e-12);
  }

  // canonical input gives the Gibbs operator exp(-alpha H)/Z
  const double alpha = 0.8;
  const Spectrum g({{0, 2}, {1, 1}, {3, 2}});
  const auto gibbs = qtl::equilibrium_state(qtl::canonical_distribution(g, alpha), g);
  Eigen::VectorXd d(5);
  d << 1, 1, std::exp(-alpha), std::exp(-3 * alpha), std::exp(-3 * alpha);
  d /= d.sum();
  CHECK((gibbs.matrix().diagonal().real() - d).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("spectral temperature round-trips exact Boltzmann inputs") {
  const std::vector<Spectrum> spectra{two_level(), five_level(), Spectrum({{0, 2}, {1, 5}, {3, 1}, {4, 7}}),
                                      Spectrum({{0, 1}, {2, 3}})};
  for (double alpha : {0.1, std::log(2.0), 3.0})
    for (const auto& s : spectra) {
      const auto w = qtl::canonical_distribution(s, alpha);
      CHECK(std::abs(qtl::spectral_temperature(w, s) - alpha) < 1e-12);
    }
  const Spectrum scaled({{0, 1}, {1, 1}, {2, 1}}, 0.5);
  CHECK(std::abs(qtl::spectral_temperature(qtl::canonical_distribution(scaled, 1.3), scaled) - 1.3) < 1e-12);
}

TEST_CASE("spectral temperature examples and errors") {
  CHECK(qtl::spectral_temperature(LevelDistribution({0.5, 0.5}), two_level()) == Catch::Approx(0.0).margin(1e-15));
  CHECK(qtl::spectral_temperature(LevelDistribution({2.0 / 3.0, 1.0 / 3.0}), two_level()) ==
        Catch::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(qtl::spectral_temperature(std::vector<qtl::SpectralLevel>{{0, 1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(qtl::spectral_temperature(std::vector<qtl::SpectralLevel>{{1, 1, 0.5}, {0, 1, 0.5}}),
                  std::invalid_argument);
  // For normalized input the prefactor never drops below 1/2; only raw
  // unnormalized level lists can hit the undefined case.
  CHECK_THROWS_AS(qtl::spectral_temperature(std::vector<qtl::SpectralLevel>{{0, 1, 1.0}, {1, 1, 1.0}}),
                  std::domain_error);
  // zero probabilities inside the ladder are clamped, result stays finite
  CHECK(std::isfinite(qtl::spectral_temperature(LevelDistribution({0.6, 0.0, 0.4}), Spectrum({{0, 1}, {1, 1}, {2, 1}}))));
}

TEST_CASE("exponential degeneracy fit") {
  const auto f5 = qtl::fit_exponential_degeneracy(fig5_container());
  CHECK(f5.alpha == Catch::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(f5.n0 == Catch::Approx(50.0).epsilon(1e-12));
  CHECK(f5.residual < 1e-12);
  const auto f6 = qtl::fit_exponential_degeneracy(five_container());
  CHECK(f6.alpha == Catch::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(f6.n0 == Catch::Approx(6.0).epsilon(1e-12));
  CHECK(f6.residual < 1e-12);
  const auto flat = qtl::fit_exponential_degeneracy(Spectrum({{0, 5}, {2, 5}, {3, 5}}));
  CHECK(flat.alpha == Catch::Approx(0.0).margin(1e-15));
  CHECK(qtl::fit_exponential_degeneracy(Spectrum({{0, 1}, {1, 3}, {2, 4}})).residual > 0.01);
  CHECK_THROWS_AS(qtl::fit_exponential_degeneracy(Spectrum({{0, 5}})), std::invalid_argument);
}
