#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "qtl/random.hpp"

using qtl::Philox4x32;

TEST_CASE("philox bijection reproduces published known-answer vectors") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::bijection(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::bijection(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::bijection(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("same seed and stream give identical sequences") {
  Philox4x32 a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a() == b());
}

TEST_CASE("distinct streams and seeds diverge") {
  auto first_words = [](Philox4x32 g) {
    std::vector<std::uint32_t> v;
    for (int i = 0; i < 8; ++i) v.push_back(g());
    return v;
  };
  const auto base = first_words(qtl::make_stream(1, qtl::StreamTag::Interaction, 0));
  CHECK(base != first_words(qtl::make_stream(1, qtl::StreamTag::Interaction, 1)));
  CHECK(base != first_words(qtl::make_stream(1, qtl::StreamTag::InitialState, 0)));
  CHECK(base != first_words(qtl::make_stream(2, qtl::StreamTag::Interaction, 0)));
  CHECK(qtl::make_stream(1, qtl::StreamTag::Interaction, 3).stream() !=
        qtl::make_stream(1, qtl::StreamTag::AccessibleSample, 3).stream());
}

TEST_CASE("discard skips exactly n words") {
  for (unsigned long long skip : {0ull, 1ull, 3ull, 4ull, 5ull, 17ull, 1000ull}) {
    Philox4x32 a(9, 1), b(9, 1);
    a();  // start mid-block
    b();
    for (unsigned long long i = 0; i < skip; ++i) a();
    b.discard(skip);
    CHECK(a() == b());
  }
}

TEST_CASE("haar vectors are normalized and reproducible") {
  auto g1 = qtl::make_stream(5, qtl::StreamTag::Test, 0);
  auto g2 = qtl::make_stream(5, qtl::StreamTag::Test, 0);
  for (Eigen::Index d : {1, 2, 7, 50}) {
    const auto v = qtl::haar_vector(d, g1);
    CHECK(v.size() == d);
    CHECK(std::abs(v.squaredNorm() - 1.0) < 1e-14);
    CHECK(v == qtl::haar_vector(d, g2));
  }
}

TEST_CASE("haar components have uniform second moments") {
  // For a Haar vector in dimension d, E|v_k|^2 = 1/d for every k.
  auto g = qtl::make_stream(11, qtl::StreamTag::Test, 1);
  const Eigen::Index d = 4;
  const int n = 20000;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n; ++i) acc += qtl::haar_vector(d, g).cwiseAbs2();
  acc /= n;
  for (Eigen::Index k = 0; k < d; ++k) CHECK(acc(k) == Catch::Approx(0.25).margin(0.01));
}
