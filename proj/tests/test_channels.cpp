#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "uhsec/channel.hpp"
#include "uhsec/rng.hpp"

using namespace uhsec;
using Catch::Approx;

namespace {

DiscreteChannel random_binary_symmetric(CounterRng& rng) {
  return make_bsc(rng.next_double01());
}

}  // namespace

TEST_CASE("degraded composition") {
  SECTION("identity V leaves T unchanged") {
    const auto t = make_bsc(0.2);
    DiscreteChannel id(2, 2);
    id.at(0, 0) = id.at(1, 1) = 1;
    const auto w = compose_degraded(t, id);
    for (std::size_t i = 0; i < 4; ++i) CHECK(w.w[i] == Approx(t.w[i]));
  }
  SECTION("BSC(p) o BSC(q) = BSC(p + q - 2pq)") {
    CounterRng rng(31);
    for (int i = 0; i < 100; ++i) {
      const double p = rng.next_double01(), q = rng.next_double01();
      const auto w = compose_degraded(make_bsc(p), make_bsc(q));
      const double eff = p + q - 2 * p * q;
      CHECK(w.at(0, 1) == Approx(eff));
      CHECK(w.at(1, 0) == Approx(eff));
      w.validate();
    }
  }
  SECTION("a half channel absorbs any symmetric degradation") {
    CounterRng rng(32);
    for (int i = 0; i < 50; ++i) {
      const auto w = compose_degraded(make_bsc(0.5), random_binary_symmetric(rng));
      for (const double v : w.w) CHECK(v == Approx(0.5));
    }
  }
}

TEST_CASE("product channel") {
  const auto w = make_bsc(0.2);
  SECTION("n = 1 is the channel itself") {
    const auto p1 = product_channel(w, 1);
    for (std::size_t i = 0; i < 4; ++i) CHECK(p1.w[i] == Approx(w.w[i]));
  }
  SECTION("two uses factorize") {
    const auto p2 = product_channel(w, 2);
    CHECK(p2.at(0, 0) == Approx(0.8 * 0.8));  // P(00|00)
    CHECK(p2.at(0, 3) == Approx(0.2 * 0.2));
    CHECK(p2.at(1, 2) == Approx(0.2 * 0.2));  // x=01, z=10 flips both uses
    CHECK(p2.at(1, 3) == Approx(0.8 * 0.2));  // x=01, z=11
    p2.validate();
  }
  SECTION("row sums stay 1 at n = 6") {
    product_channel(w, 6).validate();
  }
  SECTION("materialization budget") {
    CHECK_THROWS_AS(product_channel(w, 20), BudgetExceeded);
  }
}

TEST_CASE("encoder-augmented channel") {
  SECTION("repetition-3 row entries") {
    const auto aug = augment_with_encoder(make_bsc(0.1), LinearCode::repetition(3));
    const auto ch = aug.materialize();
    CHECK(ch.nx == 2);
    CHECK(ch.nz == 8);
    CHECK(ch.at(0, 0) == Approx(0.9 * 0.9 * 0.9));  // P(000 | 0)
    CHECK(ch.at(1, 7) == Approx(0.9 * 0.9 * 0.9));
    CHECK(ch.at(1, 0) == Approx(0.1 * 0.1 * 0.1));
  }
  SECTION("hamming74 over BSC(0.3): rows renormalize within 1e-12") {
    const auto ch = augment_with_encoder(make_bsc(0.3), LinearCode::hamming74()).materialize();
    CHECK(ch.nx == 16);
    CHECK(ch.nz == 128);
    ch.validate();
  }
  SECTION("identity encoder restricted to codewords is the product channel") {
    const auto code = LinearCode::identity(3);
    const auto aug = augment_with_encoder(make_bsc(0.2), code).materialize();
    const auto prod = product_channel(make_bsc(0.2), 3);
    for (std::size_t x = 0; x < 8; ++x)
      for (std::size_t z = 0; z < 8; ++z) REQUIRE(aug.at(x, z) == Approx(prod.at(x, z)));
  }
}

TEST_CASE("sampling") {
  CounterRng rng(33);
  SECTION("degenerate crossover") {
    for (int i = 0; i < 50; ++i) {
      CHECK(sample(make_bsc(0.0), 0, rng) == 0);
      CHECK(sample(make_bsc(0.0), 1, rng) == 1);
      CHECK(sample(make_bsc(1.0), 0, rng) == 1);
      CHECK(sample(make_bsc(1.0), 1, rng) == 0);
    }
  }
  SECTION("empirical crossover within 3 sigma at p = 0.1") {
    const auto w = make_bsc(0.1);
    const int n = 100000;
    int flips = 0;
    for (int i = 0; i < n; ++i) flips += sample(w, 0, rng) == 1;
    const double sigma = std::sqrt(0.1 * 0.9 / n);
    CHECK(std::abs(double(flips) / n - 0.1) <= 3 * sigma);
  }
}

TEST_CASE("capacity") {
  CHECK(capacity(ChannelSpec::bsc(0.0)) == Approx(1.0));
  CHECK(capacity(ChannelSpec::bsc(0.5)) == Approx(0.0).margin(1e-12));
  CHECK(capacity(ChannelSpec::bsc(0.11)) == Approx(1 - binary_entropy(0.11)));
  CHECK(capacity(ChannelSpec::bsc(0.11)) == Approx(0.5002).margin(5e-4));
  CHECK(capacity(ChannelSpec::bec(0.25)) == Approx(0.75));
  CHECK(capacity(ChannelSpec::awgn(1.0, 3.0)) == Approx(1.0));

  SECTION("alternating maximization matches the closed forms") {
    for (double p : {0.05, 0.11, 0.3}) {
      CHECK(blahut_arimoto_capacity(make_bsc(p)) ==
            Approx(1 - binary_entropy(p)).margin(1e-8));
      CHECK(blahut_arimoto_capacity(make_bec(p)) == Approx(1 - p).margin(1e-8));
    }
  }
  SECTION("degradation can only lose capacity") {
    CounterRng rng(34);
    for (int i = 0; i < 30; ++i) {
      const auto t = random_binary_symmetric(rng);
      const auto v = random_binary_symmetric(rng);
      CHECK(blahut_arimoto_capacity(compose_degraded(t, v)) <=
            blahut_arimoto_capacity(t) + 1e-9);
    }
  }
}

TEST_CASE("awgn discretization") {
  const auto spec = ChannelSpec::awgn(1.0, 1.0);
  const auto grid = make_awgn_grid(spec);
  SECTION("grid is strictly increasing") {
    for (std::size_t i = 1; i < grid.points.size(); ++i)
      REQUIRE(grid.points[i] > grid.points[i - 1]);
  }
  SECTION("rows are exact probability vectors") {
    make_awgn_channel(spec).validate();
  }
  SECTION("finer grids keep mass normalized") {
    make_awgn_channel(ChannelSpec::awgn(0.25, 2.0, 65, 5.0)).validate();
  }
}

TEST_CASE("max-information closed form for the BSC") {
  for (double p : {0.1, 0.2, 0.3})
    CHECK(max_information(make_bsc(p)) == Approx(std::log2(2 * (1 - p))));
}

TEST_CASE("block max-information against n times capacity") {
  // qualitative check: exact I_max of the hamming74-augmented BSC(0.3)
  // reported against 7 C_W; the slack is positive at this blocklength
  const auto aug = augment_with_encoder(make_bsc(0.3), LinearCode::hamming74()).materialize();
  const double imax = max_information(aug);
  const double n_cap = 7 * capacity(ChannelSpec::bsc(0.3));
  CHECK(imax <= 7.0);
  WARN("I_max(augmented) = " << imax << ", n C_W = " << n_cap
                             << ", slack = " << imax - n_cap);
}
