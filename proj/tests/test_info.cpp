#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "uhsec/info.hpp"
#include "uhsec/rng.hpp"

using namespace uhsec;
using Catch::Approx;

namespace {

Distribution dist(std::initializer_list<double> v) { return Distribution(std::vector<double>(v)); }

JointDistribution joint_from(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> m;
  for (auto& r : rows) m.emplace_back(r);
  JointDistribution j(m.size(), m[0].size());
  for (std::size_t x = 0; x < j.nx; ++x)
    for (std::size_t z = 0; z < j.nz; ++z) j.at(x, z) = m[x][z];
  j.validate();
  return j;
}

Distribution random_dist(std::size_t n, CounterRng& rng) {
  std::vector<double> v(n);
  double s = 0;
  for (auto& x : v) {
    x = rng.next_double01() + 1e-6;
    s += x;
  }
  for (auto& x : v) x /= s;
  return Distribution(std::move(v));
}

JointDistribution random_joint(std::size_t nx, std::size_t nz, CounterRng& rng) {
  JointDistribution j(nx, nz);
  double s = 0;
  for (auto& x : j.p) {
    x = rng.next_double01() + 1e-6;
    s += x;
  }
  for (auto& x : j.p) x /= s;
  return j;
}

DiscreteChannel random_channel(std::size_t nx, std::size_t nz, CounterRng& rng) {
  DiscreteChannel c(nx, nz);
  for (std::size_t x = 0; x < nx; ++x) {
    double s = 0;
    for (std::size_t z = 0; z < nz; ++z) {
      c.at(x, z) = rng.next_double01() + 1e-6;
      s += c.at(x, z);
    }
    for (std::size_t z = 0; z < nz; ++z) c.at(x, z) /= s;
  }
  return c;
}

// normalized candidate inside the eps-ball around p, support preserving
Distribution sample_in_ball(const Distribution& p, double eps, CounterRng& rng) {
  Distribution q = random_dist(p.size(), rng);
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.p[i] == 0) q.p[i] = 0;
  double s = 0;
  for (double v : q.p) s += v;
  for (auto& v : q.p) v /= s;
  const double d = tv_distance(p, q);
  const double lambda = d <= eps ? 1.0 : (eps / d) * rng.next_double01();
  Distribution mix = p;
  for (std::size_t i = 0; i < p.size(); ++i)
    mix.p[i] = (1 - lambda) * p.p[i] + lambda * q.p[i];
  return mix;
}

double pinsker_cap(double kl_bits) { return std::sqrt(kl_bits * kLn2 / 2.0); }

}  // namespace

TEST_CASE("total variation distance") {
  const auto p = dist({0.5, 0.5});
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(tv_distance(dist({1, 0}), dist({0, 1})) == 1.0);
  CHECK(tv_distance(p, dist({1, 0})) == Approx(0.5));
  CHECK_THROWS_AS(tv_distance(p, dist({1.0 / 3, 1.0 / 3, 1.0 / 3})), std::invalid_argument);
}

TEST_CASE("KL divergence") {
  const auto p = dist({0.3, 0.7});
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(kl_divergence(dist({1, 0}), dist({0.5, 0.5})) == Approx(1.0));
  CHECK(std::isinf(kl_divergence(dist({0.5, 0.5}), dist({1, 0}))));
}

TEST_CASE("min-entropy family") {
  CHECK(min_entropy(Distribution::uniform(8)) == Approx(3.0));
  CHECK(min_entropy(Distribution::point_mass(5, 2)) == Approx(0.0));
  CHECK(min_entropy(dist({0.5, 0.25, 0.25})) == Approx(1.0));
  CHECK(renyi2_entropy(Distribution::uniform(8)) == Approx(3.0));
  CHECK(renyi2_entropy(dist({0.5, 0.5})) == Approx(1.0));
}

TEST_CASE("smooth min-entropy") {
  CounterRng rng(21);
  SECTION("eps = 0 recovers min-entropy") {
    for (int i = 0; i < 50; ++i) {
      const auto p = random_dist(6, rng);
      CHECK(smooth_min_entropy(p, 0) == Approx(min_entropy(p)));
    }
  }
  SECTION("frozen capping example") {
    CHECK(smooth_min_entropy(dist({0.5, 0.25, 0.25}), 0.25) == Approx(2.0));
  }
  SECTION("flat distributions are fixed points") {
    for (double eps : {0.01, 0.1, 0.5, 0.9})
      CHECK(smooth_min_entropy(Distribution::uniform(16), eps) == Approx(4.0));
  }
  SECTION("nondecreasing in eps") {
    for (int i = 0; i < 30; ++i) {
      const auto p = random_dist(8, rng);
      double prev = 0;
      for (double eps : {0.0, 0.05, 0.1, 0.2, 0.4}) {
        const double h = smooth_min_entropy(p, eps);
        REQUIRE(h >= prev - 1e-12);
        prev = h;
      }
    }
  }
  SECTION("dominates every sampled in-ball candidate") {
    for (int i = 0; i < 200; ++i) {
      const auto p = random_dist(2 + std::size_t(rng.next_below(6)), rng);
      const double eps = 0.3 * rng.next_double01();
      const double h = smooth_min_entropy(p, eps);
      const auto q = sample_in_ball(p, eps, rng);
      REQUIRE(tv_distance(p, q) <= eps + 1e-12);
      REQUIRE(min_entropy(q) <= h + 1e-9);
    }
  }
  CHECK_THROWS_AS(smooth_min_entropy(dist({0.5, 0.5}), 1.0), std::invalid_argument);
}

TEST_CASE("conditional min-entropy") {
  SECTION("independent uniform X") {
    // X uniform on 4, Z uniform on 2, independent
    JointDistribution j(4, 2);
    for (auto& v : j.p) v = 1.0 / 8;
    CHECK(cond_min_entropy(j) == Approx(2.0));
  }
  SECTION("X = Z uniform bit leaves nothing") {
    CHECK(cond_min_entropy(joint_from({{0.5, 0.0}, {0.0, 0.5}})) == Approx(0.0));
  }
  SECTION("independent uniform bits") {
    CHECK(cond_min_entropy(joint_from({{0.25, 0.25}, {0.25, 0.25}})) == Approx(1.0));
  }
  SECTION("closed form dominates the fixed-P_Z value") {
    CounterRng rng(22);
    for (int i = 0; i < 100; ++i) {
      const auto j = random_joint(4, 3, rng);
      CHECK(cond_min_entropy(j) >= cond_min_entropy_fixed(j) - 1e-12);
    }
  }
  SECTION("no grid candidate beats the closed form at |Z| = 3") {
    CounterRng rng(23);
    for (int i = 0; i < 20; ++i) {
      const auto j = random_joint(4, 3, rng);
      const double closed = cond_min_entropy(j);
      const int steps = 40;
      for (int a = 0; a <= steps; ++a)
        for (int b = 0; a + b <= steps; ++b) {
          const double qa = double(a) / steps, qb = double(b) / steps;
          const double qc = 1.0 - qa - qb;
          if (qa == 0 || qb == 0 || qc <= 0) continue;
          const double v = cond_min_entropy_given(j, dist({qa, qb, qc}));
          REQUIRE(v <= closed + 1e-9);
        }
    }
  }
}

TEST_CASE("smooth conditional min-entropy") {
  CounterRng rng(24);
  SECTION("eps = 0 is the unsmoothed value") {
    const auto j = random_joint(4, 2, rng);
    CHECK(smooth_cond_min_entropy(j, 0) == Approx(cond_min_entropy(j)));
  }
  SECTION("nondecreasing in eps") {
    for (int i = 0; i < 30; ++i) {
      const auto j = random_joint(4, 3, rng);
      double prev = 0;
      for (double eps : {0.0, 0.02, 0.05, 0.1, 0.2}) {
        const double h = smooth_cond_min_entropy(j, eps);
        REQUIRE(h >= prev - 1e-12);
        prev = h;
      }
    }
  }
  SECTION("greedy never exceeds the exhaustive deletion optimum") {
    const auto j = joint_from({{0.20, 0.05}, {0.15, 0.10}, {0.12, 0.08}, {0.18, 0.12}});
    const double eps = 0.1;
    const double greedy = smooth_cond_min_entropy(j, eps);
    double best = cond_min_entropy(j);
    for (std::uint32_t mask = 0; mask < 256; ++mask) {
      JointDistribution q = j;
      double removed = 0;
      for (int a = 0; a < 8; ++a)
        if (mask & (1u << a)) {
          removed += q.p[a];
          q.p[a] = 0;
        }
      if (removed > eps) continue;
      best = std::max(best, cond_min_entropy(q));
    }
    CHECK(greedy <= best + 1e-12);
    CHECK(greedy >= cond_min_entropy(j) - 1e-12);
  }
}

TEST_CASE("mutual information") {
  SECTION("independent is zero") {
    JointDistribution j(4, 2);
    for (auto& v : j.p) v = 1.0 / 8;
    CHECK(mutual_information(j) == Approx(0.0).margin(1e-12));
  }
  SECTION("identity coupling is k bits") {
    JointDistribution j(8, 8);
    for (std::size_t i = 0; i < 8; ++i) j.at(i, i) = 1.0 / 8;
    CHECK(mutual_information(j) == Approx(3.0));
  }
  SECTION("uniform bit through BSC(0.1)") {
    const auto j = joint_from({{0.45, 0.05}, {0.05, 0.45}});
    CHECK(mutual_information(j) == Approx(1.0 - binary_entropy(0.1)));
    CHECK(mutual_information(j) == Approx(0.531).margin(5e-4));
  }
}

TEST_CASE("max-information") {
  DiscreteChannel noiseless(2, 2);
  noiseless.at(0, 0) = noiseless.at(1, 1) = 1.0;
  CHECK(max_information(noiseless) == Approx(1.0));

  DiscreteChannel half(2, 2);
  for (auto& v : half.w) v = 0.5;
  CHECK(max_information(half) == Approx(0.0).margin(1e-12));

  for (double p : {0.1, 0.2, 0.3}) {
    DiscreteChannel bsc(2, 2);
    bsc.at(0, 0) = bsc.at(1, 1) = 1 - p;
    bsc.at(0, 1) = bsc.at(1, 0) = p;
    CHECK(max_information(bsc) == Approx(std::log2(2 * (1 - p))));
  }
}

TEST_CASE("smooth max-information") {
  CounterRng rng(25);
  SECTION("eps = 0 is the plain value") {
    const auto v = random_channel(3, 4, rng);
    CHECK(smooth_max_information(v, 0).bits == Approx(max_information(v)));
    CHECK(smooth_max_information(v, 0).set.residual == 0.0);
  }
  SECTION("nonincreasing in eps") {
    for (int i = 0; i < 30; ++i) {
      const auto v = random_channel(3, 5, rng);
      double prev = max_information(v) + 1e-12;
      for (double eps : {0.0, 0.01, 0.05, 0.1, 0.3}) {
        const auto r = smooth_max_information(v, eps);
        REQUIRE(r.bits <= prev + 1e-12);
        REQUIRE(r.set.residual <= eps + 1e-15);
        prev = r.bits;
      }
    }
  }
  SECTION("greedy vs exhaustive over all masks, 2x4 channel at eps = 0.1") {
    DiscreteChannel v(2, 4);
    v.at(0, 0) = 0.4; v.at(0, 1) = 0.3; v.at(0, 2) = 0.2; v.at(0, 3) = 0.1;
    v.at(1, 0) = 0.05; v.at(1, 1) = 0.15; v.at(1, 2) = 0.35; v.at(1, 3) = 0.45;
    const double eps = 0.1;
    const double plain = max_information(v);
    const double greedy = smooth_max_information(v, eps).bits;

    double inf = plain;
    for (std::uint32_t mask = 0; mask < 256; ++mask) {
      double removed0 = 0, removed1 = 0, sum = 0;
      for (int z = 0; z < 4; ++z) {
        const bool k0 = mask & (1u << z), k1 = mask & (1u << (4 + z));
        if (!k0) removed0 += v.at(0, z);
        if (!k1) removed1 += v.at(1, z);
        sum += std::max(k0 ? v.at(0, z) : 0.0, k1 ? v.at(1, z) : 0.0);
      }
      if (removed0 > eps || removed1 > eps || sum <= 0) continue;
      inf = std::min(inf, std::log2(sum));
    }
    CHECK(greedy >= inf - 1e-12);
    CHECK(greedy <= plain + 1e-12);
    CHECK(inf <= plain + 1e-12);
  }
}

TEST_CASE("leftover hash bound calculators") {
  SECTION("total variation form") {
    CHECK(lhl_bound_tv(10, 10, 0, 1) == Approx(0.5));
    CHECK(lhl_bound_tv(4, 10, 0, 1) == Approx(0.0625));  // (1/2) 2^-3
    CHECK(lhl_bound_tv(0, 20, 0.01, 4) == Approx(0.01 + std::exp2(-10)));
  }
  SECTION("divergence form") {
    CHECK(lhl_bound_kl(8, 8) == Approx(1.0 / kLn2));
    CHECK(lhl_bound_kl(0, 10) == Approx(0.0014088819).margin(1e-8));
  }
  SECTION("channel model form") {
    CHECK(channel_lhl_bound(10, 4, 0, 2) == Approx(0.0225421).margin(1e-7));
    CHECK(channel_lhl_bound(5, 5, 0, 2) == Approx(1.0 / kLn2));
    CHECK(channel_lhl_bound(10, 4, 0.001, 8) ==
          Approx(channel_lhl_bound(10, 4, 0, 8) + 0.008));
  }
}

TEST_CASE("AWGN max-information bound") {
  SECTION("term-by-term re-derivation") {
    const double n = 100, delta = 0.1, P = 1.0, s2 = 1.0;
    const auto r = awgn_imax_bound(n, delta, P, s2);
    const double t1 = n / 2 * std::log2(1 + delta + P / s2);
    const double t2 = n * delta * std::log2(std::exp(1.0)) / 2;
    const double t3 = 0.5 * std::log2(n * 3.14159265358979323846);
    CHECK(r.bits == Approx(t1 + t2 + t3));
    CHECK(r.eps_n == Approx(std::exp(-n * delta * delta / 8)));
  }
  SECTION("monotone in delta and in snr") {
    double prev = 0;
    for (double delta : {0.05, 0.1, 0.2, 0.3, 0.45}) {
      const double v = awgn_imax_bound(50, delta, 1, 1).bits;
      CHECK(v > prev);
      prev = v;
    }
    prev = 0;
    for (double snr : {0.5, 1.0, 2.0, 4.0}) {
      const double v = awgn_imax_bound(50, 0.1, snr, 1).bits;
      CHECK(v > prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(awgn_imax_bound(50, 0.5, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(awgn_imax_bound(50, 0.0, 1, 1), std::invalid_argument);
}

TEST_CASE("exact extraction leakage") {
  const UhfDescriptor d42{UhfKind::Field, 4, 2};
  SECTION("uniform input, full-length hash is perfectly uniform") {
    JointDistribution j(16, 1);
    for (auto& v : j.p) v = 1.0 / 16;
    const auto r = exact_extraction_leakage(UhfDescriptor{UhfKind::Field, 4, 4}, j);
    CHECK(r.tv == Approx(0.0).margin(1e-12));
    CHECK(r.kl == Approx(0.0).margin(1e-12));
  }
  SECTION("point mass leaks everything") {
    JointDistribution j(16, 1);
    j.at(5, 0) = 1.0;
    const auto r1 = exact_extraction_leakage(UhfDescriptor{UhfKind::Field, 4, 1}, j);
    CHECK(r1.tv == Approx(0.5));  // 1 - 2^-k at k = 1
    const auto r2 = exact_extraction_leakage(d42, j);
    CHECK(r2.tv == Approx(0.75));
  }
  SECTION("random joints respect both lemma forms and Pinsker") {
    CounterRng rng(26);
    for (int i = 0; i < 25; ++i) {
      const auto j = random_joint(16, 4, rng);
      const auto r = exact_extraction_leakage(d42, j);
      const double h_sup = cond_min_entropy(j);
      const double h_fix = cond_min_entropy_fixed(j);
      REQUIRE(r.tv <= lhl_bound_tv(2, h_sup, 0, 1) + 1e-12);
      REQUIRE(r.kl <= lhl_bound_kl(2, h_fix) + 1e-12);
      REQUIRE(r.tv <= pinsker_cap(r.kl) + 1e-12);
    }
  }
  SECTION("budget guard") {
    JointDistribution j(16, 1);
    for (auto& v : j.p) v = 1.0 / 16;
    CHECK_THROWS_AS(exact_extraction_leakage(d42, j, 10), BudgetExceeded);
  }
}

TEST_CASE("exact channel leakage") {
  const UhfDescriptor d41{UhfKind::Field, 4, 1};
  const UhfDescriptor d42{UhfKind::Field, 4, 2};
  SECTION("flat channel leaks nothing") {
    DiscreteChannel v(16, 2);
    for (auto& w : v.w) w = 0.5;
    CHECK(exact_channel_leakage(d41, v).bits == Approx(0.0).margin(1e-12));
  }
  SECTION("noiseless identity leaks k bits") {
    DiscreteChannel v(16, 16);
    for (std::size_t i = 0; i < 16; ++i) v.at(i, i) = 1.0;
    CHECK(exact_channel_leakage(d41, v).bits == Approx(1.0));
    CHECK(exact_channel_leakage(d42, v).bits == Approx(2.0));
  }
  SECTION("per-letter BSC(0.2) on 4 bits stays under the bound") {
    DiscreteChannel v(16, 16);
    for (std::uint64_t x = 0; x < 16; ++x)
      for (std::uint64_t z = 0; z < 16; ++z) {
        const int dist = std::popcount(x ^ z);
        v.at(x, z) = std::pow(0.2, dist) * std::pow(0.8, 4 - dist);
      }
    v.validate();
    const double leak = exact_channel_leakage(d41, v).bits;
    for (double eps : {0.0, 0.01}) {
      const auto smi = smooth_max_information(v, eps);
      REQUIRE(leak <= channel_lhl_bound(3, smi.bits, eps, 1) + 1e-12);
    }
  }
  SECTION("unbalanced families are rejected") {
    DiscreteChannel v(8, 2);
    for (auto& w : v.w) w = 0.5;
    CHECK_THROWS_AS(exact_channel_leakage(UhfDescriptor{UhfKind::Toeplitz, 3, 1}, v),
                    std::invalid_argument);
  }
}

TEST_CASE("pinsker consistency on random pairs") {
  CounterRng rng(27);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_dist(6, rng), q = random_dist(6, rng);
    const double tv = tv_distance(p, q), kl = kl_divergence(p, q);
    REQUIRE(tv <= pinsker_cap(kl) + 1e-12);
  }
}
