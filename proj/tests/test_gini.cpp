#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "daogini/errors.hpp"
#include "daogini/gini.hpp"

using namespace daogini;

namespace {

SortedDistribution dist_of(std::initializer_list<long long> values) {
  std::vector<Balance> balances;
  for (long long v : values) balances.emplace_back(v);
  return SortedDistribution::from_balances(std::move(balances));
}

// Random holder distributions shaped like real token data: either uniform
// or heavy-tailed (Pareto-like), balances within u64 so scale tests have
// headroom.
std::vector<Balance> random_balances(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> shape(0, 1);
  std::vector<Balance> out;
  out.reserve(n);
  if (shape(rng) == 0) {
    std::uniform_int_distribution<long long> uniform(1, 1'000'000'000'000LL);
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(uniform(rng));
  } else {
    std::uniform_real_distribution<double> u(1e-9, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      double pareto = std::pow(u(rng), -1.0 / 1.2);  // alpha ~ 1.2, heavy tail
      auto v = static_cast<long long>(std::min(pareto * 1000.0, 9e17));
      out.emplace_back(std::max(v, 1LL));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("gini analytic cases") {
  CHECK(gini(dist_of({5, 5, 5, 5})) == 0.0);
  CHECK(std::abs(gini(dist_of({7, 1, 1, 1})) - 0.45) <= 1e-15);
  CHECK(std::abs(gini(dist_of({2, 1})) - 1.0 / 6.0) <= 1e-15);
  CHECK(gini(dist_of({42})) == 0.0);
}

TEST_CASE("gini approaches (n-1)/n from below for one dominant wallet") {
  double prev = 0.0;
  for (long long k : {1000LL, 1000000LL, 1000000000LL}) {
    std::vector<Balance> balances{Balance(k)};
    for (int i = 0; i < 9; ++i) balances.emplace_back(1);
    double g = gini(SortedDistribution::from_balances(std::move(balances)));
    CHECK(g < 0.9);
    CHECK(g > prev);
    prev = g;
  }
  CHECK(0.9 - prev < 1e-8);

  // At extreme scale the exact rational is still below 0.9; the double
  // rounds to the bound but never crosses it.
  std::vector<Balance> extreme{Balance("1000000000000000000")};
  for (int i = 0; i < 9; ++i) extreme.emplace_back(1);
  CHECK(gini(SortedDistribution::from_balances(std::move(extreme))) <= 0.9);
}

TEST_CASE("gini rejects degenerate distributions") {
  CHECK_THROWS_AS(gini(SortedDistribution::from_balances({})), DegenerateError);
  CHECK_THROWS_AS(SortedDistribution::from_balances({Balance(1), Balance(0)}), ValidationError);
}

TEST_CASE("pairwise oracle hand-expanded values") {
  CHECK(gini_pairwise_oracle(dist_of({5, 5})) == 0.0);
  CHECK(std::abs(gini_pairwise_oracle(dist_of({2, 1})) - 1.0 / 6.0) <= 1e-15);
  // Exhaustive pair sum: 2 * (8+12+14+15+15 + 4+6+7+7 + 2+3+3 + 1+1 + 0) = 196,
  // denominator 2 * 6 * 32 = 384.
  CHECK(std::abs(gini_pairwise_oracle(dist_of({16, 8, 4, 2, 1, 1})) - 196.0 / 384.0) <= 1e-15);
}

TEST_CASE("equal-count split") {
  auto even = dist_of({16, 8, 4, 2, 1, 1});
  CHECK(split_equal_count(even).c_end == 3);

  auto odd = dist_of({9, 5, 3, 2, 1});
  CHECK(split_equal_count(odd).c_end == 3);  // extra wallet joins C

  CHECK(split_equal_count(dist_of({2, 1})).c_end == 1);
  CHECK_THROWS_AS(split_equal_count(dist_of({7})), DegenerateError);
}

TEST_CASE("equal-mass sub-split picks the nearest prefix cut") {
  // C = [9,5,3]: prefixes 9, 14 against half 8.5 -> deviations 0.5, 5.5.
  auto p = split_equal_mass(dist_of({9, 5, 3}), Partition{3, {}});
  CHECK(*p.e_end == 1);

  // C = [16,8,4]: prefixes 16, 24 against half 14 -> deviations 2, 10.
  p = split_equal_mass(dist_of({16, 8, 4}), Partition{3, {}});
  CHECK(*p.e_end == 1);

  // Exact halving.
  p = split_equal_mass(dist_of({6, 6}), Partition{2, {}});
  CHECK(*p.e_end == 1);

  // Tied deviations resolve toward the smaller cut: [2,2,1,1] has
  // |2*2-6| == |2*4-6| at k=1 and k=2.
  p = split_equal_mass(dist_of({2, 2, 1, 1}), Partition{4, {}});
  CHECK(*p.e_end == 1);

  CHECK_THROWS_AS(split_equal_mass(dist_of({5, 1}), Partition{1, {}}), DegenerateError);
}

TEST_CASE("worked bundle [16,8,4,2,1,1]") {
  auto dist = dist_of({16, 8, 4, 2, 1, 1});
  GiniBundle bundle = compute_bundle(dist);
  // First re-derived with the pairwise oracle over the partitioned groups.
  CHECK(std::abs(bundle.g_all - gini_pairwise_oracle(dist)) <= 1e-15);
  CHECK(std::abs(bundle.g_c - gini_pairwise_oracle(dist_of({16, 8, 4}))) <= 1e-15);
  CHECK(std::abs(bundle.g_d - gini_pairwise_oracle(dist_of({2, 1, 1}))) <= 1e-15);
  CHECK(std::abs(bundle.g_f - gini_pairwise_oracle(dist_of({8, 4}))) <= 1e-15);
  // Frozen values.
  CHECK(std::abs(bundle.g_all - 196.0 / 384.0) <= 1e-10);
  CHECK(std::abs(bundle.g_c - 2.0 / 7.0) <= 1e-10);
  CHECK(std::abs(bundle.g_d - 1.0 / 6.0) <= 1e-10);
  CHECK(bundle.g_e == 0.0);  // E = [16], a single wallet
  CHECK(std::abs(bundle.g_f - 1.0 / 6.0) <= 1e-10);
}

TEST_CASE("all-equal bundle is zero everywhere") {
  GiniBundle bundle = compute_bundle(dist_of({1, 1, 1, 1}));
  CHECK(bundle.g_all == 0.0);
  CHECK(bundle.g_c == 0.0);
  CHECK(bundle.g_d == 0.0);
  CHECK(bundle.g_e == 0.0);
  CHECK(bundle.g_f == 0.0);
}

TEST_CASE("bundle errors name the failing group") {
  CHECK_THROWS_WITH_AS(compute_bundle(dist_of({5, 3, 2})),
                       doctest::Contains("group D"), DegenerateError);
  CHECK_THROWS_WITH_AS(compute_bundle(dist_of({5, 3})),
                       doctest::Contains("group F"), DegenerateError);
  CHECK_THROWS_AS(compute_bundle(dist_of({5})), DegenerateError);
}

TEST_CASE("gini matches the pairwise oracle on random distributions") {
  std::mt19937_64 rng(20260811);
  std::uniform_int_distribution<std::size_t> size(1, 300);
  for (int trial = 0; trial < 400; ++trial) {
    auto dist = SortedDistribution::from_balances(random_balances(rng, size(rng)));
    double fast = gini(dist);
    double oracle = gini_pairwise_oracle(dist);
    REQUIRE(std::abs(fast - oracle) <= 1e-12);
    REQUIRE(fast >= 0.0);
    REQUIRE(fast < 1.0);
    double n = static_cast<double>(dist.size());
    REQUIRE(fast <= (n - 1.0) / n + 1e-15);
  }
}

TEST_CASE("gini is scale invariant") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> size(2, 200);
  for (int trial = 0; trial < 100; ++trial) {
    auto balances = random_balances(rng, size(rng));
    auto scaled = balances;
    for (auto& b : scaled) b *= 1'000'000;
    double g = gini(SortedDistribution::from_balances(std::move(balances)));
    double gs = gini(SortedDistribution::from_balances(std::move(scaled)));
    REQUIRE(std::abs(g - gs) <= 1e-12);
  }
}

TEST_CASE("gini is zero exactly when all balances are equal") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<long long> value(1, 1'000'000'000);
    std::uniform_int_distribution<std::size_t> size(2, 50);
    std::vector<Balance> balances(size(rng), Balance(value(rng)));
    CHECK(gini(SortedDistribution::from_balances(std::move(balances))) == 0.0);
  }
}

TEST_CASE("partition invariants on random snapshots") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> size(4, 400);
  for (int trial = 0; trial < 400; ++trial) {
    auto dist = SortedDistribution::from_balances(random_balances(rng, size(rng)));
    const auto& b = dist.balances();
    std::size_t n = dist.size();

    Partition part = split_equal_mass(dist, split_equal_count(dist));
    std::size_t c_size = part.c_end;
    std::size_t d_size = n - part.c_end;
    REQUIRE((c_size - d_size == 0 || c_size - d_size == 1));
    REQUIRE(b[part.c_end - 1] >= b[part.c_end]);  // min(C) >= max(D)

    std::size_t e = *part.e_end;
    REQUIRE(e >= 1);
    REQUIRE(e < part.c_end);
    Balance sum_e = 0, sum_f = 0;
    for (std::size_t i = 0; i < e; ++i) sum_e += b[i];
    for (std::size_t i = e; i < part.c_end; ++i) sum_f += b[i];
    Balance imbalance = sum_e > sum_f ? sum_e - sum_f : sum_f - sum_e;
    Balance boundary = std::max(b[e - 1], b[e]);
    REQUIRE(imbalance <= boundary);

    GiniBundle bundle = compute_bundle(dist);
    if (e == 1) REQUIRE(bundle.g_e == 0.0);
  }
}

TEST_CASE("input order never changes the bundle") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<std::size_t> size(4, 200);
  for (int trial = 0; trial < 50; ++trial) {
    auto balances = random_balances(rng, size(rng));
    auto shuffled = balances;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    GiniBundle a = compute_bundle(SortedDistribution::from_balances(std::move(balances)));
    GiniBundle bshuf = compute_bundle(SortedDistribution::from_balances(std::move(shuffled)));
    CHECK(a.g_all == bshuf.g_all);
    CHECK(a.g_c == bshuf.g_c);
    CHECK(a.g_d == bshuf.g_d);
    CHECK(a.g_e == bshuf.g_e);
    CHECK(a.g_f == bshuf.g_f);
  }
}
