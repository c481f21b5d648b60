#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "neural/pruning.hpp"
#include "neural/rng.hpp"
#include "test_util.hpp"

using namespace neural;

namespace {

SalienceVector random_salience(std::uint64_t seed, std::size_t n, bool with_ties) {
  SplitMix64 rng(seed);
  SalienceVector s;
  for (std::size_t i = 0; i < n; ++i) {
    s.scores.push_back(with_ties ? static_cast<double>(rng.below(4)) : rng.uniform());
  }
  return s;
}

double mass(const SalienceVector& s, const std::vector<std::uint32_t>& idx) {
  double m = 0.0;
  for (auto i : idx) m += s.scores[i];
  return m;
}

}  // namespace

TEST_CASE("threshold examples") {
  const SalienceVector s{{0.1, 0.5, 0.5, 0.9}};
  CHECK(prune_threshold(s, 0.5).retained == std::vector<std::uint32_t>{3});
  CHECK(prune_threshold(s, 0.49).retained == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(prune_threshold(s, 1.0).retained.empty());
  CHECK(prune_threshold(s, -1.0).retained.size() == 4);
  CHECK(prune_threshold(s, 0.5).total == 4);
}

TEST_CASE("top-k examples") {
  const SalienceVector s{{0.1, 0.5, 0.5, 0.9}};
  CHECK(prune_topk(s, 0.5).retained == std::vector<std::uint32_t>{1, 3});
  CHECK(prune_topk(s, 0.75).retained == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(prune_topk(s, 0.01).retained == std::vector<std::uint32_t>{3});
  CHECK(prune_topk(s, 1.0).retained == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(code_of([&] { prune_topk(s, 0.0); }) == ErrorCode::InvalidFraction);
  CHECK(code_of([&] { prune_topk(s, 1.01); }) == ErrorCode::InvalidFraction);
  CHECK(code_of([&] { prune_topk(s, -0.5); }) == ErrorCode::InvalidFraction);
  CHECK(code_of([&] { prune_topk(s, NAN); }) == ErrorCode::InvalidFraction);
}

TEST_CASE("topk_count") {
  CHECK(topk_count(870, 0.023) == 20);
  CHECK(topk_count(100, 0.29) == 29);
  CHECK(topk_count(100, 0.001) == 1);
  CHECK(topk_count(144, 1.0) == 144);
  CHECK(topk_count(144, 0.1) == 14);
}

TEST_CASE("threshold results shrink as tau grows") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = random_salience(seed, 40, seed % 2 == 0);
    std::vector<std::uint32_t> prev = prune_threshold(s, -1.0).retained;
    for (double tau = 0.0; tau <= 4.0; tau += 0.125) {
      const auto cur = prune_threshold(s, tau).retained;
      CHECK(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
      prev = cur;
    }
  }
}

TEST_CASE("top-k results are nested in k") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = random_salience(seed, 57, seed % 2 == 1);
    std::vector<std::uint32_t> prev;
    for (double k = 0.01; k <= 1.0; k += 0.01) {
      const auto cur = prune_topk(s, k).retained;
      CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      CHECK(std::is_sorted(cur.begin(), cur.end()));
      prev = cur;
    }
  }
}

TEST_CASE("top-k maximizes retained mass over all subsets of its size") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 1 + seed % 12;
    const auto s = random_salience(seed * 31 + 5, n, seed % 3 == 0);
    for (double k : {0.1, 0.25, 0.5, 0.8, 1.0}) {
      const auto got = prune_topk(s, k).retained;
      const std::size_t want = topk_count(n, k);
      REQUIRE(got.size() == want);
      double best = -1.0;
      std::uint32_t best_mask = 0;
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != want) continue;
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask & (1u << i)) m += s.scores[i];
        }
        // Enumerating masks in increasing order, among equal masses prefer the
        // lexicographically smallest index set.
        if (m > best) {
          best = m;
          best_mask = mask;
        } else if (m == best) {
          auto lex_less = [n](std::uint32_t a, std::uint32_t b) {
            for (std::size_t i = 0; i < n; ++i) {
              const bool ia = a & (1u << i), ib = b & (1u << i);
              if (ia != ib) return ia;
            }
            return false;
          };
          if (lex_less(mask, best_mask)) best_mask = mask;
        }
      }
      CHECK(mass(s, got) == doctest::Approx(best).epsilon(1e-12));
      std::vector<std::uint32_t> oracle;
      for (std::uint32_t i = 0; i < n; ++i) {
        if (best_mask & (1u << i)) oracle.push_back(i);
      }
      CHECK(got == oracle);
    }
  }
}

TEST_CASE("compression ratio") {
  const SalienceVector s{std::vector<double>(870, 1.0)};
  CHECK(compression_ratio(prune_topk(s, 0.023)) == doctest::Approx(1.0 - 20.0 / 870.0));
  CHECK(compression_ratio(prune_topk(s, 1.0)) == 0.0);
  CHECK(compression_ratio(prune_threshold(s, 2.0)) == 1.0);
  const SalienceVector t{{0.2, 0.7, 0.1, 0.4}};
  CHECK(compression_ratio(prune_threshold(t, 0.3)) == 0.5);
}

TEST_CASE("prune dispatches on policy") {
  const auto s = random_salience(3, 30, false);
  CHECK(prune(s, TopKPolicy{0.2}) == prune_topk(s, 0.2));
  CHECK(prune(s, ThresholdPolicy{0.4}) == prune_threshold(s, 0.4));
  CHECK(std::get<TopKPolicy>(prune_topk(s, 0.2).policy).fraction == 0.2);
}
