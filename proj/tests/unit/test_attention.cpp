#include <doctest.h>

#include <cmath>
#include <numeric>

#include "neural/attention.hpp"
#include "neural/rng.hpp"
#include "test_util.hpp"

using namespace neural;

namespace {

Bytes attn_bytes(std::uint32_t m, std::uint32_t n, const std::vector<float>& w,
                 const char* magic = "ATTN", std::uint16_t version = 1) {
  ByteWriter out;
  out.put_bytes(magic);
  out.put_u16(version);
  out.put_u32(m);
  out.put_u32(n);
  for (float x : w) out.put_f32(x);
  return std::move(out).take();
}

}  // namespace

TEST_CASE("load_attention") {
  const auto a = load_attention(attn_bytes(2, 3, {0.5f, 0.3f, 0.2f, 0.1f, 0.1f, 0.8f}));
  CHECK(a.num_tokens() == 2);
  CHECK(a.num_patches() == 3);
  CHECK(a.row(1)[2] == doctest::Approx(0.8));

  CHECK(code_of([] { load_attention(attn_bytes(1, 1, {1.0f}, "ATTX")); }) == ErrorCode::BadMagic);
  CHECK(code_of([] { load_attention(attn_bytes(1, 1, {1.0f}, "ATTN", 2)); }) ==
        ErrorCode::UnsupportedVersion);
  CHECK(code_of([] { load_attention(attn_bytes(2, 2, {0.5f, 0.5f, 1.0f})); }) ==
        ErrorCode::Truncated);
  CHECK(code_of([] { load_attention(attn_bytes(1, 2, {1.2f, -0.2f})); }) ==
        ErrorCode::NegativeWeight);
  CHECK(code_of([] { load_attention(attn_bytes(1, 2, {0.9f, 0.0f})); }) ==
        ErrorCode::RowNotNormalized);
  CHECK(code_of([] { load_attention(attn_bytes(1, 2, {NAN, 1.0f})); }) ==
        ErrorCode::NonFiniteValue);
  auto trailing = attn_bytes(1, 1, {1.0f});
  trailing.push_back(0);
  CHECK(code_of([&] { load_attention(trailing); }) == ErrorCode::TrailingBytes);
  CHECK(code_of([] { load_attention(Bytes{'A', 'T'}); }) == ErrorCode::BadMagic);

  try {
    load_attention(attn_bytes(2, 2, {0.5f, 0.5f, 0.6f, 0.3f}));
    FAIL("expected RowNotNormalized");
  } catch (const Error& e) {
    CHECK(e.detail().find("row 1") != std::string::npos);
    CHECK(e.detail().find("0.9") != std::string::npos);
  }
}

TEST_CASE("row tolerance boundary is 1e-4") {
  CHECK_NOTHROW(AttentionMatrix(1, 2, {0.5, 0.5 + 0.9e-4}));
  CHECK(code_of([] { AttentionMatrix(1, 2, {0.5, 0.5 + 1.1e-4}); }) == ErrorCode::RowNotNormalized);
}

TEST_CASE("save/load preserves the matrix at float32 precision") {
  const auto a = synth_attention(5, 7, 11, 0.3);
  const auto bytes = save_attention(a);
  CHECK(bytes.size() == 14 + 4 * 7 * 11);
  const auto b = load_attention(bytes);
  for (std::size_t i = 0; i < a.weights().size(); ++i) {
    CHECK(b.weights()[i] == static_cast<double>(static_cast<float>(a.weights()[i])));
  }
  CHECK(save_attention(b) == bytes);
}

TEST_CASE("aggregate_salience examples") {
  const AttentionMatrix a(2, 3, {0.5, 0.3, 0.2, 0.1, 0.1, 0.8});
  const auto s = aggregate_salience(a);
  REQUIRE(s.size() == 3);
  CHECK(s.scores[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(s.scores[1] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(s.scores[2] == doctest::Approx(1.0).epsilon(1e-15));

  SUBCASE("uniform rows give M/N everywhere") {
    for (std::size_t m : {1u, 3u, 8u}) {
      const std::size_t n = 4;
      const auto u = aggregate_salience(AttentionMatrix(m, n, std::vector<double>(m * n, 0.25)));
      for (double x : u.scores) CHECK(x == static_cast<double>(m) / n);
    }
  }
  SUBCASE("one-hot row") {
    std::vector<double> w(10, 0.0);
    w[7] = 1.0;
    const auto o = aggregate_salience(AttentionMatrix(1, 10, w));
    for (std::size_t i = 0; i < 10; ++i) CHECK(o.scores[i] == (i == 7 ? 1.0 : 0.0));
  }
}

TEST_CASE("aggregate_salience is linear over row concatenation") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = synth_attention(seed, 3 + seed % 4, 17, 0.5);
    const auto b = synth_attention(seed + 100, 2 + seed % 3, 17, 2.0);
    std::vector<double> joined(a.weights().begin(), a.weights().end());
    joined.insert(joined.end(), b.weights().begin(), b.weights().end());
    const auto sum = aggregate_salience(
        AttentionMatrix(a.num_tokens() + b.num_tokens(), 17, std::move(joined)));
    const auto sa = aggregate_salience(a);
    const auto sb = aggregate_salience(b);
    for (std::size_t i = 0; i < 17; ++i) CHECK(std::abs(sum.scores[i] - (sa.scores[i] + sb.scores[i])) <= 1e-12);
    const double mass = std::accumulate(sum.scores.begin(), sum.scores.end(), 0.0);
    CHECK(std::abs(mass - static_cast<double>(a.num_tokens() + b.num_tokens())) <= 1e-3);
  }
}

TEST_CASE("synth_attention") {
  SUBCASE("rows normalized") {
    for (double c : {0.01, 0.05, 1.0, 50.0}) {
      const auto a = synth_attention(42, 9, 31, c);
      for (std::size_t j = 0; j < a.num_tokens(); ++j) {
        const auto row = a.row(j);
        CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <= 1e-9);
      }
    }
  }
  SUBCASE("deterministic per seed") {
    CHECK(synth_attention(7, 5, 13, 0.2) == synth_attention(7, 5, 13, 0.2));
    CHECK_FALSE(synth_attention(7, 5, 13, 0.2) == synth_attention(8, 5, 13, 0.2));
  }
  SUBCASE("invalid concentration") {
    CHECK(code_of([] { synth_attention(1, 2, 3, 0.0); }) == ErrorCode::InvalidConcentration);
    CHECK(code_of([] { synth_attention(1, 2, 3, -1.0); }) == ErrorCode::InvalidConcentration);
    CHECK(code_of([] { synth_attention(1, 0, 3, 1.0); }) == ErrorCode::InvalidArgument);
  }
  SUBCASE("concentration 0.05 over 870 patches: top 20 hold the majority") {
    const auto s = rank_curve(aggregate_salience(synth_attention(2024, 60, 870, 0.05)));
    const double total = std::accumulate(s.begin(), s.end(), 0.0);
    const double top = std::accumulate(s.begin(), s.begin() + 20, 0.0);
    CHECK(top / total > 0.5);
  }
  SUBCASE("smaller concentration concentrates mass") {
    auto top_share = [](double c) {
      double share = 0.0;
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = rank_curve(aggregate_salience(synth_attention(seed, 20, 200, c)));
        share += std::accumulate(s.begin(), s.begin() + 5, 0.0) /
                 std::accumulate(s.begin(), s.end(), 0.0);
      }
      return share;
    };
    CHECK(top_share(0.05) > top_share(0.5));
    CHECK(top_share(0.5) > top_share(5.0));
  }
}

TEST_CASE("rank curve is non-increasing") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = rank_curve(aggregate_salience(synth_attention(seed, 8, 50, 0.3)));
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] <= c[i - 1]);
  }
}
