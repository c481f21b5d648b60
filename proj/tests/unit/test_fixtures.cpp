#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "neural/fixtures.hpp"
#include "test_util.hpp"

using namespace neural;

namespace {

constexpr std::uint64_t kGoldenFingerprint = 8610424213375916986ULL;

std::filesystem::path scratch_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("positive count is exact") {
  for (auto [count, rate] : {std::pair<std::size_t, double>{1000, 0.15}, {40, 0.15}, {10, 0.5}, {33, 0.1}}) {
    const auto corpus = generate_corpus(3, count, 32, 8, rate);
    std::size_t positives = 0;
    for (const auto& s : corpus) positives += s.label;
    CHECK(positives == static_cast<std::size_t>(std::llround(count * rate)));
  }
}

TEST_CASE("corpus is deterministic per seed") {
  const auto a = generate_corpus(9, 20, 48, 8, 0.3);
  CHECK(a == generate_corpus(9, 20, 48, 8, 0.3));
  CHECK(corpus_fingerprint(a) != corpus_fingerprint(generate_corpus(10, 20, 48, 8, 0.3)));
}

TEST_CASE("golden corpus fingerprint") {
  const auto corpus = generate_corpus(7, 30, 96, 8, 0.15);
  const auto fp = corpus_fingerprint(corpus);
  INFO("fingerprint 0x" << std::hex << fp);
  CHECK(fp == kGoldenFingerprint);
}

TEST_CASE("studies carry the planted signal") {
  const auto corpus = generate_corpus(5, 200, 96, 8, 0.15);
  double recovered = 0.0;
  std::size_t positives = 0;
  for (const auto& s : corpus) {
    CHECK(s.image.height() == 96);
    CHECK(s.attention.num_patches() == 144);
    bool has_pneumonia = false;
    for (const auto& e : s.kg.nodes) has_pneumonia |= e.text == "pneumonia";
    CHECK(has_pneumonia == (s.label == 1));
    if (s.label == 0) {
      CHECK(s.planted.empty());
      CHECK(s.kg.size() >= 2);
      CHECK(s.kg.size() <= 5);
      continue;
    }
    CHECK(s.planted.size() == 4);
    CHECK(s.kg.size() >= 3);
    CHECK(s.kg.size() <= 5);
    const auto kept = prune_topk(aggregate_salience(s.attention), 0.05).retained;
    std::size_t hit = 0;
    for (auto p : s.planted) hit += std::binary_search(kept.begin(), kept.end(), p);
    recovered += static_cast<double>(hit) / s.planted.size();
    ++positives;
  }
  REQUIRE(positives == 30);
  CHECK(recovered / positives >= 0.8);
}

TEST_CASE("write and read back") {
  const auto corpus = generate_corpus(4, 12, 64, 8, 0.25);
  const auto dir = scratch_dir("neural_fixture_roundtrip");
  write_corpus(dir, corpus);
  CHECK(std::filesystem::exists(dir / "labels.csv"));
  CHECK(std::filesystem::exists(dir / (study_name(11) + ".kg.json")));
  const auto back = read_corpus(dir);
  REQUIRE(back.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(back[i].image == corpus[i].image);
    CHECK(back[i].attention == corpus[i].attention);
    CHECK(back[i].kg == corpus[i].kg);
    CHECK(back[i].label == corpus[i].label);
  }
  CHECK(corpus_fingerprint(back) == corpus_fingerprint(corpus));
  std::filesystem::remove_all(dir);
}

TEST_CASE("generator errors") {
  CHECK(code_of([] { generate_corpus(1, 20, 32, 8, 0.0); }) == ErrorCode::InvalidRate);
  CHECK(code_of([] { generate_corpus(1, 20, 32, 8, 1.0); }) == ErrorCode::InvalidRate);
  CHECK(code_of([] { generate_corpus(1, 9, 32, 8, 0.5); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { generate_corpus(1, 20, 30, 8, 0.5); }) == ErrorCode::NonDivisibleDimensions);
  CHECK(study_name(3) == "study_00003");
}
