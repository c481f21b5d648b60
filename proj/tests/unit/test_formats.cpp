#include <doctest.h>

#include "neural/formats.hpp"
#include "test_util.hpp"

using namespace neural;

TEST_CASE("salience csv") {
  const SalienceVector s{{0.1, 1.0 / 3.0, 2.5e-17, 7.0}};
  const auto text = salience_to_csv(s);
  CHECK(text.rfind("index,salience\n0,", 0) == 0);
  CHECK(salience_from_csv(text).scores == s.scores);
  CHECK(code_of([] { salience_from_csv("index,salience\n0,abc\n"); }) == ErrorCode::MalformedDocument);
  CHECK(code_of([] { salience_from_csv("idx,s\n0,1\n"); }) == ErrorCode::MalformedDocument);
  CHECK(code_of([] { salience_from_csv("index,salience\n1,0.5\n"); }) == ErrorCode::MalformedDocument);
}

TEST_CASE("pruned json") {
  const PrunedSet a{{0, 5, 9}, 20, TopKPolicy{0.15}};
  const PrunedSet b{{}, 4, ThresholdPolicy{0.5}};
  CHECK(pruned_from_json(pruned_to_json(a)) == a);
  CHECK(pruned_from_json(pruned_to_json(b)) == b);
  CHECK(pruned_to_json(a).find("\"top_k\"") != std::string::npos);
  CHECK(code_of([] { pruned_from_json("{\"total\":3}"); }) == ErrorCode::MalformedDocument);
  CHECK(code_of([] {
          pruned_from_json(R"({"total":3,"policy":"top_k","value":0.5,"compression":0,"retained":[4]})");
        }) == ErrorCode::MalformedDocument);
  CHECK(code_of([] {
          pruned_from_json(R"({"total":3,"policy":"median","value":0.5,"compression":0,"retained":[1]})");
        }) == ErrorCode::MalformedDocument);
}

TEST_CASE("graph json") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_unified_graph(rng, 1 + rng.below(8), 1 + rng.below(4), 1 + rng.below(10));
    CHECK(graph_from_json(graph_to_json(g)) == g);
  }
  CHECK(code_of([] { graph_from_json("not json"); }) == ErrorCode::MalformedDocument);
  auto g = random_unified_graph(rng, 3, 2, 2);
  std::erase(g.edges, Edge::make(g.bridge.visual, g.bridge.text));
  CHECK(code_of([&] { graph_from_json(graph_to_json(g)); }) == ErrorCode::BridgeMissing);
}

TEST_CASE("dataset csv") {
  const std::vector<DatasetEntry> rows{{"graphs/a.nrlg", 1}, {"graphs/b.nrlg", 0}};
  const auto text = dataset_to_csv(rows);
  CHECK(text == "graph,label\ngraphs/a.nrlg,1\ngraphs/b.nrlg,0\n");
  const auto back = dataset_from_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].graph == "graphs/a.nrlg");
  CHECK(back[1].label == 0);
  CHECK(code_of([] { dataset_from_csv("graph,label\na.nrlg,3\n"); }) == ErrorCode::MalformedDocument);
  CHECK(code_of([] { dataset_from_csv("path\n"); }) == ErrorCode::MalformedDocument);
}
