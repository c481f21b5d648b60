#include "neural/formats.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "neural/error.hpp"

namespace neural {

namespace {

std::vector<std::string> csv_lines(std::string_view text, std::string_view header) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != header) {
    fail(ErrorCode::MalformedDocument, "expected CSV header \"" + std::string(header) + "\"");
  }
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  return rows;
}

std::pair<std::string, std::string> split_pair(const std::string& row) {
  const auto comma = row.find(',');
  if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) {
    fail(ErrorCode::MalformedDocument, "expected two columns in \"" + row + "\"");
  }
  return {row.substr(0, comma), row.substr(comma + 1)};
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::MalformedDocument, "not a number: \"" + s + "\"");
  }
}

template <class Json>
Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedDocument, e.what());
  }
}

}  // namespace

std::string salience_to_csv(const SalienceVector& salience) {
  std::string out = "index,salience\n";
  char buf[64];
  for (std::size_t i = 0; i < salience.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, salience.scores[i]);
    out += buf;
  }
  return out;
}

SalienceVector salience_from_csv(std::string_view text) {
  SalienceVector s;
  for (const auto& row : csv_lines(text, "index,salience")) {
    const auto [index, value] = split_pair(row);
    if (parse_double(index) != static_cast<double>(s.scores.size())) {
      fail(ErrorCode::MalformedDocument, "salience rows must be indexed 0, 1, 2, ...");
    }
    s.scores.push_back(parse_double(value));
  }
  return s;
}

std::string pruned_to_json(const PrunedSet& pruned) {
  nlohmann::ordered_json doc;
  doc["total"] = pruned.total;
  if (const auto* t = std::get_if<ThresholdPolicy>(&pruned.policy)) {
    doc["policy"] = "threshold";
    doc["value"] = t->tau;
  } else {
    doc["policy"] = "top_k";
    doc["value"] = std::get<TopKPolicy>(pruned.policy).fraction;
  }
  doc["compression"] = compression_ratio(pruned);
  doc["retained"] = pruned.retained;
  return doc.dump() + "\n";
}

PrunedSet pruned_from_json(std::string_view text) {
  const auto doc = parse_json<nlohmann::json>(text);
  try {
    PrunedSet p;
    p.total = doc.at("total").get<std::size_t>();
    const auto policy = doc.at("policy").get<std::string>();
    const auto value = doc.at("value").get<double>();
    if (policy == "threshold") {
      p.policy = ThresholdPolicy{value};
    } else if (policy == "top_k") {
      p.policy = TopKPolicy{value};
    } else {
      fail(ErrorCode::MalformedDocument, "unknown pruning policy \"" + policy + "\"");
    }
    p.retained = doc.at("retained").get<std::vector<std::uint32_t>>();
    for (std::size_t i = 0; i < p.retained.size(); ++i) {
      if (p.retained[i] >= p.total || (i > 0 && p.retained[i] <= p.retained[i - 1])) {
        fail(ErrorCode::MalformedDocument, "retained indices must increase and stay below total");
      }
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedDocument, e.what());
  }
}

std::string graph_to_json(const UnifiedGraph& graph) {
  nlohmann::ordered_json doc;
  doc["dim"] = graph.dim;
  doc["bridge"] = {graph.bridge.visual, graph.bridge.text};
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : graph.nodes) {
    doc["nodes"].push_back({{"modality", n.modality == Modality::Visual ? "visual" : "text"},
                            {"origin", n.origin},
                            {"feature", n.feature}});
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : graph.edges) doc["edges"].push_back({e.a, e.b});
  return doc.dump() + "\n";
}

UnifiedGraph graph_from_json(std::string_view text) {
  const auto doc = parse_json<nlohmann::json>(text);
  UnifiedGraph g;
  try {
    g.dim = doc.at("dim").get<std::size_t>();
    const auto bridge = doc.at("bridge").get<std::vector<std::uint32_t>>();
    if (bridge.size() != 2) fail(ErrorCode::MalformedDocument, "bridge needs two endpoints");
    g.bridge = Bridge{bridge[0], bridge[1]};
    for (const auto& n : doc.at("nodes")) {
      const auto modality = n.at("modality").get<std::string>();
      if (modality != "visual" && modality != "text") {
        fail(ErrorCode::MalformedDocument, "unknown modality \"" + modality + "\"");
      }
      g.nodes.push_back(UnifiedNode{modality == "visual" ? Modality::Visual : Modality::Text,
                                    n.at("origin").get<std::uint32_t>(),
                                    n.at("feature").get<std::vector<double>>()});
    }
    for (const auto& e : doc.at("edges")) {
      const auto ends = e.get<std::vector<std::uint32_t>>();
      if (ends.size() != 2) fail(ErrorCode::MalformedDocument, "edge needs two endpoints");
      g.edges.push_back(Edge{ends[0], ends[1]});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedDocument, e.what());
  }
  validate(g);
  return g;
}

std::string dataset_to_csv(const std::vector<DatasetEntry>& entries) {
  std::string out = "graph,label\n";
  for (const auto& e : entries) out += e.graph + "," + std::to_string(e.label) + "\n";
  return out;
}

std::vector<DatasetEntry> dataset_from_csv(std::string_view text) {
  std::vector<DatasetEntry> out;
  for (const auto& row : csv_lines(text, "graph,label")) {
    const auto [graph, label] = split_pair(row);
    if (label != "0" && label != "1") {
      fail(ErrorCode::MalformedDocument, "label must be 0 or 1 in \"" + row + "\"");
    }
    out.push_back(DatasetEntry{graph, label == "1" ? 1 : 0});
  }
  return out;
}

}  // namespace neural
