#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "neural/attention.hpp"
#include "neural/graphs.hpp"
#include "neural/pruning.hpp"

namespace neural {

// Text formats exchanged between CLI stages.

/// "index,salience" header, one row per patch, values printed with %.17g.
std::string salience_to_csv(const SalienceVector& salience);
SalienceVector salience_from_csv(std::string_view text);

/// {"total": N, "policy": "top_k"|"threshold", "value": k|tau,
///  "compression": r, "retained": [...]}
std::string pruned_to_json(const PrunedSet& pruned);
PrunedSet pruned_from_json(std::string_view text);

/// {"dim": D, "bridge": [v, t], "nodes": [{"modality", "origin", "feature"}],
///  "edges": [[a, b], ...]}
std::string graph_to_json(const UnifiedGraph& graph);
UnifiedGraph graph_from_json(std::string_view text);

/// "graph,label" listing; graph paths are relative to the listing's directory.
struct DatasetEntry {
  std::string graph;
  int label = 0;
};
std::string dataset_to_csv(const std::vector<DatasetEntry>& entries);
std::vector<DatasetEntry> dataset_from_csv(std::string_view text);

}  // namespace neural
