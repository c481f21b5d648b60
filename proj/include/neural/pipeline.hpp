#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "neural/attention.hpp"
#include "neural/graphs.hpp"
#include "neural/patch_grid.hpp"
#include "neural/pruning.hpp"

namespace neural {

inline constexpr std::size_t kDefaultFeatureDim = kPatchFeatureDim;

/// One imaging study: the image, its token-by-patch attention, the report
/// knowledge graph and the binary label. `planted` lists the patches of a
/// synthetic lesion when the study came from the fixture generator.
struct Study {
  GrayImage image;
  AttentionMatrix attention;
  KnowledgeGraph kg;
  int label = 0;
  std::vector<std::uint32_t> planted;

  friend bool operator==(const Study&, const Study&) = default;
};

struct StudyGraph {
  PrunedSet pruned;
  UnifiedGraph graph;
};

/// tile -> salience -> prune -> G1 -> fuse with the study's knowledge graph.
StudyGraph build_study_graph(const Study& study, const PruningPolicy& policy,
                             std::size_t patch_size, std::size_t feature_dim);

/// Same pipeline with a caller-supplied knowledge graph (image-only ablation).
StudyGraph build_study_graph(const Study& study, const KnowledgeGraph& kg,
                             const PruningPolicy& policy, std::size_t patch_size,
                             std::size_t feature_dim);

/// Single placeholder entity standing in for an absent report.
KnowledgeGraph dummy_knowledge_graph(std::size_t embedding_dim = kDefaultEntityDim);

}  // namespace neural
