#include "neural/pipeline.hpp"

#include <string>

#include "neural/error.hpp"

namespace neural {

StudyGraph build_study_graph(const Study& study, const KnowledgeGraph& kg,
                             const PruningPolicy& policy, std::size_t patch_size,
                             std::size_t feature_dim) {
  const auto grid = tile_image(study.image, patch_size);
  if (grid.size() != study.attention.num_patches()) {
    fail(ErrorCode::DimensionMismatch,
         "attention covers " + std::to_string(study.attention.num_patches()) +
             " patches but the image tiles into " + std::to_string(grid.size()));
  }
  StudyGraph out;
  out.pruned = prune(aggregate_salience(study.attention), policy);
  out.graph = fuse(build_visual_graph(grid, out.pruned), kg, feature_dim);
  return out;
}

StudyGraph build_study_graph(const Study& study, const PruningPolicy& policy,
                             std::size_t patch_size, std::size_t feature_dim) {
  return build_study_graph(study, study.kg, policy, patch_size, feature_dim);
}

KnowledgeGraph dummy_knowledge_graph(std::size_t embedding_dim) {
  return make_knowledge_graph({Entity{"none", "none", "none", {}}}, {}, embedding_dim);
}

}  // namespace neural
