#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neural/patch_grid.hpp"
#include "neural/pruning.hpp"

namespace neural {

inline constexpr std::size_t kDefaultEntityDim = 64;

/// Undirected edge stored with a < b.
struct Edge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  static Edge make(std::uint32_t u, std::uint32_t v) { return u < v ? Edge{u, v} : Edge{v, u}; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct VisualNode {
  std::uint32_t patch_index = 0;
  std::uint32_t grid_row = 0;
  std::uint32_t grid_col = 0;
  FeatureVector feature;

  friend bool operator==(const VisualNode&, const VisualNode&) = default;
};

/// G1: retained patches joined by 8-neighbour grid adjacency.
struct VisualGraph {
  std::vector<VisualNode> nodes;  // patch_index strictly increasing
  std::vector<Edge> edges;        // sorted, positions into nodes

  std::size_t size() const noexcept { return nodes.size(); }
};

struct Entity {
  std::string id;
  std::string text;
  std::string label;
  FeatureVector feature;

  friend bool operator==(const Entity&, const Entity&) = default;
};

struct Relation {
  Edge edge;  // positions into KnowledgeGraph::nodes
  std::string label;

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// G2: report entities and their (undirected) relations.
struct KnowledgeGraph {
  std::vector<Entity> nodes;
  std::vector<Relation> edges;  // sorted by edge, one per endpoint pair

  std::size_t size() const noexcept { return nodes.size(); }
  friend bool operator==(const KnowledgeGraph&, const KnowledgeGraph&) = default;
};

enum class Modality : std::uint8_t { Visual = 0, Text = 1 };

struct UnifiedNode {
  Modality modality = Modality::Visual;
  std::uint32_t origin = 0;  // patch index (visual) or entity position (text)
  FeatureVector feature;

  friend bool operator==(const UnifiedNode&, const UnifiedNode&) = default;
};

struct Bridge {
  std::uint32_t visual = 0;
  std::uint32_t text = 0;

  friend bool operator==(const Bridge&, const Bridge&) = default;
};

struct UnifiedGraph {
  std::size_t dim = 0;
  std::vector<UnifiedNode> nodes;
  std::vector<Edge> edges;  // canonical: a < b, sorted, includes the bridge
  Bridge bridge;

  std::size_t size() const noexcept { return nodes.size(); }
  friend bool operator==(const UnifiedGraph&, const UnifiedGraph&) = default;
};

VisualGraph build_visual_graph(const PatchGrid& grid, const PrunedSet& pruned);

/// Parses {"entities":[{id,text,label}], "relations":[{src,dst,label}]}.
/// Relations are undirected; repeats of an endpoint pair keep the first label.
KnowledgeGraph parse_knowledge_graph(std::string_view json_text,
                                     std::size_t embedding_dim = kDefaultEntityDim);
std::string knowledge_graph_to_json(const KnowledgeGraph& kg);

/// Builds a KnowledgeGraph from in-memory entity/relation lists with the
/// same validation as the JSON parser. Relations name entity ids.
struct RelationSpec {
  std::string src;
  std::string dst;
  std::string label;
};
KnowledgeGraph make_knowledge_graph(std::vector<Entity> entities,
                                    const std::vector<RelationSpec>& relations,
                                    std::size_t embedding_dim = kDefaultEntityDim);

/// Hashed bag of character trigrams of lowercase(text + "§" + label),
/// FNV-1a 64 over each trigram's UTF-8 bytes, bucket = hash mod dim, then
/// L2-normalised. Inputs with fewer than three characters map to e_0.
FeatureVector entity_embedding(std::string_view text, std::string_view label,
                               std::size_t dim);

/// Exact unnormalised betweenness (Brandes), each unordered pair counted once.
std::vector<double> betweenness_centrality(std::size_t node_count, std::span<const Edge> edges);
std::vector<double> betweenness_centrality(const VisualGraph& graph);
std::vector<double> betweenness_centrality(const KnowledgeGraph& graph);
std::vector<double> betweenness_centrality(const UnifiedGraph& graph);

/// Relative gap below which two betweenness scores count as tied; absorbs
/// floating-point accumulation order in Brandes.
inline constexpr double kTieTolerance = 1e-9;

/// Index of the largest score; the lowest index wins ties (within
/// kTieTolerance).
std::size_t argmax_lowest(std::span<const double> scores);

/// Copies the leading min(dim, len) entries and zero-fills the rest.
FeatureVector fit_dim(const FeatureVector& feature, std::size_t dim);

/// Visual nodes first, then text nodes, joined by one bridge between the
/// betweenness argmax of each side.
UnifiedGraph fuse(const VisualGraph& g1, const KnowledgeGraph& g2, std::size_t dim);

/// Checks every UnifiedGraph invariant: features of length dim and finite,
/// canonical sorted edges in range, exactly one cross-modal edge equal to the
/// bridge. Throws the matching ErrorCode.
void validate(const UnifiedGraph& graph);

}  // namespace neural
