#include "neural/graphs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "neural/bytes.hpp"
#include "neural/error.hpp"

namespace neural {

VisualGraph build_visual_graph(const PatchGrid& grid, const PrunedSet& pruned) {
  if (pruned.retained.empty()) fail(ErrorCode::EmptyPrunedSet, "no patches retained");
  if (pruned.total != grid.size()) {
    fail(ErrorCode::DimensionMismatch, "pruned set covers " + std::to_string(pruned.total) +
                                           " patches, grid has " +
                                           std::to_string(grid.size()));
  }
  VisualGraph g;
  g.nodes.reserve(pruned.retained.size());
  // cell -> node position, -1 when the patch was pruned
  std::vector<std::int64_t> slot(grid.size(), -1);
  std::int64_t previous = -1;
  for (auto idx : pruned.retained) {
    if (idx >= grid.size() || static_cast<std::int64_t>(idx) <= previous) {
      fail(ErrorCode::InvalidArgument, "retained indices must be increasing and < N");
    }
    previous = idx;
    const auto& p = grid.patches[idx];
    slot[idx] = static_cast<std::int64_t>(g.nodes.size());
    g.nodes.push_back(VisualNode{p.index, p.grid_row, p.grid_col, p.feature});
  }
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    const auto r = static_cast<std::int64_t>(g.nodes[u].grid_row);
    const auto c = static_cast<std::int64_t>(g.nodes[u].grid_col);
    for (std::int64_t dr = -1; dr <= 1; ++dr) {
      for (std::int64_t dc = -1; dc <= 1; ++dc) {
        const std::int64_t rr = r + dr;
        const std::int64_t cc = c + dc;
        if ((dr == 0 && dc == 0) || rr < 0 || cc < 0 ||
            rr >= static_cast<std::int64_t>(grid.rows) ||
            cc >= static_cast<std::int64_t>(grid.cols)) {
          continue;
        }
        const auto v = slot[static_cast<std::size_t>(rr) * grid.cols + static_cast<std::size_t>(cc)];
        if (v > static_cast<std::int64_t>(u)) {
          g.edges.push_back(Edge{static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
        }
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

namespace {

std::vector<std::string> utf8_chars(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto lead = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (lead >= 0xF0) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = 3;
    } else if (lead >= 0xC0) {
      len = 2;
    }
    len = std::min(len, s.size() - i);
    std::string ch(s.substr(i, len));
    if (len == 1 && lead < 0x80) {
      ch[0] = static_cast<char>(std::tolower(lead));
    }
    out.push_back(std::move(ch));
    i += len;
  }
  return out;
}

}  // namespace

FeatureVector entity_embedding(std::string_view text, std::string_view label,
                               std::size_t dim) {
  if (dim < 8) fail(ErrorCode::InvalidArgument, "embedding dim must be >= 8");
  std::string joined(text);
  joined += "\xC2\xA7";  // U+00A7 SECTION SIGN
  joined += label;
  const auto chars = utf8_chars(joined);

  FeatureVector v(dim, 0.0);
  if (chars.size() < 3) {
    v[0] = 1.0;
    return v;
  }
  for (std::size_t i = 0; i + 2 < chars.size(); ++i) {
    const std::string trigram = chars[i] + chars[i + 1] + chars[i + 2];
    v[fnv1a64(trigram) % dim] += 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

KnowledgeGraph make_knowledge_graph(std::vector<Entity> entities,
                                    const std::vector<RelationSpec>& relations,
                                    std::size_t embedding_dim) {
  if (entities.empty()) fail(ErrorCode::EmptyGraph, "knowledge graph has no entities");
  std::unordered_map<std::string, std::uint32_t> position;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    auto& e = entities[i];
    if (!position.emplace(e.id, static_cast<std::uint32_t>(i)).second) {
      fail(ErrorCode::DuplicateEntityId, "entity id \"" + e.id + "\" repeats");
    }
    e.feature = entity_embedding(e.text, e.label, embedding_dim);
  }
  KnowledgeGraph kg;
  kg.nodes = std::move(entities);
  std::map<Edge, std::string> unique;
  for (const auto& r : relations) {
    const auto src = position.find(r.src);
    const auto dst = position.find(r.dst);
    if (src == position.end() || dst == position.end()) {
      fail(ErrorCode::DanglingRelation,
           "relation " + r.src + " -> " + r.dst + " names an unknown entity");
    }
    if (src->second == dst->second) {
      fail(ErrorCode::MalformedDocument, "relation on \"" + r.src + "\" is a self-loop");
    }
    unique.emplace(Edge::make(src->second, dst->second), r.label);
  }
  for (auto& [edge, label] : unique) kg.edges.push_back(Relation{edge, label});
  return kg;
}

namespace {

const nlohmann::json& required(const nlohmann::json& obj, const char* key, const char* where) {
  if (!obj.is_object()) {
    fail(ErrorCode::MalformedDocument, std::string(where) + " must be an object");
  }
  const auto it = obj.find(key);
  if (it == obj.end()) {
    fail(ErrorCode::MalformedDocument, std::string(where) + " lacks \"" + key + "\"");
  }
  return *it;
}

std::string required_string(const nlohmann::json& obj, const char* key, const char* where) {
  const auto& v = required(obj, key, where);
  if (!v.is_string()) {
    fail(ErrorCode::MalformedDocument,
         std::string(where) + " field \"" + key + "\" must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

KnowledgeGraph parse_knowledge_graph(std::string_view json_text, std::size_t embedding_dim) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::MalformedDocument, e.what());
  }
  const auto& entities = required(doc, "entities", "document");
  if (!entities.is_array()) fail(ErrorCode::MalformedDocument, "\"entities\" must be a list");
  const auto& relations = required(doc, "relations", "document");
  if (!relations.is_array()) fail(ErrorCode::MalformedDocument, "\"relations\" must be a list");

  std::vector<Entity> nodes;
  nodes.reserve(entities.size());
  for (const auto& e : entities) {
    nodes.push_back(Entity{required_string(e, "id", "entity"),
                           required_string(e, "text", "entity"),
                           required_string(e, "label", "entity"), {}});
  }
  std::vector<RelationSpec> specs;
  specs.reserve(relations.size());
  for (const auto& r : relations) {
    specs.push_back(RelationSpec{required_string(r, "src", "relation"),
                                 required_string(r, "dst", "relation"),
                                 required_string(r, "label", "relation")});
  }
  return make_knowledge_graph(std::move(nodes), specs, embedding_dim);
}

std::string knowledge_graph_to_json(const KnowledgeGraph& kg) {
  nlohmann::ordered_json doc;
  doc["entities"] = nlohmann::ordered_json::array();
  for (const auto& e : kg.nodes) {
    doc["entities"].push_back({{"id", e.id}, {"text", e.text}, {"label", e.label}});
  }
  doc["relations"] = nlohmann::ordered_json::array();
  for (const auto& r : kg.edges) {
    doc["relations"].push_back({{"src", kg.nodes[r.edge.a].id},
                                {"dst", kg.nodes[r.edge.b].id},
                                {"label", r.label}});
  }
  return doc.dump(2) + "\n";
}

std::vector<double> betweenness_centrality(std::size_t node_count, std::span<const Edge> edges) {
  std::vector<std::vector<std::uint32_t>> adj(node_count);
  for (const auto& e : edges) {
    if (e.a >= node_count || e.b >= node_count) {
      fail(ErrorCode::EdgeOutOfRange, "edge endpoint beyond node count");
    }
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());

  std::vector<double> bc(node_count, 0.0);
  std::vector<double> sigma(node_count);
  std::vector<double> delta(node_count);
  std::vector<std::int64_t> dist(node_count);
  std::vector<std::uint32_t> order;
  std::deque<std::uint32_t> queue;
  order.reserve(node_count);

  for (std::uint32_t s = 0; s < node_count; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (auto w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    // Dependencies accumulate in reverse BFS order; predecessors of w are
    // the neighbours one level closer to s.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = *it;
      for (auto v : adj[w]) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) bc[w] += delta[w];
    }
  }
  for (double& x : bc) x *= 0.5;
  return bc;
}

std::vector<double> betweenness_centrality(const VisualGraph& graph) {
  return betweenness_centrality(graph.nodes.size(), graph.edges);
}

std::vector<double> betweenness_centrality(const KnowledgeGraph& graph) {
  std::vector<Edge> edges;
  edges.reserve(graph.edges.size());
  for (const auto& r : graph.edges) edges.push_back(r.edge);
  return betweenness_centrality(graph.nodes.size(), edges);
}

std::vector<double> betweenness_centrality(const UnifiedGraph& graph) {
  return betweenness_centrality(graph.nodes.size(), graph.edges);
}

std::size_t argmax_lowest(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const double slack = kTieTolerance * std::max(1.0, std::abs(scores[best]));
    if (scores[i] > scores[best] + slack) best = i;
  }
  return best;
}

FeatureVector fit_dim(const FeatureVector& feature, std::size_t dim) {
  FeatureVector out(dim, 0.0);
  std::copy_n(feature.begin(), std::min(dim, feature.size()), out.begin());
  return out;
}

UnifiedGraph fuse(const VisualGraph& g1, const KnowledgeGraph& g2, std::size_t dim) {
  if (g1.nodes.empty()) fail(ErrorCode::EmptyModality, "visual graph has no nodes");
  if (g2.nodes.empty()) fail(ErrorCode::EmptyModality, "knowledge graph has no nodes");
  if (dim == 0) fail(ErrorCode::InvalidArgument, "feature dim must be positive");

  UnifiedGraph u;
  u.dim = dim;
  u.nodes.reserve(g1.size() + g2.size());
  for (const auto& n : g1.nodes) {
    u.nodes.push_back(UnifiedNode{Modality::Visual, n.patch_index, fit_dim(n.feature, dim)});
  }
  for (std::size_t i = 0; i < g2.nodes.size(); ++i) {
    u.nodes.push_back(UnifiedNode{Modality::Text, static_cast<std::uint32_t>(i),
                                  fit_dim(g2.nodes[i].feature, dim)});
  }
  const auto offset = static_cast<std::uint32_t>(g1.size());
  u.edges = g1.edges;
  for (const auto& r : g2.edges) u.edges.push_back(Edge{r.edge.a + offset, r.edge.b + offset});

  const auto visual_anchor = static_cast<std::uint32_t>(argmax_lowest(betweenness_centrality(g1)));
  const auto text_anchor =
      offset + static_cast<std::uint32_t>(argmax_lowest(betweenness_centrality(g2)));
  u.bridge = Bridge{visual_anchor, text_anchor};
  u.edges.push_back(Edge::make(visual_anchor, text_anchor));
  std::sort(u.edges.begin(), u.edges.end());
  return u;
}

void validate(const UnifiedGraph& graph) {
  const std::size_t n = graph.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = graph.nodes[i];
    if (node.modality != Modality::Visual && node.modality != Modality::Text) {
      fail(ErrorCode::NonCanonical, "node " + std::to_string(i) + " has an unknown modality");
    }
    if (node.feature.size() != graph.dim) {
      fail(ErrorCode::DimensionMismatch, "node " + std::to_string(i) + " feature length " +
                                             std::to_string(node.feature.size()) +
                                             " != " + std::to_string(graph.dim));
    }
    for (double x : node.feature) {
      if (!std::isfinite(x)) {
        fail(ErrorCode::NonFiniteValue, "node " + std::to_string(i) + " has a non-finite feature");
      }
    }
  }
  std::size_t cross = 0;
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    const auto& e = graph.edges[k];
    if (e.a >= n || e.b >= n) {
      fail(ErrorCode::EdgeOutOfRange, "edge " + std::to_string(k) + " (" +
                                          std::to_string(e.a) + "," + std::to_string(e.b) +
                                          ") with " + std::to_string(n) + " nodes");
    }
    if (e.a >= e.b) fail(ErrorCode::NonCanonical, "edge " + std::to_string(k) + " not (lo, hi)");
    if (k > 0 && !(graph.edges[k - 1] < e)) {
      fail(ErrorCode::NonCanonical, "edges not strictly sorted at " + std::to_string(k));
    }
    if (graph.nodes[e.a].modality != graph.nodes[e.b].modality) ++cross;
  }
  const auto& br = graph.bridge;
  if (br.visual >= n || br.text >= n) {
    fail(ErrorCode::EdgeOutOfRange, "bridge endpoint beyond node count");
  }
  if (graph.nodes[br.visual].modality != Modality::Visual ||
      graph.nodes[br.text].modality != Modality::Text ||
      !std::binary_search(graph.edges.begin(), graph.edges.end(),
                          Edge::make(br.visual, br.text))) {
    fail(ErrorCode::BridgeMissing, "bridge (" + std::to_string(br.visual) + "," +
                                       std::to_string(br.text) +
                                       ") is not a VISUAL-TEXT edge");
  }
  if (cross != 1) {
    fail(ErrorCode::NonCanonical,
         std::to_string(cross) + " cross-modal edges; exactly one bridge is allowed");
  }
}

}  // namespace neural
