#include "neural/serialization.hpp"

#include <cmath>
#include <string>

#include "neural/error.hpp"

namespace neural {

std::size_t encoded_size(std::size_t nodes, std::size_t edges, std::size_t dim) {
  return kNrlgHeaderBytes + nodes * (5 + 4 * dim) + edges * 8;
}

Bytes encode(const UnifiedGraph& graph) {
  validate(graph);
  ByteWriter out;
  out.put_bytes("NRLG");
  out.put_u16(kNrlgVersion);
  out.put_u32(static_cast<std::uint32_t>(graph.nodes.size()));
  out.put_u32(static_cast<std::uint32_t>(graph.edges.size()));
  out.put_u32(static_cast<std::uint32_t>(graph.dim));
  out.put_u32(graph.bridge.visual);
  out.put_u32(graph.bridge.text);
  for (const auto& node : graph.nodes) {
    out.put_u8(static_cast<std::uint8_t>(node.modality));
    out.put_u32(node.origin);
    for (double x : node.feature) {
      const auto narrowed = static_cast<float>(x);
      if (!std::isfinite(narrowed)) {
        fail(ErrorCode::NonFiniteValue, "feature value overflows float32");
      }
      out.put_f32(narrowed);
    }
  }
  for (const auto& e : graph.edges) {
    out.put_u32(e.a);
    out.put_u32(e.b);
  }
  return std::move(out).take();
}

UnifiedGraph decode(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  if (in.remaining() < 4 || in.take(4, "magic") != "NRLG") {
    fail(ErrorCode::BadMagic, "expected NRLG magic");
  }
  const auto version = in.u16("version");
  if (version != kNrlgVersion) {
    fail(ErrorCode::UnsupportedVersion, "NRLG version " + std::to_string(version));
  }
  const std::size_t node_count = in.u32("node count");
  const std::size_t edge_count = in.u32("edge count");
  const std::size_t dim = in.u32("feature dim");
  UnifiedGraph g;
  g.dim = dim;
  g.bridge.visual = in.u32("bridge visual endpoint");
  g.bridge.text = in.u32("bridge text endpoint");

  // Size check up front so a hostile count cannot drive a huge allocation.
  const unsigned __int128 need = static_cast<unsigned __int128>(node_count) * (5 + 4 * static_cast<unsigned __int128>(dim)) +
                                 static_cast<unsigned __int128>(edge_count) * 8;
  if (need > in.remaining()) {
    fail(ErrorCode::Truncated, "header promises " + std::to_string(node_count) + " nodes and " +
                                   std::to_string(edge_count) + " edges; payload has " +
                                   std::to_string(in.remaining()) + " bytes");
  }

  g.nodes.resize(node_count);
  for (auto& node : g.nodes) {
    const auto modality = in.u8("modality");
    if (modality > 1) fail(ErrorCode::NonCanonical, "modality byte " + std::to_string(modality));
    node.modality = static_cast<Modality>(modality);
    node.origin = in.u32("origin");
    node.feature.resize(dim);
    for (auto& x : node.feature) x = in.f32("feature");
  }
  g.edges.resize(edge_count);
  for (auto& e : g.edges) {
    e.a = in.u32("edge endpoint");
    e.b = in.u32("edge endpoint");
  }
  in.expect_end();
  validate(g);
  return g;
}

UnifiedGraph round_features_to_f32(UnifiedGraph graph) {
  for (auto& node : graph.nodes) {
    for (auto& x : node.feature) x = static_cast<double>(static_cast<float>(x));
  }
  return graph;
}

SizeReport size_report(std::size_t original_image_bytes, std::span<const std::uint8_t> encoded,
                       const PrunedSet& pruned) {
  if (original_image_bytes == 0) {
    fail(ErrorCode::InvalidArgument, "original image size must be positive");
  }
  SizeReport r;
  r.node_compression = compression_ratio(pruned);
  r.encoded_bytes = encoded.size();
  r.original_bytes = original_image_bytes;
  r.byte_ratio = static_cast<double>(encoded.size()) / static_cast<double>(original_image_bytes);
  return r;
}

}  // namespace neural
