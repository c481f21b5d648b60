#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "neural/bytes.hpp"
#include "neural/graphs.hpp"
#include "neural/pruning.hpp"

namespace neural {

inline constexpr std::uint16_t kNrlgVersion = 1;
inline constexpr std::size_t kNrlgHeaderBytes = 4 + 2 + 4 + 4 + 4 + 8;

/// NRLG, little-endian:
///   "NRLG" | u16 version | u32 nodes | u32 edges | u32 dim | u32 bridge x2
///   per node: u8 modality | u32 origin | f32 x dim
///   per edge: u32 lo | u32 hi   (sorted lexicographically)
Bytes encode(const UnifiedGraph& graph);

/// Inverse of encode. Rejects anything encode could not have produced, so
/// encode(decode(b)) == b for every accepted b.
UnifiedGraph decode(std::span<const std::uint8_t> bytes);

/// kNrlgHeaderBytes + nodes * (5 + 4 * dim) + edges * 8.
std::size_t encoded_size(std::size_t nodes, std::size_t edges, std::size_t dim);

/// Features are stored as float32; this rounds a graph's features the same
/// way so in-memory and decoded graphs compare equal.
UnifiedGraph round_features_to_f32(UnifiedGraph graph);

struct SizeReport {
  double node_compression = 0.0;  // compression_ratio of the pruned set
  std::size_t encoded_bytes = 0;
  std::size_t original_bytes = 0;
  double byte_ratio = 0.0;  // encoded / original
};

SizeReport size_report(std::size_t original_image_bytes, std::span<const std::uint8_t> encoded,
                       const PrunedSet& pruned);

}  // namespace neural
