#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "neural/bytes.hpp"

namespace neural {

inline constexpr std::uint16_t kAttnVersion = 1;
inline constexpr double kRowSumTolerance = 1e-4;

/// Token-by-patch cross-attention weights, row-major M x N. Every row is a
/// distribution over patches: non-negative, finite, summing to 1 within
/// kRowSumTolerance.
class AttentionMatrix {
 public:
  AttentionMatrix() = default;
  AttentionMatrix(std::size_t num_tokens, std::size_t num_patches, std::vector<double> weights);

  std::size_t num_tokens() const noexcept { return num_tokens_; }
  std::size_t num_patches() const noexcept { return num_patches_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> row(std::size_t token) const noexcept {
    return std::span(weights_).subspan(token * num_patches_, num_patches_);
  }

  friend bool operator==(const AttentionMatrix&, const AttentionMatrix&) = default;

 private:
  std::size_t num_tokens_ = 0;
  std::size_t num_patches_ = 0;
  std::vector<double> weights_;
};

struct SalienceVector {
  std::vector<double> scores;

  std::size_t size() const noexcept { return scores.size(); }
};

/// ATTN layout (little-endian): "ATTN", u16 version, u32 M, u32 N, then
/// M*N float32 weights row-major.
AttentionMatrix load_attention(std::span<const std::uint8_t> bytes);
Bytes save_attention(const AttentionMatrix& matrix);

/// S_i = sum over tokens j of weight(j, i), accumulated in double in
/// ascending token order.
SalienceVector aggregate_salience(const AttentionMatrix& matrix);

/// Seeded synthetic attention. A per-matrix focus logit f_i = -ln(u_i)
/// (standard exponential) is shared by all tokens; each token row j then
/// draws independent jitter r_ji ~ U[0,1) and sets
///   w_ji = exp((f_i + r_ji) / concentration) / Z_j.
/// Smaller concentration sharpens both the per-row and the aggregated mass.
/// Draw order from one SplitMix64(seed) stream: N focus values, then M*N
/// jitters row-major.
AttentionMatrix synth_attention(std::uint64_t seed, std::size_t num_tokens,
                                std::size_t num_patches, double concentration);

/// Same row construction with caller-provided focus logits in place of the
/// exponential draw. Used by the fixture generator to plant salient regions.
AttentionMatrix synth_attention_with_prior(std::uint64_t seed, std::size_t num_tokens,
                                           std::span<const double> focus_logits,
                                           double concentration);

/// Scores sorted descending, the per-image rank curve.
std::vector<double> rank_curve(const SalienceVector& salience);

}  // namespace neural
