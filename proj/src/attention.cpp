#include "neural/attention.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "neural/error.hpp"
#include "neural/rng.hpp"

namespace neural {

AttentionMatrix::AttentionMatrix(std::size_t num_tokens, std::size_t num_patches,
                                 std::vector<double> weights)
    : num_tokens_(num_tokens), num_patches_(num_patches), weights_(std::move(weights)) {
  if (num_tokens_ == 0 || num_patches_ == 0) {
    fail(ErrorCode::InvalidArgument, "attention matrix needs M >= 1 and N >= 1");
  }
  if (weights_.size() != num_tokens_ * num_patches_) {
    fail(ErrorCode::InvalidArgument, "weight count does not match M x N");
  }
  for (std::size_t j = 0; j < num_tokens_; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < num_patches_; ++i) {
      const double w = weights_[j * num_patches_ + i];
      if (!std::isfinite(w)) {
        fail(ErrorCode::NonFiniteValue,
             "weight (" + std::to_string(j) + "," + std::to_string(i) + ") is not finite");
      }
      if (w < 0.0) {
        fail(ErrorCode::NegativeWeight, "weight (" + std::to_string(j) + "," +
                                            std::to_string(i) + ") = " + std::to_string(w));
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      fail(ErrorCode::RowNotNormalized,
           "row " + std::to_string(j) + " sums to " + std::to_string(sum));
    }
  }
}

AttentionMatrix load_attention(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  if (in.remaining() < 4 || in.take(4, "magic") != "ATTN") {
    fail(ErrorCode::BadMagic, "expected ATTN magic");
  }
  const auto version = in.u16("version");
  if (version != kAttnVersion) {
    fail(ErrorCode::UnsupportedVersion, "ATTN version " + std::to_string(version));
  }
  const std::size_t m = in.u32("token count");
  const std::size_t n = in.u32("patch count");
  if (in.remaining() / 4 / std::max<std::size_t>(n, 1) < m) {
    fail(ErrorCode::Truncated, "payload holds fewer than " + std::to_string(m) + "x" +
                                   std::to_string(n) + " weights");
  }
  std::vector<double> weights(m * n);
  for (auto& w : weights) w = in.f32("weight");
  in.expect_end();
  return AttentionMatrix(m, n, std::move(weights));
}

Bytes save_attention(const AttentionMatrix& matrix) {
  ByteWriter out;
  out.put_bytes("ATTN");
  out.put_u16(kAttnVersion);
  out.put_u32(static_cast<std::uint32_t>(matrix.num_tokens()));
  out.put_u32(static_cast<std::uint32_t>(matrix.num_patches()));
  for (double w : matrix.weights()) out.put_f32(static_cast<float>(w));
  return std::move(out).take();
}

SalienceVector aggregate_salience(const AttentionMatrix& matrix) {
  SalienceVector s;
  s.scores.assign(matrix.num_patches(), 0.0);
  for (std::size_t j = 0; j < matrix.num_tokens(); ++j) {
    const auto row = matrix.row(j);
    for (std::size_t i = 0; i < row.size(); ++i) s.scores[i] += row[i];
  }
  return s;
}

namespace {

AttentionMatrix rows_from_focus(SplitMix64& rng, std::size_t num_tokens,
                                std::span<const double> focus, double concentration) {
  const std::size_t n = focus.size();
  std::vector<double> weights(num_tokens * n);
  std::vector<double> logits(n);
  for (std::size_t j = 0; j < num_tokens; ++j) {
    for (std::size_t i = 0; i < n; ++i) logits[i] = (focus[i] + rng.uniform()) / concentration;
    const double peak = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      logits[i] = std::exp(logits[i] - peak);
      z += logits[i];
    }
    for (std::size_t i = 0; i < n; ++i) weights[j * n + i] = logits[i] / z;
  }
  return AttentionMatrix(num_tokens, n, std::move(weights));
}

void check_synth_args(std::size_t num_tokens, std::size_t num_patches, double concentration) {
  if (num_tokens == 0 || num_patches == 0) {
    fail(ErrorCode::InvalidArgument, "synthetic attention needs M >= 1 and N >= 1");
  }
  if (!(concentration > 0.0) || !std::isfinite(concentration)) {
    fail(ErrorCode::InvalidConcentration,
         "concentration must be positive, got " + std::to_string(concentration));
  }
}

}  // namespace

AttentionMatrix synth_attention(std::uint64_t seed, std::size_t num_tokens,
                                std::size_t num_patches, double concentration) {
  check_synth_args(num_tokens, num_patches, concentration);
  SplitMix64 rng(seed);
  std::vector<double> focus(num_patches);
  for (auto& f : focus) f = -std::log(rng.uniform_open_low());
  return rows_from_focus(rng, num_tokens, focus, concentration);
}

AttentionMatrix synth_attention_with_prior(std::uint64_t seed, std::size_t num_tokens,
                                           std::span<const double> focus_logits,
                                           double concentration) {
  check_synth_args(num_tokens, focus_logits.size(), concentration);
  SplitMix64 rng(seed);
  return rows_from_focus(rng, num_tokens, focus_logits, concentration);
}

std::vector<double> rank_curve(const SalienceVector& salience) {
  std::vector<double> curve = salience.scores;
  std::sort(curve.begin(), curve.end(), std::greater<>());
  return curve;
}

}  // namespace neural
