#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "neural/attention.hpp"

namespace neural {

struct ThresholdPolicy {
  double tau = 0.0;
  friend bool operator==(const ThresholdPolicy&, const ThresholdPolicy&) = default;
};

struct TopKPolicy {
  double fraction = 1.0;
  friend bool operator==(const TopKPolicy&, const TopKPolicy&) = default;
};

using PruningPolicy = std::variant<ThresholdPolicy, TopKPolicy>;

struct PrunedSet {
  std::vector<std::uint32_t> retained;  // strictly increasing, each < total
  std::size_t total = 0;
  PruningPolicy policy;

  friend bool operator==(const PrunedSet&, const PrunedSet&) = default;
};

/// Keeps {i | S_i > tau}; the inequality is strict and an empty result is legal.
PrunedSet prune_threshold(const SalienceVector& salience, double tau);

/// Keeps the max(1, floor(k * N)) highest-salience patches, ties broken by
/// lower patch index. Throws InvalidFraction unless 0 < k <= 1.
PrunedSet prune_topk(const SalienceVector& salience, double fraction);

PrunedSet prune(const SalienceVector& salience, const PruningPolicy& policy);

/// max(1, floor(k * N)). The product gets a 1e-9 guard so decimal fractions
/// such as 0.29 * 100 do not fall one short through binary rounding.
std::size_t topk_count(std::size_t total, double fraction);

/// 1 - retained / total.
double compression_ratio(const PrunedSet& pruned);

}  // namespace neural
