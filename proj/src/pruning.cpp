#include "neural/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "neural/error.hpp"

namespace neural {

PrunedSet prune_threshold(const SalienceVector& salience, double tau) {
  PrunedSet out;
  out.total = salience.size();
  out.policy = ThresholdPolicy{tau};
  for (std::size_t i = 0; i < salience.size(); ++i) {
    if (salience.scores[i] > tau) out.retained.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::size_t topk_count(std::size_t total, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    fail(ErrorCode::InvalidFraction,
         "top-k fraction must lie in (0, 1], got " + std::to_string(fraction));
  }
  const auto count = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(total) + 1e-9));
  return std::clamp<std::size_t>(count, 1, std::max<std::size_t>(total, 1));
}

PrunedSet prune_topk(const SalienceVector& salience, double fraction) {
  const std::size_t n = salience.size();
  const std::size_t keep = topk_count(n, fraction);
  if (n == 0) fail(ErrorCode::InvalidArgument, "cannot prune an empty salience vector");

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  const auto& s = salience.scores;
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                    order.end(), [&](std::uint32_t a, std::uint32_t b) {
                      return s[a] != s[b] ? s[a] > s[b] : a < b;
                    });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return PrunedSet{std::move(order), n, TopKPolicy{fraction}};
}

PrunedSet prune(const SalienceVector& salience, const PruningPolicy& policy) {
  return std::visit(
      [&](const auto& p) -> PrunedSet {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, ThresholdPolicy>) {
          return prune_threshold(salience, p.tau);
        } else {
          return prune_topk(salience, p.fraction);
        }
      },
      policy);
}

double compression_ratio(const PrunedSet& pruned) {
  if (pruned.total == 0) fail(ErrorCode::InvalidArgument, "pruned set has total 0");
  return 1.0 - static_cast<double>(pruned.retained.size()) /
                   static_cast<double>(pruned.total);
}

}  // namespace neural
