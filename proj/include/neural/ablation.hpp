#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "neural/mpnn.hpp"
#include "neural/pipeline.hpp"

namespace neural {

struct AblationConfig {
  std::size_t patch_size = 8;
  std::size_t feature_dim = kDefaultFeatureDim;
  std::size_t layers = 3;
  std::size_t hidden = 64;
  TrainConfig train;
  double train_fraction = 0.70;
  double validation_fraction = 0.15;
  /// Replace every report graph with a single placeholder entity.
  bool image_only = false;
};

struct AblationRow {
  double fraction = 0.0;
  double compression = 0.0;  // mean node compression over the corpus
  double auc = 0.0;          // held-out test split
};

/// Stratified train/validation/test index split drawn from the training seed.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};
Split stratified_split(std::span<const Study> corpus, double train_fraction,
                       double validation_fraction, std::uint64_t seed);

/// For each top-k fraction, in the order given: prune and fuse every study,
/// train a fresh model (same seed) on the training split, keep the epoch
/// with the best validation AUC (earliest on ties) and report its test AUC.
std::vector<AblationRow> ablation_sweep(std::span<const Study> corpus,
                                        std::span<const double> fractions,
                                        const AblationConfig& config);

/// "k,compression,auc" header, six decimals, newline-terminated rows.
std::string ablation_csv(std::span<const AblationRow> rows);

}  // namespace neural
