#include "neural/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "neural/error.hpp"
#include "neural/metrics.hpp"
#include "neural/rng.hpp"

namespace neural {

Split stratified_split(std::span<const Study> corpus, double train_fraction,
                       double validation_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(validation_fraction >= 0.0) ||
      train_fraction + validation_fraction >= 1.0) {
    fail(ErrorCode::InvalidArgument, "split fractions must leave room for a test split");
  }
  Split split;
  SplitMix64 rng(derive_seed(seed, 0x5711));
  for (int label = 0; label <= 1; ++label) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus[i].label == label) members.push_back(i);
    }
    for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng.below(i)]);
    const auto m = static_cast<double>(members.size());
    const auto n_train = static_cast<std::size_t>(std::llround(m * train_fraction));
    const auto n_val = static_cast<std::size_t>(std::llround(m * validation_fraction));
    for (std::size_t i = 0; i < members.size(); ++i) {
      auto& bucket = i < n_train ? split.train
                     : i < n_train + n_val ? split.validation
                                           : split.test;
      bucket.push_back(members[i]);
    }
  }
  for (auto* v : {&split.train, &split.validation, &split.test}) std::sort(v->begin(), v->end());
  return split;
}

namespace {

double split_auc(const MpnnModel& model, std::span<const Example> examples,
                 std::span<const std::size_t> indices) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (auto i : indices) {
    scores.push_back(forward(model, examples[i].graph));
    labels.push_back(examples[i].label);
  }
  return auc(scores, labels);
}

}  // namespace

std::vector<AblationRow> ablation_sweep(std::span<const Study> corpus,
                                        std::span<const double> fractions,
                                        const AblationConfig& config) {
  if (corpus.empty()) fail(ErrorCode::EmptyDataset, "ablation corpus is empty");
  const auto split = stratified_split(corpus, config.train_fraction, config.validation_fraction,
                                      config.train.seed);
  const KnowledgeGraph placeholder =
      dummy_knowledge_graph(corpus.front().kg.nodes.front().feature.size());

  std::vector<AblationRow> rows;
  for (double k : fractions) {
    std::vector<Example> examples;
    examples.reserve(corpus.size());
    double compression = 0.0;
    for (const auto& study : corpus) {
      auto built = build_study_graph(study, config.image_only ? placeholder : study.kg,
                                     TopKPolicy{k}, config.patch_size, config.feature_dim);
      compression += compression_ratio(built.pruned);
      examples.push_back(Example{std::move(built.graph), study.label});
    }
    compression /= static_cast<double>(corpus.size());

    std::vector<Example> train_set;
    for (auto i : split.train) train_set.push_back(examples[i]);

    const MpnnShape shape{config.layers, config.hidden, config.feature_dim + 1};
    MpnnModel best = init_model(shape, config.train.seed);
    double best_val = -1.0;
    const bool use_validation = !split.validation.empty();
    auto model = train(best, train_set, config.train,
                       [&](std::size_t, double, const MpnnModel& m) {
                         if (!use_validation) return;
                         const double v = split_auc(m, examples, split.validation);
                         if (v > best_val) {
                           best_val = v;
                           best = m;
                         }
                       });
    if (!use_validation) best = std::move(model);
    rows.push_back(AblationRow{k, compression, split_auc(best, examples, split.test)});
  }
  return rows;
}

std::string ablation_csv(std::span<const AblationRow> rows) {
  std::string out = "k,compression,auc\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", r.fraction, r.compression, r.auc);
    out += buf;
  }
  return out;
}

}  // namespace neural
