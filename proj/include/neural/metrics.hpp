#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neural {

/// ROC AUC as the Mann-Whitney statistic (wins + 0.5 * ties) / (P * N),
/// evaluated over every positive/negative pair. Labels are 0 or 1.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Lowercases ASCII and splits on whitespace.
std::vector<std::string> tokenize(std::string_view text);

/// Sentence BLEU-2 without smoothing: geometric mean of clipped unigram and
/// bigram precision times the brevity penalty against the closest
/// reference length (shorter reference wins a distance tie). A one-token
/// candidate is scored on unigram precision alone.
double bleu2(std::span<const std::string> candidate,
             std::span<const std::vector<std::string>> references);

}  // namespace neural
