#include "neural/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "neural/error.hpp"

namespace neural {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    fail(ErrorCode::DimensionMismatch, "scores and labels differ in length");
  }
  std::vector<double> pos;
  std::vector<double> neg;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1) {
      pos.push_back(scores[i]);
    } else if (labels[i] == 0) {
      neg.push_back(scores[i]);
    } else {
      fail(ErrorCode::InvalidArgument, "label " + std::to_string(labels[i]) + " is not 0/1");
    }
  }
  if (pos.empty() || neg.empty()) {
    fail(ErrorCode::DegenerateLabels, "AUC needs at least one positive and one negative");
  }
  double wins = 0.0;
  double ties = 0.0;
  for (double p : pos) {
    for (double n : neg) {
      if (p > n) {
        wins += 1.0;
      } else if (p == n) {
        ties += 1.0;
      }
    }
  }
  return (wins + 0.5 * ties) / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

std::vector<std::string> tokenize(std::string_view text) {
  std::string lowered(text);
  for (auto& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::istringstream in(lowered);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

namespace {

using NGram = std::vector<std::string>;

std::map<NGram, int> count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  std::map<NGram, int> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[NGram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

double modified_precision(std::span<const std::string> candidate,
                          std::span<const std::vector<std::string>> references, std::size_t n) {
  const auto cand = count_ngrams(candidate, n);
  int total = 0;
  for (const auto& [gram, c] : cand) total += c;
  if (total == 0) return 0.0;
  std::map<NGram, int> max_ref;
  for (const auto& ref : references) {
    for (const auto& [gram, c] : count_ngrams(ref, n)) {
      auto& slot = max_ref[gram];
      slot = std::max(slot, c);
    }
  }
  int clipped = 0;
  for (const auto& [gram, c] : cand) {
    const auto it = max_ref.find(gram);
    if (it != max_ref.end()) clipped += std::min(c, it->second);
  }
  return static_cast<double>(clipped) / static_cast<double>(total);
}

}  // namespace

double bleu2(std::span<const std::string> candidate,
             std::span<const std::vector<std::string>> references) {
  if (candidate.empty()) fail(ErrorCode::EmptyCandidate, "candidate has no tokens");
  if (references.empty()) fail(ErrorCode::InvalidArgument, "BLEU needs at least one reference");

  // A one-token candidate has no bigrams; the mean then covers unigrams only.
  const double p1 = modified_precision(candidate, references, 1);
  const double p2 = candidate.size() >= 2 ? modified_precision(candidate, references, 2) : p1;
  if (p1 == 0.0 || p2 == 0.0) return 0.0;

  const auto c = static_cast<long>(candidate.size());
  long r = static_cast<long>(references.front().size());
  for (const auto& ref : references) {
    const auto len = static_cast<long>(ref.size());
    const long d = std::labs(len - c);
    const long best = std::labs(r - c);
    if (d < best || (d == best && len < r)) r = len;
  }
  const double bp = c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return bp * std::sqrt(p1 * p2);
}

}  // namespace neural
