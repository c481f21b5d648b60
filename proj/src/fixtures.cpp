#include "neural/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>

#include "neural/bytes.hpp"
#include "neural/error.hpp"
#include "neural/rng.hpp"

namespace neural {

namespace {

struct Term {
  const char* text;
  const char* label;
};

constexpr std::array<Term, 12> kGenericTerms{{
    {"lung", "anatomy"},
    {"left lower lobe", "anatomy"},
    {"right upper lobe", "anatomy"},
    {"heart", "anatomy"},
    {"pleura", "anatomy"},
    {"mediastinum", "anatomy"},
    {"atelectasis", "observation"},
    {"effusion", "observation"},
    {"cardiomegaly", "observation"},
    {"edema", "observation"},
    {"nodule", "observation"},
    {"scarring", "observation"},
}};

constexpr std::array<const char*, 3> kRelationLabels{"located_at", "suggestive_of", "modify"};

double quantize_pixel(double v) { return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0; }

GrayImage make_image(SplitMix64& rng, std::size_t size, std::size_t patch_size,
                     const std::vector<std::uint32_t>& region, std::size_t grid_cols,
                     const FixtureOptions& opt) {
  std::vector<double> pixels(size * size);
  for (auto& p : pixels) p = opt.background_lo + opt.background_span * rng.uniform();
  if (!region.empty()) {
    double cy = 0.0;
    double cx = 0.0;
    for (auto idx : region) {
      cy += (static_cast<double>(idx / grid_cols) + 0.5) * static_cast<double>(patch_size);
      cx += (static_cast<double>(idx % grid_cols) + 0.5) * static_cast<double>(patch_size);
    }
    cy /= static_cast<double>(region.size());
    cx /= static_cast<double>(region.size());
    const double amplitude = rng.uniform(opt.blob_amplitude_lo, opt.blob_amplitude_hi);
    const double sigma = 0.6 * static_cast<double>(patch_size);
    for (std::size_t y = 0; y < size; ++y) {
      for (std::size_t x = 0; x < size; ++x) {
        const double dy = static_cast<double>(y) + 0.5 - cy;
        const double dx = static_cast<double>(x) + 0.5 - cx;
        pixels[y * size + x] += amplitude * std::exp(-(dy * dy + dx * dx) / (2 * sigma * sigma));
      }
    }
  }
  for (auto& p : pixels) p = quantize_pixel(p);
  return GrayImage(size, size, std::move(pixels));
}

KnowledgeGraph make_report_graph(SplitMix64& rng, bool positive, std::size_t dim) {
  std::vector<std::size_t> vocab(kGenericTerms.size());
  std::iota(vocab.begin(), vocab.end(), std::size_t{0});
  for (std::size_t i = vocab.size(); i > 1; --i) std::swap(vocab[i - 1], vocab[rng.below(i)]);

  std::vector<Entity> entities;
  std::vector<RelationSpec> relations;
  auto relation_label = [&] { return kRelationLabels[rng.below(kRelationLabels.size())]; };
  if (positive) {
    entities.push_back(Entity{"e0", "pneumonia", "observation", {}});
    const std::size_t generic = 2 + rng.below(3);
    for (std::size_t k = 0; k < generic; ++k) {
      const auto& term = kGenericTerms[vocab[k]];
      const std::string id = "e" + std::to_string(k + 1);
      entities.push_back(Entity{id, term.text, term.label, {}});
      relations.push_back(RelationSpec{"e0", id, relation_label()});
    }
  } else {
    const std::size_t generic = 2 + rng.below(4);
    for (std::size_t k = 0; k < generic; ++k) {
      const auto& term = kGenericTerms[vocab[k]];
      entities.push_back(Entity{"e" + std::to_string(k), term.text, term.label, {}});
      if (k > 0) {
        relations.push_back(RelationSpec{"e" + std::to_string(k - 1), "e" + std::to_string(k),
                                         relation_label()});
      }
    }
  }
  return make_knowledge_graph(std::move(entities), relations, dim);
}

AttentionMatrix quantize_rows(const AttentionMatrix& a) {
  std::vector<double> w(a.weights().begin(), a.weights().end());
  for (auto& x : w) x = static_cast<double>(static_cast<float>(x));
  return AttentionMatrix(a.num_tokens(), a.num_patches(), std::move(w));
}

}  // namespace

std::vector<SyntheticStudy> generate_corpus(std::uint64_t seed, std::size_t count,
                                            std::size_t image_size, std::size_t patch_size,
                                            double positive_rate, const FixtureOptions& opt) {
  if (!(positive_rate > 0.0 && positive_rate < 1.0)) {
    fail(ErrorCode::InvalidRate, "positive_rate must lie in (0, 1)");
  }
  if (count < 10) fail(ErrorCode::InvalidArgument, "corpus needs at least 10 studies");
  if (patch_size == 0 || image_size == 0 || image_size % patch_size != 0) {
    fail(ErrorCode::NonDivisibleDimensions, "image_size must be a positive multiple of patch_size");
  }
  const std::size_t grid = image_size / patch_size;
  const std::size_t n = grid * grid;
  const auto positives = static_cast<std::size_t>(std::llround(static_cast<double>(count) * positive_rate));

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 label_rng(derive_seed(seed, 0));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[label_rng.below(i)]);
  std::vector<int> labels(count, 0);
  for (std::size_t i = 0; i < positives; ++i) labels[order[i]] = 1;

  std::vector<SyntheticStudy> corpus;
  corpus.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const std::uint64_t study_seed = derive_seed(seed, s + 1);
    SplitMix64 rng(study_seed);
    SyntheticStudy study;
    study.label = labels[s];

    std::vector<double> focus(n);
    for (auto& f : focus) f = rng.uniform();
    {
      const std::size_t span = std::min<std::size_t>(2, grid);
      const std::size_t r0 = rng.below(grid - span + 1);
      const std::size_t c0 = rng.below(grid - span + 1);
      for (std::size_t r = r0; r < r0 + span; ++r) {
        for (std::size_t c = c0; c < c0 + span; ++c) {
          study.planted.push_back(static_cast<std::uint32_t>(r * grid + c));
        }
      }
      for (auto idx : study.planted) {
        focus[idx] += study.label == 1 ? opt.lesion_focus_boost : opt.normal_focus_boost;
      }
      // Negatives attend to a normal region but carry no lesion there.
      if (study.label == 0) study.planted.clear();
    }
    study.image = make_image(rng, image_size, patch_size, study.planted, grid, opt);
    study.kg = make_report_graph(rng, study.label == 1, opt.embedding_dim);
    const double concentration =
        study.label == 1 ? opt.positive_concentration : opt.negative_concentration;
    study.attention = quantize_rows(
        synth_attention_with_prior(derive_seed(study_seed, 1), opt.tokens, focus, concentration));
    corpus.push_back(std::move(study));
  }
  return corpus;
}

std::string study_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "study_%05zu", index);
  return buf;
}

void write_corpus(const std::filesystem::path& dir, std::span<const Study> corpus) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::string labels = "study,label\n";
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto name = study_name(i);
    write_file(dir / (name + ".pgm"), encode_pgm(corpus[i].image));
    write_file(dir / (name + ".attn"), save_attention(corpus[i].attention));
    write_text_file(dir / (name + ".kg.json"), knowledge_graph_to_json(corpus[i].kg));
    labels += name + "," + std::to_string(corpus[i].label) + "\n";
  }
  write_text_file(dir / "labels.csv", labels);
}

std::vector<Study> read_corpus(const std::filesystem::path& dir, std::size_t embedding_dim) {
  std::istringstream in(read_text_file(dir / "labels.csv"));
  std::string line;
  if (!std::getline(in, line) || line != "study,label") {
    fail(ErrorCode::MalformedDocument, "labels.csv must start with \"study,label\"");
  }
  std::vector<Study> corpus;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorCode::MalformedDocument, "bad labels row: " + line);
    const std::string name = line.substr(0, comma);
    const std::string label = line.substr(comma + 1);
    if (label != "0" && label != "1") {
      fail(ErrorCode::MalformedDocument, "label must be 0 or 1 in row: " + line);
    }
    Study s;
    s.label = label == "1" ? 1 : 0;
    s.image = decode_pgm(read_file(dir / (name + ".pgm")));
    s.attention = load_attention(read_file(dir / (name + ".attn")));
    s.kg = parse_knowledge_graph(read_text_file(dir / (name + ".kg.json")), embedding_dim);
    corpus.push_back(std::move(s));
  }
  return corpus;
}

std::uint64_t corpus_fingerprint(std::span<const Study> corpus) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const auto& s : corpus) {
    h = fnv1a64(encode_pgm(s.image), h);
    h = fnv1a64(save_attention(s.attention), h);
    h = fnv1a64(knowledge_graph_to_json(s.kg), h);
    h = fnv1a64(std::to_string(s.label), h);
  }
  return h;
}

}  // namespace neural
