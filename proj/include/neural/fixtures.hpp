#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "neural/pipeline.hpp"

namespace neural {

using SyntheticStudy = Study;

/// Knobs of the synthetic corpus that sit outside the generate_corpus
/// signature. The defaults are frozen; the corpus fingerprint test pins them.
struct FixtureOptions {
  std::size_t tokens = 24;
  std::size_t embedding_dim = kDefaultEntityDim;
  double background_lo = 0.25;
  double background_span = 0.30;
  double blob_amplitude_lo = 0.02;
  double blob_amplitude_hi = 0.20;
  double lesion_focus_boost = 2.0;
  double normal_focus_boost = 1.5;
  double positive_concentration = 0.5;
  double negative_concentration = 1.0;
};

/// Deterministic label-correlated corpus. Exactly round(count * rate)
/// studies are positive, chosen by a seeded permutation. Positives carry a
/// Gaussian lesion over a 2x2-patch region, attention focused on that
/// region and a "pneumonia" entity wired to 2-4 generic entities; negatives
/// carry noise images, attention focused on a lesion-free 2x2 region at a
/// lower boost and flatter concentration, and generic-only graphs. Pixels
/// are quantised to k/255 and weights to float32 so the corpus survives a
/// round trip through its on-disk formats unchanged.
std::vector<SyntheticStudy> generate_corpus(std::uint64_t seed, std::size_t count,
                                            std::size_t image_size, std::size_t patch_size,
                                            double positive_rate,
                                            const FixtureOptions& options = {});

/// Directory layout: labels.csv ("study,label"), and per study
/// <name>.pgm, <name>.attn, <name>.kg.json with name = study_%05d.
void write_corpus(const std::filesystem::path& dir, std::span<const Study> corpus);
std::vector<Study> read_corpus(const std::filesystem::path& dir,
                               std::size_t embedding_dim = kDefaultEntityDim);
std::string study_name(std::size_t index);

/// FNV-1a 64 over every study's PGM, ATTN and KG-JSON bytes plus label.
std::uint64_t corpus_fingerprint(std::span<const Study> corpus);

}  // namespace neural
