#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neural/bytes.hpp"

namespace neural {

using FeatureVector = std::vector<double>;

/// Pooled luminance cells per patch side; a patch feature has
/// kPoolSide * kPoolSide pooled values followed by two positional scalars.
inline constexpr std::size_t kPoolSide = 8;
inline constexpr std::size_t kPatchFeatureDim = kPoolSide * kPoolSide + 2;

/// Single-channel image with row-major luminance in [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  /// Throws EmptyImage for a zero dimension, InvalidArgument when the pixel
  /// count disagrees with the shape or a value falls outside [0, 1].
  GrayImage(std::size_t height, std::size_t width, std::vector<double> pixels);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::span<const double> pixels() const noexcept { return pixels_; }
  double at(std::size_t row, std::size_t col) const noexcept {
    return pixels_[row * width_ + col];
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> pixels_;
};

struct Patch {
  std::uint32_t index = 0;
  std::uint32_t grid_row = 0;
  std::uint32_t grid_col = 0;
  FeatureVector feature;
};

struct PatchGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t patch_size = 0;
  std::vector<Patch> patches;  // row-major, patches[i].index == i

  std::size_t size() const noexcept { return patches.size(); }
};

PatchGrid tile_image(const GrayImage& image, std::size_t patch_size);

/// 8x8 block-mean pooling of one patch plus normalized grid coordinates.
/// When the patch side is not a multiple of 8 the block edges are
/// floor(b * patch_size / 8); blocks that would be empty (patch_size < 8)
/// take the single pixel at their start offset.
FeatureVector patch_feature(const GrayImage& image, std::size_t grid_row,
                            std::size_t grid_col, std::size_t patch_size);

/// Copies the pixels of one patch in row-major order.
std::vector<double> patch_pixels(const GrayImage& image, std::size_t grid_row,
                                 std::size_t grid_col, std::size_t patch_size);

/// Binary PGM (P5, maxval <= 255). A sample p maps to luminance p / maxval.
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
/// Writes "P5\n<w> <h>\n255\n" followed by round(255 * v) per pixel.
Bytes encode_pgm(const GrayImage& image);

}  // namespace neural
