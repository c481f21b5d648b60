#include "neural/patch_grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "neural/error.hpp"

namespace neural {

GrayImage::GrayImage(std::size_t height, std::size_t width, std::vector<double> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
  if (height_ == 0 || width_ == 0) {
    fail(ErrorCode::EmptyImage, "image dimensions " + std::to_string(height_) + "x" +
                                    std::to_string(width_));
  }
  if (pixels_.size() != height_ * width_) {
    fail(ErrorCode::InvalidArgument, "pixel count " + std::to_string(pixels_.size()) +
                                         " does not match " + std::to_string(height_) +
                                         "x" + std::to_string(width_));
  }
  for (std::size_t i = 0; i < pixels_.size(); ++i) {
    const double v = pixels_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      fail(ErrorCode::InvalidArgument,
           "pixel " + std::to_string(i) + " outside [0,1]: " + std::to_string(v));
    }
  }
}

namespace {

void check_patch_size(const GrayImage& image, std::size_t patch_size) {
  if (image.height() == 0 || image.width() == 0) {
    fail(ErrorCode::EmptyImage, "image has a zero dimension");
  }
  if (patch_size == 0) fail(ErrorCode::InvalidArgument, "patch_size must be positive");
  if (image.height() % patch_size != 0 || image.width() % patch_size != 0) {
    fail(ErrorCode::NonDivisibleDimensions,
         std::to_string(image.height()) + "x" + std::to_string(image.width()) +
             " is not divisible by patch_size " + std::to_string(patch_size));
  }
}

double normalized_coord(std::size_t pos, std::size_t count) {
  return count > 1 ? static_cast<double>(pos) / static_cast<double>(count - 1) : 0.0;
}

}  // namespace

FeatureVector patch_feature(const GrayImage& image, std::size_t grid_row,
                            std::size_t grid_col, std::size_t patch_size) {
  check_patch_size(image, patch_size);
  const std::size_t rows = image.height() / patch_size;
  const std::size_t cols = image.width() / patch_size;
  if (grid_row >= rows || grid_col >= cols) {
    fail(ErrorCode::InvalidArgument, "patch (" + std::to_string(grid_row) + "," +
                                         std::to_string(grid_col) + ") outside grid");
  }

  FeatureVector feature;
  feature.reserve(kPatchFeatureDim);
  const std::size_t top = grid_row * patch_size;
  const std::size_t left = grid_col * patch_size;
  for (std::size_t by = 0; by < kPoolSide; ++by) {
    const std::size_t y0 = by * patch_size / kPoolSide;
    const std::size_t y1 = std::max((by + 1) * patch_size / kPoolSide, y0 + 1);
    for (std::size_t bx = 0; bx < kPoolSide; ++bx) {
      const std::size_t x0 = bx * patch_size / kPoolSide;
      const std::size_t x1 = std::max((bx + 1) * patch_size / kPoolSide, x0 + 1);
      double sum = 0.0;
      for (std::size_t y = y0; y < y1; ++y) {
        for (std::size_t x = x0; x < x1; ++x) sum += image.at(top + y, left + x);
      }
      feature.push_back(sum / static_cast<double>((y1 - y0) * (x1 - x0)));
    }
  }
  feature.push_back(normalized_coord(grid_row, rows));
  feature.push_back(normalized_coord(grid_col, cols));
  return feature;
}

std::vector<double> patch_pixels(const GrayImage& image, std::size_t grid_row,
                                 std::size_t grid_col, std::size_t patch_size) {
  std::vector<double> out;
  out.reserve(patch_size * patch_size);
  for (std::size_t y = 0; y < patch_size; ++y) {
    for (std::size_t x = 0; x < patch_size; ++x) {
      out.push_back(image.at(grid_row * patch_size + y, grid_col * patch_size + x));
    }
  }
  return out;
}

PatchGrid tile_image(const GrayImage& image, std::size_t patch_size) {
  check_patch_size(image, patch_size);
  PatchGrid grid;
  grid.rows = image.height() / patch_size;
  grid.cols = image.width() / patch_size;
  grid.patch_size = patch_size;
  grid.patches.reserve(grid.rows * grid.cols);
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      grid.patches.push_back(Patch{static_cast<std::uint32_t>(r * grid.cols + c),
                                   static_cast<std::uint32_t>(r),
                                   static_cast<std::uint32_t>(c),
                                   patch_feature(image, r, c, patch_size)});
    }
  }
  return grid;
}

namespace {

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t number(const char* what) {
    skip_space_and_comments();
    std::size_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1u << 30)) fail(ErrorCode::BadImage, std::string(what) + " too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0) fail(ErrorCode::BadImage, std::string("missing ") + what);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      fail(ErrorCode::BadImage, "missing whitespace before raster");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    fail(ErrorCode::BadMagic, "expected PGM magic \"P5\"");
  }
  PgmHeaderReader header(bytes);
  header.advance(2);
  const std::size_t width = header.number("width");
  const std::size_t height = header.number("height");
  const std::size_t maxval = header.number("maxval");
  if (maxval == 0 || maxval > 255) {
    fail(ErrorCode::BadImage, "only 8-bit PGM is supported (maxval " +
                                  std::to_string(maxval) + ")");
  }
  header.single_space();
  if (width == 0 || height == 0) fail(ErrorCode::EmptyImage, "PGM with a zero dimension");
  const std::size_t count = width * height;
  if (bytes.size() - header.position() < count) {
    fail(ErrorCode::Truncated, "PGM raster holds " +
                                   std::to_string(bytes.size() - header.position()) +
                                   " of " + std::to_string(count) + " samples");
  }
  std::vector<double> pixels(count);
  const auto* raster = bytes.data() + header.position();
  for (std::size_t i = 0; i < count; ++i) {
    pixels[i] = std::min(1.0, static_cast<double>(raster[i]) / static_cast<double>(maxval));
  }
  return GrayImage(height, width, std::move(pixels));
}

Bytes encode_pgm(const GrayImage& image) {
  ByteWriter out;
  out.put_bytes("P5\n" + std::to_string(image.width()) + " " +
                std::to_string(image.height()) + "\n255\n");
  for (double v : image.pixels()) {
    out.put_u8(static_cast<std::uint8_t>(std::lround(v * 255.0)));
  }
  return std::move(out).take();
}

}  // namespace neural
