#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neural {

using Bytes = std::vector<std::uint8_t>;

/// Little-endian appender used by every on-disk format.
class ByteWriter {
 public:
  void put_bytes(std::string_view raw);
  void put_u8(std::uint8_t v) { out_.push_back(v); }
  void put_u16(std::uint16_t v);
  void put_u32(std::uint32_t v);
  void put_f32(float v);
  void put_f64(double v);

  const Bytes& bytes() const& noexcept { return out_; }
  Bytes take() && noexcept { return std::move(out_); }

 private:
  Bytes out_;
};

/// Bounds-checked little-endian cursor. Every read past the end throws
/// Error(Truncated) naming the field that was being read.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) noexcept : data_(data) {}

  std::string_view take(std::size_t n, std::string_view what);
  std::uint8_t u8(std::string_view what);
  std::uint16_t u16(std::string_view what);
  std::uint32_t u32(std::string_view what);
  float f32(std::string_view what);
  double f64(std::string_view what);

  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }
  /// Throws Error(TrailingBytes) unless the cursor is at the end.
  void expect_end() const;

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::uint64_t fnv1a64(std::span<const std::uint8_t> data,
                      std::uint64_t basis = 0xCBF29CE484222325ULL) noexcept;
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t basis = 0xCBF29CE484222325ULL) noexcept;

Bytes read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace neural
