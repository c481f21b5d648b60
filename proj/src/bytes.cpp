#include "neural/bytes.hpp"

#include <bit>
#include <fstream>
#include <iterator>

#include "neural/error.hpp"

namespace neural {

void ByteWriter::put_bytes(std::string_view raw) {
  out_.insert(out_.end(), raw.begin(), raw.end());
}

void ByteWriter::put_u16(std::uint16_t v) {
  out_.push_back(static_cast<std::uint8_t>(v));
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::put_u32(std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::put_f32(float v) { put_u32(std::bit_cast<std::uint32_t>(v)); }

void ByteWriter::put_f64(double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  put_u32(static_cast<std::uint32_t>(bits));
  put_u32(static_cast<std::uint32_t>(bits >> 32));
}

std::string_view ByteReader::take(std::size_t n, std::string_view what) {
  if (remaining() < n) {
    fail(ErrorCode::Truncated, "need " + std::to_string(n) + " bytes for " +
                                   std::string(what) + " at offset " +
                                   std::to_string(pos_) + ", have " +
                                   std::to_string(remaining()));
  }
  std::string_view view(reinterpret_cast<const char*>(data_.data()) + pos_, n);
  pos_ += n;
  return view;
}

std::uint8_t ByteReader::u8(std::string_view what) {
  return static_cast<std::uint8_t>(take(1, what)[0]);
}

std::uint16_t ByteReader::u16(std::string_view what) {
  const auto raw = take(2, what);
  return static_cast<std::uint16_t>(static_cast<std::uint8_t>(raw[0]) |
                                    (static_cast<std::uint8_t>(raw[1]) << 8));
}

std::uint32_t ByteReader::u32(std::string_view what) {
  const auto raw = take(4, what);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<std::uint8_t>(raw[i]);
  }
  return v;
}

float ByteReader::f32(std::string_view what) { return std::bit_cast<float>(u32(what)); }

double ByteReader::f64(std::string_view what) {
  const std::uint64_t lo = u32(what);
  const std::uint64_t hi = u32(what);
  return std::bit_cast<double>(lo | (hi << 32));
}

void ByteReader::expect_end() const {
  if (remaining() != 0) {
    fail(ErrorCode::TrailingBytes,
         std::to_string(remaining()) + " unexpected bytes after payload");
  }
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> data, std::uint64_t basis) noexcept {
  std::uint64_t h = basis;
  for (auto b : data) {
    h ^= b;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis) noexcept {
  return fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()),
                 basis);
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) fail(ErrorCode::Io, "short write to " + path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace neural
