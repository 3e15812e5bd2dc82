#pragma once

// Little-endian encoding helpers for the binary file formats.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hyperspace/error.hpp"

namespace hyperspace::detail {

class ByteWriter {
 public:
  void bytes(std::string_view s) { buffer_.insert(buffer_.end(), s.begin(), s.end()); }
  void u8(std::uint8_t v) { buffer_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) buffer_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

  std::vector<std::uint8_t>& buffer() noexcept { return buffer_; }

 private:
  std::vector<std::uint8_t> buffer_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  void expect(std::string_view magic) {
    need(magic.size());
    for (char c : magic) {
      if (data_[pos_++] != static_cast<std::uint8_t>(c)) {
        throw Error(ErrorCode::kFormat, "bad magic, expected '" + std::string(magic) + "'");
      }
    }
  }
  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }

  std::size_t remaining() const noexcept { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw Error(ErrorCode::kFormat, "truncated input");
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace hyperspace::detail
