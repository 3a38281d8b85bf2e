// Copyright 2026 The tiknib Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TIKNIB_BYTES_HPP
#define TIKNIB_BYTES_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "tiknib/error.hpp"

namespace tiknib {

using ByteSpan = std::span<const std::uint8_t>;

// Bounds-checked cursor over a byte buffer with selectable byte order.
// Reads past the end throw Error(code) where `code` is chosen by the owner
// (MalformedElf for ELF structures, MalformedDebugInfo for DWARF).
class ByteReader {
 public:
  ByteReader(ByteSpan data, bool big_endian, ErrorCode code)
      : data_(data), big_endian_(big_endian), code_(code) {}

  std::size_t offset() const { return offset_; }
  std::size_t size() const { return data_.size(); }
  std::size_t remaining() const { return data_.size() - offset_; }
  bool at_end() const { return offset_ >= data_.size(); }
  bool big_endian() const { return big_endian_; }
  ByteSpan data() const { return data_; }

  void seek(std::size_t offset) {
    if (offset > data_.size()) fail("seek past end");
    offset_ = offset;
  }
  void skip(std::size_t count) {
    if (count > remaining()) fail("skip past end");
    offset_ += count;
  }

  std::uint8_t u8() {
    need(1);
    return data_[offset_++];
  }
  std::uint16_t u16() { return static_cast<std::uint16_t>(uint_n(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint_n(4)); }
  std::uint64_t u64() { return uint_n(8); }
  std::int8_t s8() { return static_cast<std::int8_t>(u8()); }

  // Unsigned integer of `width` bytes (1..8).
  std::uint64_t uint_n(std::size_t width) {
    need(width);
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < width; ++i) {
      std::uint64_t byte = data_[offset_ + i];
      if (big_endian_) {
        value = (value << 8) | byte;
      } else {
        value |= byte << (8 * i);
      }
    }
    offset_ += width;
    return value;
  }

  std::uint64_t uleb128() {
    std::uint64_t result = 0;
    unsigned shift = 0;
    while (true) {
      std::uint8_t byte = u8();
      if (shift < 64) result |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
      shift += 7;
      if ((byte & 0x80) == 0) break;
    }
    return result;
  }

  std::int64_t sleb128() {
    std::int64_t result = 0;
    unsigned shift = 0;
    std::uint8_t byte = 0;
    do {
      byte = u8();
      if (shift < 64) result |= static_cast<std::int64_t>(byte & 0x7f) << shift;
      shift += 7;
    } while (byte & 0x80);
    if (shift < 64 && (byte & 0x40)) result |= -(static_cast<std::int64_t>(1) << shift);
    return result;
  }

  // NUL-terminated string; the terminator is consumed.
  std::string_view cstr() {
    std::size_t start = offset_;
    while (true) {
      if (offset_ >= data_.size()) fail("unterminated string");
      if (data_[offset_] == 0) break;
      ++offset_;
    }
    std::string_view out(reinterpret_cast<const char*>(data_.data() + start),
                         offset_ - start);
    ++offset_;
    return out;
  }

  ByteSpan bytes(std::size_t count) {
    need(count);
    ByteSpan out = data_.subspan(offset_, count);
    offset_ += count;
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(code_, what + " at offset " + std::to_string(offset_));
  }

 private:
  void need(std::size_t count) const {
    if (count > data_.size() - offset_) fail("truncated read");
  }

  ByteSpan data_;
  std::size_t offset_ = 0;
  bool big_endian_;
  ErrorCode code_;
};

// NUL-terminated string at `offset` inside a string table.
inline std::string_view string_at(ByteSpan table, std::size_t offset) {
  if (offset >= table.size()) return {};
  const char* begin = reinterpret_cast<const char*>(table.data()) + offset;
  std::size_t length = 0;
  while (offset + length < table.size() && begin[length] != '\0') ++length;
  return std::string_view(begin, length);
}

}  // namespace tiknib

#endif  // TIKNIB_BYTES_HPP
