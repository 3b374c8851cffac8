// Copyright 2026 The cyclebound Authors
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

// Byte-level encoding shared by checkpoints and config hashing.
// Unsigned integers are LEB128 varints. A signed big integer is
// varint((byte_count << 1) | negative) followed by its magnitude, big-endian,
// without leading zero bytes.

#ifndef CYCLEBOUND_SRC_CASE_ENGINE_WIRE_H_
#define CYCLEBOUND_SRC_CASE_ENGINE_WIRE_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclebound/numerics.h"

namespace cyclebound::wire {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Writer {
 public:
  void Byte(std::uint8_t b) { bytes_.push_back(b); }
  void Varint(std::uint64_t v) {
    while (v >= 0x80) {
      bytes_.push_back(static_cast<std::uint8_t>(v | 0x80));
      v >>= 7;
    }
    bytes_.push_back(static_cast<std::uint8_t>(v));
  }
  void Int(const BigInt& v) {
    const std::size_t count = v == 0 ? 0 : (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    Varint((static_cast<std::uint64_t>(count) << 1) | (v < 0 ? 1 : 0));
    if (count == 0) return;
    const std::size_t start = bytes_.size();
    bytes_.resize(start + count);
    std::size_t written = 0;
    mpz_export(bytes_.data() + start, &written, 1, 1, 1, 0, v.get_mpz_t());
  }
  void Bytes(const std::vector<std::uint8_t>& b) {
    bytes_.insert(bytes_.end(), b.begin(), b.end());
  }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  bool AtEnd() const { return pos_ == size_; }
  std::size_t position() const { return pos_; }

  std::uint8_t Byte() {
    if (pos_ >= size_) throw DecodeError("unexpected end of data");
    return data_[pos_++];
  }
  std::uint64_t Varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = Byte();
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    throw DecodeError("varint too long");
  }
  BigInt Int() {
    const std::uint64_t head = Varint();
    const std::uint64_t count = head >> 1;
    if (count > size_ - pos_) throw DecodeError("integer runs past the end");
    BigInt v = 0;
    if (count > 0) {
      if (data_[pos_] == 0) throw DecodeError("integer has a leading zero byte");
      mpz_import(v.get_mpz_t(), count, 1, 1, 1, 0, data_ + pos_);
      pos_ += count;
    } else if (head & 1) {
      throw DecodeError("negative zero");
    }
    return (head & 1) ? BigInt(-v) : v;
  }

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

inline std::uint64_t Fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace cyclebound::wire

#endif  // CYCLEBOUND_SRC_CASE_ENGINE_WIRE_H_
