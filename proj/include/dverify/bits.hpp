#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dverify {

class BitWidthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ⌈log2 n⌉, at least 1. Width of a node id in messages.
unsigned id_bits(std::size_t n);
/// Bits needed to write values 0..max_value, at least 1.
unsigned width_for(std::uint64_t max_value);

/// Exact-length bit string. Short strings (≤ 128 bits) avoid the heap.
class BitString {
 public:
  BitString() = default;

  std::size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }
  bool bit(std::size_t i) const { return (word(i / 64) >> (i % 64)) & 1u; }
  /// Appends the low `width` bits of value (width ≤ 64), least significant first.
  void append(std::uint64_t value, unsigned width);
  /// Reads `width` bits starting at pos.
  std::uint64_t read(std::size_t pos, unsigned width) const;
  /// Lowercase hex of the bytes, little-endian bit order within each byte.
  std::string to_hex() const;

  friend bool operator==(const BitString& a, const BitString& b);

 private:
  static constexpr std::size_t kInline = 2;
  std::uint64_t word(std::size_t i) const { return i < kInline ? inline_[i] : heap_[i - kInline]; }
  std::uint64_t& word_ref(std::size_t i) { return i < kInline ? inline_[i] : heap_[i - kInline]; }

  std::size_t len_ = 0;
  std::array<std::uint64_t, kInline> inline_{};
  std::vector<std::uint64_t> heap_;
};

class BitWriter {
 public:
  /// Throws BitWidthError if value does not fit in width bits.
  BitWriter& put(std::uint64_t value, unsigned width);
  BitWriter& put_bool(bool b) { return put(b ? 1 : 0, 1); }
  const BitString& bits() const { return out_; }
  BitString finish() { return std::move(out_); }

 private:
  BitString out_;
};

class BitReader {
 public:
  explicit BitReader(const BitString& s) : s_(s) {}
  /// Throws BitWidthError when reading past the end.
  std::uint64_t get(unsigned width);
  bool get_bool() { return get(1) != 0; }
  std::size_t remaining() const { return s_.size() - pos_; }
  bool done() const { return pos_ == s_.size(); }

 private:
  const BitString& s_;
  std::size_t pos_ = 0;
};

}  // namespace dverify
