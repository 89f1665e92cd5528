#include "dverify/bits.hpp"

#include <algorithm>
#include <bit>

namespace dverify {

unsigned id_bits(std::size_t n) {
  if (n <= 2) return 1;
  return static_cast<unsigned>(std::bit_width(static_cast<std::uint64_t>(n - 1)));
}

unsigned width_for(std::uint64_t max_value) {
  return max_value == 0 ? 1 : static_cast<unsigned>(std::bit_width(max_value));
}

void BitString::append(std::uint64_t value, unsigned width) {
  if (width == 0) return;
  if (width > 64) throw BitWidthError("field wider than 64 bits");
  if (width < 64) value &= (std::uint64_t{1} << width) - 1;
  std::size_t need = (len_ + width + 63) / 64;
  if (need > kInline && heap_.size() < need - kInline) heap_.resize(need - kInline, 0);
  std::size_t off = len_ % 64, w = len_ / 64;
  word_ref(w) |= value << off;
  if (off != 0 && off + width > 64) word_ref(w + 1) |= value >> (64 - off);
  len_ += width;
}

std::uint64_t BitString::read(std::size_t pos, unsigned width) const {
  if (width == 0) return 0;
  if (width > 64 || pos + width > len_) throw BitWidthError("read past end of bit string");
  std::size_t off = pos % 64, w = pos / 64;
  std::uint64_t v = word(w) >> off;
  if (off != 0 && off + width > 64) v |= word(w + 1) << (64 - off);
  if (width < 64) v &= (std::uint64_t{1} << width) - 1;
  return v;
}

std::string BitString::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (std::size_t pos = 0; pos < len_; pos += 8) {
    auto byte = read(pos, static_cast<unsigned>(std::min<std::size_t>(8, len_ - pos)));
    out.push_back(digits[byte >> 4]);
    out.push_back(digits[byte & 15]);
  }
  return out;
}

bool operator==(const BitString& a, const BitString& b) {
  if (a.len_ != b.len_) return false;
  for (std::size_t i = 0; i < (a.len_ + 63) / 64; ++i)
    if (a.word(i) != b.word(i)) return false;
  return true;
}

BitWriter& BitWriter::put(std::uint64_t value, unsigned width) {
  if (width < 64 && (value >> width) != 0) {
    throw BitWidthError("value " + std::to_string(value) + " does not fit in " + std::to_string(width) + " bits");
  }
  out_.append(value, width);
  return *this;
}

std::uint64_t BitReader::get(unsigned width) {
  auto v = s_.read(pos_, width);
  pos_ += width;
  return v;
}

}  // namespace dverify
