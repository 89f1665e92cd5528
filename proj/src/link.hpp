#pragma once

// Per-port framing of variable-length logical messages over B-bit slots.
// A logical message starts with a tag; its total length is a function of the
// tag, so the receiver knows where each message ends.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "dverify/bits.hpp"
#include "dverify/sim.hpp"

namespace dverify::detail {

inline constexpr unsigned kTagBits = 5;

inline BitString slice(const BitString& s, std::size_t pos, std::size_t len) {
  BitString out;
  while (len > 0) {
    unsigned w = static_cast<unsigned>(std::min<std::size_t>(len, 64));
    out.append(s.read(pos, w), w);
    pos += w;
    len -= w;
  }
  return out;
}

inline void append_bits(BitString& dst, const BitString& src) {
  for (std::size_t pos = 0; pos < src.size();) {
    unsigned w = static_cast<unsigned>(std::min<std::size_t>(src.size() - pos, 64));
    dst.append(src.read(pos, w), w);
    pos += w;
  }
}

class Link {
 public:
  using LengthFn = std::function<std::size_t(unsigned tag)>;

  Link(std::size_t degree, std::size_t bandwidth, LengthFn length)
      : bandwidth_(bandwidth), length_(std::move(length)), out_(degree), sent_(degree, 0), in_(degree) {}

  void send(std::size_t port, BitString msg) { out_[port].push_back(std::move(msg)); }

  /// Drops queued messages whose tag satisfies pred; a message already partly sent stays.
  template <class Pred>
  void purge(std::size_t port, Pred pred) {
    auto& q = out_[port];
    auto first = q.begin() + (sent_[port] > 0 ? 1 : 0);
    q.erase(std::remove_if(first, q.end(), [&](const BitString& m) { return pred(tag_of(m)); }), q.end());
  }

  void emit(std::span<Message> outbox) {
    for (std::size_t k = 0; k < out_.size(); ++k) {
      auto& q = out_[k];
      if (q.empty()) continue;
      const BitString& head = q.front();
      std::size_t len = std::min(bandwidth_, head.size() - sent_[k]);
      outbox[k] = slice(head, sent_[k], len);
      sent_[k] += len;
      if (sent_[k] == head.size()) {
        q.pop_front();
        sent_[k] = 0;
      }
    }
  }

  /// Feeds one frame; returns true and fills msg when a logical message completes.
  bool receive(std::size_t port, const BitString& frame, BitString& msg) {
    BitString& buf = in_[port];
    append_bits(buf, frame);
    if (buf.size() < kTagBits) return false;
    std::size_t need = length_(tag_of(buf));
    if (buf.size() < need) return false;
    if (buf.size() > need) throw std::logic_error("link: frame overran a message boundary");
    msg = std::move(buf);
    buf = BitString();
    return true;
  }

  bool idle() const {
    return std::all_of(out_.begin(), out_.end(), [](const auto& q) { return q.empty(); });
  }

  static unsigned tag_of(const BitString& m) { return static_cast<unsigned>(m.read(0, kTagBits)); }

 private:
  std::size_t bandwidth_;
  LengthFn length_;
  std::vector<std::deque<BitString>> out_;
  std::vector<std::size_t> sent_;
  std::vector<BitString> in_;
};

}  // namespace dverify::detail
