#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "slk/bitgraph.hpp"

namespace slk::detail {

// Fixed-capacity bitset over dense right-node indices.
class Mask {
 public:
  Mask() = default;
  explicit Mask(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool is_subset_of(const Mask& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

  Mask& operator|=(const Mask& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  friend Mask operator|(Mask a, const Mask& b) { return a |= b; }
  friend bool operator==(const Mask&, const Mask&) = default;

  std::size_t hash() const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (auto w : words_) h = (h ^ w) * 0x100000001b3ull + (h >> 29);
    return static_cast<std::size_t>(h);
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct MaskHash {
  std::size_t operator()(const Mask& m) const { return m.hash(); }
};

// A BitGraph with right nodes mapped to dense indices.
struct IndexedGraph {
  std::vector<BitString> right_names;  // index -> right node
  std::vector<Mask> neighborhoods;     // per left node
  std::vector<std::size_t> degrees;
};

// Dense indices over the right nodes that actually occur, in sorted order.
IndexedGraph index_used_right(const BitGraph& g);

// Dense indices over the full universe {0,1}^right_len (index = value).
IndexedGraph index_full_right(const BitGraph& g);

}  // namespace slk::detail
