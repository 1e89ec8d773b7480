#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace slk {

/// A finite binary string. Bits are stored as '0'/'1' characters so that
/// node names print and hash without conversion.
///
/// Ordering is shortlex (length first, then lexicographic), which is the
/// enumeration order used everywhere programs or nodes are listed.
class BitString {
 public:
  BitString() = default;

  /// Accepts a literal 0/1 string, or "-" for the empty string.
  static BitString parse(std::string_view text);

  /// Big-endian rendering of `value` in exactly `width` bits.
  static BitString from_uint(std::uint64_t value, int width);

  /// Run of `count` copies of `bit`.
  static BitString repeat(bool bit, std::size_t count);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool bit(std::size_t i) const { return bits_[i] == '1'; }

  const std::string& bits() const { return bits_; }

  /// Canonical text form: the bits, or "-" when empty.
  std::string render() const { return bits_.empty() ? std::string("-") : bits_; }

  BitString substr(std::size_t pos, std::size_t len = std::string::npos) const;
  bool starts_with(const BitString& prefix) const;

  /// Big-endian value; the empty string is 0. Requires size() <= 64.
  std::uint64_t to_uint() const;

  /// Big-endian value reduced modulo `q` (any length).
  std::uint64_t mod(std::uint64_t q) const;

  BitString& operator+=(const BitString& other) {
    bits_ += other.bits_;
    return *this;
  }
  friend BitString operator+(BitString lhs, const BitString& rhs) {
    lhs += rhs;
    return lhs;
  }

  friend bool operator==(const BitString&, const BitString&) = default;
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.bits_.compare(b.bits_) <=> 0;
  }

 private:
  explicit BitString(std::string bits) : bits_(std::move(bits)) {}
  std::string bits_;
};

struct BitStringHash {
  std::size_t operator()(const BitString& s) const noexcept {
    return std::hash<std::string>{}(s.bits());
  }
};

/// All strings of length `n` in lexicographic order.
std::vector<BitString> all_strings(int n);

/// All strings of length in [min_len, max_len], shortlex order.
std::vector<BitString> all_strings(int min_len, int max_len);

/// Successor in shortlex order ("" -> "0" -> "1" -> "00" ...).
BitString shortlex_next(const BitString& s);

/// Self-delimiting code of a natural number: each bit of its binary form
/// doubled, then terminated by "01". 0 encodes as "0001".
BitString prefix_code(std::uint64_t n);

/// Decodes a prefix_code at the start of `s`; returns the value and the
/// number of bits consumed.
std::pair<std::uint64_t, std::size_t> decode_prefix_code(const BitString& s);

/// Number of bits needed to write values 0..max_value (0 for max_value 0).
int field_width(std::uint64_t max_value);

}  // namespace slk
