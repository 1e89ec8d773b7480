#include "slk/bitstring.hpp"

#include <bit>

#include "slk/error.hpp"

namespace slk {

BitString BitString::parse(std::string_view text) {
  if (text == "-") return BitString();
  if (text.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "empty token; use '-' for the empty string");
  }
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(ErrorKind::kInvalidArgument,
                  "not a bit string: '" + std::string(text) + "'");
    }
  }
  return BitString(std::string(text));
}

BitString BitString::from_uint(std::uint64_t value, int width) {
  if (width < 0 || width > 64 || (width < 64 && (value >> width) != 0)) {
    throw Error(ErrorKind::kWidthOverflow, std::to_string(value) + " does not fit in " +
                                               std::to_string(width) + " bits");
  }
  std::string bits(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1u) bits[static_cast<std::size_t>(i)] = '1';
  }
  return BitString(std::move(bits));
}

BitString BitString::repeat(bool bit, std::size_t count) {
  return BitString(std::string(count, bit ? '1' : '0'));
}

BitString BitString::substr(std::size_t pos, std::size_t len) const {
  return BitString(bits_.substr(pos, len));
}

bool BitString::starts_with(const BitString& prefix) const {
  return prefix.size() <= size() &&
         bits_.compare(0, prefix.bits_.size(), prefix.bits_) == 0;
}

std::uint64_t BitString::to_uint() const {
  if (bits_.size() > 64) {
    throw Error(ErrorKind::kWidthOverflow, "bit string longer than 64 bits");
  }
  std::uint64_t v = 0;
  for (char c : bits_) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return v;
}

std::uint64_t BitString::mod(std::uint64_t q) const {
  if (q == 0) throw Error(ErrorKind::kInvalidArgument, "modulus must be positive");
  unsigned __int128 r = 0;
  for (char c : bits_) r = ((r << 1) | static_cast<unsigned>(c == '1')) % q;
  return static_cast<std::uint64_t>(r);
}

std::vector<BitString> all_strings(int n) {
  if (n < 0 || n > 30) {
    throw Error(ErrorKind::kResourceLimit, "refusing to enumerate strings of length " +
                                               std::to_string(n));
  }
  std::vector<BitString> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    out.push_back(BitString::from_uint(v, n));
  }
  return out;
}

std::vector<BitString> all_strings(int min_len, int max_len) {
  std::vector<BitString> out;
  for (int len = min_len; len <= max_len; ++len) {
    auto level = all_strings(len);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

BitString shortlex_next(const BitString& s) {
  std::string bits = s.bits();
  for (std::size_t i = bits.size(); i-- > 0;) {
    if (bits[i] == '0') {
      bits[i] = '1';
      return BitString::parse(bits);
    }
    bits[i] = '0';
  }
  return BitString::repeat(false, s.size() + 1);
}

BitString prefix_code(std::uint64_t n) {
  std::string out;
  const int width = std::max(1, static_cast<int>(std::bit_width(n)));
  for (int i = width - 1; i >= 0; --i) {
    const char b = ((n >> i) & 1u) ? '1' : '0';
    out += b;
    out += b;
  }
  out += "01";
  return BitString::parse(out);
}

std::pair<std::uint64_t, std::size_t> decode_prefix_code(const BitString& s) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
    const bool a = s.bit(i);
    const bool b = s.bit(i + 1);
    if (a == b) {
      if (i / 2 >= 64) break;
      value = (value << 1) | static_cast<std::uint64_t>(a);
      continue;
    }
    if (!a && b && i > 0) return {value, i + 2};
    break;
  }
  throw Error(ErrorKind::kInvalidArgument, "malformed prefix code: " + s.render());
}

int field_width(std::uint64_t max_value) {
  return static_cast<int>(std::bit_width(max_value));
}

}  // namespace slk
