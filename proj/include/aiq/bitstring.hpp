#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace aiq {

// A finite binary string.  Bits are stored one per byte in emission order;
// bit 0 is the leftmost (most significant in the numeric reading below).
class BitString {
 public:
  BitString() = default;

  explicit BitString(std::string_view ascii) {
    bits_.reserve(ascii.size());
    for (char c : ascii) {
      if (c == '0') {
        bits_.push_back(0);
      } else if (c == '1') {
        bits_.push_back(1);
      } else {
        throw std::invalid_argument("BitString: expected only '0'/'1'");
      }
    }
  }

  static BitString zeros(std::size_t n) {
    BitString b;
    b.bits_.assign(n, 0);
    return b;
  }

  static BitString ones(std::size_t n) {
    BitString b;
    b.bits_.assign(n, 1);
    return b;
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  int operator[](std::size_t i) const { return bits_[i]; }

  void set(std::size_t i, int v) { bits_[i] = static_cast<uint8_t>(v & 1); }

  void push_back(int v) { bits_.push_back(static_cast<uint8_t>(v & 1)); }

  void append(const BitString& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  }

  void pop_back() { bits_.pop_back(); }

  BitString substr(std::size_t pos, std::size_t len) const {
    BitString out;
    out.bits_.assign(bits_.begin() + pos, bits_.begin() + pos + len);
    return out;
  }

  BitString prefix(std::size_t len) const { return substr(0, len); }

  bool is_prefix_of(const BitString& other) const {
    if (size() > other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (bits_[i] != other.bits_[i]) return false;
    return true;
  }

  bool is_proper_prefix_of(const BitString& other) const {
    return size() < other.size() && is_prefix_of(other);
  }

  // Numeric value of the bits read as a big-endian binary numeral.
  // value("011") == 3, value("0100") == 4, value("") == 0.
  mpz_class value() const {
    mpz_class v = 0;
    for (uint8_t b : bits_) {
      v <<= 1;
      v += b;
    }
    return v;
  }

  std::string str() const {
    std::string s;
    s.reserve(bits_.size());
    for (uint8_t b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  bool operator==(const BitString& o) const { return bits_ == o.bits_; }
  bool operator!=(const BitString& o) const { return bits_ != o.bits_; }

  // Lexicographic order; a proper prefix sorts before its extensions.
  bool operator<(const BitString& o) const { return bits_ < o.bits_; }

  friend BitString operator+(BitString a, const BitString& b) {
    a.append(b);
    return a;
  }

  const std::vector<uint8_t>& raw() const { return bits_; }

 private:
  std::vector<uint8_t> bits_;
};

// Length-increasing lexicographic order: shorter strings first, ties broken
// lexicographically.  This is the enumeration order of the whole machine.
inline bool shortlex_less(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.raw() < b.raw();
}

// x is strictly to the left of y: some branch point has x continuing with 0
// and y continuing with 1.  Prefix-comparable strings are never left of
// each other.
inline bool left_of(const BitString& x, const BitString& y) {
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] != y[i]) return x[i] == 0;
  }
  return false;
}

// a1 b1 a2 b2 ... for equal-length inputs.
inline BitString interleave(const BitString& a, const BitString& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("interleave: length mismatch");
  BitString out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(a[i]);
    out.push_back(b[i]);
  }
  return out;
}

struct BitStringHash {
  std::size_t operator()(const BitString& b) const {
    // FNV-1a over the raw bytes.
    uint64_t h = 1469598103934665603ull;
    for (uint8_t v : b.raw()) {
      h ^= v;
      h *= 1099511628211ull;
    }
    h ^= b.size();
    h *= 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

std::ostream& operator<<(std::ostream& os, const BitString& b);

}  // namespace aiq
