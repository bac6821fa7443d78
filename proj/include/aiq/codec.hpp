#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "aiq/bitstring.hpp"
#include "aiq/rational.hpp"

namespace aiq::codec {

// Thrown when a buffer ends in the middle of a code word.
struct Truncated : std::runtime_error {
  Truncated() : std::runtime_error("code truncated") {}
};

// Thrown when the bits at the read position are not a valid code word of
// the requested grammar (including non-canonical forms, which are
// rejected so that encoding and decoding are mutually inverse bijections).
struct MalformedCode : std::runtime_error {
  explicit MalformedCode(const std::string& what)
      : std::runtime_error("malformed code: " + what) {}
};

// --- The enumeration order ----------------------------------------------
//
// Whole numbers are identified with binary strings through the
// length-increasing lexicographic ordering
//   0:"0"  1:"1"  2:"00"  3:"01"  4:"10"  5:"11"  6:"000"  ...
// i.e. the n-th string is the binary numeral of n+2 with its leading 1
// removed.  The empty string is not part of the ordering.

BitString xi_string(const Int& n);
Int xi_index(const BitString& s);

// --- Code words -----------------------------------------------------------
//
// Unary-guarded code:   guard(x) = 1^|x| 0 x            (2|x|+1 bits)
// Efficient code:       code(x)  = guard(xi_|x|) 0 x
//
// The efficient code of x costs |x| + 2 ceil(log2 |x|) + 2 bits for
// nonempty x (4 bits for the empty string).  Both codes are prefix free;
// every composite grammar below is built from them and is therefore
// prefix free as well.  Composite forms that are themselves complete code
// words are emitted bare; raw strings are always wrapped.

BitString encode_guarded(const BitString& x);
BitString encode_string(const BitString& x);

// Whole numbers, via the ordering above.
BitString encode_number(const Int& n);

// Signed integers, folded onto whole numbers (0,-1,1,-2,... -> 0,1,2,3,...).
Int zigzag(const Int& z);
Int unzigzag(const Int& n);
BitString encode_integer(const Int& z);

// Rationals as a pair (numerator, denominator) in lowest terms with a
// positive denominator, wrapped in the two-element composite form.
BitString encode_rational(const Rat& r);

// Complex rationals as a pair (real, imaginary).
BitString encode_complex_parts(const Rat& re, const Rat& im);

// Ordered tuples of raw strings: count followed by wrapped elements.
BitString encode_tuple(const std::vector<BitString>& items);

// Finite sets of raw strings: canonical form sorts elements in the
// enumeration order (equivalently, lexicographically by code word).
BitString encode_set(const std::vector<BitString>& items);

// Finite maps between whole numbers: set of (key, value) pairs with keys
// strictly increasing.
BitString encode_map(const std::vector<std::pair<Int, Int>>& entries);

// Finite-support rational measures: set of (point, mass) pairs with keys
// strictly increasing and masses positive.
BitString encode_measure(const std::vector<std::pair<Int, Rat>>& entries);

// --- Streaming decoder ----------------------------------------------------

class BitReader {
 public:
  explicit BitReader(const BitString& buf, std::size_t start = 0)
      : buf_(&buf), pos_(start) {}
  // The reader borrows the buffer; temporaries would dangle.
  explicit BitReader(BitString&&, std::size_t = 0) = delete;

  int read_bit() {
    if (pos_ >= buf_->size()) throw Truncated();
    return (*buf_)[pos_++];
  }

  BitString read_bits(std::size_t n) {
    if (pos_ + n > buf_->size()) throw Truncated();
    BitString out = buf_->substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ == buf_->size(); }

 private:
  const BitString* buf_;
  std::size_t pos_;
};

BitString decode_guarded(BitReader& in);
BitString decode_string(BitReader& in);
Int decode_number(BitReader& in);
Int decode_integer(BitReader& in);
Rat decode_rational(BitReader& in);
std::pair<Rat, Rat> decode_complex_parts(BitReader& in);
std::vector<BitString> decode_tuple(BitReader& in);
std::vector<BitString> decode_set(BitReader& in);
std::vector<std::pair<Int, Int>> decode_map(BitReader& in);
std::vector<std::pair<Int, Rat>> decode_measure(BitReader& in);

// One-shot interface: decode a single value of the requested kind from the
// start of the buffer and report how many bits were consumed.  Bits beyond
// the consumed prefix are never inspected.
enum class Kind {
  String,
  Number,
  Integer,
  Rational,
  Tuple,
  Set,
  Map,
  Measure,
};

using DecodedValue =
    std::variant<BitString, Int, Rat, std::vector<BitString>,
                 std::vector<std::pair<Int, Int>>,
                 std::vector<std::pair<Int, Rat>>>;

struct Decoded {
  DecodedValue value;
  std::size_t bits_consumed;
};

Decoded decode_stream(const BitString& buffer, Kind kind);

}  // namespace aiq::codec
