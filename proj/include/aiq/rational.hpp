#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace aiq {

using Rat = mpq_class;
using Int = mpz_class;

inline Int pow2z(long k) {
  if (k < 0) throw std::invalid_argument("pow2z: negative exponent");
  Int v = 1;
  v <<= static_cast<unsigned long>(k);
  return v;
}

inline Rat pow2q(long k) {
  if (k >= 0) return Rat(pow2z(k));
  return Rat(1, pow2z(-k));
}

// Largest e with 2^e <= r.  Requires r > 0.
long floor_log2(const Rat& r);

// True iff r is exactly a power of two (positive).
bool is_pow2(const Rat& r);

// floor(-log2 r) and ceil(-log2 r), exact.  Require r > 0.
long floor_neg_log2(const Rat& r);
long ceil_neg_log2(const Rat& r);
long ceil_log2(const Rat& r);

// Certified enclosure lo <= log2(r) <= hi with hi - lo <= 2^-frac_bits.
// Both endpoints are dyadic rationals.
struct LogInterval {
  Rat lo;
  Rat hi;
};
LogInterval log2_interval(const Rat& r, int frac_bits = 48);

// Exact decimal rendering of a rational with a fixed number of fraction
// digits, rounding the last digit half-up.  Deterministic by construction.
std::string decimal_string(const Rat& r, int digits);

// A nonnegative-or-infinite quantity of the form c - log2(r) with integer c
// and rational r > 0.  All comparisons between Bits values and against
// integers are exact; no floating point is involved.  The form is closed
// under addition and under adding integers, which covers every composite
// cost in the library (code lengths plus log-penalties).
class Bits {
 public:
  Bits() : inf_(true), c_(0), r_(1) {}

  static Bits infinity() { return Bits(); }

  static Bits from_int(long c) { return Bits(c, Rat(1)); }

  // -log2(r), r > 0.
  static Bits neg_log(const Rat& r) {
    if (r <= 0) throw std::invalid_argument("Bits::neg_log: r must be > 0");
    return Bits(0, r);
  }

  static Bits make(long c, const Rat& r) { return Bits(c, r); }

  bool is_infinite() const { return inf_; }

  // Exact comparisons: (c1 - log r1) vs (c2 - log r2) reduces to comparing
  // r2 / r1 against 2^(c2 - c1), a pure rational comparison.
  int compare(const Bits& o) const {
    if (inf_ && o.inf_) return 0;
    if (inf_) return 1;
    if (o.inf_) return -1;
    // this < o  <=>  c1 - log r1 < c2 - log r2  <=>  r2 < 2^(c2-c1) * r1
    long d = o.c_ - c_;
    Rat lhs = o.r_;
    Rat rhs = r_ * pow2q(d);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
  }

  bool operator<(const Bits& o) const { return compare(o) < 0; }
  bool operator<=(const Bits& o) const { return compare(o) <= 0; }
  bool operator>(const Bits& o) const { return compare(o) > 0; }
  bool operator>=(const Bits& o) const { return compare(o) >= 0; }
  bool operator==(const Bits& o) const { return compare(o) == 0; }
  bool operator!=(const Bits& o) const { return compare(o) != 0; }

  Bits operator+(const Bits& o) const {
    if (inf_ || o.inf_) return infinity();
    return Bits(c_ + o.c_, r_ * o.r_);
  }

  Bits operator+(long n) const {
    if (inf_) return infinity();
    return Bits(c_ + n, r_);
  }

  Bits operator-(long n) const {
    if (inf_) return infinity();
    return Bits(c_ - n, r_);
  }

  // Difference as a signed quantity; both sides must be finite.
  Bits minus(const Bits& o) const {
    if (inf_ || o.inf_)
      throw std::domain_error("Bits::minus: infinite operand");
    return Bits(c_ - o.c_, r_ / o.r_);
  }

  long int_part() const { return c_; }
  const Rat& log_arg() const { return r_; }

  // Certified dyadic enclosure of the value.
  LogInterval enclosure(int frac_bits = 48) const;

  // Deterministic decimal rendering for reports; "inf" when infinite.
  std::string decimal(int digits = 6) const;

  // Exact floor of the value (finite case).
  long floor_value() const;

 private:
  Bits(long c, const Rat& r) : inf_(false), c_(c), r_(r) { normalize(); }

  // Keep r in [1, 2) by moving its exponent into c.
  void normalize();

  bool inf_;
  long c_;
  Rat r_;
};

}  // namespace aiq
