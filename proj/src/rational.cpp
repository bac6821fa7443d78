#include "aiq/rational.hpp"

#include <sstream>

namespace aiq {

long floor_log2(const Rat& r) {
  if (r <= 0) throw std::invalid_argument("floor_log2: r must be > 0");
  const Int& num = r.get_num();
  const Int& den = r.get_den();
  // sizeinbase(x, 2) is the position of the highest set bit, i.e.
  // floor(log2 x) + 1 for x > 0.
  long bn = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  long bd = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  long e = bn - bd;  // r in [2^(e-1), 2^(e+1))
  // Decide between e-1 and e by one exact comparison: r >= 2^e ?
  Int lhs = num;
  Int rhs = den;
  if (e >= 0)
    rhs <<= static_cast<unsigned long>(e);
  else
    lhs <<= static_cast<unsigned long>(-e);
  return (lhs >= rhs) ? e : e - 1;
}

bool is_pow2(const Rat& r) {
  if (r <= 0) return false;
  const Int& num = r.get_num();
  const Int& den = r.get_den();
  return mpz_popcount(num.get_mpz_t()) == 1 &&
         mpz_popcount(den.get_mpz_t()) == 1;
}

long floor_neg_log2(const Rat& r) {
  long e = floor_log2(r);
  // r in [2^e, 2^(e+1))  =>  -log2 r in (-e-1, -e].
  if (is_pow2(r)) return -e;
  return -e - 1;
}

long ceil_neg_log2(const Rat& r) {
  // -log2 r in (-e-1, -e]  =>  ceil is -e in all cases.
  return -floor_log2(r);
}

long ceil_log2(const Rat& r) {
  long e = floor_log2(r);
  if (is_pow2(r)) return e;
  return e + 1;
}

namespace {

// One directed-rounding digit extraction of the fractional part of
// log2(m) for m in [1,2), given as a scaled integer x0 ~ m * 2^G.
// When round_up is false the result never exceeds the true value; when
// round_up is true the result (plus the final ulp added by the caller)
// never falls below it.  Classic square-and-compare digit recurrence.
Rat log2_frac_directed(Int x, long G, int frac_bits, bool round_up) {
  const Int one = pow2z(G);
  const Int two = one << 1;
  Int acc = 0;
  for (int i = 0; i < frac_bits; ++i) {
    Int sq = x * x;  // scale 2^(2G)
    if (round_up) {
      // ceil division by 2^G
      Int q;
      mpz_cdiv_q_2exp(q.get_mpz_t(), sq.get_mpz_t(),
                      static_cast<unsigned long>(G));
      x = q;
    } else {
      Int q;
      mpz_fdiv_q_2exp(q.get_mpz_t(), sq.get_mpz_t(),
                      static_cast<unsigned long>(G));
      x = q;
    }
    acc <<= 1;
    if (x >= two) {
      acc += 1;
      if (round_up) {
        Int q;
        mpz_cdiv_q_2exp(q.get_mpz_t(), x.get_mpz_t(), 1ul);
        x = q;
      } else {
        Int q;
        mpz_fdiv_q_2exp(q.get_mpz_t(), x.get_mpz_t(), 1ul);
        x = q;
      }
    }
  }
  return Rat(acc, pow2z(frac_bits));
}

}  // namespace

LogInterval log2_interval(const Rat& r, int frac_bits) {
  if (r <= 0) throw std::invalid_argument("log2_interval: r must be > 0");
  long e = floor_log2(r);
  if (is_pow2(r)) return LogInterval{Rat(e), Rat(e)};
  Rat m = r / pow2q(e);  // in (1, 2)
  // Guard bits absorb the rounding drift across frac_bits squarings.
  const long G = frac_bits + 96;
  Int lo_x, hi_x;
  {
    Rat scaled = m * pow2q(G);
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_num().get_mpz_t(),
               scaled.get_den().get_mpz_t());
    lo_x = q;
    mpz_cdiv_q(q.get_mpz_t(), scaled.get_num().get_mpz_t(),
               scaled.get_den().get_mpz_t());
    hi_x = q;
  }
  Rat frac_lo = log2_frac_directed(lo_x, G, frac_bits, false);
  Rat frac_hi = log2_frac_directed(hi_x, G, frac_bits, true) +
                Rat(1, pow2z(frac_bits));
  if (frac_hi > 1) frac_hi = 1;
  return LogInterval{Rat(e) + frac_lo, Rat(e) + frac_hi};
}

std::string decimal_string(const Rat& r, int digits) {
  Rat v = r;
  bool neg = v < 0;
  if (neg) v = -v;
  Int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  // round half-up on |r|
  Rat scaled = v * Rat(scale);
  Int twice_num = scaled.get_num() * 2 + scaled.get_den();
  Int rounded;
  mpz_fdiv_q(rounded.get_mpz_t(), twice_num.get_mpz_t(),
             Int(scaled.get_den() * 2).get_mpz_t());
  Int ip = rounded / scale;
  Int fp = rounded % scale;
  std::ostringstream os;
  if (neg && (ip != 0 || fp != 0)) os << '-';
  os << ip.get_str();
  if (digits > 0) {
    std::string f = fp.get_str();
    os << '.' << std::string(static_cast<std::size_t>(digits) - f.size(), '0')
       << f;
  }
  return os.str();
}

void Bits::normalize() {
  long e = floor_log2(r_);
  if (e != 0) {
    r_ /= pow2q(e);
    c_ -= e;
  }
}

LogInterval Bits::enclosure(int frac_bits) const {
  if (inf_) throw std::domain_error("Bits::enclosure: infinite");
  LogInterval li = log2_interval(r_, frac_bits);
  // value = c - log2(r)
  return LogInterval{Rat(c_) - li.hi, Rat(c_) - li.lo};
}

std::string Bits::decimal(int digits) const {
  if (inf_) return "inf";
  LogInterval li = enclosure();
  return decimal_string(li.lo, digits);
}

long Bits::floor_value() const {
  if (inf_) throw std::domain_error("Bits::floor_value: infinite");
  // value = c - log2(r) with r in [1,2): value in (c-1, c].
  if (r_ == 1) return c_;
  return c_ - 1;
}

}  // namespace aiq
