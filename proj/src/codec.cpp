#include "aiq/codec.hpp"

#include <algorithm>

namespace aiq::codec {

BitString xi_string(const Int& n) {
  if (n < 0) throw std::invalid_argument("xi_string: negative index");
  Int m = n + 2;
  std::string digits = m.get_str(2);
  return BitString(std::string_view(digits).substr(1));
}

Int xi_index(const BitString& s) {
  Int m = 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    m <<= 1;
    m += s[i];
  }
  return m - 2;
}

BitString encode_guarded(const BitString& x) {
  BitString out = BitString::ones(x.size());
  out.push_back(0);
  out.append(x);
  return out;
}

BitString encode_string(const BitString& x) {
  BitString out = encode_guarded(xi_string(Int(static_cast<long>(x.size()))));
  out.push_back(0);
  out.append(x);
  return out;
}

BitString encode_number(const Int& n) { return encode_string(xi_string(n)); }

Int zigzag(const Int& z) {
  if (z >= 0) return z * 2;
  return -z * 2 - 1;
}

Int unzigzag(const Int& n) {
  if (n % 2 == 0) return n / 2;
  return -((n + 1) / 2);
}

BitString encode_integer(const Int& z) { return encode_number(zigzag(z)); }

BitString encode_rational(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  BitString out = encode_number(Int(2));
  out.append(encode_integer(c.get_num()));
  out.append(encode_number(c.get_den()));
  return out;
}

BitString encode_complex_parts(const Rat& re, const Rat& im) {
  BitString out = encode_number(Int(2));
  out.append(encode_rational(re));
  out.append(encode_rational(im));
  return out;
}

BitString encode_tuple(const std::vector<BitString>& items) {
  BitString out = encode_number(Int(static_cast<long>(items.size())));
  for (const BitString& x : items) out.append(encode_string(x));
  return out;
}

BitString encode_set(const std::vector<BitString>& items) {
  std::vector<BitString> sorted = items;
  std::sort(sorted.begin(), sorted.end(), shortlex_less);
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1])
      throw std::invalid_argument("encode_set: duplicate element");
  return encode_tuple(sorted);
}

BitString encode_map(const std::vector<std::pair<Int, Int>>& entries) {
  std::vector<std::pair<Int, Int>> sorted = entries;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].first == sorted[i - 1].first)
      throw std::invalid_argument("encode_map: duplicate key");
  BitString out = encode_number(Int(static_cast<long>(sorted.size())));
  for (const auto& [k, v] : sorted) {
    out.append(encode_number(Int(2)));
    out.append(encode_number(k));
    out.append(encode_number(v));
  }
  return out;
}

BitString encode_measure(const std::vector<std::pair<Int, Rat>>& entries) {
  std::vector<std::pair<Int, Rat>> sorted = entries;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].first == sorted[i - 1].first)
      throw std::invalid_argument("encode_measure: duplicate key");
  BitString out = encode_number(Int(static_cast<long>(sorted.size())));
  for (const auto& [k, mass] : sorted) {
    if (mass <= 0)
      throw std::invalid_argument("encode_measure: nonpositive mass");
    out.append(encode_number(Int(2)));
    out.append(encode_number(k));
    out.append(encode_rational(mass));
  }
  return out;
}

BitString decode_guarded(BitReader& in) {
  std::size_t run = 0;
  while (in.read_bit() == 1) ++run;
  return in.read_bits(run);
}

BitString decode_string(BitReader& in) {
  BitString len_str = decode_guarded(in);
  Int len = xi_index(len_str);
  if (in.read_bit() != 0) throw MalformedCode("missing separator bit");
  if (!len.fits_ulong_p()) throw MalformedCode("unreasonable string length");
  return in.read_bits(len.get_ui());
}

Int decode_number(BitReader& in) {
  BitString s = decode_string(in);
  // The enumeration order has no empty string, so no number encodes to one.
  if (s.empty()) throw MalformedCode("empty numeral");
  return xi_index(s);
}

Int decode_integer(BitReader& in) { return unzigzag(decode_number(in)); }

namespace {

void expect_count(BitReader& in, long want) {
  Int n = decode_number(in);
  if (n != want) throw MalformedCode("unexpected arity");
}

}  // namespace

Rat decode_rational(BitReader& in) {
  expect_count(in, 2);
  Int num = decode_integer(in);
  Int den = decode_number(in);
  if (den <= 0) throw MalformedCode("nonpositive denominator");
  Rat r(num, den);
  Rat canon = r;
  canon.canonicalize();
  if (canon.get_num() != num || canon.get_den() != den)
    throw MalformedCode("rational not in lowest terms");
  return canon;
}

std::pair<Rat, Rat> decode_complex_parts(BitReader& in) {
  expect_count(in, 2);
  Rat re = decode_rational(in);
  Rat im = decode_rational(in);
  return {re, im};
}

std::vector<BitString> decode_tuple(BitReader& in) {
  Int n = decode_number(in);
  if (!n.fits_ulong_p()) throw MalformedCode("unreasonable tuple arity");
  std::vector<BitString> items;
  items.reserve(n.get_ui());
  for (unsigned long i = 0; i < n.get_ui(); ++i)
    items.push_back(decode_string(in));
  return items;
}

std::vector<BitString> decode_set(BitReader& in) {
  std::vector<BitString> items = decode_tuple(in);
  for (std::size_t i = 1; i < items.size(); ++i)
    if (!shortlex_less(items[i - 1], items[i]))
      throw MalformedCode("set elements not in canonical order");
  return items;
}

std::vector<std::pair<Int, Int>> decode_map(BitReader& in) {
  Int n = decode_number(in);
  if (!n.fits_ulong_p()) throw MalformedCode("unreasonable map size");
  std::vector<std::pair<Int, Int>> entries;
  for (unsigned long i = 0; i < n.get_ui(); ++i) {
    expect_count(in, 2);
    Int k = decode_number(in);
    Int v = decode_number(in);
    if (!entries.empty() && !(entries.back().first < k))
      throw MalformedCode("map keys not strictly increasing");
    entries.emplace_back(k, v);
  }
  return entries;
}

std::vector<std::pair<Int, Rat>> decode_measure(BitReader& in) {
  Int n = decode_number(in);
  if (!n.fits_ulong_p()) throw MalformedCode("unreasonable measure size");
  std::vector<std::pair<Int, Rat>> entries;
  for (unsigned long i = 0; i < n.get_ui(); ++i) {
    expect_count(in, 2);
    Int k = decode_number(in);
    Rat mass = decode_rational(in);
    if (mass <= 0) throw MalformedCode("nonpositive mass");
    if (!entries.empty() && !(entries.back().first < k))
      throw MalformedCode("measure keys not strictly increasing");
    entries.emplace_back(k, mass);
  }
  return entries;
}

Decoded decode_stream(const BitString& buffer, Kind kind) {
  BitReader in(buffer);
  DecodedValue v;
  switch (kind) {
    case Kind::String:
      v = decode_string(in);
      break;
    case Kind::Number:
      v = decode_number(in);
      break;
    case Kind::Integer:
      v = decode_integer(in);
      break;
    case Kind::Rational:
      v = decode_rational(in);
      break;
    case Kind::Tuple:
      v = decode_tuple(in);
      break;
    case Kind::Set:
      v = decode_set(in);
      break;
    case Kind::Map:
      v = decode_map(in);
      break;
    case Kind::Measure:
      v = decode_measure(in);
      break;
  }
  return Decoded{std::move(v), in.pos()};
}

}  // namespace aiq::codec
