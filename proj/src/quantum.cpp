#include "aiq/quantum.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aiq::quantum {

using codec::BitReader;
using codec::MalformedCode;

namespace {

// Largest sensible amplitude/entry counts for codes parsed out of machine
// outputs; anything bigger is rejected before allocation.
constexpr unsigned long kMaxAmps = 1ul << 16;

bool pow2_count(const Int& n, unsigned long limit) {
  if (n < 1 || n > limit) return false;
  unsigned long v = n.get_ui();
  return (v & (v - 1)) == 0;
}

long log2_exact(std::size_t v) {
  long q = 0;
  while ((std::size_t{1} << q) < v) ++q;
  return q;
}

}  // namespace

ComplexRat inner(const CVec& u, const CVec& w) {
  if (u.size() != w.size())
    throw std::invalid_argument("inner: dimension mismatch");
  ComplexRat acc;
  for (std::size_t i = 0; i < u.size(); ++i) acc = acc + u[i].conj() * w[i];
  return acc;
}

Rat vec_norm2(const CVec& v) {
  Rat acc(0);
  for (const ComplexRat& c : v) acc += c.norm2();
  return acc;
}

CVec tensor(const CVec& u, const CVec& w) {
  CVec out;
  out.reserve(u.size() * w.size());
  for (const ComplexRat& a : u)
    for (const ComplexRat& b : w) out.push_back(a * b);
  return out;
}

// --- PureState -----------------------------------------------------------

PureState::PureState(StateKind kind, CVec amps)
    : kind_(kind), amps_(std::move(amps)), norm2_(vec_norm2(amps_)) {
  std::size_t d = amps_.size();
  if (d == 0 || (d & (d - 1)) != 0)
    throw std::invalid_argument("PureState: dimension must be a power of two");
  qubits_ = log2_exact(d);
}

PureState PureState::primitive(CVec amps) {
  PureState s(StateKind::Primitive, std::move(amps));
  if (s.norm2_ != 1)
    throw std::invalid_argument("PureState::primitive: norm must be exactly 1");
  return s;
}

PureState PureState::approximate(CVec amps) {
  PureState s(StateKind::Approximate, std::move(amps));
  Rat gap = s.norm2_ - 1;
  if (gap < 0) gap = -gap;
  if (gap > pow2q(-64))
    throw std::invalid_argument(
        "PureState::approximate: norm must be within 2^-64 of 1");
  return s;
}

PureState PureState::ray(CVec amps) {
  PureState s(StateKind::Ray, std::move(amps));
  if (s.norm2_ == 0)
    throw std::invalid_argument("PureState::ray: zero vector");
  return s;
}

Rat fidelity(const PureState& u, const PureState& w) {
  ComplexRat ip = inner(u.amps(), w.amps());
  return ip.norm2() / (u.norm2() * w.norm2());
}

// --- Codes ---------------------------------------------------------------

BitString encode_amplitudes(const CVec& amps) {
  BitString out = codec::encode_number(Int(static_cast<long>(amps.size())));
  for (const ComplexRat& a : amps)
    out = out + codec::encode_complex_parts(a.re, a.im);
  return out;
}

BitString encode_state(const PureState& s) { return encode_amplitudes(s.amps()); }

CVec decode_amplitudes(BitReader& in) {
  Int count = codec::decode_number(in);
  if (!pow2_count(count, kMaxAmps))
    throw MalformedCode("amplitude count must be a small power of two");
  CVec amps;
  amps.reserve(count.get_ui());
  for (unsigned long i = 0; i < count.get_ui(); ++i) {
    auto [re, im] = codec::decode_complex_parts(in);
    amps.emplace_back(re, im);
  }
  return amps;
}

std::optional<CVec> parse_unit_state_code(const BitString& buf) {
  try {
    BitReader in(buf);
    CVec amps = decode_amplitudes(in);
    if (!in.at_end()) return std::nullopt;
    if (vec_norm2(amps) != 1) return std::nullopt;
    return amps;
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

// --- CMatrix ---------------------------------------------------------------

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = ComplexRat(1, 0);
  return m;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("CMatrix: dim mismatch");
  CMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      const ComplexRat& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        out.at(i, j) = out.at(i, j) + aik * o.at(k, j);
    }
  return out;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("CMatrix: dim mismatch");
  CMatrix out(dim_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + o.a_[i];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("CMatrix: dim mismatch");
  CMatrix out(dim_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - o.a_[i];
  return out;
}

CMatrix CMatrix::scaled(const Rat& s) const {
  CMatrix out(dim_);
  for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] * s;
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out.at(j, i) = at(i, j).conj();
  return out;
}

CVec CMatrix::apply(const CVec& v) const {
  if (v.size() != dim_) throw std::invalid_argument("CMatrix: dim mismatch");
  CVec out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    ComplexRat acc;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (!at(i, j).is_zero()) acc = acc + at(i, j) * v[j];
    }
    out[i] = acc;
  }
  return out;
}

ComplexRat CMatrix::trace() const {
  ComplexRat acc;
  for (std::size_t i = 0; i < dim_; ++i) acc = acc + at(i, i);
  return acc;
}

bool CMatrix::is_hermitian() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (at(i, j) != at(j, i).conj()) return false;
  return true;
}

bool CMatrix::is_unitary() const {
  if (dim_ == 0) return false;
  CMatrix p = adjoint() * (*this);
  return p == identity(dim_);
}

BitString encode_matrix(const CMatrix& m) {
  BitString out =
      codec::encode_number(Int(static_cast<long>(m.dim() * m.dim())));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      out = out + codec::encode_complex_parts(m.at(i, j).re, m.at(i, j).im);
  return out;
}

namespace {

std::optional<CMatrix> decode_unitary(BitReader& in) {
  Int count = codec::decode_number(in);
  if (!pow2_count(count, kMaxAmps)) return std::nullopt;
  unsigned long n = count.get_ui();
  // Entry counts are dim^2 with dim a power of two, i.e. powers of 4.
  unsigned long dim = 1;
  while (dim * dim < n) dim <<= 1;
  if (dim * dim != n) return std::nullopt;
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      auto [re, im] = codec::decode_complex_parts(in);
      m.at(i, j) = ComplexRat(re, im);
    }
  if (!m.is_unitary()) return std::nullopt;
  return m;
}

}  // namespace

std::optional<CMatrix> parse_unitary_code(const BitString& buf) {
  try {
    BitReader in(buf);
    auto m = decode_unitary(in);
    if (!m || !in.at_end()) return std::nullopt;
    return m;
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

CMatrix preparation_unitary(const CVec& theta) {
  std::size_t d = theta.size();
  if (d == 0 || (d & (d - 1)) != 0)
    throw std::invalid_argument("preparation_unitary: bad dimension");
  if (vec_norm2(theta) != 1)
    throw std::invalid_argument("preparation_unitary: state must be unit");
  CMatrix v = CMatrix::identity(d);
  ComplexRat one(1, 0);
  if (theta[0] == one) return v;  // theta is already the first basis vector
  // Rank-one correction V = I - w w* / (1 - conj(theta_0)), w = e_0 - theta.
  // V e_0 = theta, and unitarity holds identically for unit theta.
  CVec w(d);
  w[0] = one - theta[0];
  for (std::size_t i = 1; i < d; ++i) w[i] = -theta[i];
  ComplexRat denom = one - theta[0].conj();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      v.at(i, j) = v.at(i, j) - (w[i] * w[j].conj()) / denom;
  return v;
}

Rat expectation(const CMatrix& a, const PureState& psi) {
  CVec av = a.apply(psi.amps());
  ComplexRat val = inner(psi.amps(), av);
  if (val.im != 0)
    throw std::invalid_argument("expectation: matrix is not Hermitian");
  return val.re / psi.norm2();
}

SemiDensity::SemiDensity(CMatrix m) : m_(std::move(m)) {
  if (!m_.is_hermitian())
    throw std::invalid_argument("semi-density: not Hermitian");
  ComplexRat tr = m_.trace();
  if (tr.re > 1)
    throw std::invalid_argument("semi-density: trace exceeds 1");
  if (!is_psd(m_))
    throw std::invalid_argument("semi-density: not positive semidefinite");
}

SemiDensity mixed_state_aggregate(
    std::size_t dim, const std::vector<std::pair<PureState, Rat>>& weighted) {
  CMatrix acc(dim);
  Rat total(0);
  for (const auto& [state, weight] : weighted) {
    if (state.dim() != dim)
      throw std::invalid_argument("mixed_state_aggregate: dim mismatch");
    if (weight < 0)
      throw std::invalid_argument("mixed_state_aggregate: negative weight");
    total += weight;
    if (total > 1) throw WeightOverflow();
    if (weight == 0) continue;
    Rat scale = weight / state.norm2();
    for (std::size_t i = 0; i < dim; ++i) {
      if (state.amp(i).is_zero()) continue;
      for (std::size_t j = 0; j < dim; ++j)
        acc.at(i, j) =
            acc.at(i, j) + state.amp(i) * state.amp(j).conj() * scale;
    }
  }
  return SemiDensity(std::move(acc));
}

// --- Positive semidefiniteness ---------------------------------------------

// Exact test by repeated Schur complements with symmetric pivoting.  A
// Hermitian M is PSD iff at every stage either some diagonal entry is
// positive (pivot on it and eliminate) or the whole remaining block is
// zero; a negative diagonal entry or a nonzero block with zero diagonal
// certifies indefiniteness.  Entry growth is the usual minor growth of
// fraction-free elimination, which is harmless at our dimensions.
bool is_psd(const CMatrix& m) {
  if (!m.is_hermitian()) return false;
  std::size_t d = m.dim();
  std::vector<ComplexRat> a(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a[i * d + j] = m.at(i, j);
  std::vector<std::size_t> live(d);
  std::iota(live.begin(), live.end(), 0);

  while (!live.empty()) {
    std::size_t pivot_pos = live.size();
    for (std::size_t t = 0; t < live.size(); ++t) {
      const ComplexRat& dd = a[live[t] * d + live[t]];
      if (dd.re < 0) return false;
      if (dd.re > 0 && pivot_pos == live.size()) pivot_pos = t;
    }
    if (pivot_pos == live.size()) {
      // Zero diagonal: PSD only if everything left is zero.
      for (std::size_t s : live)
        for (std::size_t t : live)
          if (!a[s * d + t].is_zero()) return false;
      return true;
    }
    std::size_t p = live[pivot_pos];
    Rat piv = a[p * d + p].re;
    live.erase(live.begin() + static_cast<long>(pivot_pos));
    for (std::size_t s : live)
      for (std::size_t t : live)
        a[s * d + t] = a[s * d + t] - (a[s * d + p] * a[p * d + t]) / piv;
  }
  return true;
}

bool psd_dominates(const CMatrix& a, const CMatrix& b, const Rat& c) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("psd_dominates: dim mismatch");
  return is_psd(b.scaled(c) - a);
}

// --- Circuits and channels -----------------------------------------------

long Circuit::total_qubits() const {
  long q = log2_exact(v.dim());
  if (data_qubits < 0 || data_qubits > q)
    throw std::invalid_argument("circuit: bad data qubit count");
  return q;
}

CVec zero_pad(const CVec& input, long data_qubits, long total_qubits) {
  if (data_qubits > total_qubits)
    throw std::invalid_argument("zero_pad: too many data qubits");
  std::size_t din = std::size_t{1} << data_qubits;
  if (input.size() != din)
    throw std::invalid_argument("zero_pad: input dimension mismatch");
  std::size_t stride = std::size_t{1} << (total_qubits - data_qubits);
  CVec out(std::size_t{1} << total_qubits);
  for (std::size_t a = 0; a < din; ++a) out[a * stride] = input[a];
  return out;
}

PureState pad_and_apply(const Circuit& c, const PureState& theta) {
  if (theta.qubits() != c.data_qubits)
    throw std::invalid_argument("pad_and_apply: input qubit mismatch");
  CVec out = c.v.apply(zero_pad(theta.amps(), c.data_qubits,
                                c.total_qubits()));
  // Padding and a unitary both preserve the norm, so the kind carries over.
  switch (theta.kind()) {
    case StateKind::Primitive:
      return PureState::primitive(std::move(out));
    case StateKind::Approximate:
      return PureState::approximate(std::move(out));
    default:
      return PureState::ray(std::move(out));
  }
}

OverlapResult best_input_overlap(const Circuit& c, const PureState& psi) {
  std::size_t d = c.v.dim();
  if (psi.dim() != d)
    throw std::invalid_argument("best_input_overlap: dim mismatch");
  long total_qubits = c.total_qubits();
  // max over unit phi of |<psi| V (phi ox 0...)>|^2 is the squared norm of
  // the zero-ancilla block of V* psi, attained at that block renormalized.
  CVec back = c.v.adjoint().apply(psi.amps());
  std::size_t stride = std::size_t{1} << (total_qubits - c.data_qubits);
  std::size_t din = std::size_t{1} << c.data_qubits;
  CVec block(din);
  Rat mass(0);
  for (std::size_t a = 0; a < din; ++a) {
    block[a] = back[a * stride];
    mass += block[a].norm2();
  }
  if (mass == 0) {
    // Every input is orthogonal to psi after the channel; any witness
    // attains the zero optimum, so report the first basis state.
    CVec basis(din);
    basis[0] = ComplexRat(1, 0);
    return OverlapResult{Rat(0), PureState::ray(std::move(basis))};
  }
  return OverlapResult{mass / psi.norm2(), PureState::ray(std::move(block))};
}

Circuit synthesize_preparation(const PureState& theta) {
  if (theta.kind() != StateKind::Primitive)
    throw std::invalid_argument("synthesize_preparation: need an exact unit state");
  return Circuit{preparation_unitary(theta.amps()), 0};
}

BitString encode_circuit(const Circuit& c) {
  c.total_qubits();  // validates the input count against the matrix
  return codec::encode_number(Int(c.data_qubits)) + encode_matrix(c.v);
}

std::optional<Circuit> parse_circuit_code(const BitString& buf) {
  try {
    BitReader in(buf);
    Int m = codec::decode_number(in);
    if (m < 0 || m > 16) return std::nullopt;
    auto v = decode_unitary(in);
    if (!v || !in.at_end()) return std::nullopt;
    Circuit c{*v, static_cast<long>(m.get_ui())};
    if (c.data_qubits > c.total_qubits()) return std::nullopt;
    return c;
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

// --- Generators ----------------------------------------------------------

namespace {

// Small deterministic helpers; modulo bias is irrelevant here.
long rng_below(std::mt19937_64& rng, long bound) {
  return static_cast<long>(rng() % static_cast<unsigned long>(bound));
}

Rat rng_rational(std::mt19937_64& rng, long num_range, long den_range) {
  long num = rng_below(rng, 2 * num_range + 1) - num_range;
  long den = 1 + rng_below(rng, den_range);
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

PureState random_primitive_state(long qubits, std::mt19937_64& rng) {
  std::size_t d = std::size_t{1} << qubits;
  // Stereographic projection sends a rational point u in R^(2d-1) to the
  // exact unit vector ((2u, |u|^2 - 1)) / (|u|^2 + 1) in R^(2d).
  std::vector<Rat> u(2 * d - 1);
  for (Rat& x : u) x = rng_rational(rng, 8, 6);
  Rat q(0);
  for (const Rat& x : u) q += x * x;
  Rat denom = q + 1;
  std::vector<Rat> coords(2 * d);
  for (std::size_t i = 0; i + 1 < coords.size(); ++i)
    coords[i] = 2 * u[i] / denom;
  coords.back() = (q - 1) / denom;
  CVec amps(d);
  for (std::size_t i = 0; i < d; ++i)
    amps[i] = ComplexRat(coords[2 * i], coords[2 * i + 1]);
  return PureState::primitive(std::move(amps));
}

PureState random_approximate_state(long qubits, std::mt19937_64& rng) {
  std::size_t d = std::size_t{1} << qubits;
  // Integer direction scaled by an integer square root: the squared norm
  // lands within 2^-64 of 1 at denominator 2^120.
  std::vector<Int> v(2 * d);
  bool nonzero = false;
  for (Int& x : v) {
    x = rng_below(rng, 2001) - 1000;
    if (x != 0) nonzero = true;
  }
  if (!nonzero) v[0] = 1;
  Int s(0);
  for (const Int& x : v) s += x * x;
  Int scale;  // floor(sqrt(2^240 / s))
  mpz_sqrt(scale.get_mpz_t(), Int(pow2z(240) / s).get_mpz_t());
  Int den = pow2z(120);
  CVec amps(d);
  for (std::size_t i = 0; i < d; ++i)
    amps[i] = ComplexRat(Rat(v[2 * i] * scale, den),
                         Rat(v[2 * i + 1] * scale, den));
  for (ComplexRat& a : amps) {
    a.re.canonicalize();
    a.im.canonicalize();
  }
  return PureState::approximate(std::move(amps));
}

CMatrix permutation_unitary(const std::vector<std::size_t>& perm) {
  std::size_t d = perm.size();
  CMatrix m(d);
  std::vector<bool> seen(d, false);
  for (std::size_t j = 0; j < d; ++j) {
    if (perm[j] >= d || seen[perm[j]])
      throw std::invalid_argument("permutation_unitary: not a permutation");
    seen[perm[j]] = true;
    m.at(perm[j], j) = ComplexRat(1, 0);
  }
  return m;
}

CMatrix diagonal_unitary(const std::vector<ComplexRat>& phases) {
  CMatrix m(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (phases[i].norm2() != 1)
      throw std::invalid_argument("diagonal_unitary: phase must be unit");
    m.at(i, i) = phases[i];
  }
  return m;
}

CMatrix cayley_unitary(const CMatrix& skew) {
  std::size_t d = skew.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (skew.at(i, j) != -skew.at(j, i).conj())
        throw std::invalid_argument("cayley_unitary: not skew-Hermitian");
  CMatrix num = CMatrix::identity(d) - skew;
  CMatrix den = CMatrix::identity(d) + skew;
  // Invert (I + S) by exact Gauss-Jordan; it is always invertible for
  // skew-Hermitian S.
  CMatrix inv = CMatrix::identity(d);
  CMatrix work = den;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t pivot = col;
    while (pivot < d && work.at(pivot, col).is_zero()) ++pivot;
    if (pivot == d)
      throw std::invalid_argument("cayley_unitary: singular I + S");
    if (pivot != col) {
      for (std::size_t j = 0; j < d; ++j) {
        std::swap(work.at(pivot, j), work.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    ComplexRat p = work.at(col, col);
    for (std::size_t j = 0; j < d; ++j) {
      work.at(col, j) = work.at(col, j) / p;
      inv.at(col, j) = inv.at(col, j) / p;
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (i == col || work.at(i, col).is_zero()) continue;
      ComplexRat f = work.at(i, col);
      for (std::size_t j = 0; j < d; ++j) {
        work.at(i, j) = work.at(i, j) - f * work.at(col, j);
        inv.at(i, j) = inv.at(i, j) - f * inv.at(col, j);
      }
    }
  }
  return num * inv;
}

CMatrix random_unitary(long qubits, std::mt19937_64& rng) {
  std::size_t d = std::size_t{1} << qubits;
  CMatrix skew(d);
  for (std::size_t i = 0; i < d; ++i) {
    skew.at(i, i) = ComplexRat(Rat(0), rng_rational(rng, 3, 4));
    for (std::size_t j = i + 1; j < d; ++j) {
      ComplexRat z(rng_rational(rng, 3, 4), rng_rational(rng, 3, 4));
      skew.at(i, j) = z;
      skew.at(j, i) = -z.conj();
    }
  }
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = d; i > 1; --i)
    std::swap(perm[i - 1],
              perm[static_cast<std::size_t>(rng_below(rng, static_cast<long>(i)))]);
  std::vector<ComplexRat> phases(d);
  const ComplexRat table[4] = {ComplexRat(1, 0), ComplexRat(-1, 0),
                               ComplexRat(0, 1), ComplexRat(0, -1)};
  for (std::size_t i = 0; i < d; ++i) phases[i] = table[rng() % 4];
  return cayley_unitary(skew) * permutation_unitary(perm) *
         diagonal_unitary(phases);
}

// --- Text form ----------------------------------------------------------

namespace {

void put_frac(std::ostream& os, const Rat& r) {
  os << r.get_num().get_str() << '/' << r.get_den().get_str();
}

// Strict canonical fraction: explicit positive denominator, lowest terms.
Rat parse_frac(const std::string& tok) {
  auto slash = tok.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == tok.size())
    throw std::invalid_argument("bad fraction: " + tok);
  Int num, den;
  if (mpz_set_str(num.get_mpz_t(), tok.substr(0, slash).c_str(), 10) != 0 ||
      mpz_set_str(den.get_mpz_t(), tok.substr(slash + 1).c_str(), 10) != 0)
    throw std::invalid_argument("bad fraction: " + tok);
  if (den <= 0) throw std::invalid_argument("bad denominator: " + tok);
  Int g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g != 1) throw std::invalid_argument("fraction not reduced: " + tok);
  return Rat(num, den);
}

ComplexRat next_entry(std::istringstream& in, const char* what) {
  std::string re, im;
  if (!(in >> re >> im))
    throw std::invalid_argument(std::string(what) + ": too few entries");
  return ComplexRat(parse_frac(re), parse_frac(im));
}

const char* kind_name(StateKind k) {
  switch (k) {
    case StateKind::Primitive: return "primitive";
    case StateKind::Approximate: return "approximate";
    default: return "ray";
  }
}

}  // namespace

std::string state_to_text(const PureState& s) {
  std::ostringstream os;
  os << "qstate " << s.qubits() << ' ' << kind_name(s.kind()) << '\n';
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (i) os << ' ';
    put_frac(os, s.amp(i).re);
    os << ' ';
    put_frac(os, s.amp(i).im);
  }
  os << '\n';
  return os.str();
}

PureState state_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string tag, kind;
  long qubits = -1;
  if (!(in >> tag >> qubits >> kind) || tag != "qstate" || qubits < 0 ||
      qubits > 16)
    throw std::invalid_argument("state text: bad header");
  std::size_t d = std::size_t{1} << qubits;
  CVec amps(d);
  for (std::size_t i = 0; i < d; ++i) amps[i] = next_entry(in, "state text");
  std::string extra;
  if (in >> extra) throw std::invalid_argument("state text: trailing data");
  if (kind == "primitive") return PureState::primitive(std::move(amps));
  if (kind == "approximate") return PureState::approximate(std::move(amps));
  if (kind == "ray") return PureState::ray(std::move(amps));
  throw std::invalid_argument("state text: unknown kind " + kind);
}

std::string matrix_to_text(const CMatrix& m, const std::string& tag) {
  std::ostringstream os;
  os << "qmatrix " << log2_exact(m.dim()) << ' ' << tag << '\n';
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = 0; c < m.dim(); ++c) {
      if (c) os << ' ';
      put_frac(os, m.at(r, c).re);
      os << ' ';
      put_frac(os, m.at(r, c).im);
    }
    os << '\n';
  }
  return os.str();
}

std::pair<CMatrix, std::string> matrix_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string head, tag;
  long qubits = -1;
  if (!(in >> head >> qubits >> tag) || head != "qmatrix" || qubits < 0 ||
      qubits > 8)
    throw std::invalid_argument("matrix text: bad header");
  std::size_t d = std::size_t{1} << qubits;
  CMatrix m(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      m.at(r, c) = next_entry(in, "matrix text");
  std::string extra;
  if (in >> extra) throw std::invalid_argument("matrix text: trailing data");
  return {std::move(m), std::move(tag)};
}

}  // namespace aiq::quantum
