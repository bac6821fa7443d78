#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "aiq/bitstring.hpp"
#include "aiq/codec.hpp"
#include "aiq/rational.hpp"

namespace aiq::quantum {

// Complex numbers with exact rational parts.  Every quantum quantity in
// this project lives in this field; there is no floating point anywhere
// in the pipeline, so equalities and inequalities are decided exactly.

struct ComplexRat {
  Rat re;
  Rat im;

  ComplexRat() : re(0), im(0) {}
  ComplexRat(Rat r) : re(std::move(r)), im(0) {}
  ComplexRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  ComplexRat(long r, long i = 0) : re(r), im(i) {}

  ComplexRat conj() const { return ComplexRat(re, -im); }
  Rat norm2() const { return re * re + im * im; }
  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  ComplexRat operator+(const ComplexRat& o) const {
    return ComplexRat(re + o.re, im + o.im);
  }
  ComplexRat operator-(const ComplexRat& o) const {
    return ComplexRat(re - o.re, im - o.im);
  }
  ComplexRat operator-() const { return ComplexRat(-re, -im); }
  ComplexRat operator*(const ComplexRat& o) const {
    return ComplexRat(re * o.re - im * o.im, re * o.im + im * o.re);
  }
  ComplexRat operator*(const Rat& s) const {
    return ComplexRat(re * s, im * s);
  }
  ComplexRat operator/(const Rat& s) const {
    return ComplexRat(re / s, im / s);
  }
  ComplexRat operator/(const ComplexRat& o) const {
    Rat d = o.norm2();
    ComplexRat n = *this * o.conj();
    return ComplexRat(n.re / d, n.im / d);
  }
  bool operator==(const ComplexRat& o) const {
    return re == o.re && im == o.im;
  }
  bool operator!=(const ComplexRat& o) const { return !(*this == o); }
};

using CVec = std::vector<ComplexRat>;

ComplexRat inner(const CVec& u, const CVec& w);  // sum conj(u_i) w_i
Rat vec_norm2(const CVec& v);
CVec tensor(const CVec& u, const CVec& w);

// --- Pure states -------------------------------------------------------

// Three flavours share one representation (amplitudes plus their exact
// squared norm).  Primitive states are exactly unit; approximate states
// sit within 2^-64 of unit norm; ray states are any nonzero vector and
// all derived quantities treat them as normalized.
enum class StateKind { Primitive, Approximate, Ray };

class PureState {
 public:
  static PureState primitive(CVec amps);
  static PureState approximate(CVec amps);
  static PureState ray(CVec amps);

  StateKind kind() const { return kind_; }
  long qubits() const { return qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const CVec& amps() const { return amps_; }
  const ComplexRat& amp(std::size_t i) const { return amps_[i]; }
  const Rat& norm2() const { return norm2_; }

  bool operator==(const PureState& o) const {
    return kind_ == o.kind_ && amps_ == o.amps_;
  }

 private:
  PureState(StateKind kind, CVec amps);
  StateKind kind_;
  CVec amps_;
  Rat norm2_;
  long qubits_;
};

// |<u,w>|^2 / (|u|^2 |w|^2), exact.
Rat fidelity(const PureState& u, const PureState& w);

// Amplitude code: the element count followed by real/imaginary rational
// codes per amplitude.  The count must be a power of two.
BitString encode_amplitudes(const CVec& amps);
BitString encode_state(const PureState& s);
CVec decode_amplitudes(codec::BitReader& in);
// Whole-buffer parse; nullopt unless the buffer is exactly one amplitude
// code with exact unit norm.
std::optional<CVec> parse_unit_state_code(const BitString& buf);

// --- Matrices ----------------------------------------------------------

class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}
  static CMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const ComplexRat& at(std::size_t r, std::size_t c) const {
    return a_[r * dim_ + c];
  }
  ComplexRat& at(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }

  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix scaled(const Rat& s) const;
  CMatrix adjoint() const;
  CVec apply(const CVec& v) const;
  ComplexRat trace() const;

  bool is_hermitian() const;
  bool is_unitary() const;  // exact U* U == I

  bool operator==(const CMatrix& o) const {
    return dim_ == o.dim_ && a_ == o.a_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<ComplexRat> a_;
};

// Matrix code: entry count (dim^2) followed by row-major complex parts.
BitString encode_matrix(const CMatrix& m);
// Whole-buffer parse; nullopt unless the buffer is exactly one matrix
// code of power-of-two dimension that is exactly unitary.
std::optional<CMatrix> parse_unitary_code(const BitString& buf);

// A unitary whose first column is the given exact unit vector, built by
// a rank-one correction of the identity; every entry stays rational.
CMatrix preparation_unitary(const CVec& theta);

// <psi| A |psi> / |psi|^2 for Hermitian A; exact and real.
Rat expectation(const CMatrix& a, const PureState& psi);

// Exact positive-semidefiniteness by symmetric-pivot elimination.  Exact
// at every dimension we use; entry growth is the minor growth of
// fraction-free elimination and stays manageable.
bool is_psd(const CMatrix& m);
// Does c*B - A stay positive semidefinite?  ("A is dominated by c B".)
bool psd_dominates(const CMatrix& a, const CMatrix& b, const Rat& c);

// Mixture weights summed past 1, which would break the trace bound.
struct WeightOverflow : std::runtime_error {
  WeightOverflow() : std::runtime_error("mixture weights exceed 1") {}
};

// Hermitian, positive semidefinite, trace at most 1; certified exactly
// on construction.
class SemiDensity {
 public:
  explicit SemiDensity(CMatrix m);
  const CMatrix& matrix() const { return m_; }
  Rat trace() const { return m_.trace().re; }

 private:
  CMatrix m_;
};

// sum of weight * |theta><theta| over unit-normalized states.  Weights
// must be nonnegative with total at most 1 (the result is a semi-density
// matrix); zero weights are allowed and contribute nothing.
SemiDensity mixed_state_aggregate(
    std::size_t dim, const std::vector<std::pair<PureState, Rat>>& weighted);

// --- Circuits and channels ------------------------------------------------

// A unitary over total_qubits() qubits fed by data_qubits inputs; the
// remaining qubits are zero ancillas.
struct Circuit {
  CMatrix v;
  long data_qubits = 0;

  long total_qubits() const;
  bool operator==(const Circuit& o) const {
    return data_qubits == o.data_qubits && v == o.v;
  }
};

// Pad an m-qubit input with zero ancillas up to n qubits (input qubits
// first), so amplitude a lands at index a * 2^(n-m).
CVec zero_pad(const CVec& input, long data_qubits, long total_qubits);

// V (theta ox zeros); preserves the input's norm and kind.
PureState pad_and_apply(const Circuit& c, const PureState& theta);

// Best fidelity achievable with psi over all inputs to the circuit,
// together with an input attaining it.  Closed form: the squared norm of
// the zero-ancilla block of V* psi; the witness is that block (as a ray
// state, normalization implied), or the first basis state when the block
// vanishes and the value is 0.
struct OverlapResult {
  Rat value;
  PureState witness;
};
OverlapResult best_input_overlap(const Circuit& c, const PureState& psi);

// A zero-input circuit preparing the given exact unit state.
Circuit synthesize_preparation(const PureState& theta);

// Circuit code: the input count followed by the matrix code.
BitString encode_circuit(const Circuit& c);
// Whole-buffer parse; nullopt unless exactly one circuit code with an
// exactly unitary matrix and a feasible input count.
std::optional<Circuit> parse_circuit_code(const BitString& buf);

// --- Deterministic generators ------------------------------------------

// All generators consume a std::mt19937_64 and are reproducible from the
// seed alone.

// Exact unit vector in C^(2^qubits) via stereographic projection of a
// random rational point.
PureState random_primitive_state(long qubits, std::mt19937_64& rng);

// Rational amplitudes within 2^-64 of unit norm (integer direction
// scaled by an integer square root at denominator 2^120).
PureState random_approximate_state(long qubits, std::mt19937_64& rng);

CMatrix permutation_unitary(const std::vector<std::size_t>& perm);
CMatrix diagonal_unitary(const std::vector<ComplexRat>& phases);
// (I - S)(I + S)^-1 for skew-Hermitian S; exactly unitary.
CMatrix cayley_unitary(const CMatrix& skew);
// Composition of a random Cayley rotation, permutation and phase flips.
CMatrix random_unitary(long qubits, std::mt19937_64& rng);

// --- Text form ----------------------------------------------------------

// States: "qstate <qubits> <kind>" then one line of entries, each entry
// an exact "re im" fraction pair.  Matrices: "qmatrix <qubits> <tag>"
// then one line per row.  Parsing is strict and round-trips exactly.
std::string state_to_text(const PureState& s);
PureState state_from_text(const std::string& text);
std::string matrix_to_text(const CMatrix& m, const std::string& tag);
std::pair<CMatrix, std::string> matrix_from_text(const std::string& text);

}  // namespace aiq::quantum
