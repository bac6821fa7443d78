#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aiq/bitstring.hpp"
#include "aiq/machine.hpp"
#include "aiq/quantum.hpp"
#include "aiq/rational.hpp"

namespace aiq::entropy {

// A transformed state's description stream needs a catalog entry for the
// pulled-back state, and there is none.
struct CatalogNotClosed : std::runtime_error {
  explicit CatalogNotClosed(const std::string& what)
      : std::runtime_error(what) {}
};

// A reference state together with its canonical code and the algorithmic
// mass the machine assigns to that code.
struct StateEntry {
  std::string id;
  quantum::PureState state;
  BitString code;
  Rat weight;
};

struct CircuitEntry {
  std::string id;
  quantum::Circuit circuit;
  BitString code;
  Rat weight;
};

// Fixed, ordered list of reference states over a common qubit count.
// Ids and codes are distinct; weights are nonnegative and sum to at
// most 1, so the weighted projectors aggregate to a semi-density matrix.
class StateCatalog {
 public:
  explicit StateCatalog(std::vector<StateEntry> entries);

  std::size_t size() const { return entries_.size(); }
  const StateEntry& at(std::size_t i) const { return entries_[i]; }
  const StateEntry* find(const std::string& id) const;
  long qubits() const { return qubits_; }
  std::size_t dim() const { return std::size_t{1} << qubits_; }

  // sum of weight * |theta><theta| over the catalog.
  quantum::SemiDensity aggregate() const;

 private:
  std::vector<StateEntry> entries_;
  long qubits_;
};

// Same shape for reference circuits, keyed by their total qubit count.
class CircuitCatalog {
 public:
  explicit CircuitCatalog(std::vector<CircuitEntry> entries);

  std::size_t size() const { return entries_.size(); }
  const CircuitEntry& at(std::size_t i) const { return entries_[i]; }
  const CircuitEntry* find(const std::string& id) const;
  long total_qubits() const { return total_qubits_; }

 private:
  std::vector<CircuitEntry> entries_;
  long total_qubits_;
};

// Builders that read each entry's weight off a universe snapshot as the
// algorithmic mass of its canonical code (enumerate with literal
// programs planted so every code is reachable).
StateCatalog build_state_catalog(
    const std::vector<std::pair<std::string, quantum::PureState>>& states,
    const machine::UniverseSnapshot& snap, const std::string& aux_id);
CircuitCatalog build_circuit_catalog(
    const std::vector<std::pair<std::string, quantum::Circuit>>& circuits,
    const machine::UniverseSnapshot& snap, const std::string& aux_id);

// --- Entropy scores -------------------------------------------------------

// All three scores are "bits" quantities compared exactly; an infinite
// score means the catalog gives the state no support at all.

// Aggregate score: -log sum of weight(theta) * fidelity(psi, theta).
// Equals -log <psi| mu |psi> for the catalog's semi-density mu.
Bits hg(const quantum::PureState& psi, const StateCatalog& cat);

struct ValueWitness {
  Bits value;
  std::string witness;  // entry id attaining the minimum; empty if none
};

// Best single reference: min |code(theta)| - log fidelity(psi, theta).
// Ties go to the earlier catalog entry.
ValueWitness hv(const quantum::PureState& psi, const StateCatalog& cat);

// Best circuit: min |code(V,M)| + M - log best_input_overlap(V,M; psi).
ValueWitness hc(const quantum::PureState& psi, const CircuitCatalog& cat);

// --- Description stream ---------------------------------------------------

// The positive rationals at most 1 in mediant-tree order: 1, then each
// level of the subtree below 1/2 left to right (1/2, 1/3, 2/3, 1/4, 2/5,
// 3/5, 3/4, ...).  Every rational in (0,1] appears exactly once.
Rat nth_unit_rational(std::size_t n);

// Pair order: anti-diagonals over (state index, rational index), state
// index ascending within a diagonal and capped by the catalog size.
std::pair<std::size_t, std::size_t> enc_pair(std::size_t index,
                                             std::size_t catalog_size);

// Threshold bit: is fidelity(psi, theta_i) at least q_j?
bool enc_bit(const quantum::PureState& psi, const StateCatalog& cat,
             std::size_t index);

// One stream record: a tuple wrapping the reference code, the threshold
// rational's code and the answer bit.
BitString enc_record(const quantum::PureState& psi, const StateCatalog& cat,
                     std::size_t index);

// Concatenation of the first `records` records.
BitString enc_stream(const quantum::PureState& psi, const StateCatalog& cat,
                     std::size_t records);

// The stream cut to an exact bit length.
BitString enc_prefix(const quantum::PureState& psi, const StateCatalog& cat,
                     std::size_t bits);

// Stream records of v applied to psi, derived only from threshold
// questions about psi itself by pulling each reference back through v.
// Throws CatalogNotClosed when the pulled-back state has no entry.
BitString transform_enc(const quantum::CMatrix& v,
                        const quantum::PureState& psi,
                        const StateCatalog& cat, std::size_t records);

// --- Probe states -----------------------------------------------------

// A ray state whose integer amplitudes embed consecutive runs of the
// given bits: amplitude n is 2^(run_len+1) + 2 * value(bits[n*run_len,
// n*run_len + run_len)), which keeps each run verbatim inside the
// amplitude's code word.
quantum::PureState embedded_run_ray(const BitString& bits, long qubits,
                                    std::size_t run_len);

}  // namespace aiq::entropy
