#pragma once

// Two-channel transmission game.  Alice sends a program on the classical
// channel; Bob runs it to recover a circuit description, then feeds the
// qubits from the quantum channel into that circuit.  The cost of a move
// is bits sent plus qubits sent plus the log-loss of Bob's reconstruction,
// all tracked exactly.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aiq/bitstring.hpp"
#include "aiq/entropy.hpp"
#include "aiq/machine.hpp"
#include "aiq/quantum.hpp"
#include "aiq/rational.hpp"

namespace aiq::protocol {

// The classical payload did not produce a circuit description.
struct DecodeFailure : std::runtime_error {
  explicit DecodeFailure(const std::string& what) : std::runtime_error(what) {}
};

// No program in the snapshot decodes to a usable circuit for the state.
struct NoValidStrategy : std::runtime_error {
  explicit NoValidStrategy(const std::string& what)
      : std::runtime_error(what) {}
};

// One move by Alice: the program sent classically and the state fed into
// the decoded circuit's input qubits.  The default input is the scalar
// (zero-qubit) state, which is what a zero-input circuit expects.
struct Strategy {
  BitString program;
  quantum::PureState input =
      quantum::PureState::primitive({quantum::ComplexRat(1)});
};

struct CostReport {
  long l = 0;             // classical bits sent
  long m = 0;             // qubits sent
  Bits f;                 // -log fidelity of Bob's reconstruction
  Bits total;             // l + m + f
  Strategy strategy;
  bool classical_only = false;  // the quantum channel stayed empty
};

// Run the strategy's program against the given auxiliary, decode the
// output as a circuit, apply it to the quantum payload and price the
// result.  Throws DecodeFailure when the program diverges, is invalid or
// outputs something other than a circuit code; std::invalid_argument when
// the circuit does not act on psi's qubit count or the payload does not
// match the circuit's input width.
CostReport evaluate(const quantum::PureState& psi, const Strategy& strategy,
                    const machine::UniverseSnapshot& snap,
                    const std::string& aux_id = "-");

// Cheapest strategy that leaves the quantum channel empty: scans the
// snapshot's halting programs for circuit descriptions with zero input
// qubits.  Ties go to the earliest program in enumeration order.
CostReport best_classical(const quantum::PureState& psi,
                          const machine::UniverseSnapshot& snap,
                          const std::string& aux_id = "-");

// Cheapest strategy over every decoded circuit and the exactly optimal
// input state for it.  The M = 0 slice of this search is best_classical,
// so best_mixed never costs more.
CostReport best_mixed(const quantum::PureState& psi,
                      const machine::UniverseSnapshot& snap,
                      const std::string& aux_id = "-");

struct GapConfig {
  long c5 = 0;                       // log coefficient of the gap bound
  long c6 = 0;                       // additive part of the gap bound
  long flag_threshold = 0;           // halting-information bits that mark
                                     // a state as out of population
  std::size_t enc_prefix_bits = 256; // stream prefix used as the plain
                                     // conditioning side of the probe
};

struct GapRow {
  std::string id;
  CostReport classical;
  CostReport mixed;
  Bits gap;                          // classical total minus mixed total
  long bound = 0;                    // c5 * ceil log2(mixed + 2) + c6
  std::optional<long> halting_info;  // probe value, when defined
  bool flagged = false;
};

// Price every state both ways and measure the cost of ignoring the
// quantum channel.  Each state is probed for halting information (its
// encoding conditioned on a stream prefix, with and without the halting
// characteristic); states above the threshold are flagged rather than
// held against the bound.
std::vector<GapRow> noncompression_gap(
    const std::vector<std::pair<std::string, quantum::PureState>>& states,
    const machine::UniverseSnapshot& snap,
    const entropy::StateCatalog& catalog, const GapConfig& config,
    const std::string& aux_id = "-");

// CSV form of the gap table, one row per state:
// state-id,L,M,F,total_classical,total_mixed,gap,bound,flag
// (L, M, F describe the mixed strategy; logs are printed as decimals.)
std::string gap_table_csv(const std::vector<GapRow>& rows);

}  // namespace aiq::protocol
