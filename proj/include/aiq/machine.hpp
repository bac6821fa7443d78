#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "aiq/bitstring.hpp"
#include "aiq/codec.hpp"
#include "aiq/rational.hpp"

namespace aiq::machine {

// A small concrete prefix-free machine.  A program is one opcode word from
// the fixed prefix-free table below followed by self-delimiting arguments;
// a program halts iff it parses completely, consumes exactly its own
// length, and its semantics succeed within the step budget.  Extensions of
// a complete program therefore never halt, which makes the halting domain
// prefix free by construction, per auxiliary.
//
//   0     LIT  code(x)          emit x
//   100   AUXCOPY n             emit the first n auxiliary bits
//   101   AUXSLICE k n          emit auxiliary bits [k, k+n)
//   1100  CAT  p1 p2            emit run(p1) then run(p2)
//   1101  PIPE p1 p2            run p2 with auxiliary run(p1)
//   1110  PREP p1               parse run(p1) as a unit state vector and
//                               emit the code of a unitary whose first
//                               column is that state
//   1111  (reserved, invalid)
//
// Reading past the end of the auxiliary tape never halts (the machine
// waits for input that is not there), as does handing PREP anything that
// is not a unit state vector over complex rationals.

struct MachineConfig {
  int version = 1;
  long max_len = 14;       // exhaustive enumeration bound, bits
  long step_budget = 10000;

  bool operator==(const MachineConfig&) const = default;
};

enum class RunStatus { Halted, Diverged, Invalid };

struct RunResult {
  RunStatus status = RunStatus::Invalid;
  BitString output;
  long steps = 0;
};

RunResult run_program(const BitString& program, const BitString& aux,
                      long step_budget);

// Program builders for the opcode table.
BitString make_lit(const BitString& x);
BitString make_auxcopy(long n);
BitString make_auxslice(long k, long n);
BitString make_cat(const BitString& p1, const BitString& p2);
BitString make_pipe(const BitString& p1, const BitString& p2);
BitString make_prep(const BitString& p1);

// Greedy copy-program synthesis: factor target into literal chunks and
// auxiliary substrings of length >= min_run and assemble the matching
// LIT / AUXSLICE / CAT program.  Used to seed universes with useful
// conditional programs; the estimators themselves stay pure minima over
// whatever halted.
BitString synthesize_copy_program(const BitString& target,
                                  const BitString& aux, long min_run = 24);

// --- Universe snapshots ----------------------------------------------------

struct AuxSpec {
  std::string id;                 // token without whitespace; "" means the
                                  // empty auxiliary and has id "-"
  BitString bits;
  std::vector<BitString> plants;  // extra programs run beyond the
                                  // exhaustive bound
};

struct HaltRecord {
  BitString program;
  BitString output;
  long steps = 0;
};

struct AuxBlock {
  std::string aux_id;
  BitString aux;
  std::vector<HaltRecord> records;  // sorted by enumeration order of program
};

class UniverseSnapshot {
 public:
  UniverseSnapshot() = default;
  UniverseSnapshot(MachineConfig config, std::vector<AuxBlock> blocks);

  const MachineConfig& config() const { return config_; }
  const std::vector<AuxBlock>& blocks() const { return blocks_; }
  const AuxBlock* find_block(const std::string& aux_id) const;

  // Shortest recorded program producing x under the given auxiliary.
  std::optional<long> k_hat(const BitString& x,
                            const std::string& aux_id = "-") const;
  Bits k_hat_bits(const BitString& x, const std::string& aux_id = "-") const;

  // First program of minimal length producing x, in enumeration order.
  std::optional<BitString> shortest_program(
      const BitString& x, const std::string& aux_id = "-") const;

  // Algorithmic-probability estimate: sum of 2^-|p| over recorded programs
  // producing x.  Zero when nothing does.
  Rat m_hat(const BitString& x, const std::string& aux_id = "-") const;

  // Sum of 2^-|p| over all recorded halting programs of one auxiliary.
  Rat omega_lower(const std::string& aux_id = "-") const;

  // All recorded outputs of one auxiliary, deduplicated, in enumeration
  // order.
  std::vector<BitString> outputs(const std::string& aux_id = "-") const;

 private:
  struct OutputInfo {
    long min_len = 0;
    BitString witness;
    Rat mass;
  };
  struct BlockIndex {
    std::unordered_map<BitString, OutputInfo, BitStringHash> by_output;
    Rat total_mass;
  };

  MachineConfig config_;
  std::vector<AuxBlock> blocks_;
  std::vector<BlockIndex> index_;
};

// Exhaustively run every program up to config.max_len, plus any planted
// programs, for every auxiliary.  Work is partitioned deterministically,
// so the snapshot is identical for any worker count.
UniverseSnapshot enumerate_universe(const MachineConfig& config,
                                    const std::vector<AuxSpec>& auxiliaries,
                                    int workers = 1);

// The halting characteristic string of the exhaustive region: bit i is 1
// iff the i-th string in enumeration order is a halting program for the
// given auxiliary.  Covers every i with string length <= max_len.
struct HaltingApprox {
  BitString bits;
};
HaltingApprox halting_approx(const UniverseSnapshot& snapshot,
                             const std::string& aux_id = "-");

// The auxiliary string encoding "alpha together with the halting
// characteristic": code(alpha) followed by the characteristic bits.
BitString combined_aux(const BitString& alpha, const HaltingApprox& halting);

// k(x) + k(y) - k(<x,y>), with <x,y> the two-element composite code.
// Undefined when any component estimate is infinite.
std::optional<long> mutual_info(const UniverseSnapshot& snapshot,
                                const BitString& x, const BitString& y,
                                const std::string& aux_id = "-");

// k(x | alpha) - k(x | alpha, halting): how many bits of x the halting
// characteristic explains.  Both universes must have been probed; pass the
// auxiliary ids of the plain and combined blocks.
std::optional<long> info_with_halting(const UniverseSnapshot& snapshot,
                                      const BitString& x,
                                      const std::string& plain_aux_id,
                                      const std::string& combined_aux_id);

// Truncated-sum diagnostic for information between two auxiliaries:
// log of sum over recorded output pairs (x, y) of
// m(x|a) m(y|b) 2^{mutual_info(x,y)}.  Terms with undefined mutual
// information are skipped, so this is a lower-bound diagnostic only.
struct StreamInfoDiag {
  Bits value;        // infinite when no term contributed
  long terms = 0;    // number of contributing pairs
  long skipped = 0;  // pairs without a finite pair-code estimate
};
StreamInfoDiag mutual_info_stream_diag(const UniverseSnapshot& snapshot,
                                       const std::string& aux_a,
                                       const std::string& aux_b);

// True iff every record of `small` appears in `big` (budget monotonicity).
bool snapshot_subset(const UniverseSnapshot& small,
                     const UniverseSnapshot& big);

// Canonical text serialization; byte-identical for equal snapshots.
void write_snapshot(std::ostream& os, const UniverseSnapshot& snapshot);
UniverseSnapshot read_snapshot(std::istream& is);

}  // namespace aiq::machine
