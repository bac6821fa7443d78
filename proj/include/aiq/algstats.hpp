#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aiq/bitstring.hpp"
#include "aiq/codec.hpp"
#include "aiq/lefttotal.hpp"
#include "aiq/machine.hpp"
#include "aiq/rational.hpp"

// Statistical structure of individual strings against the machine:
// randomness deficiency under explicit finite measures, stochasticity
// scores found by scanning measure-producing programs, covering families
// for level sets of finite maps, and three inequality harnesses that
// price the cheapest point of a map against soft minima and halting
// information.  Everything is exact; verdicts separate arithmetic
// failures from shortfalls of the finite-probe proxies.

namespace aiq::algstats {

// The queried point carries no mass under the measure.
struct ZeroMass : std::runtime_error {
  explicit ZeroMass(const std::string& what) : std::runtime_error(what) {}
};

// The snapshot cannot answer: no block carries the conditioning string,
// or nothing producing the target ever halted.
struct Undefined : std::runtime_error {
  explicit Undefined(const std::string& what) : std::runtime_error(what) {}
};

// No record of the measure block decodes to a probability measure that
// gives the queried point positive mass.
struct NoMeasureFound : std::runtime_error {
  explicit NoMeasureFound(const std::string& what)
      : std::runtime_error(what) {}
};

// The requested search exceeds the desk-scale caps.
struct InstanceTooLarge : std::runtime_error {
  explicit InstanceTooLarge(const std::string& what)
      : std::runtime_error(what) {}
};

// An exhaustive search came back empty even though the construction
// guarantees a witness; indicates a broken instance.
struct NotFound : std::runtime_error {
  explicit NotFound(const std::string& what) : std::runtime_error(what) {}
};

// The target string never appears as an output in the rebuilt domain.
struct NoShortestProgram : std::runtime_error {
  explicit NoShortestProgram(const std::string& what)
      : std::runtime_error(what) {}
};

// Finite maps and measures in the canonical code layout: pairs sorted by
// strictly increasing key.  Measure masses are positive where listed;
// absent keys carry zero.
using PrimitiveMap = std::vector<std::pair<Int, Int>>;
using PrimitiveMeasure = std::vector<std::pair<Int, Rat>>;

// Whole numbers name machine outputs through the length-then-value order
// that starts at the empty string: 0 <-> "", 1 <-> "0", 2 <-> "1",
// 3 <-> "00", ...  This is the code-word order shifted by one place so
// the empty output gets a number too (outputs can be empty, code words
// cannot).
BitString output_string(const Int& n);
Int output_index(const BitString& s);

// Sorted-pair lookups; zero mass / no value when the key is absent.
Rat measure_mass(const PrimitiveMeasure& q, const Int& x);
std::optional<Int> map_value(const PrimitiveMap& f, const Int& a);

// Whole-buffer parses.  A probability measure must decode exactly, with
// nothing left over, and its masses must sum to one.
std::optional<PrimitiveMeasure> parse_probability_measure(
    const BitString& buffer);
std::optional<PrimitiveMap> parse_map_code(const BitString& buffer);

// Auxiliary carrying a measure program next to the base auxiliary it ran
// against: the self-delimiting code of the program followed by the base.
BitString conditioned_aux(const BitString& program, const BitString& base);

// --- Randomness deficiency ------------------------------------------------

struct DeficiencyValue {
  long bits = 0;         // surprisal - conditional
  long surprisal = 0;    // floor of -log Q(x)
  long conditional = 0;  // shortest-program estimate for x's string given v
};

// d(x | Q, v): how many bits short of a typical draw from Q the point x
// falls once v is available as an auxiliary.  Throws ZeroMass when
// Q(x) = 0, and Undefined when no block of the snapshot carries exactly
// v or the estimate for x's string under it is infinite.
DeficiencyValue deficiency(const Int& x, const PrimitiveMeasure& q,
                           const BitString& v,
                           const machine::UniverseSnapshot& snapshot);

// --- Stochasticity ----------------------------------------------------------

// Penalty charged on the deficiency when scoring a measure program.  The
// deficiency is clamped below at one before either shape applies.
enum class PenaltyShape { TwoLog, Linear };
long penalty_value(PenaltyShape shape, long k);

struct StochasticityCertificate {
  long j = 0;     // length of the measure program
  long k = 0;     // deficiency of x under its measure (may be negative)
  long score = 0; // j + penalty(k)
  BitString v;    // the measure program itself
  PrimitiveMeasure q;
};

// Scan the measure block's records for programs whose output decodes to
// a probability measure giving x positive mass; score each by program
// length plus penalized deficiency, conditioning on the program next to
// the block's own auxiliary, and keep the minimum (earliest program on
// ties).  Candidates without a matching conditioned block are skipped.
StochasticityCertificate stochasticity(const Int& x, PenaltyShape shape,
                                       const machine::UniverseSnapshot& snapshot,
                                       const std::string& measure_block = "m");

// Build a universe ready for stochasticity scans: enumerate once to find
// every record of the measure block that decodes to a probability
// measure, then re-enumerate with one extra block per such program
// carrying conditioned_aux(program, base), a literal plant for the
// target and a copy program against the new auxiliary, so conditional
// estimates stay finite.
machine::UniverseSnapshot stochastic_universe(
    const machine::MachineConfig& config, const BitString& base,
    const std::vector<BitString>& measure_plants, const BitString& target,
    const std::string& measure_block = "m",
    const std::vector<machine::AuxSpec>& extra_blocks = {});

// --- Covering families ------------------------------------------------------

// One set per level n = 0..s with |A_n| = c * d * 2^(s+1-n) exactly; the
// expectation is the q-mass of maps whose level sets dodge every A_n.
struct CoveringFamily {
  std::vector<std::vector<Int>> sets;
  long c = 0;
  long d = 0;
  long s = 0;
  Rat expectation;
};

// Exact miss mass of an explicit family: each key of q must decode (via
// output_string) to a map code; a map survives when none of its level
// sets inside the support of m meets the matching set.
Rat family_expectation(const PrimitiveMeasure& q_over_maps,
                       const PrimitiveMeasure& m,
                       const std::vector<std::vector<Int>>& sets);

// Certified comparison r <= exp(-n) for integer n >= 0, decided through
// rational series enclosures that refine until they separate.
bool leq_exp_neg(const Rat& r, long n);

// First family, in the canonical order over sorted subsets of the ground
// set (support of m followed by fresh padding numbers), whose exact miss
// mass stays at or below exp(-c d).  Every supported map must keep early
// mass: sum over its points of m(a) 2^(-g(a)) through level s at least
// 2^(-s-1).  Desk caps: |supp m| <= 8, s <= 3, c d 2^(s+1) <= 64.
CoveringFamily search_covering_family(const PrimitiveMeasure& q_over_maps,
                                      const PrimitiveMeasure& m, long s,
                                      long c, long d);

// Smallest c in 1..8 for which the search succeeds; 0 when none does.
struct CoveringSweep {
  long smallest_c = 0;
  std::optional<CoveringFamily> family;
};
CoveringSweep covering_sweep(const PrimitiveMeasure& q_over_maps,
                             const PrimitiveMeasure& m, long s, long d);

// --- Inequality harnesses ---------------------------------------------------

// Holds: the inequality held within slack.  Violation: an exactly
// computable guarantee failed.  ProxyInconclusive: only the finite-probe
// information proxy fell short, which the desk cannot distinguish from a
// true failure.
enum class Verdict { Holds, Violation, ProxyInconclusive };
const char* verdict_name(Verdict v);

// Allowance coeff * ceil(log2(base + 2)) + add with base clamped at 0.
struct SlackBound {
  long coeff = 0;
  long add = 0;
};
long slack_allowance(const SlackBound& slack, long base);

// Conditional form.  Prices the cheapest point of f given the measure
// code against the soft minimum -log sum_a m(a) 2^(-f(a)) plus the
// stochasticity score of f's code, all inside one purpose-built
// universe.  The ledger fields pin the exact mass bookkeeping at the
// truncation level; the conditioned measure restricts the certificate's
// measure to maps keeping early mass and feeds the covering search.
struct SoftminReport {
  long lhs = 0;  // min over a of f(a) + conditional estimate of a's string
  Int best_a;
  Rat sum;          // sum of m(a) 2^(-f(a)) over f's domain in supp m
  long level = 0;   // ceiling of -log sum
  Rat tail;         // part of the sum with f(a) > level
  Rat kept;         // part with f(a) <= level
  bool mass_floor = false;    // sum >= 2^-level
  bool tail_bounded = false;  // tail <= 2^-(level+1)
  bool kept_above = false;    // kept >= 2^-(level+1)
  StochasticityCertificate certificate;
  PrimitiveMeasure conditioned_q;
  long proof_d = 0;          // clamped deficiency driving the covering sizes
  bool target_kept = false;  // f's own code survives the restriction
  Bits rhs;                  // -log sum + certificate score
  long slack_allowed = 0;
  Bits margin;  // lhs - rhs, signed
  Verdict verdict = Verdict::Violation;
};

SoftminReport softmin_harness(
    const PrimitiveMap& f, const PrimitiveMeasure& m,
    const machine::MachineConfig& config, const SlackBound& slack,
    const std::vector<PrimitiveMeasure>& extra_measures = {});

// Unconditional form over the rebuilt record domain.  The measure is the
// machine's own output mass; the right side swaps the stochasticity
// score for the halting-information proxy.  The border string is found
// twice, by shortest total prefix and by a left-to-right scan at its
// length, and both routes must agree.
struct GlobalSoftminReport {
  Rat sum;         // sum of rebuilt-mass(a) 2^(-f(a))
  long level = 0;  // 1 + ceiling(-log sum)
  BitString border;
  long border_level = 0;  // ceiling at the border, strictly below level
  BitString border_by_scan;
  bool routes_agree = false;
  bool parent_not_total = false;  // dropping the border's last bit breaks
                                  // totality (vacuous at the empty string)
  long lhs = 0;  // min over a of f(a) + shortest rebuilt program for a
  Int best_a;
  std::optional<long> halting_info;
  Bits rhs;
  long slack_allowed = 0;
  Verdict verdict = Verdict::Violation;
};

GlobalSoftminReport global_softmin_harness(
    const PrimitiveMap& f, const machine::UniverseSnapshot& snapshot,
    const lefttotal::IntervalView& view, const machine::HaltingApprox& halting,
    const SlackBound& slack);

// Prefix route to a cheap measure for one string: take x's shortest
// rebuilt program, cut it at the shortest total prefix, and read the
// extension measure there.  The floor bound q(x) >= 2^(prefix - program)
// is exact; the witness score prices the prefix plus the linearly
// penalized deficiency against the halting-information proxy.
struct PrefixMeasureReport {
  BitString x;
  BitString shortest_program;
  BitString total_prefix;
  PrimitiveMeasure q;  // extension measure keyed by output number
  Rat q_of_x;
  Rat floor_bound;
  bool floor_holds = false;
  long prefix_deficiency = 0;  // d(x | q, code of the prefix)
  long witness_score = 0;      // |prefix| + linear penalty
  StochasticityCertificate certificate;  // scan over the planted measure
  std::optional<long> halting_info;
  long slack_allowed = 0;
  Verdict verdict = Verdict::Violation;
};

PrefixMeasureReport prefix_measure_harness(
    const BitString& x, const machine::UniverseSnapshot& snapshot,
    const lefttotal::IntervalView& view, const machine::HaltingApprox& halting,
    const SlackBound& slack);

}  // namespace aiq::algstats
