#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aiq/bitstring.hpp"
#include "aiq/machine.hpp"
#include "aiq/rational.hpp"

namespace aiq::lefttotal {

// Asking an interval question below a string that is not total.
struct NotTotal : std::runtime_error {
  explicit NotTotal(const std::string& what) : std::runtime_error(what) {}
};

// Queries over a prefix-free set of halting records read as dyadic
// intervals: program p owns [0.p, 0.p + 2^-|p|).  A string x is total
// when every infinite extension of x eventually halts, which for a
// finite record set means x extends a halting program or the records
// below x tile its whole interval.
class IntervalView {
 public:
  // Records must be prefix-free; they are kept sorted shortlex.
  explicit IntervalView(std::vector<machine::HaltRecord> records);

  const std::vector<machine::HaltRecord>& records() const {
    return records_;
  }
  // Total halting mass, sum of 2^-|p|.
  const Rat& omega() const { return omega_; }
  // First `depth` bits of the binary expansion of omega.
  BitString omega_bits(std::size_t depth) const;

  // Some recorded program is a prefix of x (or equals it).
  bool has_halting_prefix(const BitString& x) const;
  // The halting record whose program is a prefix of x, if any.
  const machine::HaltRecord* record_on_tape(const BitString& x) const;
  // Sum of 2^-|p| over recorded programs extending x (including x).
  Rat subtree_mass(const BitString& x) const;
  bool is_total(const BitString& x) const;
  // Shortest prefix of x (possibly empty or x itself) that is total.
  std::optional<BitString> shortest_total_prefix(const BitString& x) const;

  // Mass of output x among programs not strictly to the right of b:
  // sum of 2^-|p| over records with output x and not left_of(b, p).
  // Shrinks as b extends; b empty gives the plain algorithmic mass.
  Rat mass_left_of(const BitString& x, const BitString& b) const;

  // The measure the machine induces on outputs when the bits of v have
  // already been read: weight 2^-|w| goes to the output of vw.  Total
  // weight is exactly 1; sorted shortlex by output.
  std::vector<std::pair<BitString, Rat>> extension_measure(
      const BitString& v) const;

  // Left-total property: whenever y halts and x branches left of y, x
  // must be total.  Returns sibling-left roots that fail, at most
  // `limit` of them (empty means the property holds everywhere).
  std::vector<BitString> left_total_violations(std::size_t limit = 16) const;

 private:
  std::vector<machine::HaltRecord> records_;  // shortlex by program
  std::vector<std::size_t> by_lex_;           // indices, lexicographic
  std::vector<Rat> lex_prefix_mass_;          // prefix sums over by_lex_
  Rat omega_;

  // Range of by_lex_ whose programs extend x.
  std::pair<std::size_t, std::size_t> subtree_range(const BitString& x) const;
};

// Rebuild the record set so that intervals are assigned in convergence
// order (steps, then shortlex) starting from 0, splitting each into
// maximal dyadic pieces.  Outputs, steps and per-output masses are
// preserved; the result is contiguous from 0, so the rebuilt machine
// satisfies the left-total property.
IntervalView left_totalize(std::vector<machine::HaltRecord> records);

// Serialized form of a rebuilt record set, including provenance fields
// from the universe it came from.
std::string write_left_total(const IntervalView& view,
                             const machine::MachineConfig& config,
                             const std::string& source_aux_id);
IntervalView read_left_total(const std::string& text,
                             machine::MachineConfig* config_out = nullptr,
                             std::string* source_aux_id_out = nullptr);

}  // namespace aiq::lefttotal
