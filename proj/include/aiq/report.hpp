#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aiq/algstats.hpp"
#include "aiq/config.hpp"
#include "aiq/entropy.hpp"
#include "aiq/lefttotal.hpp"
#include "aiq/protocol.hpp"

namespace aiq::report {

using Json = nlohmann::ordered_json;

// --- primitives -------------------------------------------------------

// Exact value first, rounded convenience second.
Json rational_entry(const Rat& r);
Json bits_entry(const Bits& b);

std::string render(const Json& j);  // two-space indent, trailing newline
std::string csv_row(const std::vector<std::string>& cells);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// --- the standard laboratory ------------------------------------------

// One-qubit reference states and the circuits that reach them; the
// catalogs behind every entropy and transmission run.
std::vector<std::pair<std::string, quantum::PureState>> standard_states();
std::vector<std::pair<std::string, quantum::Circuit>> standard_circuits();

// Universe with the catalog codes planted as literals, so every
// reference carries algorithmic mass.
machine::UniverseSnapshot catalog_universe(const config::RunConfig& cfg);

// Deterministic probe population: catalog states, two fixed rays, then
// seeded random primitive/approximate states.  A shorter list is always
// a prefix of a longer one drawn from the same seed.
std::vector<std::pair<std::string, quantum::PureState>> entropy_probes(
    unsigned long long seed, std::size_t count);

// Two-qubit transmission lab: sparse preparations leave some basis
// directions classically expensive.
struct GapLab {
  machine::UniverseSnapshot snap;
  entropy::StateCatalog catalog;
  machine::HaltingApprox halting;
};
GapLab build_gap_lab(const config::RunConfig& cfg);
std::vector<std::pair<std::string, quantum::PureState>> gap_population(
    const GapLab& lab, unsigned long long seed, std::size_t count);

// --- report builders ----------------------------------------------------

// Every builder returns the full artifact bytes plus a pass flag; the
// flag is false only on hard invariant violations, never on proxy
// shortfalls.

struct UniverseArtifacts {
  std::string snapshot;   // canonical snapshot file
  std::string left;       // left-totalized records
  std::string halting;    // characteristic bits, one line
  std::string json;       // summary with config hash
};
UniverseArtifacts universe_report(const config::RunConfig& cfg);

std::string catalog_report(const config::RunConfig& cfg);

struct EntropyOutputs {
  std::string json;
  std::string csv;
  long violations = 0;
  bool ok = false;
};
EntropyOutputs entropy_report(const config::RunConfig& cfg,
                              const config::SlackTable& slack,
                              std::size_t count);

struct GapOutputs {
  std::string json;
  std::string csv;
  long violations = 0;
  bool ok = false;
};
GapOutputs gap_report(const config::RunConfig& cfg,
                      const config::SlackTable& slack, std::size_t count);

struct AlgstatsOutputs {
  std::string json;
  long violations = 0;
  bool ok = false;
};
AlgstatsOutputs algstats_report(const config::RunConfig& cfg,
                                const config::SlackTable& slack,
                                std::size_t random_instances);

// Measure every frozen constant from scratch.  The lab inequalities are
// calibrated at the given config, the machine coding gap at the default
// exhaustive universe.
config::SlackTable calibrate(const config::RunConfig& cfg);

}  // namespace aiq::report
