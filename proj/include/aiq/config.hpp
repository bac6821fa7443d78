#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "aiq/machine.hpp"

namespace aiq::config {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Frozen integer constants, one per inequality family.  The table is a
// plain-text file of `name = value` lines; it is regenerated only by the
// calibrate command and treated as fixed thresholds everywhere else.
struct SlackTable {
  std::vector<std::pair<std::string, long>> entries;

  bool has(const std::string& name) const;
  long get(const std::string& name) const;  // ConfigError when absent
  long get_or(const std::string& name, long fallback) const;
  void set(const std::string& name, long value);
};

// Accepts blank lines and `#` comments; names are [a-z0-9_]+; duplicate
// names are an error.  Rendering is canonical: entries in stored order,
// one per line, no comments.
SlackTable parse_slack_table(const std::string& text);
std::string render_slack_table(const SlackTable& table);
SlackTable load_slack_table(const std::string& path);
void save_slack_table(const std::string& path, const SlackTable& table);

// Everything a run needs to be reproducible.  The hash of the canonical
// rendering is stamped into every report.
struct RunConfig {
  machine::MachineConfig machine;
  long workers = 1;
  unsigned long long seed = 41;
  long log_frac_bits = 48;
  std::string catalog = "standard";
  std::string out_dir = "out";
  std::string slack_path = "config/slack.cfg";
  std::string aux_path;
};

void validate(const RunConfig& cfg);  // ConfigError on bad budgets
std::string canonical_text(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

// The table must carry a `version` entry equal to the machine version,
// otherwise thresholds calibrated for another machine would be applied.
void check_slack_version(const RunConfig& cfg, const SlackTable& table);

}  // namespace aiq::config
