#include "aiq/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace aiq::config {

namespace {

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

bool SlackTable::has(const std::string& name) const {
  for (const auto& [k, v] : entries)
    if (k == name) return true;
  return false;
}

long SlackTable::get(const std::string& name) const {
  for (const auto& [k, v] : entries)
    if (k == name) return v;
  throw ConfigError("slack table has no entry named " + name);
}

long SlackTable::get_or(const std::string& name, long fallback) const {
  for (const auto& [k, v] : entries)
    if (k == name) return v;
  return fallback;
}

void SlackTable::set(const std::string& name, long value) {
  for (auto& [k, v] : entries)
    if (k == name) {
      v = value;
      return;
    }
  entries.push_back({name, value});
}

SlackTable parse_slack_table(const std::string& text) {
  SlackTable table;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("slack table line " + std::to_string(lineno) +
                        ": expected name = value");
    std::string name = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!valid_name(name))
      throw ConfigError("slack table line " + std::to_string(lineno) +
                        ": bad name '" + name + "'");
    if (table.has(name))
      throw ConfigError("slack table line " + std::to_string(lineno) +
                        ": duplicate name '" + name + "'");
    try {
      std::size_t used = 0;
      long v = std::stol(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      table.entries.push_back({name, v});
    } catch (const std::exception&) {
      throw ConfigError("slack table line " + std::to_string(lineno) +
                        ": bad integer '" + value + "'");
    }
  }
  return table;
}

std::string render_slack_table(const SlackTable& table) {
  std::ostringstream out;
  for (const auto& [k, v] : table.entries) out << k << " = " << v << "\n";
  return out.str();
}

SlackTable load_slack_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read slack table: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_slack_table(buf.str());
}

void save_slack_table(const std::string& path, const SlackTable& table) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write slack table: " + path);
  out << render_slack_table(table);
}

void validate(const RunConfig& cfg) {
  if (cfg.machine.max_len <= 0)
    throw ConfigError("program length bound must be positive");
  if (cfg.machine.step_budget <= 0)
    throw ConfigError("step budget must be positive");
  if (cfg.workers <= 0) throw ConfigError("worker count must be positive");
  if (cfg.log_frac_bits <= 0)
    throw ConfigError("log interval width must be positive");
  if (cfg.catalog != "standard")
    throw ConfigError("unknown catalog spec: " + cfg.catalog);
  if (cfg.out_dir.empty()) throw ConfigError("output directory is empty");
}

std::string canonical_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "machine_version = " << cfg.machine.version << "\n"
      << "max_len = " << cfg.machine.max_len << "\n"
      << "step_budget = " << cfg.machine.step_budget << "\n"
      << "seed = " << cfg.seed << "\n"
      << "log_frac_bits = " << cfg.log_frac_bits << "\n"
      << "catalog = " << cfg.catalog << "\n";
  // worker count and paths are deliberately left out: outputs must not
  // depend on them
  return out.str();
}

std::string config_hash(const RunConfig& cfg) {
  std::string text = canonical_text(cfg);
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex;
  for (int i = 15; i >= 0; --i) out << "0123456789abcdef"[(h >> (4 * i)) & 15];
  return out.str();
}

void check_slack_version(const RunConfig& cfg, const SlackTable& table) {
  long v = table.get("version");
  if (v != cfg.machine.version)
    throw ConfigError("slack table was calibrated for machine version " +
                      std::to_string(v) + ", not " +
                      std::to_string(cfg.machine.version));
}

}  // namespace aiq::config
