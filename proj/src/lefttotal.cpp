#include "aiq/lefttotal.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace aiq::lefttotal {

namespace {

// Smallest string lexicographically past x's whole subtree, or nothing
// when x is all ones and the subtree runs to the end of the order.
std::optional<BitString> subtree_end(const BitString& x) {
  BitString s = x;
  while (!s.empty() && s[s.size() - 1] == 1) s.pop_back();
  if (s.empty()) return std::nullopt;
  s.set(s.size() - 1, 1);
  return s;
}

BitString bits_of(const Int& v, long len) {
  BitString out;
  for (long t = len - 1; t >= 0; --t)
    out.push_back(mpz_tstbit(v.get_mpz_t(), static_cast<mp_bitcnt_t>(t)));
  return out;
}

}  // namespace

IntervalView::IntervalView(std::vector<machine::HaltRecord> records)
    : records_(std::move(records)) {
  std::sort(records_.begin(), records_.end(),
            [](const machine::HaltRecord& a, const machine::HaltRecord& b) {
              return shortlex_less(a.program, b.program);
            });
  by_lex_.resize(records_.size());
  std::iota(by_lex_.begin(), by_lex_.end(), std::size_t{0});
  std::sort(by_lex_.begin(), by_lex_.end(),
            [this](std::size_t i, std::size_t j) {
              return records_[i].program < records_[j].program;
            });
  lex_prefix_mass_.assign(records_.size() + 1, Rat(0));
  for (std::size_t k = 0; k < by_lex_.size(); ++k) {
    const BitString& cur = records_[by_lex_[k]].program;
    // In lexicographic order a prefix sits immediately before anything
    // it prefixes, so adjacent pairs expose every violation.
    if (k > 0 && records_[by_lex_[k - 1]].program.is_prefix_of(cur))
      throw std::invalid_argument("interval view: records not prefix-free");
    lex_prefix_mass_[k + 1] =
        lex_prefix_mass_[k] + pow2q(-static_cast<long>(cur.size()));
  }
  omega_ = lex_prefix_mass_.back();
}

BitString IntervalView::omega_bits(std::size_t depth) const {
  BitString out;
  Rat r = omega_;
  for (std::size_t i = 0; i < depth; ++i) {
    r *= 2;
    if (r >= 1) {
      out.push_back(1);
      r -= 1;
    } else {
      out.push_back(0);
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> IntervalView::subtree_range(
    const BitString& x) const {
  auto less_than = [this](std::size_t idx, const BitString& v) {
    return records_[idx].program < v;
  };
  auto lo = std::lower_bound(by_lex_.begin(), by_lex_.end(), x, less_than);
  auto end = subtree_end(x);
  auto hi = end ? std::lower_bound(by_lex_.begin(), by_lex_.end(), *end,
                                   less_than)
                : by_lex_.end();
  return {static_cast<std::size_t>(lo - by_lex_.begin()),
          static_cast<std::size_t>(hi - by_lex_.begin())};
}

const machine::HaltRecord* IntervalView::record_on_tape(
    const BitString& x) const {
  // A halting prefix of x, if one exists, is the largest program that is
  // lexicographically at most x: anything between them would have to
  // branch right of x inside the prefix, contradicting the order.
  auto it = std::upper_bound(
      by_lex_.begin(), by_lex_.end(), x,
      [this](const BitString& v, std::size_t idx) {
        return v < records_[idx].program;
      });
  if (it == by_lex_.begin()) return nullptr;
  const machine::HaltRecord& cand = records_[*(it - 1)];
  return cand.program.is_prefix_of(x) ? &cand : nullptr;
}

bool IntervalView::has_halting_prefix(const BitString& x) const {
  return record_on_tape(x) != nullptr;
}

Rat IntervalView::subtree_mass(const BitString& x) const {
  auto [lo, hi] = subtree_range(x);
  return lex_prefix_mass_[hi] - lex_prefix_mass_[lo];
}

bool IntervalView::is_total(const BitString& x) const {
  if (has_halting_prefix(x)) return true;
  return subtree_mass(x) == pow2q(-static_cast<long>(x.size()));
}

std::optional<BitString> IntervalView::shortest_total_prefix(
    const BitString& x) const {
  for (std::size_t len = 0; len <= x.size(); ++len) {
    BitString p = x.prefix(len);
    if (is_total(p)) return p;
  }
  return std::nullopt;
}

Rat IntervalView::mass_left_of(const BitString& x, const BitString& b) const {
  if (!is_total(b)) throw NotTotal("mass_left_of: base string is not total");
  Rat acc(0);
  for (const machine::HaltRecord& r : records_) {
    if (r.output != x) continue;
    if (left_of(b, r.program)) continue;  // strictly right of b: excluded
    acc += pow2q(-static_cast<long>(r.program.size()));
  }
  return acc;
}

std::vector<std::pair<BitString, Rat>> IntervalView::extension_measure(
    const BitString& v) const {
  if (!is_total(v))
    throw NotTotal("extension_measure: base string is not total");
  if (const machine::HaltRecord* r = record_on_tape(v))
    return {{r->output, Rat(1)}};
  std::map<BitString, Rat, bool (*)(const BitString&, const BitString&)> acc(
      &shortlex_less);
  auto [lo, hi] = subtree_range(v);
  for (std::size_t k = lo; k < hi; ++k) {
    const machine::HaltRecord& r = records_[by_lex_[k]];
    acc[r.output] += pow2q(static_cast<long>(v.size()) -
                           static_cast<long>(r.program.size()));
  }
  return {acc.begin(), acc.end()};
}

std::vector<BitString> IntervalView::left_total_violations(
    std::size_t limit) const {
  std::vector<BitString> bad;
  std::unordered_set<BitString, BitStringHash> seen;
  for (const machine::HaltRecord& r : records_) {
    for (std::size_t i = 0; i < r.program.size() && bad.size() < limit; ++i) {
      if (r.program[i] == 0) continue;
      BitString root = r.program.prefix(i);
      root.push_back(0);
      // every x branching left of some halting program extends a root of
      // this shape, and totality is inherited by extensions
      if (!seen.insert(root).second) continue;
      if (!is_total(root)) bad.push_back(root);
    }
    if (bad.size() >= limit) break;
  }
  std::sort(bad.begin(), bad.end(), shortlex_less);
  return bad;
}

IntervalView left_totalize(std::vector<machine::HaltRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const machine::HaltRecord& a, const machine::HaltRecord& b) {
              if (a.steps != b.steps) return a.steps < b.steps;
              return shortlex_less(a.program, b.program);
            });
  long scale = 0;
  for (const auto& r : records)
    scale = std::max(scale, static_cast<long>(r.program.size()));

  Int pos = 0;  // interval cursor, numerator at denominator 2^scale
  Int full = pow2z(scale);
  std::vector<machine::HaltRecord> out;
  for (const auto& r : records) {
    Int width = pow2z(scale - static_cast<long>(r.program.size()));
    Int stop = pos + width;
    if (stop > full)
      throw std::invalid_argument("left_totalize: total mass exceeds 1");
    while (pos < stop) {
      // largest aligned dyadic block starting at pos and fitting
      long align =
          pos == 0 ? scale
                   : static_cast<long>(mpz_scan1(pos.get_mpz_t(), 0));
      Int gap = stop - pos;
      long fit = floor_log2(Rat(gap));
      long j = std::min(std::min(align, fit), scale);
      out.push_back({bits_of(pos >> static_cast<mp_bitcnt_t>(j), scale - j),
                     r.output, r.steps});
      pos += pow2z(j);
    }
  }
  return IntervalView(std::move(out));
}

std::string write_left_total(const IntervalView& view,
                             const machine::MachineConfig& config,
                             const std::string& source_aux_id) {
  std::ostringstream os;
  os << "left-total v1\n";
  os << "machine " << config.version << '\n';
  os << "max-len " << config.max_len << '\n';
  os << "step-budget " << config.step_budget << '\n';
  os << "source-aux " << source_aux_id << '\n';
  os << "records " << view.records().size() << '\n';
  for (const auto& r : view.records()) {
    os << (r.program.empty() ? "-" : r.program.str()) << '\t'
       << (r.output.empty() ? "-" : r.output.str()) << '\t' << r.steps
       << '\n';
  }
  const Rat& w = view.omega();
  os << "omega " << w.get_num().get_str() << '/' << w.get_den().get_str()
     << '\n';
  os << "end\n";
  return os.str();
}

namespace {

std::string expect_line(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(key + ' ', 0) != 0)
    throw std::invalid_argument("left-total file: expected " + key);
  return line.substr(key.size() + 1);
}

BitString field_bits(const std::string& s) {
  if (s == "-") return BitString();
  return BitString(s);
}

}  // namespace

IntervalView read_left_total(const std::string& text,
                             machine::MachineConfig* config_out,
                             std::string* source_aux_id_out) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "left-total v1")
    throw std::invalid_argument("left-total file: bad header");
  machine::MachineConfig cfg;
  cfg.version = std::stoi(expect_line(in, "machine"));
  cfg.max_len = std::stol(expect_line(in, "max-len"));
  cfg.step_budget = std::stol(expect_line(in, "step-budget"));
  std::string source = expect_line(in, "source-aux");
  long n = std::stol(expect_line(in, "records"));
  if (n < 0) throw std::invalid_argument("left-total file: bad record count");

  std::vector<machine::HaltRecord> records;
  records.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw std::invalid_argument("left-total file: truncated records");
    std::istringstream ls(line);
    std::string prog, outp;
    long steps = 0;
    if (!(ls >> prog >> outp >> steps))
      throw std::invalid_argument("left-total file: bad record line");
    records.push_back({field_bits(prog), field_bits(outp), steps});
  }
  std::string omega_text = expect_line(in, "omega");
  if (!std::getline(in, line) || line != "end")
    throw std::invalid_argument("left-total file: missing end marker");

  IntervalView view(std::move(records));
  auto slash = omega_text.find('/');
  if (slash == std::string::npos)
    throw std::invalid_argument("left-total file: bad omega");
  Rat stored(omega_text.substr(0, slash) + "/" + omega_text.substr(slash + 1));
  stored.canonicalize();
  if (stored != view.omega())
    throw std::invalid_argument("left-total file: omega does not match records");

  if (config_out) *config_out = cfg;
  if (source_aux_id_out) *source_aux_id_out = source;
  return view;
}

}  // namespace aiq::lefttotal
