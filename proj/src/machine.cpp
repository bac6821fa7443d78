#include "aiq/machine.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "aiq/quantum.hpp"

namespace aiq::machine {

using codec::BitReader;

namespace {

// Control-flow token for "this computation will never finish": reading
// past the auxiliary tape, exceeding the step budget, or asking PREP for
// a state that is not an exact unit vector.
struct Diverge {};

struct Ctx {
  long budget;
  long steps = 0;
  void charge(long n) {
    steps += n;
    if (steps > budget) throw Diverge{};
  }
};

BitString eval(BitReader& in, const BitString& aux, Ctx& ctx);

BitString eval_lit(BitReader& in, const BitString&, Ctx& ctx) {
  std::size_t before = in.pos();
  BitString x = codec::decode_string(in);
  ctx.charge(static_cast<long>(in.pos() - before + x.size()));
  return x;
}

BitString read_aux_range(const BitString& aux, const Int& start,
                         const Int& len, Ctx& ctx) {
  Int limit(static_cast<unsigned long>(aux.size()));
  if (start + len > limit) throw Diverge{};  // waits for missing input
  long k = static_cast<long>(start.get_ui());
  long n = static_cast<long>(len.get_ui());
  ctx.charge(n);
  return aux.substr(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
}

BitString eval(BitReader& in, const BitString& aux, Ctx& ctx) {
  ctx.charge(1);
  if (in.read_bit() == 0) return eval_lit(in, aux, ctx);  // 0: LIT
  ctx.charge(1);
  if (in.read_bit() == 0) {
    ctx.charge(1);
    if (in.read_bit() == 0) {  // 100: AUXCOPY
      std::size_t before = in.pos();
      Int n = codec::decode_number(in);
      ctx.charge(static_cast<long>(in.pos() - before));
      return read_aux_range(aux, Int(0), n, ctx);
    }
    // 101: AUXSLICE
    std::size_t before = in.pos();
    Int k = codec::decode_number(in);
    Int n = codec::decode_number(in);
    ctx.charge(static_cast<long>(in.pos() - before));
    return read_aux_range(aux, k, n, ctx);
  }
  ctx.charge(2);
  int b3 = in.read_bit();
  int b4 = in.read_bit();
  if (b3 == 0 && b4 == 0) {  // 1100: CAT
    BitString o1 = eval(in, aux, ctx);
    BitString o2 = eval(in, aux, ctx);
    ctx.charge(static_cast<long>(o1.size() + o2.size()));
    return o1 + o2;
  }
  if (b3 == 0 && b4 == 1) {  // 1101: PIPE
    BitString o1 = eval(in, aux, ctx);
    ctx.charge(static_cast<long>(o1.size()));
    return eval(in, o1, ctx);
  }
  if (b3 == 1 && b4 == 0) {  // 1110: PREP
    BitString o1 = eval(in, aux, ctx);
    auto amps = quantum::parse_unit_state_code(o1);
    if (!amps) throw Diverge{};
    quantum::CMatrix v = quantum::preparation_unitary(*amps);
    BitString out = quantum::encode_matrix(v);
    ctx.charge(static_cast<long>(8 * v.dim() * v.dim() + out.size()));
    return out;
  }
  throw codec::MalformedCode("reserved opcode");  // 1111
}

}  // namespace

RunResult run_program(const BitString& program, const BitString& aux,
                      long step_budget) {
  RunResult r;
  try {
    BitReader in(program);
    Ctx ctx{step_budget};
    BitString out = eval(in, aux, ctx);
    if (!in.at_end()) {
      r.status = RunStatus::Invalid;  // trailing bits: not a program
      return r;
    }
    r.status = RunStatus::Halted;
    r.output = std::move(out);
    r.steps = ctx.steps;
  } catch (const Diverge&) {
    r.status = RunStatus::Diverged;
  } catch (const codec::Truncated&) {
    r.status = RunStatus::Invalid;
  } catch (const codec::MalformedCode&) {
    r.status = RunStatus::Invalid;
  }
  return r;
}

// --- Program builders ------------------------------------------------------

BitString make_lit(const BitString& x) {
  return BitString("0") + codec::encode_string(x);
}

BitString make_auxcopy(long n) {
  return BitString("100") + codec::encode_number(Int(n));
}

BitString make_auxslice(long k, long n) {
  return BitString("101") + codec::encode_number(Int(k)) +
         codec::encode_number(Int(n));
}

BitString make_cat(const BitString& p1, const BitString& p2) {
  return BitString("1100") + p1 + p2;
}

BitString make_pipe(const BitString& p1, const BitString& p2) {
  return BitString("1101") + p1 + p2;
}

BitString make_prep(const BitString& p1) { return BitString("1110") + p1; }

BitString synthesize_copy_program(const BitString& target,
                                  const BitString& aux, long min_run) {
  if (target.empty()) return make_lit(target);
  struct Segment {
    bool from_aux;
    std::size_t aux_pos;
    BitString literal;
    std::size_t len;
  };
  std::vector<Segment> segments;
  std::size_t i = 0;
  BitString pending;
  auto flush = [&]() {
    if (!pending.empty()) {
      segments.push_back({false, 0, pending, pending.size()});
      pending = BitString();
    }
  };
  while (i < target.size()) {
    // Longest match of target[i..] anywhere in aux.
    std::size_t best_len = 0, best_pos = 0;
    for (std::size_t k = 0; k < aux.size(); ++k) {
      std::size_t l = 0;
      while (k + l < aux.size() && i + l < target.size() &&
             aux[k + l] == target[i + l])
        ++l;
      if (l > best_len) {
        best_len = l;
        best_pos = k;
      }
    }
    if (best_len >= static_cast<std::size_t>(min_run)) {
      flush();
      segments.push_back({true, best_pos, BitString(), best_len});
      i += best_len;
    } else {
      pending.push_back(target[i]);
      ++i;
    }
  }
  flush();
  auto emit = [](const Segment& s) {
    if (s.from_aux)
      return make_auxslice(static_cast<long>(s.aux_pos),
                           static_cast<long>(s.len));
    return make_lit(s.literal);
  };
  BitString prog = emit(segments.back());
  for (std::size_t j = segments.size() - 1; j-- > 0;)
    prog = make_cat(emit(segments[j]), prog);
  return prog;
}

// --- Enumeration -------------------------------------------------------

namespace {

BitString program_of(long len, unsigned long value) {
  BitString p;
  for (long b = len - 1; b >= 0; --b)
    p.push_back(static_cast<int>((value >> b) & 1));
  return p;
}

// Lengths above this are split into 16 chunks by leading bits so that
// workers share the heavy tail; the split is part of the deterministic
// item order, not of the result.
constexpr long kSplitLen = 12;

struct WorkItem {
  std::size_t aux_index;
  long len;
  unsigned long first;
  unsigned long count;
};

void run_item(const MachineConfig& config, const BitString& aux,
              const WorkItem& item, std::vector<HaltRecord>& out) {
  for (unsigned long v = item.first; v < item.first + item.count; ++v) {
    BitString p = program_of(item.len, v);
    RunResult r = run_program(p, aux, config.step_budget);
    if (r.status == RunStatus::Halted)
      out.push_back({std::move(p), std::move(r.output), r.steps});
  }
}

}  // namespace

UniverseSnapshot enumerate_universe(const MachineConfig& config,
                                    const std::vector<AuxSpec>& auxiliaries,
                                    int workers) {
  if (config.max_len < 1 || config.max_len > 30)
    throw std::invalid_argument("enumerate_universe: max_len out of range");
  for (const AuxSpec& a : auxiliaries) {
    if (a.id.empty() || a.id.find_first_of(" \t\n") != std::string::npos)
      throw std::invalid_argument("enumerate_universe: bad auxiliary id");
  }
  for (std::size_t i = 0; i < auxiliaries.size(); ++i)
    for (std::size_t j = i + 1; j < auxiliaries.size(); ++j)
      if (auxiliaries[i].id == auxiliaries[j].id)
        throw std::invalid_argument("enumerate_universe: duplicate aux id");

  std::vector<WorkItem> items;
  for (std::size_t ai = 0; ai < auxiliaries.size(); ++ai) {
    for (long len = 1; len <= config.max_len; ++len) {
      unsigned long total = 1ul << len;
      if (len <= kSplitLen) {
        items.push_back({ai, len, 0, total});
      } else {
        unsigned long chunk = total / 16;
        for (unsigned long c = 0; c < 16; ++c)
          items.push_back({ai, len, c * chunk, chunk});
      }
    }
  }

  std::vector<std::vector<HaltRecord>> results(items.size());
  int nw = std::max(1, workers);
  if (nw == 1) {
    for (std::size_t i = 0; i < items.size(); ++i)
      run_item(config, auxiliaries[items[i].aux_index].bits, items[i],
               results[i]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t i = static_cast<std::size_t>(w); i < items.size();
             i += static_cast<std::size_t>(nw))
          run_item(config, auxiliaries[items[i].aux_index].bits, items[i],
                   results[i]);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Assemble blocks in item order (already enumeration-sorted), then fold
  // in planted programs beyond the exhaustive bound and re-sort.
  std::vector<AuxBlock> blocks(auxiliaries.size());
  for (std::size_t ai = 0; ai < auxiliaries.size(); ++ai) {
    blocks[ai].aux_id = auxiliaries[ai].id;
    blocks[ai].aux = auxiliaries[ai].bits;
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& dst = blocks[items[i].aux_index].records;
    for (HaltRecord& r : results[i]) dst.push_back(std::move(r));
  }
  for (std::size_t ai = 0; ai < auxiliaries.size(); ++ai) {
    for (const BitString& p : auxiliaries[ai].plants) {
      if (p.size() <= static_cast<std::size_t>(config.max_len))
        continue;  // already covered by exhaustive enumeration
      RunResult r = run_program(p, auxiliaries[ai].bits, config.step_budget);
      if (r.status == RunStatus::Halted)
        blocks[ai].records.push_back({p, std::move(r.output), r.steps});
    }
    auto& recs = blocks[ai].records;
    std::sort(recs.begin(), recs.end(),
              [](const HaltRecord& a, const HaltRecord& b) {
                return shortlex_less(a.program, b.program);
              });
    recs.erase(std::unique(recs.begin(), recs.end(),
                           [](const HaltRecord& a, const HaltRecord& b) {
                             return a.program == b.program;
                           }),
               recs.end());
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const AuxBlock& a, const AuxBlock& b) {
              return a.aux_id < b.aux_id;
            });
  return UniverseSnapshot(config, std::move(blocks));
}

// --- Snapshot ----------------------------------------------------------

UniverseSnapshot::UniverseSnapshot(MachineConfig config,
                                   std::vector<AuxBlock> blocks)
    : config_(config), blocks_(std::move(blocks)) {
  index_.resize(blocks_.size());
  for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
    BlockIndex& ix = index_[bi];
    ix.total_mass = Rat(0);
    for (const HaltRecord& r : blocks_[bi].records) {
      Rat w = pow2q(-static_cast<long>(r.program.size()));
      ix.total_mass += w;
      auto [it, fresh] = ix.by_output.try_emplace(r.output);
      if (fresh) {
        it->second.min_len = static_cast<long>(r.program.size());
        it->second.witness = r.program;
        it->second.mass = w;
      } else {
        it->second.mass += w;
        // records are sorted, so the first witness already has min length
      }
    }
  }
}

const AuxBlock* UniverseSnapshot::find_block(const std::string& aux_id) const {
  for (const AuxBlock& b : blocks_)
    if (b.aux_id == aux_id) return &b;
  return nullptr;
}

namespace {
std::size_t block_pos(const std::vector<AuxBlock>& blocks,
                      const std::string& aux_id) {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].aux_id == aux_id) return i;
  throw std::invalid_argument("unknown auxiliary id: " + aux_id);
}
}  // namespace

std::optional<long> UniverseSnapshot::k_hat(const BitString& x,
                                            const std::string& aux_id) const {
  const auto& ix = index_[block_pos(blocks_, aux_id)];
  auto it = ix.by_output.find(x);
  if (it == ix.by_output.end()) return std::nullopt;
  return it->second.min_len;
}

Bits UniverseSnapshot::k_hat_bits(const BitString& x,
                                  const std::string& aux_id) const {
  auto k = k_hat(x, aux_id);
  return k ? Bits::from_int(*k) : Bits::infinity();
}

std::optional<BitString> UniverseSnapshot::shortest_program(
    const BitString& x, const std::string& aux_id) const {
  const auto& ix = index_[block_pos(blocks_, aux_id)];
  auto it = ix.by_output.find(x);
  if (it == ix.by_output.end()) return std::nullopt;
  return it->second.witness;
}

Rat UniverseSnapshot::m_hat(const BitString& x,
                            const std::string& aux_id) const {
  const auto& ix = index_[block_pos(blocks_, aux_id)];
  auto it = ix.by_output.find(x);
  if (it == ix.by_output.end()) return Rat(0);
  return it->second.mass;
}

Rat UniverseSnapshot::omega_lower(const std::string& aux_id) const {
  return index_[block_pos(blocks_, aux_id)].total_mass;
}

std::vector<BitString> UniverseSnapshot::outputs(
    const std::string& aux_id) const {
  const auto& ix = index_[block_pos(blocks_, aux_id)];
  std::vector<BitString> out;
  out.reserve(ix.by_output.size());
  for (const auto& [x, info] : ix.by_output) out.push_back(x);
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

// --- Derived quantities --------------------------------------------------

HaltingApprox halting_approx(const UniverseSnapshot& snapshot,
                             const std::string& aux_id) {
  const AuxBlock* block = snapshot.find_block(aux_id);
  if (!block) throw std::invalid_argument("unknown auxiliary id: " + aux_id);
  std::unordered_map<BitString, bool, BitStringHash> halting;
  for (const HaltRecord& r : block->records)
    if (r.program.size() <=
        static_cast<std::size_t>(snapshot.config().max_len))
      halting.emplace(r.program, true);
  long max_len = snapshot.config().max_len;
  HaltingApprox h;
  // Indices 0 .. 2^(max_len+1) - 3 enumerate every string of length
  // 1 .. max_len.
  Int total = pow2z(max_len + 1) - 2;
  for (Int i = 0; i < total; ++i) {
    BitString s = codec::xi_string(i);
    h.bits.push_back(halting.count(s) ? 1 : 0);
  }
  return h;
}

BitString combined_aux(const BitString& alpha, const HaltingApprox& halting) {
  return codec::encode_string(alpha) + halting.bits;
}

std::optional<long> mutual_info(const UniverseSnapshot& snapshot,
                                const BitString& x, const BitString& y,
                                const std::string& aux_id) {
  auto kx = snapshot.k_hat(x, aux_id);
  auto ky = snapshot.k_hat(y, aux_id);
  auto kxy = snapshot.k_hat(codec::encode_tuple({x, y}), aux_id);
  if (!kx || !ky || !kxy) return std::nullopt;
  return *kx + *ky - *kxy;
}

std::optional<long> info_with_halting(const UniverseSnapshot& snapshot,
                                      const BitString& x,
                                      const std::string& plain_aux_id,
                                      const std::string& combined_aux_id) {
  auto plain = snapshot.k_hat(x, plain_aux_id);
  auto cond = snapshot.k_hat(x, combined_aux_id);
  if (!plain || !cond) return std::nullopt;
  return *plain - *cond;
}

StreamInfoDiag mutual_info_stream_diag(const UniverseSnapshot& snapshot,
                                       const std::string& aux_a,
                                       const std::string& aux_b) {
  StreamInfoDiag diag;
  diag.value = Bits::infinity();
  Rat sum(0);
  for (const BitString& x : snapshot.outputs(aux_a)) {
    Rat mx = snapshot.m_hat(x, aux_a);
    for (const BitString& y : snapshot.outputs(aux_b)) {
      auto mi = mutual_info(snapshot, x, y);
      if (!mi) {
        ++diag.skipped;
        continue;
      }
      sum += mx * snapshot.m_hat(y, aux_b) * pow2q(*mi);
      ++diag.terms;
    }
  }
  if (sum > 0) diag.value = Bits::neg_log(Rat(1) / sum);
  return diag;
}

bool snapshot_subset(const UniverseSnapshot& small,
                     const UniverseSnapshot& big) {
  for (const AuxBlock& sb : small.blocks()) {
    const AuxBlock* bb = big.find_block(sb.aux_id);
    if (!bb) return false;
    std::unordered_map<BitString, const HaltRecord*, BitStringHash> ix;
    for (const HaltRecord& r : bb->records) ix.emplace(r.program, &r);
    for (const HaltRecord& r : sb.records) {
      auto it = ix.find(r.program);
      if (it == ix.end()) return false;
      if (it->second->output != r.output || it->second->steps != r.steps)
        return false;
    }
  }
  return true;
}

// --- Serialization -------------------------------------------------------

namespace {

std::string bits_or_dash(const BitString& b) {
  return b.empty() ? std::string("-") : b.str();
}

BitString dash_or_bits(const std::string& s) {
  if (s == "-") return BitString();
  return BitString(s);
}

std::string rat_str(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

[[noreturn]] void bad_snapshot(const std::string& why) {
  throw std::runtime_error("snapshot parse error: " + why);
}

}  // namespace

void write_snapshot(std::ostream& os, const UniverseSnapshot& snapshot) {
  const MachineConfig& c = snapshot.config();
  os << "universe-snapshot v1\n";
  os << "machine " << c.version << "\n";
  os << "max-len " << c.max_len << "\n";
  os << "step-budget " << c.step_budget << "\n";
  os << "aux-count " << snapshot.blocks().size() << "\n";
  std::size_t total = 0;
  for (const AuxBlock& b : snapshot.blocks()) {
    os << "aux " << b.aux_id << " " << bits_or_dash(b.aux) << "\n";
    total += b.records.size();
  }
  os << "records " << total << "\n";
  for (const AuxBlock& b : snapshot.blocks())
    for (const HaltRecord& r : b.records)
      os << r.program.str() << "\t" << b.aux_id << "\t"
         << bits_or_dash(r.output) << "\t" << r.steps << "\n";
  for (const AuxBlock& b : snapshot.blocks())
    os << "omega-lower " << b.aux_id << " "
       << rat_str(snapshot.omega_lower(b.aux_id)) << "\n";
  os << "end\n";
}

UniverseSnapshot read_snapshot(std::istream& is) {
  std::string line;
  auto next = [&](const char* what) {
    if (!std::getline(is, line)) bad_snapshot(std::string("missing ") + what);
    return line;
  };
  if (next("header") != "universe-snapshot v1") bad_snapshot("bad header");
  MachineConfig config;
  std::size_t aux_count = 0, record_count = 0;
  {
    std::istringstream ls(next("machine"));
    std::string tag;
    ls >> tag >> config.version;
    if (tag != "machine") bad_snapshot("expected machine line");
  }
  {
    std::istringstream ls(next("max-len"));
    std::string tag;
    ls >> tag >> config.max_len;
    if (tag != "max-len") bad_snapshot("expected max-len line");
  }
  {
    std::istringstream ls(next("step-budget"));
    std::string tag;
    ls >> tag >> config.step_budget;
    if (tag != "step-budget") bad_snapshot("expected step-budget line");
  }
  {
    std::istringstream ls(next("aux-count"));
    std::string tag;
    ls >> tag >> aux_count;
    if (tag != "aux-count") bad_snapshot("expected aux-count line");
  }
  std::vector<AuxBlock> blocks(aux_count);
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < aux_count; ++i) {
    std::istringstream ls(next("aux"));
    std::string tag, id, bits;
    ls >> tag >> id >> bits;
    if (tag != "aux" || id.empty()) bad_snapshot("expected aux line");
    blocks[i].aux_id = id;
    blocks[i].aux = dash_or_bits(bits);
    if (!by_id.emplace(id, i).second) bad_snapshot("duplicate aux id");
  }
  {
    std::istringstream ls(next("records"));
    std::string tag;
    ls >> tag >> record_count;
    if (tag != "records") bad_snapshot("expected records line");
  }
  for (std::size_t i = 0; i < record_count; ++i) {
    std::istringstream ls(next("record"));
    std::string prog, id, out;
    long steps = 0;
    ls >> prog >> id >> out >> steps;
    auto it = by_id.find(id);
    if (it == by_id.end()) bad_snapshot("record under unknown aux id");
    blocks[it->second].records.push_back(
        {BitString(prog), dash_or_bits(out), steps});
  }
  std::map<std::string, std::string> stored_omega;
  for (std::size_t i = 0; i < aux_count; ++i) {
    std::istringstream ls(next("omega-lower"));
    std::string tag, id, frac;
    ls >> tag >> id >> frac;
    if (tag != "omega-lower") bad_snapshot("expected omega-lower line");
    stored_omega[id] = frac;
  }
  if (next("end") != "end") bad_snapshot("expected end line");
  for (AuxBlock& b : blocks) {
    if (!std::is_sorted(b.records.begin(), b.records.end(),
                        [](const HaltRecord& a, const HaltRecord& c) {
                          return shortlex_less(a.program, c.program);
                        }))
      bad_snapshot("records out of order");
  }
  UniverseSnapshot snapshot(config, std::move(blocks));
  for (const AuxBlock& b : snapshot.blocks()) {
    auto it = stored_omega.find(b.aux_id);
    if (it == stored_omega.end() ||
        it->second != rat_str(snapshot.omega_lower(b.aux_id)))
      bad_snapshot("omega-lower does not match records");
  }
  return snapshot;
}

}  // namespace aiq::machine
