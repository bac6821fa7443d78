#include "aiq/algstats.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>

namespace aiq::algstats {

namespace {

Int floor_rat(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

BitString fixed_width_bits(const Int& k, long width) {
  BitString out;
  for (long i = width - 1; i >= 0; --i)
    out.push_back(mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(i)));
  return out;
}

const machine::AuxBlock* block_with_aux(const machine::UniverseSnapshot& snap,
                                        const BitString& aux) {
  for (const auto& b : snap.blocks())
    if (b.aux == aux) return &b;
  return nullptr;
}

long small_value(const Int& v, long lo, long hi, const char* what) {
  if (v < lo || v > hi)
    throw std::invalid_argument(std::string(what) + ": value out of range");
  return v.get_si();
}

// Positive part of a map's mass-weighted sum through the given level:
// sum of m(a) 2^(-g(a)) over points with g(a) <= level.
Rat early_mass(const PrimitiveMap& g, const PrimitiveMeasure& m, long level) {
  Rat sum(0);
  for (const auto& [a, v] : g) {
    Rat ma = measure_mass(m, a);
    if (ma == 0) continue;
    if (v > level) continue;
    sum += ma * pow2q(-small_value(v, 0, 1L << 20, "early_mass"));
  }
  return sum;
}

std::optional<long> halting_info_probe(const BitString& x,
                                       const machine::MachineConfig& config,
                                       const machine::HaltingApprox& halting) {
  BitString comb = machine::combined_aux(BitString(), halting);
  std::vector<machine::AuxSpec> specs;
  specs.push_back({"p",
                   BitString(),
                   {machine::make_lit(x),
                    machine::synthesize_copy_program(x, BitString())}});
  specs.push_back({"c",
                   comb,
                   {machine::make_lit(x),
                    machine::synthesize_copy_program(x, comb)}});
  machine::UniverseSnapshot probe = machine::enumerate_universe(config, specs);
  return machine::info_with_halting(probe, x, "p", "c");
}

}  // namespace

BitString output_string(const Int& n) {
  if (n < 0) throw std::invalid_argument("output_string: negative index");
  if (n == 0) return BitString();
  return codec::xi_string(n - 1);
}

Int output_index(const BitString& s) {
  if (s.empty()) return Int(0);
  return codec::xi_index(s) + 1;
}

Rat measure_mass(const PrimitiveMeasure& q, const Int& x) {
  auto it = std::lower_bound(
      q.begin(), q.end(), x,
      [](const std::pair<Int, Rat>& e, const Int& key) { return e.first < key; });
  if (it != q.end() && it->first == x) return it->second;
  return Rat(0);
}

std::optional<Int> map_value(const PrimitiveMap& f, const Int& a) {
  auto it = std::lower_bound(
      f.begin(), f.end(), a,
      [](const std::pair<Int, Int>& e, const Int& key) { return e.first < key; });
  if (it != f.end() && it->first == a) return it->second;
  return std::nullopt;
}

std::optional<PrimitiveMeasure> parse_probability_measure(
    const BitString& buffer) {
  try {
    codec::Decoded d = codec::decode_stream(buffer, codec::Kind::Measure);
    if (d.bits_consumed != buffer.size()) return std::nullopt;
    auto q = std::get<PrimitiveMeasure>(d.value);
    Rat total(0);
    for (const auto& [key, mass] : q) total += mass;
    if (total != 1) return std::nullopt;
    return q;
  } catch (const codec::Truncated&) {
    return std::nullopt;
  } catch (const codec::MalformedCode&) {
    return std::nullopt;
  }
}

std::optional<PrimitiveMap> parse_map_code(const BitString& buffer) {
  try {
    codec::Decoded d = codec::decode_stream(buffer, codec::Kind::Map);
    if (d.bits_consumed != buffer.size()) return std::nullopt;
    return std::get<PrimitiveMap>(d.value);
  } catch (const codec::Truncated&) {
    return std::nullopt;
  } catch (const codec::MalformedCode&) {
    return std::nullopt;
  }
}

BitString conditioned_aux(const BitString& program, const BitString& base) {
  return codec::encode_string(program) + base;
}

DeficiencyValue deficiency(const Int& x, const PrimitiveMeasure& q,
                           const BitString& v,
                           const machine::UniverseSnapshot& snapshot) {
  Rat mass = measure_mass(q, x);
  if (mass == 0) throw ZeroMass("deficiency: point carries no mass");
  const machine::AuxBlock* block = block_with_aux(snapshot, v);
  if (!block)
    throw Undefined("deficiency: no block carries the conditioning string");
  std::optional<long> kh = snapshot.k_hat(output_string(x), block->aux_id);
  if (!kh) throw Undefined("deficiency: nothing reaches the point");
  DeficiencyValue out;
  out.surprisal = floor_neg_log2(mass);
  out.conditional = *kh;
  out.bits = out.surprisal - out.conditional;
  return out;
}

long penalty_value(PenaltyShape shape, long k) {
  long kk = std::max<long>(k, 1);
  if (shape == PenaltyShape::Linear) return kk;
  return 2 * floor_log2(Rat(kk));
}

StochasticityCertificate stochasticity(const Int& x, PenaltyShape shape,
                                       const machine::UniverseSnapshot& snapshot,
                                       const std::string& measure_block) {
  const machine::AuxBlock* mb = snapshot.find_block(measure_block);
  if (!mb)
    throw Undefined("stochasticity: snapshot has no block " + measure_block);
  std::optional<StochasticityCertificate> best;
  for (const auto& rec : mb->records) {
    std::optional<PrimitiveMeasure> q = parse_probability_measure(rec.output);
    if (!q) continue;
    if (measure_mass(*q, x) == 0) continue;
    DeficiencyValue d;
    try {
      d = deficiency(x, *q, conditioned_aux(rec.program, mb->aux), snapshot);
    } catch (const Undefined&) {
      continue;
    }
    StochasticityCertificate cand;
    cand.j = static_cast<long>(rec.program.size());
    cand.k = d.bits;
    cand.score = cand.j + penalty_value(shape, d.bits);
    cand.v = rec.program;
    cand.q = std::move(*q);
    if (!best || cand.score < best->score) best = std::move(cand);
  }
  if (!best) throw NoMeasureFound("stochasticity: nothing prices the point");
  return *best;
}

machine::UniverseSnapshot stochastic_universe(
    const machine::MachineConfig& config, const BitString& base,
    const std::vector<BitString>& measure_plants, const BitString& target,
    const std::string& measure_block,
    const std::vector<machine::AuxSpec>& extra_blocks) {
  machine::AuxSpec mspec{measure_block, base, measure_plants};
  machine::UniverseSnapshot first = machine::enumerate_universe(config, {mspec});
  const machine::AuxBlock* mb = first.find_block(measure_block);
  std::vector<machine::AuxSpec> specs{mspec};
  long index = 0;
  for (const auto& rec : mb->records) {
    if (!parse_probability_measure(rec.output)) continue;
    BitString aux = conditioned_aux(rec.program, base);
    machine::AuxSpec spec;
    spec.id = measure_block + std::to_string(index++);
    spec.bits = aux;
    spec.plants = {machine::make_lit(target),
                   machine::synthesize_copy_program(target, aux)};
    specs.push_back(std::move(spec));
  }
  for (const auto& b : extra_blocks) specs.push_back(b);
  return machine::enumerate_universe(config, specs);
}

Rat family_expectation(const PrimitiveMeasure& q_over_maps,
                       const PrimitiveMeasure& m,
                       const std::vector<std::vector<Int>>& sets) {
  Rat miss(0);
  for (const auto& [gkey, gmass] : q_over_maps) {
    std::optional<PrimitiveMap> g = parse_map_code(output_string(gkey));
    if (!g)
      throw std::invalid_argument(
          "family_expectation: support key is not a map code");
    bool hit = false;
    for (std::size_t n = 0; n < sets.size() && !hit; ++n) {
      for (const auto& [a, ma] : m) {
        (void)ma;
        std::optional<Int> v = map_value(*g, a);
        if (!v || *v != Int(static_cast<long>(n))) continue;
        if (std::binary_search(sets[n].begin(), sets[n].end(), a)) {
          hit = true;
          break;
        }
      }
    }
    if (!hit) miss += gmass;
  }
  return miss;
}

bool leq_exp_neg(const Rat& r, long n) {
  if (n < 0) throw std::invalid_argument("leq_exp_neg: negative exponent");
  if (r <= 0) return true;
  if (n == 0) return r <= 1;
  // Enclose e^n by the partial sum S of its series and a certified
  // remainder: the tail after T terms is below term(T+1) * (T+2)/(T+2-n)
  // once T + 2 > n.  Then e^-n lies in [1/(S+R), 1/S) and the comparison
  // is rational on both sides; refine until they separate (r is rational,
  // the bound is not, so they always do).
  for (long t = 2 * n + 8;; t *= 2) {
    Rat s(1);
    Rat term(1);
    for (long i = 1; i <= t; ++i) {
      term *= n;
      term /= i;
      s += term;
    }
    Rat next = term * n / (t + 1);
    Rat rem = next * (t + 2) / (t + 2 - n);
    if (r * (s + rem) <= 1) return true;
    if (r * s >= 1) return false;
  }
}

CoveringFamily search_covering_family(const PrimitiveMeasure& q_over_maps,
                                      const PrimitiveMeasure& m, long s,
                                      long c, long d) {
  if (c < 1 || d < 1 || s < 0)
    throw std::invalid_argument("search_covering_family: need c, d >= 1, s >= 0");
  if (q_over_maps.empty())
    throw std::invalid_argument("search_covering_family: empty map measure");
  long width = c * d * (1L << (s + 1));  // largest set, at level 0
  if (m.size() > 8 || s > 3 || width > 64)
    throw InstanceTooLarge("search_covering_family: desk caps exceeded");

  std::vector<Int> reals;
  for (const auto& [a, ma] : m) {
    if (ma <= 0)
      throw std::invalid_argument("search_covering_family: masses must be positive");
    reals.push_back(a);
  }

  // decode the supported maps and check each keeps enough early mass
  struct Entry {
    Rat mass;
    std::vector<std::vector<char>> level;  // [n][real index]
  };
  std::vector<Entry> entries;
  for (const auto& [gkey, gmass] : q_over_maps) {
    std::optional<PrimitiveMap> g = parse_map_code(output_string(gkey));
    if (!g)
      throw std::invalid_argument(
          "search_covering_family: support key is not a map code");
    if (early_mass(*g, m, s) < pow2q(-s - 1))
      throw std::invalid_argument(
          "search_covering_family: a supported map keeps too little early mass");
    Entry e;
    e.mass = gmass;
    e.level.assign(s + 1, std::vector<char>(reals.size(), 0));
    for (std::size_t i = 0; i < reals.size(); ++i) {
      std::optional<Int> v = map_value(*g, reals[i]);
      if (!v || *v < 0 || *v > s) continue;
      e.level[v->get_si()][i] = 1;
    }
    entries.push_back(std::move(e));
  }

  // ground set: support of m, then fresh numbers that meet no level set
  std::vector<Int> ground = reals;
  Int pad = reals.empty() ? Int(0) : reals.back() + 1;
  for (long i = 0; i < width; ++i) ground.push_back(pad + i);

  std::vector<long> sizes(s + 1);
  for (long n = 0; n <= s; ++n) sizes[n] = c * d * (1L << (s + 1 - n));

  // canonical order: per level, subsets as sorted index tuples in
  // lexicographic order, levels nested outermost first
  const long kLeafCap = 2000000;
  long leaves = 0;
  std::vector<std::vector<long>> choice(s + 1);
  Rat win_expectation;

  std::function<bool(long, const std::vector<char>&)> descend =
      [&](long n, const std::vector<char>& alive) -> bool {
    if (n > s) {
      ++leaves;
      Rat e(0);
      for (std::size_t i = 0; i < entries.size(); ++i)
        if (alive[i]) e += entries[i].mass;
      if (leq_exp_neg(e, c * d)) {
        win_expectation = e;
        return true;
      }
      if (leaves >= kLeafCap)
        throw InstanceTooLarge("search_covering_family: search budget exceeded");
      return false;
    }
    long k = sizes[n];
    long g = static_cast<long>(ground.size());
    std::vector<long> comb(k);
    for (long i = 0; i < k; ++i) comb[i] = i;
    for (;;) {
      std::vector<char> next = alive;
      for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!next[i]) continue;
        for (long idx : comb) {
          if (idx >= static_cast<long>(reals.size())) break;  // padding zone
          if (entries[i].level[n][idx]) {
            next[i] = 0;
            break;
          }
        }
      }
      choice[n] = comb;
      if (descend(n + 1, next)) return true;
      // next combination in lexicographic order
      long j = k - 1;
      while (j >= 0 && comb[j] == g - k + j) --j;
      if (j < 0) break;
      ++comb[j];
      for (long i = j + 1; i < k; ++i) comb[i] = comb[i - 1] + 1;
    }
    return false;
  };

  std::vector<char> all_alive(entries.size(), 1);
  if (!descend(0, all_alive))
    throw NotFound("search_covering_family: no family within the caps");

  CoveringFamily fam;
  fam.c = c;
  fam.d = d;
  fam.s = s;
  fam.expectation = win_expectation;
  for (long n = 0; n <= s; ++n) {
    std::vector<Int> set;
    for (long idx : choice[n]) set.push_back(ground[idx]);
    fam.sets.push_back(std::move(set));
  }
  return fam;
}

CoveringSweep covering_sweep(const PrimitiveMeasure& q_over_maps,
                             const PrimitiveMeasure& m, long s, long d) {
  CoveringSweep out;
  for (long c = 1; c <= 8; ++c) {
    try {
      CoveringFamily fam = search_covering_family(q_over_maps, m, s, c, d);
      out.smallest_c = c;
      out.family = std::move(fam);
      return out;
    } catch (const InstanceTooLarge&) {
    } catch (const NotFound&) {
    }
  }
  return out;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Violation:
      return "violation";
    default:
      return "proxy-inconclusive";
  }
}

long slack_allowance(const SlackBound& slack, long base) {
  long b = std::max<long>(base, 0);
  return slack.coeff * ceil_log2(Rat(b + 2)) + slack.add;
}

SoftminReport softmin_harness(const PrimitiveMap& f, const PrimitiveMeasure& m,
                              const machine::MachineConfig& config,
                              const SlackBound& slack,
                              const std::vector<PrimitiveMeasure>& extra_measures) {
  Rat total(0);
  for (const auto& [a, ma] : m) {
    if (ma <= 0)
      throw std::invalid_argument("softmin_harness: masses must be positive");
    total += ma;
  }
  if (total != 1)
    throw std::invalid_argument("softmin_harness: m must be a probability measure");
  if (f.empty()) throw std::invalid_argument("softmin_harness: empty map");

  struct Point {
    Int a;
    long fa;
    Rat ma;
  };
  std::vector<Point> points;
  for (const auto& [a, v] : f) {
    Rat ma = measure_mass(m, a);
    if (ma == 0) continue;
    points.push_back({a, small_value(v, 0, 4096, "softmin_harness"), ma});
  }
  if (points.empty())
    throw std::invalid_argument("softmin_harness: f never meets the support of m");

  SoftminReport rep;
  for (const auto& p : points) rep.sum += p.ma * pow2q(-p.fa);
  rep.level = ceil_neg_log2(rep.sum);
  for (const auto& p : points) {
    Rat w = p.ma * pow2q(-p.fa);
    if (p.fa > rep.level)
      rep.tail += w;
    else
      rep.kept += w;
  }
  rep.mass_floor = rep.sum >= pow2q(-rep.level);
  rep.tail_bounded = rep.tail <= pow2q(-rep.level - 1);
  rep.kept_above = rep.kept >= pow2q(-rep.level - 1);

  // planted measures: a point mass on f's code, an even split with a
  // sibling map, then whatever the caller adds
  BitString fcode = codec::encode_map(f);
  Int fx = output_index(fcode);
  std::vector<PrimitiveMeasure> planted;
  planted.push_back({{fx, Rat(1)}});
  PrimitiveMap sibling = f;
  sibling.back().second += 1;
  Int gx = output_index(codec::encode_map(sibling));
  if (fx < gx)
    planted.push_back({{fx, Rat(1, 2)}, {gx, Rat(1, 2)}});
  else
    planted.push_back({{gx, Rat(1, 2)}, {fx, Rat(1, 2)}});
  for (const auto& e : extra_measures) planted.push_back(e);

  BitString alpha = codec::encode_measure(m);
  std::vector<BitString> plants;
  for (const auto& q : planted)
    plants.push_back(machine::make_lit(codec::encode_measure(q)));
  plants.push_back(machine::make_lit(fcode));
  for (const auto& p : points)
    plants.push_back(machine::make_lit(output_string(p.a)));
  machine::UniverseSnapshot snap =
      stochastic_universe(config, alpha, plants, fcode, "m");

  std::optional<long> best;
  for (const auto& p : points) {
    std::optional<long> kh = snap.k_hat(output_string(p.a), "m");
    if (!kh) continue;
    long v = p.fa + *kh;
    if (!best || v < *best) {
      best = v;
      rep.best_a = p.a;
    }
  }
  if (!best)
    throw Undefined("softmin_harness: no point of f is reachable");
  rep.lhs = *best;

  rep.certificate = stochasticity(fx, PenaltyShape::TwoLog, snap, "m");
  rep.rhs = Bits::neg_log(rep.sum) + rep.certificate.score;
  rep.slack_allowed = slack_allowance(slack, rep.rhs.floor_value());
  rep.margin = Bits::from_int(rep.lhs).minus(rep.rhs);

  // restrict the certificate's measure to maps keeping early mass; f's
  // own code always survives because its kept part is the kept sum above
  rep.proof_d = std::max<long>(rep.certificate.k, 1);
  Rat keep_total(0);
  std::vector<std::pair<Int, Rat>> kept_entries;
  for (const auto& [gkey, gmass] : rep.certificate.q) {
    std::optional<PrimitiveMap> g = parse_map_code(output_string(gkey));
    if (!g) continue;
    if (early_mass(*g, m, rep.level) < pow2q(-rep.level - 1)) continue;
    kept_entries.push_back({gkey, gmass});
    keep_total += gmass;
    if (gkey == fx) rep.target_kept = true;
  }
  if (keep_total > 0)
    for (const auto& [gkey, gmass] : kept_entries)
      rep.conditioned_q.push_back({gkey, gmass / keep_total});

  bool exact_ok =
      rep.mass_floor && rep.tail_bounded && rep.kept_above && rep.target_kept;
  bool within = Bits::from_int(rep.lhs) <= rep.rhs + rep.slack_allowed;
  rep.verdict =
      (exact_ok && within) ? Verdict::Holds : Verdict::Violation;
  return rep;
}

GlobalSoftminReport global_softmin_harness(const PrimitiveMap& f,
                                           const machine::UniverseSnapshot& snapshot,
                                           const lefttotal::IntervalView& view,
                                           const machine::HaltingApprox& halting,
                                           const SlackBound& slack) {
  struct Point {
    Int a;
    long fa;
    BitString str;
  };
  std::vector<Point> points;
  for (const auto& [a, v] : f)
    points.push_back(
        {a, small_value(v, 0, 4096, "global_softmin_harness"), output_string(a)});
  if (points.empty())
    throw std::invalid_argument("global_softmin_harness: empty map");

  // the rebuilt records must tile contiguously from zero, which is what
  // makes totality a pure boundary question
  std::vector<std::pair<Rat, const machine::HaltRecord*>> lex;
  for (const auto& r : view.records()) {
    Rat start = Rat(r.program.value()) * pow2q(-static_cast<long>(r.program.size()));
    lex.push_back({start, &r});
  }
  std::sort(lex.begin(), lex.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Rat pos(0);
  for (const auto& [start, r] : lex) {
    if (start != pos)
      throw std::invalid_argument(
          "global_softmin_harness: view is not contiguous from zero");
    pos += pow2q(-static_cast<long>(r->program.size()));
  }

  std::unordered_map<BitString, Rat, BitStringHash> mass;
  for (const auto& r : view.records())
    mass[r.output] += pow2q(-static_cast<long>(r.program.size()));

  GlobalSoftminReport rep;
  for (const auto& p : points) {
    auto it = mass.find(p.str);
    if (it != mass.end()) rep.sum += it->second * pow2q(-p.fa);
  }
  if (rep.sum == 0)
    throw std::invalid_argument(
        "global_softmin_harness: f misses every rebuilt output");
  rep.level = 1 + ceil_neg_log2(rep.sum);

  auto level_at = [&](const BitString& z) -> std::optional<long> {
    Rat sum(0);
    for (const auto& p : points)
      sum += view.mass_left_of(p.str, z) * pow2q(-p.fa);
    if (sum == 0) return std::nullopt;
    return ceil_neg_log2(sum);
  };

  // crossing boundary: walking tiles left to right, the first position
  // where the captured weighted mass reaches 2^(1-level)
  Rat threshold = pow2q(1 - rep.level);
  std::unordered_map<BitString, long, BitStringHash> fa_by_output;
  for (const auto& p : points)
    if (!fa_by_output.count(p.str)) fa_by_output.emplace(p.str, p.fa);
  Rat captured(0);
  Rat crossing(-1);
  for (const auto& [start, r] : lex) {
    auto it = fa_by_output.find(r->output);
    if (it != fa_by_output.end())
      captured += pow2q(-static_cast<long>(r->program.size())) *
                  pow2q(-it->second);
    if (captured >= threshold) {
      crossing = start;
      break;
    }
  }
  if (crossing < 0)
    throw NotFound("global_softmin_harness: weighted mass never crosses");

  // shortest total string whose right edge clears the crossing: smallest
  // length with an integer k+1 in (crossing * 2^len, omega * 2^len]
  long maxlen = 0;
  for (const auto& r : view.records())
    maxlen = std::max(maxlen, static_cast<long>(r.program.size()));
  bool found = false;
  for (long len = 0; len <= maxlen + 1 && !found; ++len) {
    Int edge = floor_rat(crossing * pow2q(len)) + 1;
    if (Rat(edge) * pow2q(-len) <= view.omega()) {
      rep.border = fixed_width_bits(edge - 1, len);
      found = true;
    }
  }
  if (!found)
    throw NotFound("global_softmin_harness: no total string past the crossing");
  if (!view.is_total(rep.border))
    throw NotFound("global_softmin_harness: border candidate is not total");
  std::optional<long> at = level_at(rep.border);
  if (!at || *at >= rep.level)
    throw NotFound("global_softmin_harness: border misses the level drop");
  rep.border_level = *at;
  if (!rep.border.empty()) {
    BitString parent = rep.border.prefix(rep.border.size() - 1);
    rep.parent_not_total = !view.is_total(parent);
  } else {
    rep.parent_not_total = true;  // nothing to chop
  }

  // second route: scan the border's own length left to right and keep
  // the first total string that drops below the level
  if (rep.border.size() > 20)
    throw InstanceTooLarge("global_softmin_harness: border too deep to rescan");
  bool scanned = false;
  for (unsigned long k = 0; k < (1ul << rep.border.size()) && !scanned; ++k) {
    BitString z = fixed_width_bits(Int(static_cast<long>(k)),
                                   static_cast<long>(rep.border.size()));
    if (!view.is_total(z)) continue;
    std::optional<long> lz = level_at(z);
    if (lz && *lz < rep.level) {
      rep.border_by_scan = z;
      scanned = true;
    }
  }
  rep.routes_agree = scanned && rep.border_by_scan == rep.border;

  // cheapest point of f over the rebuilt records
  std::unordered_map<BitString, long, BitStringHash> min_len;
  for (const auto& r : view.records()) {
    auto it = min_len.find(r.output);
    long len = static_cast<long>(r.program.size());
    if (it == min_len.end() || len < it->second) min_len[r.output] = len;
  }
  std::optional<long> best;
  for (const auto& p : points) {
    auto it = min_len.find(p.str);
    if (it == min_len.end()) continue;
    long v = p.fa + it->second;
    if (!best || v < *best) {
      best = v;
      rep.best_a = p.a;
    }
  }
  if (!best)
    throw NotFound("global_softmin_harness: no recorded point");  // sum > 0
  rep.lhs = *best;

  BitString fcode = codec::encode_map(f);
  rep.halting_info = halting_info_probe(fcode, snapshot.config(), halting);
  if (rep.halting_info) {
    rep.rhs = Bits::neg_log(rep.sum) + *rep.halting_info;
    rep.slack_allowed = slack_allowance(slack, rep.rhs.floor_value());
  }

  bool exact_ok = rep.routes_agree && rep.parent_not_total &&
                  rep.border_level < rep.level;
  if (!exact_ok)
    rep.verdict = Verdict::Violation;
  else if (!rep.halting_info)
    rep.verdict = Verdict::ProxyInconclusive;
  else if (Bits::from_int(rep.lhs) <= rep.rhs + rep.slack_allowed)
    rep.verdict = Verdict::Holds;
  else
    rep.verdict = Verdict::ProxyInconclusive;
  return rep;
}

PrefixMeasureReport prefix_measure_harness(const BitString& x,
                                           const machine::UniverseSnapshot& snapshot,
                                           const lefttotal::IntervalView& view,
                                           const machine::HaltingApprox& halting,
                                           const SlackBound& slack) {
  PrefixMeasureReport rep;
  rep.x = x;
  const machine::HaltRecord* star = nullptr;
  for (const auto& r : view.records())
    if (r.output == x) {
      star = &r;  // records are shortlex, so the first hit is shortest
      break;
    }
  if (!star)
    throw NoShortestProgram("prefix_measure_harness: x never appears");
  rep.shortest_program = star->program;
  std::optional<BitString> v = view.shortest_total_prefix(star->program);
  if (!v)
    throw NotFound("prefix_measure_harness: no total prefix below the program");
  rep.total_prefix = *v;

  for (const auto& [out, mass] : view.extension_measure(*v))
    rep.q.push_back({output_index(out), mass});
  rep.q_of_x = measure_mass(rep.q, output_index(x));
  rep.floor_bound = pow2q(static_cast<long>(v->size()) -
                          static_cast<long>(star->program.size()));
  rep.floor_holds = rep.q_of_x >= rep.floor_bound;

  // one universe carries the planted measure and a block conditioned on
  // the total prefix itself
  BitString qcode = codec::encode_measure(rep.q);
  BitString vaux = codec::encode_string(*v);
  machine::AuxSpec wspec{"w",
                         vaux,
                         {machine::make_lit(x),
                          machine::synthesize_copy_program(x, vaux)}};
  machine::UniverseSnapshot probe = stochastic_universe(
      snapshot.config(), BitString(), {machine::make_lit(qcode)}, x, "m",
      {wspec});
  rep.certificate =
      stochasticity(output_index(x), PenaltyShape::Linear, probe, "m");
  DeficiencyValue pd = deficiency(output_index(x), rep.q, vaux, probe);
  rep.prefix_deficiency = pd.bits;
  rep.witness_score = static_cast<long>(v->size()) +
                      penalty_value(PenaltyShape::Linear, pd.bits);

  rep.halting_info = halting_info_probe(x, snapshot.config(), halting);
  if (rep.halting_info)
    rep.slack_allowed = slack_allowance(slack, std::max(*rep.halting_info, 0L));

  if (!rep.floor_holds)
    rep.verdict = Verdict::Violation;
  else if (!rep.halting_info)
    rep.verdict = Verdict::ProxyInconclusive;
  else if (rep.witness_score <= *rep.halting_info + rep.slack_allowed)
    rep.verdict = Verdict::Holds;
  else
    rep.verdict = Verdict::ProxyInconclusive;
  return rep;
}

}  // namespace aiq::algstats
