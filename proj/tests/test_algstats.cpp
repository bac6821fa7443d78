#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "aiq/algstats.hpp"
#include "aiq/lefttotal.hpp"

using namespace aiq;
using namespace aiq::algstats;

namespace {

machine::MachineConfig small_config() {
  machine::MachineConfig c;
  c.max_len = 6;
  c.step_budget = 200;
  return c;
}

machine::MachineConfig wide_config() {
  machine::MachineConfig c;
  c.max_len = 10;
  c.step_budget = 10000;
  return c;
}

machine::HaltRecord rec(const char* prog, const char* out, long steps) {
  machine::HaltRecord r;
  r.program = BitString(prog);
  r.output = BitString(out);
  r.steps = steps;
  return r;
}

// seven prefix-free records tiling [0, 13/32) exactly
std::vector<machine::HaltRecord> figure_records() {
  return {rec("00", "", 1),        rec("010", "0", 2),
          rec("0110000", "1", 3),  rec("0110001", "00", 4),
          rec("0110010", "01", 5), rec("01100110", "10", 6),
          rec("01100111", "11", 7)};
}

PrimitiveMeasure uniform_measure(long n) {
  PrimitiveMeasure m;
  for (long i = 0; i < n; ++i) m.push_back({Int(i), Rat(1, n)});
  return m;
}

}  // namespace

TEST_CASE("output order is the empty-inclusive enumeration") {
  const char* first[] = {"", "0", "1", "00", "01", "10", "11", "000"};
  for (long n = 0; n < 8; ++n)
    CHECK(output_string(Int(n)) == BitString(first[n]));
  for (long n = 0; n <= 200; ++n) {
    BitString s = output_string(Int(n));
    CHECK(output_index(s) == Int(n));
    if (n > 0) {
      // shifted by one against the code-word order, which skips empty
      CHECK(s == codec::xi_string(Int(n - 1)));
      CHECK(shortlex_less(output_string(Int(n - 1)), s));
    }
  }
}

TEST_CASE("measure and map codes parse back exactly") {
  PrimitiveMeasure q{{Int(1), Rat(1, 2)},
                     {Int(2), Rat(1, 4)},
                     {Int(3), Rat(1, 8)},
                     {Int(5), Rat(1, 8)}};
  BitString code = codec::encode_measure(q);
  auto back = parse_probability_measure(code);
  REQUIRE(back.has_value());
  CHECK(*back == q);

  // trailing garbage is rejected, the whole buffer must be one code
  BitString padded = code;
  padded.push_back(true);
  CHECK_FALSE(parse_probability_measure(padded).has_value());

  // masses that sum below one name a semimeasure, not a probability
  PrimitiveMeasure half{{Int(0), Rat(1, 2)}};
  CHECK_FALSE(parse_probability_measure(codec::encode_measure(half)).has_value());
  CHECK_FALSE(parse_probability_measure(BitString("1111")).has_value());

  PrimitiveMap g{{Int(0), Int(3)}, {Int(7), Int(0)}};
  auto gb = parse_map_code(codec::encode_map(g));
  REQUIRE(gb.has_value());
  CHECK(*gb == g);
  CHECK(map_value(g, Int(7)) == Int(0));
  CHECK_FALSE(map_value(g, Int(1)).has_value());
  CHECK(measure_mass(q, Int(5)) == Rat(1, 8));
  CHECK(measure_mass(q, Int(4)) == 0);
}

TEST_CASE("deficiency subtracts conditional complexity from surprisal") {
  machine::MachineConfig cfg = small_config();
  std::vector<BitString> plants;
  for (long n = 0; n < 8; ++n)
    plants.push_back(machine::make_lit(output_string(Int(n))));
  machine::UniverseSnapshot snap =
      machine::enumerate_universe(cfg, {{"v", BitString("1010"), plants}});

  // conditional complexities measured once on this fixed universe
  long cond[8] = {5, 6, 6, 9, 9, 9, 9, 10};
  for (long n = 0; n < 8; ++n)
    CHECK(snap.k_hat(output_string(Int(n)), "v") == cond[n]);

  PrimitiveMeasure uni = uniform_measure(8);
  DeficiencyValue d = deficiency(Int(3), uni, BitString("1010"), snap);
  CHECK(d.surprisal == 3);  // floor of -log2(1/8)
  CHECK(d.conditional == 9);
  CHECK(d.bits == -6);

  PrimitiveMeasure four{{Int(1), Rat(1, 2)},
                        {Int(2), Rat(1, 4)},
                        {Int(3), Rat(1, 8)},
                        {Int(5), Rat(1, 8)}};
  long surp[4] = {1, 2, 3, 3};
  long want[4] = {-5, -4, -6, -6};
  long xs[4] = {1, 2, 3, 5};
  for (int i = 0; i < 4; ++i) {
    DeficiencyValue dv = deficiency(Int(xs[i]), four, BitString("1010"), snap);
    CHECK(dv.surprisal == surp[i]);
    CHECK(dv.bits == want[i]);
    CHECK(dv.bits == dv.surprisal - dv.conditional);
  }

  // a point mass concentrates all surprisal at zero
  PrimitiveMeasure pnt{{Int(5), Rat(1)}};
  CHECK(deficiency(Int(5), pnt, BitString("1010"), snap).bits == -9);

  CHECK_THROWS_AS(deficiency(Int(4), four, BitString("1010"), snap), ZeroMass);
  CHECK_THROWS_AS(deficiency(Int(3), four, BitString("111"), snap), Undefined);
}

TEST_CASE("stochasticity scan matches an inline rescan of the measure block") {
  machine::MachineConfig cfg = small_config();
  PrimitiveMeasure qu = uniform_measure(8);
  PrimitiveMeasure qp{{Int(5), Rat(1)}};
  BitString quc = codec::encode_measure(qu);
  BitString qpc = codec::encode_measure(qp);
  BitString target = output_string(Int(5));
  machine::UniverseSnapshot snap = stochastic_universe(
      cfg, BitString(), {machine::make_lit(quc), machine::make_lit(qpc)},
      target, "m");

  for (PenaltyShape shape : {PenaltyShape::TwoLog, PenaltyShape::Linear}) {
    StochasticityCertificate got = stochasticity(Int(5), shape, snap, "m");

    // independent rescan: walk the measure block in record order and keep
    // the earliest minimum of |p| + penalty(deficiency)
    const machine::AuxBlock* mb = snap.find_block("m");
    REQUIRE(mb != nullptr);
    bool found = false;
    long best = 0;
    BitString bestv;
    long bestj = 0, bestk = 0;
    for (const auto& r : mb->records) {
      auto parsed = parse_probability_measure(r.output);
      if (!parsed || measure_mass(*parsed, Int(5)) == 0) continue;
      BitString cond = conditioned_aux(r.program, mb->aux);
      const machine::AuxBlock* cb = nullptr;
      for (const auto& b : snap.blocks())
        if (b.aux == cond) cb = &b;
      if (cb == nullptr) continue;
      auto kh = snap.k_hat(target, cb->aux_id);
      if (!kh) continue;
      long surp = floor_neg_log2(measure_mass(*parsed, Int(5)));
      long k = surp - *kh;
      long score = static_cast<long>(r.program.size()) +
                   penalty_value(shape, k);
      if (!found || score < best) {
        found = true;
        best = score;
        bestv = r.program;
        bestj = static_cast<long>(r.program.size());
        bestk = k;
      }
    }
    REQUIRE(found);
    CHECK(got.j == bestj);
    CHECK(got.k == bestk);
    CHECK(got.score == best);
    CHECK(got.v == bestv);

    // the point mass wins: shorter code and more negative deficiency
    CHECK(got.v == machine::make_lit(qpc));
    CHECK(got.j == 55);
    CHECK(got.k == -9);
    CHECK(got.score == (shape == PenaltyShape::Linear ? 56 : 55));
    CHECK(got.q == qp);

    // certificate validity: the witness really prints its measure code
    machine::RunResult rr =
        machine::run_program(got.v, mb->aux, cfg.step_budget);
    CHECK(rr.status == machine::RunStatus::Halted);
    CHECK(rr.output == codec::encode_measure(got.q));
  }

  // a universe without measure outputs cannot certify anything
  machine::UniverseSnapshot bare = machine::enumerate_universe(
      cfg, {{"m", BitString("1010"), {}}});
  CHECK_THROWS_AS(stochasticity(Int(5), PenaltyShape::Linear, bare, "m"),
                  NoMeasureFound);
}

TEST_CASE("penalty shapes clamp the deficiency at one") {
  CHECK(penalty_value(PenaltyShape::TwoLog, -7) == 0);
  CHECK(penalty_value(PenaltyShape::TwoLog, 0) == 0);
  CHECK(penalty_value(PenaltyShape::TwoLog, 1) == 0);
  CHECK(penalty_value(PenaltyShape::TwoLog, 2) == 2);
  CHECK(penalty_value(PenaltyShape::TwoLog, 3) == 2);
  CHECK(penalty_value(PenaltyShape::TwoLog, 4) == 4);
  CHECK(penalty_value(PenaltyShape::TwoLog, 7) == 4);
  CHECK(penalty_value(PenaltyShape::TwoLog, 8) == 6);
  CHECK(penalty_value(PenaltyShape::Linear, -3) == 1);
  CHECK(penalty_value(PenaltyShape::Linear, 1) == 1);
  CHECK(penalty_value(PenaltyShape::Linear, 42) == 42);
}

TEST_CASE("certified exponential comparisons bracket e^-n exactly") {
  // decimal neighbours of e^-1 = 0.3678794... and e^-2 = 0.1353352...
  CHECK(leq_exp_neg(Rat(367879, 1000000), 1));
  CHECK_FALSE(leq_exp_neg(Rat(36788, 100000), 1));
  CHECK(leq_exp_neg(Rat(135335, 1000000), 2));
  CHECK_FALSE(leq_exp_neg(Rat(135336, 1000000), 2));
  CHECK(leq_exp_neg(Rat(1), 0));
  CHECK_FALSE(leq_exp_neg(Rat(1, 256), 8));  // e^-8 is below 2^-8
  CHECK_FALSE(leq_exp_neg(Rat(1, 2), 1));
  CHECK(leq_exp_neg(Rat(0), 5));
  CHECK(leq_exp_neg(pow2q(-12), 8));  // 2^-12 < e^-8
}

namespace {

// lexicographically next k-combination of indices over ground size n
bool next_combination(std::vector<long>& idx, long n) {
  long k = static_cast<long>(idx.size());
  for (long i = k - 1; i >= 0; --i) {
    if (idx[i] < n - (k - i)) {
      ++idx[i];
      for (long j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("covering family search returns the canonical first witness") {
  PrimitiveMeasure m4 = uniform_measure(4);
  PrimitiveMap g1{{Int(0), Int(0)}, {Int(1), Int(1)}};
  PrimitiveMap g2{{Int(2), Int(0)}, {Int(3), Int(1)}};
  Int k1 = output_index(codec::encode_map(g1));
  Int k2 = output_index(codec::encode_map(g2));
  REQUIRE(k1 < k2);
  PrimitiveMeasure qmaps{{k1, Rat(1, 2)}, {k2, Rat(1, 2)}};

  CoveringFamily fam = search_covering_family(qmaps, m4, 1, 1, 1);
  REQUIRE(fam.sets.size() == 2);
  CHECK(fam.sets[0] == std::vector<Int>{Int(0), Int(1), Int(2), Int(3)});
  CHECK(fam.sets[1] == std::vector<Int>{Int(0), Int(1)});
  CHECK(fam.expectation == 0);
  CHECK(family_expectation(qmaps, m4, fam.sets) == 0);

  // independent oracle: enumerate families in the same canonical order
  // (larger sets first, lexicographic within a level) over the ground set
  // supp(m) followed by fresh padding points, and accept the first family
  // whose certified expectation clears e^-cd
  {
    std::vector<Int> ground{Int(0), Int(1), Int(2), Int(3)};
    for (long p = 0; p < 4; ++p) ground.push_back(Int(4 + p));
    long sizes[2] = {4, 2};
    std::vector<long> i0(sizes[0]);
    for (long i = 0; i < sizes[0]; ++i) i0[i] = i;
    bool found = false;
    std::vector<std::vector<Int>> first;
    do {
      std::vector<long> i1(sizes[1]);
      for (long i = 0; i < sizes[1]; ++i) i1[i] = i;
      do {
        std::vector<std::vector<Int>> cand(2);
        for (long i : i0) cand[0].push_back(ground[i]);
        for (long i : i1) cand[1].push_back(ground[i]);
        std::sort(cand[0].begin(), cand[0].end());
        std::sort(cand[1].begin(), cand[1].end());
        if (leq_exp_neg(family_expectation(qmaps, m4, cand), 1)) {
          found = true;
          first = cand;
        }
      } while (!found && next_combination(i1, 8));
    } while (!found && next_combination(i0, 8));
    REQUIRE(found);
    CHECK(first == fam.sets);
  }

  // a point mass on one map is covered by the same family
  PrimitiveMeasure qpoint{{k1, Rat(1)}};
  CoveringFamily fp = search_covering_family(qpoint, m4, 1, 1, 1);
  CHECK(fp.sets == fam.sets);
  CHECK(fp.expectation == 0);

  CoveringSweep sw = covering_sweep(qmaps, m4, 1, 1);
  CHECK(sw.smallest_c == 1);
  REQUIRE(sw.family.has_value());
  CHECK(sw.family->sets == fam.sets);

  // guard rails: depth cap, width cap, and the early-mass precondition
  CHECK_THROWS_AS(search_covering_family(qpoint, m4, 4, 1, 1),
                  InstanceTooLarge);
  CHECK_THROWS_AS(search_covering_family(qpoint, m4, 1, 8, 8),
                  InstanceTooLarge);
  PrimitiveMap deep{{Int(0), Int(9)}};
  PrimitiveMeasure qdeep{{output_index(codec::encode_map(deep)), Rat(1)}};
  CHECK_THROWS_AS(search_covering_family(qdeep, m4, 1, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("sampled families satisfy the covering bound often") {
  PrimitiveMeasure m4 = uniform_measure(4);
  PrimitiveMap g1{{Int(0), Int(0)}, {Int(1), Int(1)}};
  PrimitiveMap g2{{Int(2), Int(0)}, {Int(3), Int(1)}};
  Int k1 = output_index(codec::encode_map(g1));
  Int k2 = output_index(codec::encode_map(g2));
  PrimitiveMeasure qmaps{{std::min(k1, k2), Rat(1, 2)},
                         {std::max(k1, k2), Rat(1, 2)}};

  std::mt19937_64 rng(7);
  auto draw = [&]() -> Int {
    Rat u = Rat(Int(rng())) / pow2q(64);
    Rat acc(0);
    for (const auto& [a, ma] : m4) {
      acc += ma;
      if (u < acc) return a;
    }
    return m4.back().first;
  };
  long sizes[2] = {4, 2};
  long good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<Int>> sets;
    for (int n = 0; n < 2; ++n) {
      std::set<Int> s;
      for (long i = 0; i < sizes[n]; ++i) s.insert(draw());
      Int pad = Int(100);
      while (static_cast<long>(s.size()) < sizes[n]) s.insert(pad++);
      sets.emplace_back(s.begin(), s.end());
    }
    if (leq_exp_neg(family_expectation(qmaps, m4, sets), 1)) ++good;
  }
  // deterministic generator, exact arithmetic: the count is reproducible
  CHECK(good == 67);
  CHECK(good >= 1);
}

TEST_CASE("conditional softmin inequality holds on hand instances") {
  machine::MachineConfig cfg = wide_config();
  SlackBound none{0, 0};

  // flat scores on a two point uniform measure
  {
    PrimitiveMap f{{Int(0), Int(0)}, {Int(1), Int(0)}};
    PrimitiveMeasure m = uniform_measure(2);
    SoftminReport r = softmin_harness(f, m, cfg, none);
    CHECK(r.lhs == 5);
    CHECK(r.best_a == 0);
    CHECK(r.sum == 1);
    CHECK(r.level == 0);
    CHECK(r.tail == 0);
    CHECK(r.kept == 1);
    CHECK(r.mass_floor);
    CHECK(r.tail_bounded);
    CHECK(r.kept_above);
    CHECK(r.target_kept);
    CHECK(r.certificate.j == 105);
    CHECK(r.certificate.k == -35);
    CHECK(r.certificate.score == 105);
    CHECK(r.proof_d == 1);
    CHECK(r.rhs.decimal(6) == "105.000000");
    CHECK(r.margin.decimal(6) == "-100.000000");
    CHECK(r.slack_allowed == 0);
    CHECK(r.verdict == Verdict::Holds);
    CHECK(std::string(verdict_name(r.verdict)) == "holds");

    // the kept part of the score sum is itself a ledger entry:
    // sum >= 2^-s, tail <= 2^-s-1, kept >= 2^-s-1 with s = level
    CHECK(r.sum >= pow2q(-r.level));
    CHECK(r.tail <= pow2q(-r.level - 1));
    CHECK(r.kept >= pow2q(-r.level - 1));
    CHECK(r.sum == r.tail + r.kept);
  }

  // three points, skewed masses, mixed scores
  {
    PrimitiveMap f{{Int(0), Int(1)}, {Int(1), Int(3)}, {Int(2), Int(2)}};
    PrimitiveMeasure m{{Int(0), Rat(1, 2)},
                       {Int(1), Rat(1, 4)},
                       {Int(2), Rat(1, 4)}};
    SoftminReport r = softmin_harness(f, m, cfg, none);
    CHECK(r.lhs == 6);
    CHECK(r.best_a == 0);
    CHECK(r.sum == Rat(11, 32));
    CHECK(r.level == 2);
    CHECK(r.tail == Rat(1, 32));
    CHECK(r.kept == Rat(5, 16));
    CHECK(r.mass_floor);
    CHECK(r.tail_bounded);
    CHECK(r.kept_above);
    CHECK(r.certificate.j == 134);
    CHECK(r.certificate.k == -38);
    CHECK(r.proof_d == 1);
    CHECK(r.rhs.decimal(6) == "135.540568");
    CHECK(r.margin.decimal(6) == "-129.540568");
    CHECK(r.verdict == Verdict::Holds);

    // the conditioned measure feeds the covering search directly
    REQUIRE(!r.conditioned_q.empty());
    Rat total(0);
    for (const auto& [a, ma] : r.conditioned_q) total += ma;
    CHECK(total == 1);
    CoveringSweep sw = covering_sweep(r.conditioned_q, m, r.level, r.proof_d);
    CHECK(sw.smallest_c == 1);
    REQUIRE(sw.family.has_value());
    CHECK(sw.family->expectation == 0);
  }

  // a huge score on one point contributes only a vanishing tail
  {
    PrimitiveMap f{{Int(0), Int(0)}, {Int(1), Int(50)}};
    PrimitiveMeasure m = uniform_measure(2);
    SoftminReport r = softmin_harness(f, m, cfg, none);
    CHECK(r.lhs == 5);
    CHECK(r.best_a == 0);
    CHECK(r.sum == Rat(1, 2) + pow2q(-51));
    CHECK(r.level == 1);
    CHECK(r.margin.decimal(6) == "-107.000000");
    CHECK(r.verdict == Verdict::Holds);
  }

  // degenerate inputs are rejected before any machine work
  PrimitiveMeasure bad{{Int(0), Rat(1, 2)}};
  PrimitiveMap f0{{Int(0), Int(0)}};
  CHECK_THROWS_AS(softmin_harness(f0, bad, cfg, none), std::invalid_argument);
  PrimitiveMap off{{Int(9), Int(0)}};
  CHECK_THROWS_AS(softmin_harness(off, uniform_measure(2), cfg, none),
                  std::invalid_argument);
}

TEST_CASE("conditional softmin holds across random instances") {
  machine::MachineConfig cfg = wide_config();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    long n = 2 + static_cast<long>(rng() % 3);
    PrimitiveMap f;
    for (long a = 0; a < n; ++a)
      f.push_back({Int(a), Int(static_cast<long>(rng() % 7))});
    std::vector<long> w;
    long tot = 0;
    for (long a = 0; a < n; ++a) {
      w.push_back(1 + static_cast<long>(rng() % 5));
      tot += w.back();
    }
    PrimitiveMeasure m;
    for (long a = 0; a < n; ++a) m.push_back({Int(a), Rat(w[a]) / Rat(tot)});

    SoftminReport r = softmin_harness(f, m, cfg, {0, 0});
    CHECK(r.verdict == Verdict::Holds);
    CHECK(r.mass_floor);
    CHECK(r.tail_bounded);
    CHECK(r.kept_above);
    CHECK(r.target_kept);
    CHECK(r.margin.int_part() < 0);
    CHECK(r.sum == r.tail + r.kept);
  }
}

TEST_CASE("global softmin finds the same border by arithmetic and by scan") {
  machine::MachineConfig cfg = wide_config();
  machine::UniverseSnapshot snap =
      machine::enumerate_universe(cfg, {{"-", BitString(), {}}});
  const machine::AuxBlock* blk = snap.find_block("-");
  REQUIRE(blk != nullptr);
  lefttotal::IntervalView view(lefttotal::left_totalize(blk->records));
  machine::HaltingApprox halting = machine::halting_approx(snap, "-");

  PrimitiveMap f{{Int(1), Int(1)}, {Int(2), Int(2)}};

  GlobalSoftminReport r =
      global_softmin_harness(f, snap, view, halting, {1, 2});
  CHECK(r.sum == Rat(3, 256));
  CHECK(r.level == 8);
  CHECK(r.border == BitString("0000"));
  CHECK(r.border_level == 7);
  CHECK(r.border_by_scan == r.border);
  CHECK(r.routes_agree);
  CHECK(r.parent_not_total);
  CHECK(r.lhs == 7);
  CHECK(r.best_a == 1);
  REQUIRE(r.halting_info.has_value());
  CHECK(*r.halting_info == 0);
  CHECK(r.rhs.decimal(6) == "6.415037");
  // slack grows with the log of the bound itself: floor(rhs) = 6 gives
  // ceil(log2(8)) + 2 = 5
  CHECK(r.slack_allowed == 5);
  CHECK(r.verdict == Verdict::Holds);

  // without slack the lhs misses the proxy bound by a fraction of a bit
  GlobalSoftminReport bare =
      global_softmin_harness(f, snap, view, halting, {0, 0});
  CHECK(bare.routes_agree);
  CHECK(bare.verdict == Verdict::ProxyInconclusive);

  // oracle for the score sum: weigh every view record by 2^-f(output)
  {
    Rat sum(0);
    for (const auto& p : view.records()) {
      auto fa = map_value(f, output_index(p.output));
      if (!fa) continue;
      long v = static_cast<long>(fa->get_si());
      sum += pow2q(-static_cast<long>(p.program.size())) * pow2q(-v);
    }
    CHECK(sum == r.sum);
  }

  // oracle for the border: scan all strings of that length left to right
  {
    long len = static_cast<long>(r.border.size());
    bool met = false;
    for (long k = 0; k < (1L << len) && !met; ++k) {
      BitString z;
      for (long i = len - 1; i >= 0; --i) z.push_back((k >> i) & 1);
      if (!view.is_total(z)) continue;
      // the region owned by z closes at its right edge
      Rat captured(0);
      Rat edge = Rat(z.value() + 1) * pow2q(-len);
      for (const auto& p : view.records()) {
        Rat start = Rat(p.program.value()) *
                    pow2q(-static_cast<long>(p.program.size()));
        if (start >= edge) continue;
        auto fa = map_value(f, output_index(p.output));
        if (!fa) continue;
        long v = static_cast<long>(fa->get_si());
        captured += pow2q(-static_cast<long>(p.program.size())) * pow2q(-v);
      }
      if (captured >= pow2q(1 - r.level)) {
        CHECK(z == r.border);
        met = true;
      }
    }
    CHECK(met);
  }

  // views that do not tile from zero are rejected outright
  lefttotal::IntervalView sparse({rec("101", "0", 9)});
  CHECK_THROWS_AS(global_softmin_harness(f, snap, sparse, halting, {0, 0}),
                  std::invalid_argument);
}

TEST_CASE("prefix measure route floors the mass of the target exactly") {
  machine::MachineConfig cfg = wide_config();
  machine::UniverseSnapshot snap =
      machine::enumerate_universe(cfg, {{"-", BitString(), {}}});
  const machine::AuxBlock* blk = snap.find_block("-");
  REQUIRE(blk != nullptr);
  machine::HaltingApprox halting = machine::halting_approx(snap, "-");

  // a target drawn from the machine's own rebuilt interval view
  {
    lefttotal::IntervalView view(lefttotal::left_totalize(blk->records));
    PrefixMeasureReport r =
        prefix_measure_harness(BitString("00"), snap, view, halting, {0, 0});
    CHECK(r.x == BitString("00"));
    CHECK(r.shortest_program == BitString("000100010"));
    CHECK(r.total_prefix == BitString("000100"));
    CHECK(r.q.size() == 9);
    CHECK(r.q_of_x == Rat(1, 8));
    CHECK(r.floor_bound == Rat(1, 8));
    CHECK(r.floor_holds);
    CHECK(r.prefix_deficiency == -6);
    CHECK(r.witness_score == 7);
    CHECK(r.certificate.j == 402);
    CHECK(r.certificate.k == -6);
    REQUIRE(r.halting_info.has_value());
    CHECK(*r.halting_info == 0);
    // the witness cost is the prefix length, which the halting proxy
    // cannot see on a machine that never expands prefixes itself
    CHECK(r.verdict == Verdict::ProxyInconclusive);

    PrefixMeasureReport wide =
        prefix_measure_harness(BitString("00"), snap, view, halting, {0, 8});
    CHECK(wide.slack_allowed == 8);
    CHECK(wide.verdict == Verdict::Holds);

    // the extension measure is a probability measure; only the target's
    // mass carries the dyadic floor
    Rat total(0);
    for (const auto& [a, ma] : r.q) {
      CHECK(ma > 0);
      total += ma;
    }
    CHECK(total == 1);
    CHECK(r.q_of_x >= r.floor_bound);

    CHECK_THROWS_AS(prefix_measure_harness(BitString("111111111111"), snap,
                                           view, halting, {0, 0}),
                    NoShortestProgram);
  }

  // the seven record tiling fixture checked by hand
  {
    lefttotal::IntervalView view(figure_records());
    PrefixMeasureReport r =
        prefix_measure_harness(BitString("01"), snap, view, halting, {0, 8});
    CHECK(r.shortest_program == BitString("0110010"));
    CHECK(r.total_prefix == BitString("01100"));
    CHECK(r.q.size() == 5);
    CHECK(r.q_of_x == Rat(1, 4));
    CHECK(r.floor_bound == Rat(1, 4));
    CHECK(r.floor_holds);
    CHECK(r.prefix_deficiency == -7);
    CHECK(r.witness_score == 6);
    CHECK(r.certificate.j == 228);
    CHECK(r.verdict == Verdict::Holds);
  }
}
