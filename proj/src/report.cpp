#include "aiq/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace aiq::report {

namespace {

using quantum::ComplexRat;
using quantum::PureState;

ComplexRat rq(long num, long den) { return ComplexRat(Rat(num) / Rat(den)); }

// ceiling of an exact bits value
long ceil_of(const Bits& b) {
  return b.log_arg() == 1 ? b.floor_value() : b.floor_value() + 1;
}

long lg_allowance(const Bits& b) {
  return ceil_log2(Rat(std::max(0L, b.floor_value()) + 2));
}

std::string bits_decimal(const Bits& b) {
  return b.is_infinite() ? "inf" : b.decimal(6);
}

Json machine_entry(const machine::MachineConfig& m) {
  Json j;
  j["version"] = m.version;
  j["max_len"] = m.max_len;
  j["step_budget"] = m.step_budget;
  return j;
}

PureState basis4(std::size_t i) {
  quantum::CVec v(4, ComplexRat());
  v[i] = ComplexRat(1);
  return PureState::primitive(v);
}

}  // namespace

Json rational_entry(const Rat& r) {
  Json j;
  j["fraction"] = r.get_str();
  j["decimal"] = decimal_string(r, 6);
  return j;
}

Json bits_entry(const Bits& b) {
  Json j;
  if (b.is_infinite()) {
    j["finite"] = false;
    j["decimal"] = "inf";
    return j;
  }
  j["finite"] = true;
  j["int"] = b.int_part();
  j["log_arg"] = b.log_arg().get_str();
  j["decimal"] = b.decimal(6);
  return j;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      out += c;
    } else {
      out += '"';
      for (char ch : c) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    }
  }
  out += '\n';
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --- the standard laboratory ------------------------------------------

std::vector<std::pair<std::string, PureState>> standard_states() {
  auto mk2 = [](ComplexRat a, ComplexRat b) {
    return PureState::primitive({std::move(a), std::move(b)});
  };
  return {{"e0", mk2(rq(1, 1), rq(0, 1))},
          {"e1", mk2(rq(0, 1), rq(1, 1))},
          {"t34", mk2(rq(3, 5), rq(4, 5))},
          {"t43", mk2(rq(4, 5), rq(3, 5))}};
}

std::vector<std::pair<std::string, quantum::Circuit>> standard_circuits() {
  std::vector<std::pair<std::string, quantum::Circuit>> out;
  out.emplace_back("wire", quantum::Circuit{quantum::CMatrix::identity(2), 1});
  out.emplace_back("flip",
                   quantum::Circuit{quantum::permutation_unitary({1, 0}), 1});
  for (const auto& [id, state] : standard_states())
    out.emplace_back("prep-" + id, quantum::synthesize_preparation(state));
  return out;
}

machine::UniverseSnapshot catalog_universe(const config::RunConfig& cfg) {
  std::vector<BitString> plants;
  for (const auto& [id, state] : standard_states())
    plants.push_back(machine::make_lit(quantum::encode_state(state)));
  for (const auto& [id, circuit] : standard_circuits())
    plants.push_back(machine::make_lit(quantum::encode_circuit(circuit)));
  return machine::enumerate_universe(
      cfg.machine, {{"-", BitString(), std::move(plants)}},
      static_cast<int>(cfg.workers));
}

std::vector<std::pair<std::string, PureState>> entropy_probes(
    unsigned long long seed, std::size_t count) {
  std::vector<std::pair<std::string, PureState>> out;
  for (auto& [id, s] : standard_states()) out.emplace_back(id, s);
  out.emplace_back("ray-thirds", PureState::ray({rq(1, 3), rq(1, 7)}));
  out.emplace_back("ray-skew", PureState::ray({rq(2, 1), rq(-1, 2)}));
  std::mt19937_64 rng(seed);
  std::size_t i = 0;
  while (out.size() < count) {
    if (i % 3 == 2)
      out.emplace_back("a" + std::to_string(i),
                       quantum::random_approximate_state(1, rng));
    else
      out.emplace_back("p" + std::to_string(i),
                       quantum::random_primitive_state(1, rng));
    ++i;
  }
  if (out.size() > count)
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(count), out.end());
  return out;
}

GapLab build_gap_lab(const config::RunConfig& cfg) {
  PureState e01 = basis4(1);
  PureState e10 = basis4(2);
  quantum::Circuit wire2{quantum::CMatrix::identity(4), 2};
  std::vector<BitString> plants = {
      machine::make_lit(quantum::encode_state(e01)),
      machine::make_lit(quantum::encode_state(e10)),
      machine::make_lit(quantum::encode_circuit(wire2)),
      machine::make_lit(
          quantum::encode_circuit(quantum::synthesize_preparation(e01))),
      machine::make_lit(
          quantum::encode_circuit(quantum::synthesize_preparation(e10)))};
  machine::UniverseSnapshot snap = machine::enumerate_universe(
      cfg.machine, {{"-", BitString(), std::move(plants)}},
      static_cast<int>(cfg.workers));
  entropy::StateCatalog catalog = entropy::build_state_catalog(
      {{"e01", e01}, {"e10", e10}}, snap, "-");
  machine::HaltingApprox halting = machine::halting_approx(snap, "-");
  return {std::move(snap), std::move(catalog), std::move(halting)};
}

std::vector<std::pair<std::string, PureState>> gap_population(
    const GapLab& lab, unsigned long long seed, std::size_t count) {
  std::vector<std::pair<std::string, PureState>> population;
  population.emplace_back("e01", basis4(1));
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i)
    population.emplace_back("g" + std::to_string(i),
                            quantum::random_primitive_state(2, rng));
  population.emplace_back("ray-probe",
                          entropy::embedded_run_ray(lab.halting.bits, 2, 120));
  return population;
}

// --- report builders ----------------------------------------------------

UniverseArtifacts universe_report(const config::RunConfig& cfg) {
  config::validate(cfg);
  std::vector<machine::AuxSpec> specs = {{"-", BitString(), {}}};
  if (!cfg.aux_path.empty()) {
    std::istringstream in(read_file(cfg.aux_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      std::string id, bits;
      ls >> id >> bits;
      if (id.empty() || id == "-")
        throw config::ConfigError("bad auxiliary line: " + line);
      specs.push_back({id, BitString(bits), {}});
    }
  }
  machine::UniverseSnapshot snap = machine::enumerate_universe(
      cfg.machine, specs, static_cast<int>(cfg.workers));

  UniverseArtifacts art;
  {
    std::ostringstream os;
    machine::write_snapshot(os, snap);
    art.snapshot = os.str();
  }
  lefttotal::IntervalView view =
      lefttotal::left_totalize(snap.find_block("-")->records);
  art.left = lefttotal::write_left_total(view, cfg.machine, "-");
  machine::HaltingApprox halting = machine::halting_approx(snap, "-");
  art.halting = halting.bits.str() + "\n";

  Json j;
  j["kind"] = "universe";
  j["config_hash"] = config::config_hash(cfg);
  j["machine"] = machine_entry(cfg.machine);
  Json blocks = Json::array();
  for (const auto& b : snap.blocks()) {
    Json e;
    e["id"] = b.aux_id;
    e["aux_bits"] = static_cast<long>(b.aux.size());
    e["records"] = static_cast<long>(b.records.size());
    e["omega_lower"] = rational_entry(snap.omega_lower(b.aux_id));
    blocks.push_back(std::move(e));
  }
  j["blocks"] = std::move(blocks);
  j["left_tiles"] = static_cast<long>(view.records().size());
  j["omega_view"] = rational_entry(view.omega());
  j["halting_bits"] = static_cast<long>(halting.bits.size());
  art.json = render(j);
  return art;
}

std::string catalog_report(const config::RunConfig& cfg) {
  config::validate(cfg);
  machine::UniverseSnapshot snap = catalog_universe(cfg);
  entropy::StateCatalog states =
      entropy::build_state_catalog(standard_states(), snap, "-");
  entropy::CircuitCatalog circuits =
      entropy::build_circuit_catalog(standard_circuits(), snap, "-");

  Json j;
  j["kind"] = "catalog";
  j["config_hash"] = config::config_hash(cfg);
  j["machine"] = machine_entry(cfg.machine);
  j["qubits"] = states.qubits();
  Json st = Json::array();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const entropy::StateEntry& e = states.at(i);
    Json row;
    row["id"] = e.id;
    row["code_bits"] = static_cast<long>(e.code.size());
    row["weight"] = rational_entry(e.weight);
    st.push_back(std::move(row));
  }
  j["states"] = std::move(st);
  Json ci = Json::array();
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    const entropy::CircuitEntry& e = circuits.at(i);
    Json row;
    row["id"] = e.id;
    row["code_bits"] = static_cast<long>(e.code.size());
    row["weight"] = rational_entry(e.weight);
    ci.push_back(std::move(row));
  }
  j["circuits"] = std::move(ci);
  return render(j);
}

EntropyOutputs entropy_report(const config::RunConfig& cfg,
                              const config::SlackTable& slack,
                              std::size_t count) {
  config::validate(cfg);
  config::check_slack_version(cfg, slack);
  long c_hg_hv = slack.get("chain_hg_hv");
  long c_hg_hc = slack.get("chain_hg_hc");
  long c_hc_coeff = slack.get("chain_hc_coeff");
  long c_hc_add = slack.get("chain_hc_add");

  machine::UniverseSnapshot snap = catalog_universe(cfg);
  entropy::StateCatalog states =
      entropy::build_state_catalog(standard_states(), snap, "-");
  entropy::CircuitCatalog circuits =
      entropy::build_circuit_catalog(standard_circuits(), snap, "-");
  quantum::SemiDensity mu = states.aggregate();

  EntropyOutputs out;
  Json rows = Json::array();
  std::string csv = csv_row({"id", "hg", "hv", "hv_witness", "hc",
                             "hc_witness"});
  for (const auto& [id, psi] : entropy_probes(cfg.seed, count)) {
    Bits s_hg = entropy::hg(psi, states);
    entropy::ValueWitness s_hv = entropy::hv(psi, states);
    entropy::ValueWitness s_hc = entropy::hc(psi, circuits);

    // the aggregate score must equal the matrix route exactly
    Rat q = quantum::expectation(mu.matrix(), psi);
    Bits route = q == 0 ? Bits::infinity() : Bits::neg_log(q);
    bool route_ok = (s_hg.is_infinite() && route.is_infinite()) ||
                    (!s_hg.is_infinite() && !route.is_infinite() &&
                     s_hg == route);

    bool ok_hg_hv =
        s_hv.value.is_infinite() || s_hg <= s_hv.value + c_hg_hv;
    bool ok_hg_hc =
        s_hg.is_infinite() || s_hg <= s_hc.value + c_hg_hc;
    bool ok_hc_hv =
        s_hv.value.is_infinite() ||
        s_hc.value <=
            s_hv.value + c_hc_coeff * lg_allowance(s_hv.value) + c_hc_add;
    if (!route_ok || !ok_hg_hv || !ok_hg_hc || !ok_hc_hv) ++out.violations;

    Json row;
    row["id"] = id;
    row["hg"] = bits_entry(s_hg);
    row["hv"] = bits_entry(s_hv.value);
    row["hv_witness"] = s_hv.witness;
    row["hc"] = bits_entry(s_hc.value);
    row["hc_witness"] = s_hc.witness;
    row["route_exact"] = route_ok;
    row["chain_ok"] = ok_hg_hv && ok_hg_hc && ok_hc_hv;
    rows.push_back(std::move(row));

    csv += csv_row({id, bits_decimal(s_hg), bits_decimal(s_hv.value),
                    s_hv.witness, bits_decimal(s_hc.value), s_hc.witness});
  }

  Json j;
  j["kind"] = "entropy";
  j["config_hash"] = config::config_hash(cfg);
  j["machine"] = machine_entry(cfg.machine);
  j["count"] = static_cast<long>(count);
  j["rows"] = std::move(rows);
  j["violations"] = out.violations;
  out.ok = out.violations == 0;
  j["ok"] = out.ok;
  out.json = render(j);
  out.csv = std::move(csv);
  return out;
}

namespace {

Json cost_entry(const protocol::CostReport& c) {
  Json j;
  j["l"] = c.l;
  j["m"] = c.m;
  j["f"] = bits_entry(c.f);
  j["total"] = bits_entry(c.total);
  j["classical_only"] = c.classical_only;
  return j;
}

}  // namespace

GapOutputs gap_report(const config::RunConfig& cfg,
                      const config::SlackTable& slack, std::size_t count) {
  config::validate(cfg);
  config::check_slack_version(cfg, slack);
  protocol::GapConfig gc;
  gc.c5 = slack.get("gap_coeff");
  gc.c6 = slack.get("gap_add");
  gc.flag_threshold = slack.get("gap_flag_bits");
  gc.enc_prefix_bits = static_cast<std::size_t>(slack.get("gap_prefix_bits"));

  GapLab lab = build_gap_lab(cfg);
  std::vector<std::pair<std::string, PureState>> population =
      gap_population(lab, cfg.seed, count);
  std::vector<protocol::GapRow> rows =
      protocol::noncompression_gap(population, lab.snap, lab.catalog, gc);

  GapOutputs out;
  long flagged = 0;
  Json jrows = Json::array();
  for (const protocol::GapRow& r : rows) {
    bool mixed_ok = r.mixed.total <= r.classical.total;
    bool bound_ok = r.flagged || r.gap <= Bits::from_int(r.bound);
    if (!mixed_ok || !bound_ok) ++out.violations;
    if (r.flagged) ++flagged;
    Json row;
    row["id"] = r.id;
    row["classical"] = cost_entry(r.classical);
    row["mixed"] = cost_entry(r.mixed);
    row["gap"] = bits_entry(r.gap);
    row["bound"] = r.bound;
    if (r.halting_info)
      row["halting_info"] = *r.halting_info;
    else
      row["halting_info"] = nullptr;
    row["flagged"] = r.flagged;
    row["ok"] = mixed_ok && bound_ok;
    jrows.push_back(std::move(row));
  }

  Json j;
  j["kind"] = "transmit";
  j["config_hash"] = config::config_hash(cfg);
  j["machine"] = machine_entry(cfg.machine);
  j["count"] = static_cast<long>(rows.size());
  j["flagged"] = flagged;
  j["rows"] = std::move(jrows);
  j["violations"] = out.violations;
  out.ok = out.violations == 0;
  j["ok"] = out.ok;
  out.json = render(j);
  out.csv = protocol::gap_table_csv(rows);
  return out;
}

namespace {

Json certificate_entry(const algstats::StochasticityCertificate& c) {
  Json j;
  j["j"] = c.j;
  j["k"] = c.k;
  j["score"] = c.score;
  j["program_bits"] = static_cast<long>(c.v.size());
  return j;
}

Json softmin_row(const std::string& name, const algstats::SoftminReport& r) {
  Json row;
  row["name"] = name;
  row["lhs"] = r.lhs;
  row["best_a"] = r.best_a.get_str();
  row["best_a_string"] = algstats::output_string(r.best_a).str();
  row["sum"] = rational_entry(r.sum);
  row["level"] = r.level;
  row["tail"] = rational_entry(r.tail);
  row["kept"] = rational_entry(r.kept);
  row["mass_floor"] = r.mass_floor;
  row["tail_bounded"] = r.tail_bounded;
  row["kept_above"] = r.kept_above;
  row["target_kept"] = r.target_kept;
  row["proof_d"] = r.proof_d;
  row["certificate"] = certificate_entry(r.certificate);
  row["rhs"] = bits_entry(r.rhs);
  row["slack_allowed"] = r.slack_allowed;
  row["margin"] = bits_entry(r.margin);
  row["verdict"] = algstats::verdict_name(r.verdict);
  return row;
}

}  // namespace

AlgstatsOutputs algstats_report(const config::RunConfig& cfg,
                                const config::SlackTable& slack,
                                std::size_t random_instances) {
  config::validate(cfg);
  config::check_slack_version(cfg, slack);
  algstats::SlackBound soft{slack.get("softmin_coeff"),
                            slack.get("softmin_add")};
  algstats::SlackBound glob{slack.get("global_coeff"),
                            slack.get("global_add")};
  algstats::SlackBound pref{slack.get("prefix_coeff"),
                            slack.get("prefix_add")};

  AlgstatsOutputs out;
  Json j;
  j["kind"] = "algstats";
  j["config_hash"] = config::config_hash(cfg);
  j["machine"] = machine_entry(cfg.machine);

  // conditional inequality on hand instances plus a seeded sweep
  Json softrows = Json::array();
  auto run_soft = [&](const std::string& name, const algstats::PrimitiveMap& f,
                      const algstats::PrimitiveMeasure& m) {
    algstats::SoftminReport r =
        algstats::softmin_harness(f, m, cfg.machine, soft);
    if (r.verdict == algstats::Verdict::Violation) ++out.violations;
    softrows.push_back(softmin_row(name, r));
  };
  run_soft("flat-pair",
           {{Int(0), Int(0)}, {Int(1), Int(0)}},
           {{Int(0), Rat(1, 2)}, {Int(1), Rat(1, 2)}});
  run_soft("skewed-three",
           {{Int(0), Int(1)}, {Int(1), Int(3)}, {Int(2), Int(2)}},
           {{Int(0), Rat(1, 2)}, {Int(1), Rat(1, 4)}, {Int(2), Rat(1, 4)}});
  run_soft("deep-tail",
           {{Int(0), Int(0)}, {Int(1), Int(50)}},
           {{Int(0), Rat(1, 2)}, {Int(1), Rat(1, 2)}});
  {
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t t = 0; t < random_instances; ++t) {
      long n = 2 + static_cast<long>(rng() % 3);
      algstats::PrimitiveMap f;
      for (long a = 0; a < n; ++a)
        f.push_back({Int(a), Int(static_cast<long>(rng() % 7))});
      std::vector<long> w;
      long tot = 0;
      for (long a = 0; a < n; ++a) {
        w.push_back(1 + static_cast<long>(rng() % 5));
        tot += w.back();
      }
      algstats::PrimitiveMeasure m;
      for (long a = 0; a < n; ++a)
        m.push_back({Int(a), Rat(w[a]) / Rat(tot)});
      run_soft("seeded-" + std::to_string(t), f, m);
    }
  }
  j["softmin"] = std::move(softrows);

  // unconditional route over the machine's own interval view
  machine::UniverseSnapshot snap = machine::enumerate_universe(
      cfg.machine, {{"-", BitString(), {}}}, static_cast<int>(cfg.workers));
  lefttotal::IntervalView view =
      lefttotal::left_totalize(snap.find_block("-")->records);
  machine::HaltingApprox halting = machine::halting_approx(snap, "-");

  Json globrows = Json::array();
  std::vector<std::pair<std::string, algstats::PrimitiveMap>> gfs = {
      {"two-step", {{Int(1), Int(1)}, {Int(2), Int(2)}}},
      {"single", {{Int(1), Int(2)}}},
      {"level-three", {{Int(0), Int(1)}, {Int(1), Int(1)}, {Int(2), Int(1)}}}};
  for (const auto& [name, f] : gfs) {
    algstats::GlobalSoftminReport r =
        algstats::global_softmin_harness(f, snap, view, halting, glob);
    if (r.verdict == algstats::Verdict::Violation) ++out.violations;
    Json row;
    row["name"] = name;
    row["sum"] = rational_entry(r.sum);
    row["level"] = r.level;
    row["border"] = r.border.str();
    row["border_level"] = r.border_level;
    row["border_by_scan"] = r.border_by_scan.str();
    row["routes_agree"] = r.routes_agree;
    row["parent_not_total"] = r.parent_not_total;
    row["lhs"] = r.lhs;
    row["best_a"] = r.best_a.get_str();
    row["best_a_string"] = algstats::output_string(r.best_a).str();
    if (r.halting_info)
      row["halting_info"] = *r.halting_info;
    else
      row["halting_info"] = nullptr;
    row["rhs"] = bits_entry(r.rhs);
    row["slack_allowed"] = r.slack_allowed;
    row["verdict"] = algstats::verdict_name(r.verdict);
    globrows.push_back(std::move(row));
  }
  j["global_softmin"] = std::move(globrows);

  // prefix-measure route on the first few machine outputs
  Json prefrows = Json::array();
  for (const char* xs : {"", "0", "00", "01"}) {
    algstats::PrefixMeasureReport r = algstats::prefix_measure_harness(
        BitString(xs), snap, view, halting, pref);
    if (r.verdict == algstats::Verdict::Violation) ++out.violations;
    Json row;
    row["x"] = r.x.str();
    row["x_number"] = algstats::output_index(r.x).get_str();
    row["shortest_program"] = r.shortest_program.str();
    row["total_prefix"] = r.total_prefix.str();
    row["measure_points"] = static_cast<long>(r.q.size());
    row["q_of_x"] = rational_entry(r.q_of_x);
    row["floor_bound"] = rational_entry(r.floor_bound);
    row["floor_holds"] = r.floor_holds;
    row["prefix_deficiency"] = r.prefix_deficiency;
    row["witness_score"] = r.witness_score;
    row["certificate"] = certificate_entry(r.certificate);
    if (r.halting_info)
      row["halting_info"] = *r.halting_info;
    else
      row["halting_info"] = nullptr;
    row["slack_allowed"] = r.slack_allowed;
    row["verdict"] = algstats::verdict_name(r.verdict);
    prefrows.push_back(std::move(row));
  }
  j["prefix_measure"] = std::move(prefrows);

  // covering family on the canonical two-map instance
  {
    algstats::PrimitiveMeasure m4;
    for (long i = 0; i < 4; ++i) m4.push_back({Int(i), Rat(1, 4)});
    algstats::PrimitiveMap g1{{Int(0), Int(0)}, {Int(1), Int(1)}};
    algstats::PrimitiveMap g2{{Int(2), Int(0)}, {Int(3), Int(1)}};
    Int k1 = algstats::output_index(codec::encode_map(g1));
    Int k2 = algstats::output_index(codec::encode_map(g2));
    algstats::PrimitiveMeasure qmaps{{std::min(k1, k2), Rat(1, 2)},
                                     {std::max(k1, k2), Rat(1, 2)}};
    algstats::CoveringSweep sweep = algstats::covering_sweep(qmaps, m4, 1, 1);
    Json cov;
    cov["smallest_c"] = sweep.smallest_c;
    if (sweep.family) {
      Json sizes = Json::array();
      for (const auto& s : sweep.family->sets)
        sizes.push_back(static_cast<long>(s.size()));
      cov["set_sizes"] = std::move(sizes);
      cov["expectation"] = rational_entry(sweep.family->expectation);
      bool bound_ok = algstats::leq_exp_neg(
          sweep.family->expectation, sweep.family->c * sweep.family->d);
      cov["bound_ok"] = bound_ok;
      if (!bound_ok) ++out.violations;
    }
    j["covering"] = std::move(cov);
  }

  j["violations"] = out.violations;
  out.ok = out.violations == 0;
  j["ok"] = out.ok;
  out.json = render(j);
  return out;
}

config::SlackTable calibrate(const config::RunConfig& cfg) {
  config::validate(cfg);
  config::SlackTable table;
  table.set("version", cfg.machine.version);

  // machine coding gap, measured on the default exhaustive universe
  {
    machine::MachineConfig def;
    machine::UniverseSnapshot snap = machine::enumerate_universe(
        def, {{"-", BitString(), {}}}, static_cast<int>(cfg.workers));
    long worst = 0;
    for (const BitString& x : snap.outputs("-")) {
      Bits gap = snap.k_hat_bits(x, "-").minus(Bits::neg_log(snap.m_hat(x)));
      worst = std::max(worst, ceil_of(gap));
    }
    table.set("coding_gap", worst);
  }

  // entropy chain constants on the standard catalog
  {
    machine::UniverseSnapshot snap = catalog_universe(cfg);
    entropy::StateCatalog states =
        entropy::build_state_catalog(standard_states(), snap, "-");
    entropy::CircuitCatalog circuits =
        entropy::build_circuit_catalog(standard_circuits(), snap, "-");
    quantum::SemiDensity mu = states.aggregate();

    long c1 = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const entropy::StateEntry& e = states.at(i);
      Bits gap =
          Bits::neg_log(e.weight) - static_cast<long>(e.code.size());
      c1 = std::max(c1, ceil_of(gap));
    }
    table.set("chain_hg_hv", c1);

    long worst_c2 = -10000, worst_c4 = -10000, dom = 0;
    for (const auto& [id, psi] : entropy_probes(cfg.seed, 200)) {
      Bits s_hg = entropy::hg(psi, states);
      entropy::ValueWitness s_hv = entropy::hv(psi, states);
      entropy::ValueWitness s_hc = entropy::hc(psi, circuits);
      if (!s_hg.is_infinite())
        worst_c2 = std::max(worst_c2, ceil_of(s_hg.minus(s_hc.value)));
      if (!s_hv.value.is_infinite()) {
        Bits gap = s_hc.value.minus(s_hv.value) - lg_allowance(s_hv.value);
        worst_c4 = std::max(worst_c4, ceil_of(gap));
      }
      if (!s_hg.is_infinite()) {
        Rat mass = pow2q(-ceil_of(s_hg));
        quantum::SemiDensity part =
            quantum::mixed_state_aggregate(states.dim(), {{psi, mass}});
        long e = 0;
        while (e <= 16 &&
               !quantum::psd_dominates(part.matrix(), mu.matrix(), pow2q(e)))
          ++e;
        dom = std::max(dom, e);
      }
    }
    table.set("chain_hg_hc", worst_c2 + 2);
    table.set("chain_hc_coeff", 1);
    table.set("chain_hc_add", worst_c4 + 2);
    table.set("dominance_exponent", dom);
  }

  // transmission gap bound
  {
    GapLab lab = build_gap_lab(cfg);
    protocol::GapConfig gc{1, 0, 64, 256};
    std::vector<protocol::GapRow> rows = protocol::noncompression_gap(
        gap_population(lab, cfg.seed, 100), lab.snap, lab.catalog, gc);
    long worst = 0;
    for (const protocol::GapRow& r : rows) {
      if (r.flagged) continue;
      Bits excess = r.gap - r.bound;  // bound already holds the log part
      worst = std::max(worst, ceil_of(excess));
    }
    table.set("gap_coeff", 1);
    table.set("gap_add", std::max(worst, 0L) + 2);
    table.set("gap_flag_bits", 64);
    table.set("gap_prefix_bits", 256);
  }

  // conditional softmin: measure the worst margin over the same
  // instances the reports run
  {
    algstats::SlackBound none{0, 0};
    long worst = -10000;
    auto probe = [&](const algstats::PrimitiveMap& f,
                     const algstats::PrimitiveMeasure& m) {
      algstats::SoftminReport r =
          algstats::softmin_harness(f, m, cfg.machine, none);
      worst = std::max(worst, ceil_of(r.margin));
    };
    probe({{Int(0), Int(0)}, {Int(1), Int(0)}},
          {{Int(0), Rat(1, 2)}, {Int(1), Rat(1, 2)}});
    probe({{Int(0), Int(1)}, {Int(1), Int(3)}, {Int(2), Int(2)}},
          {{Int(0), Rat(1, 2)}, {Int(1), Rat(1, 4)}, {Int(2), Rat(1, 4)}});
    probe({{Int(0), Int(0)}, {Int(1), Int(50)}},
          {{Int(0), Rat(1, 2)}, {Int(1), Rat(1, 2)}});
    std::mt19937_64 rng(cfg.seed);
    for (int t = 0; t < 20; ++t) {
      long n = 2 + static_cast<long>(rng() % 3);
      algstats::PrimitiveMap f;
      for (long a = 0; a < n; ++a)
        f.push_back({Int(a), Int(static_cast<long>(rng() % 7))});
      std::vector<long> w;
      long tot = 0;
      for (long a = 0; a < n; ++a) {
        w.push_back(1 + static_cast<long>(rng() % 5));
        tot += w.back();
      }
      algstats::PrimitiveMeasure m;
      for (long a = 0; a < n; ++a)
        m.push_back({Int(a), Rat(w[a]) / Rat(tot)});
      probe(f, m);
    }
    table.set("softmin_coeff", 0);
    table.set("softmin_add", std::max(worst, 0L));
  }

  // unconditional softmin and prefix-measure proxies
  {
    machine::UniverseSnapshot snap = machine::enumerate_universe(
        cfg.machine, {{"-", BitString(), {}}}, static_cast<int>(cfg.workers));
    lefttotal::IntervalView view =
        lefttotal::left_totalize(snap.find_block("-")->records);
    machine::HaltingApprox halting = machine::halting_approx(snap, "-");

    long worst_glob = 0;
    std::vector<algstats::PrimitiveMap> gfs = {
        {{Int(1), Int(1)}, {Int(2), Int(2)}},
        {{Int(1), Int(2)}},
        {{Int(0), Int(1)}, {Int(1), Int(1)}, {Int(2), Int(1)}}};
    for (const auto& f : gfs) {
      algstats::GlobalSoftminReport r =
          algstats::global_softmin_harness(f, snap, view, halting, {1, 0});
      if (!r.halting_info) continue;
      Bits excess = Bits::from_int(r.lhs).minus(r.rhs) - r.slack_allowed;
      worst_glob = std::max(worst_glob, ceil_of(excess));
    }
    table.set("global_coeff", 1);
    table.set("global_add", std::max(worst_glob, 0L));

    long worst_pref = 0;
    for (const char* xs : {"", "0", "00", "01"}) {
      algstats::PrefixMeasureReport r = algstats::prefix_measure_harness(
          BitString(xs), snap, view, halting, {0, 0});
      if (!r.halting_info) continue;
      worst_pref = std::max(
          worst_pref, r.witness_score - std::max(*r.halting_info, 0L));
    }
    table.set("prefix_coeff", 0);
    table.set("prefix_add", worst_pref + 1);
  }

  return table;
}

}  // namespace aiq::report
