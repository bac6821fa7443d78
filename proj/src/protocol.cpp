#include "aiq/protocol.hpp"

#include <sstream>

namespace aiq::protocol {

namespace {

// Shared search loop.  Records are stored in enumeration order, so
// keeping the first strict minimum gives the earliest winning program.
CostReport scan_strategies(const quantum::PureState& psi,
                           const machine::UniverseSnapshot& snap,
                           const std::string& aux_id, bool classical) {
  const machine::AuxBlock* block = snap.find_block(aux_id);
  if (!block)
    throw std::invalid_argument("strategy scan: unknown auxiliary " + aux_id);
  bool found = false;
  CostReport best;
  for (const auto& rec : block->records) {
    std::optional<quantum::Circuit> circuit =
        quantum::parse_circuit_code(rec.output);
    if (!circuit) continue;
    if (circuit->total_qubits() != psi.qubits()) continue;
    if (classical && circuit->data_qubits != 0) continue;
    quantum::OverlapResult ov = quantum::best_input_overlap(*circuit, psi);
    if (ov.value == 0) continue;
    long l = static_cast<long>(rec.program.size());
    long m = circuit->data_qubits;
    Bits f = Bits::neg_log(ov.value);
    Bits total = Bits::from_int(l + m) + f;
    if (!found || total < best.total) {
      found = true;
      best.l = l;
      best.m = m;
      best.f = f;
      best.total = total;
      best.strategy.program = rec.program;
      best.strategy.input = ov.witness;
      best.classical_only = (m == 0);
    }
  }
  if (!found)
    throw NoValidStrategy(classical
                              ? "no zero-input circuit reaches the state"
                              : "no recorded circuit reaches the state");
  return best;
}

}  // namespace

CostReport evaluate(const quantum::PureState& psi, const Strategy& strategy,
                    const machine::UniverseSnapshot& snap,
                    const std::string& aux_id) {
  const machine::AuxBlock* block = snap.find_block(aux_id);
  if (!block)
    throw std::invalid_argument("evaluate: unknown auxiliary " + aux_id);
  machine::RunResult run = machine::run_program(strategy.program, block->aux,
                                                snap.config().step_budget);
  if (run.status != machine::RunStatus::Halted)
    throw DecodeFailure("evaluate: program did not halt");
  std::optional<quantum::Circuit> circuit =
      quantum::parse_circuit_code(run.output);
  if (!circuit)
    throw DecodeFailure("evaluate: output is not a circuit description");
  if (circuit->total_qubits() != psi.qubits())
    throw std::invalid_argument("evaluate: circuit width does not match state");
  if (strategy.input.qubits() != circuit->data_qubits)
    throw std::invalid_argument("evaluate: input width does not match circuit");

  quantum::PureState rebuilt = quantum::pad_and_apply(*circuit, strategy.input);
  Rat fid = quantum::fidelity(psi, rebuilt);
  CostReport report;
  report.l = static_cast<long>(strategy.program.size());
  report.m = circuit->data_qubits;
  report.f = fid == 0 ? Bits::infinity() : Bits::neg_log(fid);
  report.total = Bits::from_int(report.l + report.m) + report.f;
  report.strategy = strategy;
  report.classical_only = (circuit->data_qubits == 0);
  return report;
}

CostReport best_classical(const quantum::PureState& psi,
                          const machine::UniverseSnapshot& snap,
                          const std::string& aux_id) {
  return scan_strategies(psi, snap, aux_id, true);
}

CostReport best_mixed(const quantum::PureState& psi,
                      const machine::UniverseSnapshot& snap,
                      const std::string& aux_id) {
  return scan_strategies(psi, snap, aux_id, false);
}

std::vector<GapRow> noncompression_gap(
    const std::vector<std::pair<std::string, quantum::PureState>>& states,
    const machine::UniverseSnapshot& snap,
    const entropy::StateCatalog& catalog, const GapConfig& config,
    const std::string& aux_id) {
  machine::HaltingApprox halting = machine::halting_approx(snap, aux_id);
  std::vector<GapRow> rows;
  rows.reserve(states.size());
  for (const auto& [id, psi] : states) {
    GapRow row;
    row.id = id;
    row.classical = best_classical(psi, snap, aux_id);
    row.mixed = best_mixed(psi, snap, aux_id);
    row.gap = row.classical.total.minus(row.mixed.total);
    row.bound =
        config.c5 * ceil_log2(Rat(row.mixed.total.floor_value() + 2)) +
        config.c6;

    // Probe: does the state's code compress against a stream prefix once
    // the halting characteristic is appended to the conditioning side?
    BitString x = quantum::encode_state(psi);
    BitString plain = entropy::enc_prefix(psi, catalog, config.enc_prefix_bits);
    BitString combined = machine::combined_aux(plain, halting);
    std::vector<BitString> plain_plants = {
        machine::make_lit(x), machine::synthesize_copy_program(x, plain)};
    std::vector<BitString> comb_plants = {
        machine::make_lit(x), machine::synthesize_copy_program(x, combined)};
    machine::UniverseSnapshot probe = machine::enumerate_universe(
        snap.config(), {{"p", plain, std::move(plain_plants)},
                        {"c", combined, std::move(comb_plants)}});
    row.halting_info = machine::info_with_halting(probe, x, "p", "c");
    row.flagged =
        row.halting_info.has_value() && *row.halting_info > config.flag_threshold;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string gap_table_csv(const std::vector<GapRow>& rows) {
  std::ostringstream os;
  os << "state-id,L,M,F,total_classical,total_mixed,gap,bound,flag\n";
  for (const auto& r : rows) {
    os << r.id << ',' << r.mixed.l << ',' << r.mixed.m << ','
       << r.mixed.f.decimal() << ',' << r.classical.total.decimal() << ','
       << r.mixed.total.decimal() << ',' << r.gap.decimal() << ',' << r.bound
       << ',' << (r.flagged ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace aiq::protocol
