// Command-line front end.  Every subcommand rebuilds its inputs from the
// config, runs one of the report builders and writes the artifacts; the
// heavy lifting lives in the library so runs stay deterministic and
// byte-identical across worker counts.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "aiq/config.hpp"
#include "aiq/protocol.hpp"
#include "aiq/quantum.hpp"
#include "aiq/report.hpp"

using namespace aiq;

namespace {

std::string joined(const std::string& dir, const std::string& leaf) {
  return (std::filesystem::path(dir) / leaf).string();
}

void announce(const std::string& path) {
  std::cout << "wrote " << path << "\n";
}

void write_out(const config::RunConfig& cfg, const std::string& leaf,
               const std::string& content) {
  std::string path = joined(cfg.out_dir, leaf);
  report::write_file(path, content);
  announce(path);
}

// shared machine and output flags; the length bound default depends on
// the subcommand (exhaustive universes use 14, the quantum lab 10)
void add_common(CLI::App* sub, config::RunConfig& cfg, long default_lmax) {
  cfg.machine.max_len = default_lmax;
  sub->add_option("--lmax", cfg.machine.max_len,
                  "program length bound in bits")
      ->capture_default_str();
  sub->add_option("--steps", cfg.machine.step_budget,
                  "step budget per program")
      ->capture_default_str();
  sub->add_option("--workers", cfg.workers,
                  "enumeration threads (never changes outputs)")
      ->capture_default_str();
  sub->add_option("--out", cfg.out_dir, "output directory")
      ->capture_default_str();
}

void add_seed(CLI::App* sub, config::RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "seed for the sampled populations")
      ->capture_default_str();
}

void add_slack(CLI::App* sub, config::RunConfig& cfg) {
  sub->add_option("--slack", cfg.slack_path, "slack constant table")
      ->capture_default_str();
}

config::SlackTable load_slack(const config::RunConfig& cfg) {
  config::SlackTable table = config::load_slack_table(cfg.slack_path);
  config::check_slack_version(cfg, table);
  return table;
}

int run_universe(const config::RunConfig& cfg) {
  report::UniverseArtifacts art = report::universe_report(cfg);
  write_out(cfg, "universe.snap", art.snapshot);
  write_out(cfg, "universe-left.txt", art.left);
  write_out(cfg, "halting.txt", art.halting);
  write_out(cfg, "universe.json", art.json);
  std::cout << "config " << config::config_hash(cfg) << "\n";
  return 0;
}

int run_catalog(const config::RunConfig& cfg) {
  write_out(cfg, "catalog.json", report::catalog_report(cfg));
  for (const auto& [id, state] : report::standard_states())
    write_out(cfg, joined("states", id + ".state"),
              quantum::state_to_text(state));
  for (const auto& [id, circuit] : report::standard_circuits())
    write_out(cfg, joined("circuits", id + ".mat"),
              quantum::matrix_to_text(circuit.v, id));
  std::cout << "config " << config::config_hash(cfg) << "\n";
  return 0;
}

int run_entropy(const config::RunConfig& cfg, long count) {
  report::EntropyOutputs out =
      report::entropy_report(cfg, load_slack(cfg), count);
  write_out(cfg, "entropy.json", out.json);
  write_out(cfg, "entropy.csv", out.csv);
  std::cout << "config " << config::config_hash(cfg) << "\n"
            << "chain violations " << out.violations << "\n";
  return out.ok ? 0 : 2;
}

int run_transmit_batch(const config::RunConfig& cfg, long count) {
  report::GapOutputs out = report::gap_report(cfg, load_slack(cfg), count);
  write_out(cfg, "transmit.json", out.json);
  write_out(cfg, "transmit.csv", out.csv);
  std::cout << "config " << config::config_hash(cfg) << "\n"
            << "gap violations " << out.violations << "\n";
  return out.ok ? 0 : 2;
}

void print_cost(const char* label, const protocol::CostReport& cost) {
  std::cout << label << ": L=" << cost.l << " M=" << cost.m
            << " F=" << (cost.f.is_infinite() ? "inf" : cost.f.decimal(6))
            << " total="
            << (cost.total.is_infinite() ? "inf" : cost.total.decimal(6))
            << " program=" << cost.strategy.program.str() << "\n";
}

// price one state file; the snapshot comes from --universe or, when
// absent, from the standard catalog universe
int run_transmit_single(const config::RunConfig& cfg,
                        const std::string& state_path,
                        const std::string& universe_path,
                        const std::string& mode) {
  quantum::PureState psi =
      quantum::state_from_text(report::read_file(state_path));
  if (mode == "gap") {
    if (!universe_path.empty())
      throw config::ConfigError(
          "gap mode prices against the built-in catalog; drop --universe");
    config::SlackTable slack = load_slack(cfg);
    protocol::GapConfig gc;
    gc.c5 = slack.get("gap_coeff");
    gc.c6 = slack.get("gap_add");
    gc.flag_threshold = slack.get("gap_flag_bits");
    gc.enc_prefix_bits =
        static_cast<std::size_t>(slack.get("gap_prefix_bits"));
    machine::UniverseSnapshot snap = report::catalog_universe(cfg);
    entropy::StateCatalog catalog =
        entropy::build_state_catalog(report::standard_states(), snap, "-");
    std::vector<protocol::GapRow> rows =
        protocol::noncompression_gap({{"state", psi}}, snap, catalog, gc);
    std::cout << protocol::gap_table_csv(rows);
    const protocol::GapRow& r = rows.at(0);
    if (r.flagged) return 0;
    return r.gap <= Bits::from_int(r.bound) ? 0 : 2;
  }
  machine::UniverseSnapshot snap = [&] {
    if (universe_path.empty()) return report::catalog_universe(cfg);
    std::istringstream in(report::read_file(universe_path));
    return machine::read_snapshot(in);
  }();
  if (mode == "classical") {
    print_cost("classical", protocol::best_classical(psi, snap));
    return 0;
  }
  print_cost("mixed", protocol::best_mixed(psi, snap));
  return 0;
}

int run_algstats(const config::RunConfig& cfg, long count) {
  report::AlgstatsOutputs out =
      report::algstats_report(cfg, load_slack(cfg), count);
  write_out(cfg, "algstats.json", out.json);
  std::cout << "config " << config::config_hash(cfg) << "\n"
            << "exact violations " << out.violations << "\n";
  return out.ok ? 0 : 2;
}

int run_calibrate(const config::RunConfig& cfg) {
  config::SlackTable table = report::calibrate(cfg);
  std::string text = config::render_slack_table(table);
  report::write_file(cfg.slack_path, text);
  std::cout << text;
  announce(cfg.slack_path);
  std::cout << "config " << config::config_hash(cfg) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "desk-scale laboratory: exhaustive prefix-machine universes, exact "
      "quantum state catalogs and the reports built on them"};
  app.require_subcommand(1);

  config::RunConfig uni_cfg;
  std::string aux_path;
  CLI::App* uni = app.add_subcommand(
      "universe", "enumerate the machine and write snapshot artifacts");
  add_common(uni, uni_cfg, 14);
  uni->add_option("--aux-file", aux_path,
                  "extra auxiliary blocks, one `id bits` pair per line");

  config::RunConfig cat_cfg;
  CLI::App* cat = app.add_subcommand(
      "catalog", "build the standard state and circuit catalog");
  add_common(cat, cat_cfg, 10);

  config::RunConfig ent_cfg;
  long ent_count = 200;
  CLI::App* ent = app.add_subcommand(
      "entropy", "score probe states and check the entropy chain");
  add_common(ent, ent_cfg, 10);
  add_seed(ent, ent_cfg);
  add_slack(ent, ent_cfg);
  ent->add_option("--count", ent_count, "number of probe states")
      ->capture_default_str();

  config::RunConfig tra_cfg;
  long tra_count = 100;
  std::string state_path, universe_path, mode = "gap";
  CLI::App* tra = app.add_subcommand(
      "transmit", "price states over the two-channel transmission game");
  add_common(tra, tra_cfg, 10);
  add_seed(tra, tra_cfg);
  add_slack(tra, tra_cfg);
  tra->add_option("--count", tra_count, "random states in the population")
      ->capture_default_str();
  tra->add_option("--state", state_path, "price a single state file");
  tra->add_option("--universe", universe_path,
                  "snapshot file for single-state pricing");
  tra->add_option("--mode", mode, "classical, mixed or gap")
      ->check(CLI::IsMember({"classical", "mixed", "gap"}))
      ->capture_default_str();

  config::RunConfig alg_cfg;
  long alg_count = 8;
  CLI::App* alg = app.add_subcommand(
      "algstats", "run the deficiency and soft-minimum harnesses");
  add_common(alg, alg_cfg, 10);
  add_seed(alg, alg_cfg);
  add_slack(alg, alg_cfg);
  alg->add_option("--count", alg_count, "random soft-minimum instances")
      ->capture_default_str();

  config::RunConfig cal_cfg;
  CLI::App* cal = app.add_subcommand(
      "calibrate", "measure the slack constants and rewrite the table");
  add_common(cal, cal_cfg, 10);
  add_seed(cal, cal_cfg);
  add_slack(cal, cal_cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(uni)) {
      uni_cfg.aux_path = aux_path;
      return run_universe(uni_cfg);
    }
    if (app.got_subcommand(cat)) return run_catalog(cat_cfg);
    if (app.got_subcommand(ent)) return run_entropy(ent_cfg, ent_count);
    if (app.got_subcommand(tra)) {
      if (!state_path.empty())
        return run_transmit_single(tra_cfg, state_path, universe_path, mode);
      if (!universe_path.empty())
        throw config::ConfigError("--universe needs --state");
      return run_transmit_batch(tra_cfg, tra_count);
    }
    if (app.got_subcommand(alg)) return run_algstats(alg_cfg, alg_count);
    if (app.got_subcommand(cal)) return run_calibrate(cal_cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
