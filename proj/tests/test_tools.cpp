#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "aiq/config.hpp"
#include "aiq/lefttotal.hpp"
#include "aiq/machine.hpp"
#include "aiq/report.hpp"

using namespace aiq;

namespace {

config::RunConfig lab_config() {
  config::RunConfig cfg;
  cfg.machine.max_len = 10;
  cfg.machine.step_budget = 10000;
  return cfg;
}

// the constants committed in config/slack.cfg
config::SlackTable committed_table() {
  config::SlackTable t;
  t.set("version", 1);
  t.set("coding_gap", 1);
  t.set("chain_hg_hv", 15);
  t.set("chain_hg_hc", -79);
  t.set("chain_hc_coeff", 1);
  t.set("chain_hc_add", 91);
  t.set("dominance_exponent", 0);
  t.set("gap_coeff", 1);
  t.set("gap_add", 2);
  t.set("gap_flag_bits", 64);
  t.set("gap_prefix_bits", 256);
  t.set("softmin_coeff", 0);
  t.set("softmin_add", 0);
  t.set("global_coeff", 1);
  t.set("global_add", 0);
  t.set("prefix_coeff", 0);
  t.set("prefix_add", 8);
  return t;
}

std::filesystem::path fresh_tmp(const std::string& leaf) {
  return std::filesystem::temp_directory_path() / ("aiq-tools-" + leaf);
}

}  // namespace

TEST_CASE("slack tables parse, render and save round trip") {
  std::string text =
      "# lab constants\n"
      "\n"
      "version = 1\n"
      "coding_gap = 3\n"
      "chain_hc_add = -7\n";
  config::SlackTable t = config::parse_slack_table(text);
  CHECK(t.has("version"));
  CHECK(t.get("coding_gap") == 3);
  CHECK(t.get("chain_hc_add") == -7);
  CHECK(!t.has("missing"));
  CHECK(t.get_or("missing", 9) == 9);
  CHECK_THROWS_AS((void)t.get("missing"), config::ConfigError);

  t.set("coding_gap", 4);
  CHECK(t.get("coding_gap") == 4);
  t.set("extra", 11);
  CHECK(config::render_slack_table(t) ==
        "version = 1\n"
        "coding_gap = 4\n"
        "chain_hc_add = -7\n"
        "extra = 11\n");

  // a parse of the render gives the same table back
  config::SlackTable again =
      config::parse_slack_table(config::render_slack_table(t));
  CHECK(config::render_slack_table(again) == config::render_slack_table(t));

  std::filesystem::path path = fresh_tmp("slack.cfg");
  config::save_slack_table(path.string(), t);
  config::SlackTable loaded = config::load_slack_table(path.string());
  CHECK(config::render_slack_table(loaded) == config::render_slack_table(t));
  std::filesystem::remove(path);

  CHECK_THROWS_AS((void)config::parse_slack_table("version = 1\nversion = 2\n"),
                  config::ConfigError);
  CHECK_THROWS_AS((void)config::parse_slack_table("Bad-Name = 1\n"),
                  config::ConfigError);
  CHECK_THROWS_AS((void)config::parse_slack_table("version = 1x\n"),
                  config::ConfigError);
  CHECK_THROWS_AS((void)config::parse_slack_table("version 1\n"),
                  config::ConfigError);
  CHECK_THROWS_AS((void)config::load_slack_table("/nonexistent/slack.cfg"),
                  config::ConfigError);
}

TEST_CASE("run configs validate and hash deterministically") {
  config::RunConfig def;
  CHECK_NOTHROW(config::validate(def));
  CHECK(config::canonical_text(def) ==
        "machine_version = 1\n"
        "max_len = 14\n"
        "step_budget = 10000\n"
        "seed = 41\n"
        "log_frac_bits = 48\n"
        "catalog = standard\n");
  CHECK(config::config_hash(def) == "f6c6da08921deeb6");

  // worker count and file paths must not change the hash: outputs are
  // required to be independent of them
  config::RunConfig lab = lab_config();
  config::RunConfig lab4 = lab;
  lab4.workers = 4;
  lab4.out_dir = "elsewhere";
  lab4.slack_path = "other.cfg";
  CHECK(config::config_hash(lab) == "39e0f810e30eb56a");
  CHECK(config::config_hash(lab4) == config::config_hash(lab));
  CHECK(config::config_hash(lab) != config::config_hash(def));

  config::RunConfig bad = def;
  bad.machine.max_len = 0;
  CHECK_THROWS_AS(config::validate(bad), config::ConfigError);
  bad = def;
  bad.machine.step_budget = 0;
  CHECK_THROWS_AS(config::validate(bad), config::ConfigError);
  bad = def;
  bad.workers = 0;
  CHECK_THROWS_AS(config::validate(bad), config::ConfigError);
  bad = def;
  bad.log_frac_bits = -1;
  CHECK_THROWS_AS(config::validate(bad), config::ConfigError);
  bad = def;
  bad.catalog = "exotic";
  CHECK_THROWS_AS(config::validate(bad), config::ConfigError);

  config::SlackTable table = committed_table();
  CHECK_NOTHROW(config::check_slack_version(def, table));
  table.set("version", 2);
  CHECK_THROWS_AS(config::check_slack_version(def, table),
                  config::ConfigError);
}

TEST_CASE("report primitives render exact fractions and quoted cells") {
  report::Json r = report::rational_entry(Rat(3, 8));
  CHECK(report::render(r) ==
        "{\n"
        "  \"fraction\": \"3/8\",\n"
        "  \"decimal\": \"0.375000\"\n"
        "}\n");

  report::Json b = report::bits_entry(Bits::neg_log(Rat(3, 4)));
  CHECK(b["finite"] == true);
  CHECK(b["int"] == 1);
  CHECK(b["log_arg"] == "3/2");
  CHECK(b["decimal"] == "0.415037");
  report::Json inf = report::bits_entry(Bits::infinity());
  CHECK(inf["finite"] == false);
  CHECK(inf["decimal"] == "inf");

  CHECK(report::csv_row({"a", "b,c", "d\"e", "plain"}) ==
        "a,\"b,c\",\"d\"\"e\",plain\n");

  std::filesystem::path dir = fresh_tmp("files");
  std::string path = (dir / "deep" / "note.txt").string();
  report::write_file(path, "line\n");
  CHECK(report::read_file(path) == "line\n");
  CHECK_THROWS((void)report::read_file((dir / "absent").string()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("entropy probes grow by extension only") {
  auto ten = report::entropy_probes(41, 10);
  auto thirty = report::entropy_probes(41, 30);
  REQUIRE(ten.size() == 10);
  REQUIRE(thirty.size() == 30);
  std::vector<std::string> ids;
  for (auto& [id, s] : ten) ids.push_back(id);
  CHECK(ids == std::vector<std::string>{"e0", "e1", "t34", "t43", "ray-thirds",
                                        "ray-skew", "p0", "p1", "a2", "p3"});
  for (std::size_t i = 0; i < ten.size(); ++i) {
    CHECK(thirty[i].first == ten[i].first);
    CHECK(quantum::fidelity(thirty[i].second, ten[i].second) == 1);
  }
  // a different seed only changes the drawn states, not the fixed heads
  auto other = report::entropy_probes(42, 10);
  CHECK(other[6].first == "p0");
  CHECK(quantum::fidelity(other[6].second, ten[6].second) != 1);
}

TEST_CASE("universe artifacts parse back and ignore worker count") {
  config::RunConfig cfg;
  cfg.machine.max_len = 8;
  cfg.machine.step_budget = 1000;
  report::UniverseArtifacts art = report::universe_report(cfg);

  std::istringstream in(art.snapshot);
  machine::UniverseSnapshot snap = machine::read_snapshot(in);
  CHECK(snap.config() == cfg.machine);
  REQUIRE(snap.find_block("-") != nullptr);
  CHECK(!snap.find_block("-")->records.empty());

  machine::MachineConfig left_cfg;
  std::string left_aux;
  lefttotal::IntervalView view =
      lefttotal::read_left_total(art.left, &left_cfg, &left_aux);
  CHECK(left_cfg == cfg.machine);
  CHECK(left_aux == "-");
  CHECK(view.omega() == snap.omega_lower("-"));

  machine::HaltingApprox halting = machine::halting_approx(snap, "-");
  CHECK(art.halting == halting.bits.str() + "\n");
  CHECK(art.json.find(config::config_hash(cfg)) != std::string::npos);
  CHECK(art.json.find("\"kind\": \"universe\"") != std::string::npos);

  // byte-stable across repeat runs and worker counts
  config::RunConfig threaded = cfg;
  threaded.workers = 3;
  report::UniverseArtifacts again = report::universe_report(threaded);
  CHECK(again.snapshot == art.snapshot);
  CHECK(again.left == art.left);
  CHECK(again.halting == art.halting);
  CHECK(again.json == art.json);

  // a longer length bound can only add records
  config::RunConfig shorter = cfg;
  shorter.machine.max_len = 7;
  report::UniverseArtifacts small = report::universe_report(shorter);
  std::istringstream small_in(small.snapshot);
  machine::UniverseSnapshot small_snap = machine::read_snapshot(small_in);
  const auto& small_recs = small_snap.find_block("-")->records;
  const auto& big_recs = snap.find_block("-")->records;
  CHECK(small_recs.size() < big_recs.size());
  for (const machine::HaltRecord& r : small_recs) {
    bool found = false;
    for (const machine::HaltRecord& b : big_recs)
      if (b.program == r.program && b.output == r.output &&
          b.steps == r.steps) {
        found = true;
        break;
      }
    CHECK(found);
  }
}

TEST_CASE("lab reports come back clean against the committed constants") {
  config::RunConfig cfg = lab_config();
  config::SlackTable slack = committed_table();

  report::EntropyOutputs ent = report::entropy_report(cfg, slack, 20);
  CHECK(ent.ok);
  CHECK(ent.violations == 0);
  CHECK(ent.csv.substr(0, ent.csv.find('\n')) ==
        "id,hg,hv,hv_witness,hc,hc_witness");
  CHECK(ent.json.find("\"route_exact\": true") != std::string::npos);
  CHECK(ent.json.find("\"route_exact\": false") == std::string::npos);

  report::GapOutputs gap = report::gap_report(cfg, slack, 6);
  CHECK(gap.ok);
  CHECK(gap.violations == 0);
  // one embedded-run probe rides along and must be flagged, never failed
  CHECK(gap.json.find("\"flagged\": 1") != std::string::npos);
  CHECK(gap.json.find("\"id\": \"ray-probe\"") != std::string::npos);
  CHECK(gap.csv.substr(0, gap.csv.find('\n')) ==
        "state-id,L,M,F,total_classical,total_mixed,gap,bound,flag");

  report::AlgstatsOutputs alg = report::algstats_report(cfg, slack, 2);
  CHECK(alg.ok);
  CHECK(alg.violations == 0);
  CHECK(alg.json.find("\"verdict\": \"violation\"") == std::string::npos);

  std::string cat = report::catalog_report(cfg);
  CHECK(cat.find("\"kind\": \"catalog\"") != std::string::npos);
  CHECK(cat.find("\"id\": \"prep-t43\"") != std::string::npos);

  // the builders themselves are deterministic functions of the config
  report::EntropyOutputs ent2 = report::entropy_report(cfg, slack, 20);
  CHECK(ent2.json == ent.json);
  CHECK(ent2.csv == ent.csv);
  report::AlgstatsOutputs alg2 = report::algstats_report(cfg, slack, 2);
  CHECK(alg2.json == alg.json);
}

TEST_CASE("calibration reproduces the committed constants") {
  config::SlackTable measured = report::calibrate(lab_config());
  CHECK(config::render_slack_table(measured) ==
        config::render_slack_table(committed_table()));
}
