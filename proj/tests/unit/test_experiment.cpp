#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "gsamul/error.hpp"
#include "gsamul/experiment.hpp"
#include "gsamul/serialize.hpp"
#include "json.hpp"

using namespace gsamul;
namespace fs = std::filesystem;

TEST_CASE("config parsing") {
  const auto c = parse_config(R"(# comment line
task = synth-b
n = 300   # trailing comment
p = 8
seeds = 3..6, 10
lambda = 0.1, 0.01
order = 3, 4
H = 7
T = 250
identity_link = true
)");
  CHECK(c.task == Task::synth_b);
  CHECK(c.n == 300);
  CHECK(c.p == 8);
  CHECK(c.seeds == std::vector<std::uint64_t>{3, 4, 5, 6, 10});
  CHECK(c.lambda == std::vector<double>{0.1, 0.01});
  CHECK(c.n_basis == std::vector<int>{5, 6});
  CHECK(c.hidden == std::vector<int>{7});
  CHECK(c.iters == 250);
  CHECK(c.identity_link);

  const auto d = parse_config("d = 8\n");
  CHECK(d.n_basis == std::vector<int>{8});
}

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.task = Task::csv;
  c.csv_path = "/tmp/x.csv";
  c.target = "medv";
  c.augment = 20;
  c.seeds = {1, 2, 9};
  c.lambda = {0.3, 1e-4};
  c.noise_sd = 0.1;
  c.kappa_slack = 0.25;
  c.prefer_sparse = true;
  c.split = {0.5, 0.3, 0.2};
  c.shared_validation = false;
  c.threshold = 0.05;
  const auto text = format_config(c);
  const auto back = parse_config(text);
  CHECK(format_config(back) == text);
  CHECK(back.noise_sd == c.noise_sd);
  CHECK(back.lambda == c.lambda);
  CHECK(back.split == c.split);
  CHECK(back.seeds == c.seeds);
  CHECK(back.prefer_sparse);
  CHECK(format_config(parse_config(format_config(ExperimentConfig{}))) == format_config(ExperimentConfig{}));
  CHECK(parse_config(format_config(ExperimentConfig{})).noise_sd == std::sqrt(0.1));
}

TEST_CASE("config errors name the line") {
  try {
    parse_config("n = 10\nbogus = 1\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_input);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("n = ten\n"), Error);
  CHECK_THROWS_AS(parse_config("task = regression\n"), Error);
  CHECK_THROWS_AS(parse_config("lambda = -1\n"), Error);
  CHECK_THROWS_AS(parse_config("d = 2\n"), Error);
  CHECK_THROWS_AS(parse_config("task = csv\n"), Error);
  CHECK_THROWS_AS(parse_config("just text\n"), Error);
  CHECK_THROWS_AS(parse_config("kappa_slack = 1\n"), Error);
  CHECK_THROWS_AS(parse_config("tie_break = middle\n"), Error);
}

TEST_CASE("aggregation recomputes mean and sample std") {
  std::vector<SeedResult> seeds(3);
  const double rs[3] = {0.1, 0.3, 0.5};
  for (int i = 0; i < 3; ++i) {
    seeds[i].ok = i != 2;
    seeds[i].eval.rsse = rs[i];
    seeds[i].has_truth = true;
    seeds[i].eval.ase_link = 2.0 * rs[i];
    seeds[i].eval.ase_components = {rs[i], 0.0};
    seeds[i].tp = i + 1;
  }
  const auto agg = aggregate_seeds(seeds, true);
  CHECK(agg.at("rsse").count == 2);
  CHECK(agg.at("rsse").mean == doctest::Approx(0.2));
  CHECK(agg.at("rsse").std == doctest::Approx(std::sqrt(0.02)));
  CHECK(agg.at("ase_g").mean == doctest::Approx(0.4));
  CHECK(agg.at("ase_f2").mean == 0.0);
  CHECK(agg.at("tp").mean == doctest::Approx(1.5));
  CHECK(aggregate_seeds(seeds, false).count("tp") == 0);
}

TEST_CASE("fit run writes a report, traces and models") {
  const auto dir = (fs::temp_directory_path() / "gsamul_unit_fit_run").string();
  fs::remove_all(dir);
  auto c = parse_config("task = synth-a\nn = 120\nseeds = 0..1\nT = 150\nn_eval = 200\nworkers = 2\n");
  c.output_dir = dir;
  const auto rep = run_fit(c);
  CHECK(rep.kind == "fit");
  CHECK(rep.label == "GSAMUL");
  REQUIRE(rep.succeeded() == 2);
  CHECK(rep.aggregate.at("ase_g").count == 2);
  for (const auto& s : rep.seeds) {
    CHECK(fs::exists(fs::path(dir) / s.trace_path));
    CHECK(fs::exists(fs::path(dir) / s.model_path));
    CHECK(s.final_outer < s.initial_outer);
  }
  const auto j = nlohmann::json::parse(read_text_file(dir + "/report.json"));
  CHECK(j.at("schema") == kReportSchema);
  CHECK(j.at("succeeded") == 2);
  CHECK(parse_config(j.at("config").get<std::string>()).n == 120);

  // Serial and parallel seeds agree exactly.
  auto serial = c;
  serial.workers = 1;
  serial.output_dir.clear();
  const auto rep1 = run_fit(serial);
  for (size_t i = 0; i < 2; ++i) CHECK(rep1.seeds[i].eval.ase_link == rep.seeds[i].eval.ase_link);

  const auto summary = summarize_run(dir);
  CHECK(summary.find("seed 0,150,") != std::string::npos);
  CHECK(summary.find("seed 1,150,") != std::string::npos);
  CHECK_THROWS_AS(summarize_run(dir + "/nope"), Error);
  fs::remove_all(dir);
}

TEST_CASE("grid search, identity label and per-seed failures") {
  auto c = parse_config("task = synth-a\nn = 100\nseeds = 4\nT = 100\nlambda = 0.01, 0.001\nH = 3\nidentity_link = true\n");
  const auto rep = run_fit(c);
  CHECK(rep.label == "SpAM-style baseline (identity link)");
  REQUIRE(rep.succeeded() == 1);
  CHECK((rep.seeds[0].lambda == 0.01 || rep.seeds[0].lambda == 0.001));

  auto bad = parse_config("task = synth-a\nn = 100\nseeds = 1\nT = 50\nlambda = 1e6\n");
  const auto failed = run_fit(bad);
  CHECK(failed.succeeded() == 0);
  CHECK(!failed.seeds[0].error.empty());
  CHECK(failed.aggregate.empty());
}

TEST_CASE("select run reports TP and FP") {
  auto c = parse_config(
      "task = synth-a\nn = 200\np = 5\nseeds = 2\nT = 1200\npartitions = 2\nn_eval = 200\nemit_traces = false\n");
  const auto rep = run_select(c);
  REQUIRE(rep.succeeded() == 1);
  const auto& s = rep.seeds[0];
  REQUIRE(s.selection.has_value());
  CHECK(s.tp + s.fp == s.size);
  CHECK(s.tp == 2);
  CHECK(s.fp == 0);
  CHECK(rep.aggregate.at("tp").mean == 2.0);

  c.threshold = 0.0;
  const auto all = run_select(c);
  CHECK(all.seeds[0].size == 5);
  CHECK(all.seeds[0].selection->partitions == 0);
}
