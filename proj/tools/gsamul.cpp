// Command-line front end. Talks to the library only through the C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "gsamul/gsamul.h"

namespace {

int report_failure(gsamul_status st) {
  std::fprintf(stderr, "gsamul: error %d: %s\n", static_cast<int>(st), gsamul_last_error());
  return st == GSAMUL_ERR_INVALID_INPUT ? 2 : 1;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int run_config(const std::string& path, bool selection) {
  std::string text;
  if (!read_file(path, text)) {
    std::fprintf(stderr, "gsamul: cannot read config '%s'\n", path.c_str());
    return 2;
  }
  char* report = nullptr;
  const gsamul_status st = selection ? gsamul_run_select(text.c_str(), &report) : gsamul_run_fit(text.c_str(), &report);
  if (report) {
    std::fputs(report, stdout);
    std::fputc('\n', stdout);
    gsamul_string_free(report);
  }
  return st == GSAMUL_OK ? 0 : report_failure(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse additive models with a learned link"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gsamul_version()));

  auto* synth = app.add_subcommand("synth", "write a synthetic draw as CSV (plus a ground-truth JSON sidecar)");
  std::string example = "a";
  int n = 500, p = 2;
  std::uint64_t seed = 0;
  double noise_sd = 0.31622776601683794;
  std::string out, truth;
  synth->add_option("--example", example, "a or b")->check(CLI::IsMember({"a", "b"}))->required();
  synth->add_option("--n", n, "rows")->check(CLI::PositiveNumber);
  synth->add_option("--p", p, "features (extra features are inert)")->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed, "random seed");
  synth->add_option("--noise-sd", noise_sd, "noise standard deviation")->check(CLI::NonNegativeNumber);
  synth->add_option("--out", out, "CSV output path")->required();
  synth->add_option("--truth", truth, "ground-truth JSON path (default: <out>.truth.json)");

  std::string config;
  auto* fit = app.add_subcommand("fit", "grid-search, train and evaluate per seed");
  fit->add_option("--config", config, "key = value config file")->required();
  auto* select = app.add_subcommand("select", "stability-based variable selection per seed");
  select->add_option("--config", config, "key = value config file")->required();

  std::string run_dir;
  auto* trace = app.add_subcommand("trace", "summarize the convergence traces of a run directory");
  trace->add_option("--run", run_dir, "output_dir of a fit or select run")->required();

  CLI11_PARSE(app, argc, argv);

  if (*synth) {
    if (truth.empty()) truth = out + ".truth.json";
    const gsamul_status st = gsamul_synth_write(example == "a" ? 0 : 1, static_cast<size_t>(n),
                                                static_cast<size_t>(p), noise_sd, seed, out.c_str(), truth.c_str());
    if (st != GSAMUL_OK) return report_failure(st);
    std::printf("wrote %s and %s\n", out.c_str(), truth.c_str());
    return 0;
  }
  if (*fit) return run_config(config, false);
  if (*select) return run_config(config, true);
  if (*trace) {
    char* text = nullptr;
    const gsamul_status st = gsamul_run_summary(run_dir.c_str(), &text);
    if (st != GSAMUL_OK) return report_failure(st);
    std::fputs(text, stdout);
    gsamul_string_free(text);
    return 0;
  }
  return 0;
}
