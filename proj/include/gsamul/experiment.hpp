#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsamul/metrics.hpp"
#include "gsamul/optimizer.hpp"
#include "gsamul/selection.hpp"

namespace gsamul {

enum class Task { synth_a, synth_b, csv };

// Flat key = value document; see README for the key list. Lists are comma
// separated and seeds also accept inclusive ranges "a..b".
struct ExperimentConfig {
  Task task = Task::synth_a;
  std::string csv_path;
  std::string target = "y";
  int augment = 0;  // irrelevant U(augment_lo, augment_hi) columns appended to CSV data
  double augment_lo = -0.5;
  double augment_hi = 0.5;

  int n = 500;
  int p = 2;
  std::vector<std::uint64_t> seeds{0};
  double noise_sd = std::sqrt(0.1);
  int n_val = 0;  // noise-free validation rows for synthetic tasks; 0 means n
  int n_eval = 1000;
  std::array<double, 3> split{0.4, 0.4, 0.2};  // CSV train / validation / test

  std::vector<double> lambda{3e-2};
  std::vector<int> n_basis{6};
  std::vector<int> hidden{5};
  int degree = 3;

  int iters = 8000;
  int batch_size = 32;
  double c = 3.0;
  double l_hat = 8.0;
  double group_floor = 1e-8;
  bool identity_link = false;
  bool standardize_response = true;
  bool warm_start = true;

  int partitions = 10;
  double kappa_slack = 0.3;  // accept thresholds with mean kappa >= 0.7 * best
  bool prefer_sparse = false;  // tie_break = largest
  bool shared_validation = true;
  double threshold = -1.0;  // >= 0 replaces the stability threshold

  int workers = 1;
  std::string output_dir;  // empty: nothing is written
  bool emit_traces = true;
};

ExperimentConfig parse_config(const std::string& text);
// Canonical text; parse_config(format_config(c)) reproduces c.
std::string format_config(const ExperimentConfig& config);

struct Aggregate {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
  int count = 0;
};

struct SeedResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  int error_code = 0;
  double lambda = 0.0;
  Hyper hyper;
  double val_objective = 0.0;
  EvalReport eval;
  bool has_truth = false;
  double initial_outer = 0.0;
  double final_outer = 0.0;
  double min_grad_norm = 0.0;
  double end_curvature = 0.0;
  std::optional<SelectionReport> selection;
  int size = 0;
  int tp = 0;
  int fp = 0;
  double wall_seconds = 0.0;
  std::string trace_path;
  std::string model_path;
};

struct RunReport {
  std::string kind;   // "fit" or "select"
  std::string label;  // method label; the identity-link ablation is marked as such
  ExperimentConfig config;
  std::vector<std::string> feature_names;
  std::vector<SeedResult> seeds;
  std::map<std::string, Aggregate> aggregate;

  int succeeded() const;
};

inline constexpr const char* kReportSchema = "gsamul.run_report/1";

RunReport run_fit(const ExperimentConfig& config);
RunReport run_select(const ExperimentConfig& config);

// Recomputes mean/std per metric from the successful seeds.
std::map<std::string, Aggregate> aggregate_seeds(const std::vector<SeedResult>& seeds, bool selection);

std::string report_to_json(const RunReport& report);

void emit_trace(const TrainTrace& trace, const std::string& path);

// Text summary of the traces referenced by <dir>/report.json (or every
// trace_*.csv in dir when there is no report).
std::string summarize_run(const std::string& dir);

}  // namespace gsamul
