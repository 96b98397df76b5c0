#pragma once

#include <span>
#include <vector>

#include "gsamul/dataset.hpp"
#include "gsamul/model.hpp"
#include "gsamul/optimizer.hpp"

namespace gsamul {

// Feature indices are 0-based throughout.

std::vector<double> group_norms(const AdditiveCoefficients& alpha);

// Agreement between two selection sets over p features, rated as
// selected/unselected. When chance agreement is 1 (both sets empty or both
// full) the result is 1 for equal sets and 0 otherwise.
double cohen_kappa(std::span<const int> a, std::span<const int> b, int p);

// { j : norms[j] >= v }, ascending.
std::vector<int> select_variables(std::span<const double> norms, double v);

// Group norms of the two half-fits of one random partition.
struct HalfNorms {
  std::vector<double> first;
  std::vector<double> second;
};

struct KappaPoint {
  double threshold = 0.0;
  double mean_kappa = 0.0;
  // False when some partition has both halves selecting nothing or both
  // selecting every feature at this threshold.
  bool admissible = true;
};

struct ThresholdChoice {
  double v_n = 0.0;
  std::vector<KappaPoint> curve;  // ascending thresholds
};

// Candidate grid: within each partition the sorted distinct norms of both
// halves plus consecutive midpoints; the union over partitions.
std::vector<double> threshold_grid(std::span<const HalfNorms> partitions);

// Mean kappa over partitions at each grid point; v_n is the smallest
// admissible threshold whose mean kappa is at least (1 - slack) * max, with
// max taken over admissible points (1e-12 tolerance). slack = 0 is the plain
// argmax. If no point is admissible, all points compete.
// Among admissible grid points whose mean kappa is within `slack` (relative)
// of the best, picks the smallest threshold, or the largest when
// prefer_sparse is set. slack 0 with prefer_sparse is the plain argmax with
// ties broken toward sparser selections.
ThresholdChoice choose_threshold(std::span<const HalfNorms> partitions, double slack = 0.0, bool prefer_sparse = false);

struct StabilityConfig {
  int partitions = 10;
  int workers = 1;
  double kappa_slack = 0.3;  // accept thresholds with mean kappa >= 0.7 * best
  bool prefer_sparse = false;
  // When a validation set is supplied, fit each half on all of its rows and
  // use that set for the link updates. Otherwise each half is split 50/50.
  bool shared_validation = true;
};

// Splits the training set into random halves `partitions` times, fits each
// half, and chooses v_n. `val_set` may be null.
struct StabilityResult {
  ThresholdChoice choice;
  std::vector<HalfNorms> half_norms;
};
StabilityResult stability_threshold(const Dataset& train_set, const Dataset* val_set, const TrainConfig& config,
                                    const Hyper& hyper, const StabilityConfig& stability, Rng& rng,
                                    const LossSpec& loss = {});

struct SelectionReport {
  std::vector<double> group_norms;  // of the full-training-set refit
  double threshold = 0.0;           // v_n
  std::vector<KappaPoint> kappa_curve;
  std::vector<int> active_set;
  int partitions = 0;
};

// Stability threshold, then a refit on (train, val), then J_z from the
// refit's group norms. A non-negative override replaces v_n.
struct SelectionRun {
  SelectionReport report;
  TrainResult refit;
};
SelectionRun select_stable(const Dataset& train_set, const Dataset& val_set, const TrainConfig& config,
                           const Hyper& hyper, const StabilityConfig& stability, double threshold_override = -1.0,
                           const LossSpec& loss = {});

}  // namespace gsamul
