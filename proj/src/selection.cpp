#include "gsamul/selection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsamul/data.hpp"
#include "gsamul/error.hpp"
#include "gsamul/parallel.hpp"

namespace gsamul {

std::vector<double> group_norms(const AdditiveCoefficients& alpha) {
  std::vector<double> out(static_cast<size_t>(alpha.groups()));
  for (int j = 0; j < alpha.groups(); ++j) out[static_cast<size_t>(j)] = alpha.group(j).norm();
  return out;
}

namespace {

std::vector<char> membership(std::span<const int> set, int p) {
  std::vector<char> in(static_cast<size_t>(p), 0);
  for (int j : set) {
    require(j >= 0 && j < p, "feature index " + std::to_string(j) + " out of range for p=" + std::to_string(p));
    in[static_cast<size_t>(j)] = 1;
  }
  return in;
}

}  // namespace

double cohen_kappa(std::span<const int> a, std::span<const int> b, int p) {
  require(p >= 1, "cohen_kappa needs p >= 1");
  const auto in_a = membership(a, p);
  const auto in_b = membership(b, p);
  int both = 0, neither = 0, na = 0, nb = 0;
  for (int j = 0; j < p; ++j) {
    const bool x = in_a[static_cast<size_t>(j)] != 0;
    const bool y = in_b[static_cast<size_t>(j)] != 0;
    na += x;
    nb += y;
    both += x && y;
    neither += !x && !y;
  }
  const double P = p;
  const double fa = na / P;
  const double fb = nb / P;
  const double po = (both + neither) / P;
  const double pe = fa * fb + (1.0 - fa) * (1.0 - fb);
  if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

std::vector<int> select_variables(std::span<const double> norms, double v) {
  require(v >= 0.0, "threshold must be non-negative");
  std::vector<int> out;
  for (size_t j = 0; j < norms.size(); ++j) {
    if (norms[j] >= v) out.push_back(static_cast<int>(j));
  }
  return out;
}

std::vector<double> threshold_grid(std::span<const HalfNorms> partitions) {
  std::vector<double> grid;
  for (const auto& part : partitions) {
    std::vector<double> vals = part.first;
    vals.insert(vals.end(), part.second.begin(), part.second.end());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (size_t i = 0; i < vals.size(); ++i) {
      grid.push_back(vals[i]);
      if (i + 1 < vals.size()) grid.push_back(0.5 * (vals[i] + vals[i + 1]));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

ThresholdChoice choose_threshold(std::span<const HalfNorms> partitions, double slack, bool prefer_sparse) {
  require(!partitions.empty(), "choose_threshold needs at least one partition");
  require(slack >= 0.0 && slack < 1.0, "kappa slack must be in [0, 1)");
  const size_t p = partitions.front().first.size();
  require(p >= 1, "choose_threshold: empty norm vectors");
  for (const auto& part : partitions) {
    require(part.first.size() == p && part.second.size() == p, "choose_threshold: norm vectors differ in length");
    for (double v : part.first) require(v >= 0.0 && std::isfinite(v), "group norms must be finite and >= 0");
    for (double v : part.second) require(v >= 0.0 && std::isfinite(v), "group norms must be finite and >= 0");
  }

  ThresholdChoice out;
  const auto grid = threshold_grid(partitions);
  out.curve.reserve(grid.size());
  for (double v : grid) {
    KappaPoint pt;
    pt.threshold = v;
    double sum = 0.0;
    for (const auto& part : partitions) {
      const auto s1 = select_variables(part.first, v);
      const auto s2 = select_variables(part.second, v);
      const bool both_empty = s1.empty() && s2.empty();
      const bool both_full = s1.size() == p && s2.size() == p;
      if (both_empty || both_full) pt.admissible = false;
      sum += cohen_kappa(s1, s2, static_cast<int>(p));
    }
    pt.mean_kappa = sum / static_cast<double>(partitions.size());
    out.curve.push_back(pt);
  }

  const bool any_admissible =
      std::any_of(out.curve.begin(), out.curve.end(), [](const KappaPoint& k) { return k.admissible; });
  double best = -2.0;
  for (const auto& pt : out.curve) {
    if (any_admissible && !pt.admissible) continue;
    best = std::max(best, pt.mean_kappa);
  }
  const double bar = best > 0.0 ? (1.0 - slack) * best : best;
  const auto n = out.curve.size();
  for (size_t i = 0; i < n; ++i) {
    const auto& pt = out.curve[prefer_sparse ? n - 1 - i : i];
    if (any_admissible && !pt.admissible) continue;
    if (pt.mean_kappa >= bar - 1e-12) {
      out.v_n = pt.threshold;
      break;
    }
  }
  return out;
}

StabilityResult stability_threshold(const Dataset& train_set, const Dataset* val_set, const TrainConfig& config,
                                    const Hyper& hyper, const StabilityConfig& stability, Rng& rng,
                                    const LossSpec& loss) {
  validate(train_set);
  const bool shared = stability.shared_validation && val_set != nullptr;
  require(train_set.rows() >= 4, "stability selection needs at least 4 training rows");
  require(stability.partitions >= 1, "partitions must be >= 1");

  struct Task {
    std::uint64_t split_seed;
    std::uint64_t inner_seed[2];
    std::uint64_t fit_seed[2];
  };
  std::vector<Task> tasks(static_cast<size_t>(stability.partitions));
  for (auto& t : tasks) {
    t.split_seed = rng();
    for (int h = 0; h < 2; ++h) {
      t.inner_seed[h] = rng();
      t.fit_seed[h] = rng();
    }
  }

  StabilityResult out;
  out.half_norms.resize(tasks.size());
  parallel_for(2 * stability.partitions, resolve_workers(stability.workers), [&](int i) {
    const auto& task = tasks[static_cast<size_t>(i / 2)];
    const int h = i % 2;
    const auto halves = halve(train_set, task.split_seed);
    const Dataset& half = h == 0 ? halves.first : halves.second;
    TrainConfig cfg = config;
    cfg.seed = task.fit_seed[h];
    cfg.record_trace = false;
    TrainResult fit;
    if (shared) {
      fit = train(half, *val_set, cfg, hyper, loss);
    } else {
      const auto inner = halve(half, task.inner_seed[h]);
      fit = train(inner.first, inner.second, cfg, hyper, loss);
    }
    auto& slot = out.half_norms[static_cast<size_t>(i / 2)];
    (h == 0 ? slot.first : slot.second) = group_norms(fit.model.alpha);
  });
  out.choice = choose_threshold(out.half_norms, stability.kappa_slack, stability.prefer_sparse);
  return out;
}

SelectionRun select_stable(const Dataset& train_set, const Dataset& val_set, const TrainConfig& config,
                           const Hyper& hyper, const StabilityConfig& stability, double threshold_override,
                           const LossSpec& loss) {
  SelectionRun run;
  run.report.partitions = stability.partitions;
  if (threshold_override >= 0.0) {
    run.report.threshold = threshold_override;
    run.report.partitions = 0;
  } else {
    Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto st = stability_threshold(train_set, &val_set, config, hyper, stability, rng, loss);
    run.report.threshold = st.choice.v_n;
    run.report.kappa_curve = st.choice.curve;
  }
  run.refit = train(train_set, val_set, config, hyper, loss);
  run.report.group_norms = group_norms(run.refit.model.alpha);
  run.report.active_set = select_variables(run.report.group_norms, run.report.threshold);
  return run;
}

}  // namespace gsamul
