#include "gsamul/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "json.hpp"

#include "gsamul/data.hpp"
#include "gsamul/error.hpp"
#include "gsamul/parallel.hpp"
#include "gsamul/serialize.hpp"

namespace gsamul {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string where(int line, const std::string& key) {
  return "config line " + std::to_string(line) + " (" + key + ")";
}

double to_double(const std::string& s, int line, const std::string& key) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  require(ec == std::errc() && ptr == e && std::isfinite(v), where(line, key) + ": '" + s + "' is not a number");
  return v;
}

long long to_int(const std::string& s, int line, const std::string& key) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size(), where(line, key) + ": '" + s + "' is not an integer");
  return v;
}

bool to_bool(const std::string& s, int line, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  fail(ErrorCode::invalid_input, where(line, key) + ": '" + s + "' is not a boolean");
}

std::vector<std::uint64_t> to_seeds(const std::string& s, int line, const std::string& key) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(s)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      const auto v = to_int(item, line, key);
      require(v >= 0, where(line, key) + ": seeds must be non-negative");
      out.push_back(static_cast<std::uint64_t>(v));
      continue;
    }
    const auto lo = to_int(trim(item.substr(0, dots)), line, key);
    const auto hi = to_int(trim(item.substr(dots + 2)), line, key);
    require(lo >= 0 && lo <= hi, where(line, key) + ": bad seed range '" + item + "'");
    require(hi - lo < 1000000, where(line, key) + ": seed range too long");
    for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += f(v[i]);
  }
  return out;
}

const char* task_name(Task t) {
  switch (t) {
    case Task::synth_a:
      return "synth-a";
    case Task::synth_b:
      return "synth-b";
    case Task::csv:
      return "csv";
  }
  return "?";
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::stringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    require(eq != std::string::npos, "config line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string val = trim(body.substr(eq + 1));
    require(!val.empty(), where(line, key) + ": empty value");

    auto i = [&] { return static_cast<int>(to_int(val, line, key)); };
    auto d = [&] { return to_double(val, line, key); };
    auto b = [&] { return to_bool(val, line, key); };
    auto ints = [&] {
      std::vector<int> out;
      for (const auto& s : split_list(val)) out.push_back(static_cast<int>(to_int(s, line, key)));
      return out;
    };

    if (key == "task") {
      if (val == "synth-a") c.task = Task::synth_a;
      else if (val == "synth-b") c.task = Task::synth_b;
      else if (val == "csv") c.task = Task::csv;
      else fail(ErrorCode::invalid_input, where(line, key) + ": expected synth-a, synth-b or csv, got '" + val + "'");
    } else if (key == "csv_path") {
      c.csv_path = val;
    } else if (key == "target") {
      c.target = val;
    } else if (key == "augment") {
      c.augment = i();
    } else if (key == "augment_lo") {
      c.augment_lo = d();
    } else if (key == "augment_hi") {
      c.augment_hi = d();
    } else if (key == "n") {
      c.n = i();
    } else if (key == "p") {
      c.p = i();
    } else if (key == "seeds") {
      c.seeds = to_seeds(val, line, key);
    } else if (key == "noise_sd") {
      c.noise_sd = d();
    } else if (key == "n_val") {
      c.n_val = i();
    } else if (key == "n_eval") {
      c.n_eval = i();
    } else if (key == "split") {
      const auto parts = split_list(val);
      require(parts.size() == 3, where(line, key) + ": expected three fractions");
      for (size_t k = 0; k < 3; ++k) c.split[k] = to_double(parts[k], line, key);
    } else if (key == "lambda") {
      c.lambda.clear();
      for (const auto& s : split_list(val)) c.lambda.push_back(to_double(s, line, key));
    } else if (key == "n_basis" || key == "d") {
      c.n_basis = ints();
    } else if (key == "order") {
      // B-spline order grid value m means d = m + 2 basis functions.
      c.n_basis = ints();
      for (int& v : c.n_basis) v += 2;
    } else if (key == "hidden" || key == "H") {
      c.hidden = ints();
    } else if (key == "degree") {
      c.degree = i();
    } else if (key == "iters" || key == "T") {
      c.iters = i();
    } else if (key == "batch_size") {
      c.batch_size = i();
    } else if (key == "c") {
      c.c = d();
    } else if (key == "l_hat") {
      c.l_hat = d();
    } else if (key == "group_floor") {
      c.group_floor = d();
    } else if (key == "identity_link") {
      c.identity_link = b();
    } else if (key == "standardize_response") {
      c.standardize_response = b();
    } else if (key == "warm_start") {
      c.warm_start = b();
    } else if (key == "partitions") {
      c.partitions = i();
    } else if (key == "kappa_slack") {
      c.kappa_slack = d();
    } else if (key == "tie_break") {
      if (val == "smallest") c.prefer_sparse = false;
      else if (val == "largest") c.prefer_sparse = true;
      else fail(ErrorCode::invalid_input, where(line, key) + ": expected smallest or largest");
    } else if (key == "shared_validation") {
      c.shared_validation = b();
    } else if (key == "threshold") {
      c.threshold = d();
    } else if (key == "workers") {
      c.workers = i();
    } else if (key == "output_dir") {
      c.output_dir = val;
    } else if (key == "emit_traces") {
      c.emit_traces = b();
    } else {
      fail(ErrorCode::invalid_input, "config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }

  require(!c.seeds.empty(), "config: seed list is empty");
  require(!c.lambda.empty() && !c.n_basis.empty() && !c.hidden.empty(), "config: every grid needs a value");
  for (double l : c.lambda) require(l >= 0.0, "config: lambda values must be >= 0");
  for (int v : c.n_basis) require(v >= c.degree + 1, "config: n_basis values must be >= degree + 1");
  for (int v : c.hidden) require(v >= 1, "config: hidden values must be >= 1");
  require(c.degree >= 1, "config: degree must be >= 1");
  require(c.iters >= 1 && c.batch_size >= 1, "config: iters and batch_size must be >= 1");
  require(c.c > 0.0 && c.l_hat > 0.0 && c.group_floor > 0.0, "config: c, l_hat and group_floor must be positive");
  require(c.partitions >= 1, "config: partitions must be >= 1");
  require(c.kappa_slack >= 0.0 && c.kappa_slack < 1.0, "config: kappa_slack must be in [0, 1)");
  require(c.workers >= 0, "config: workers must be >= 0");
  if (c.task == Task::csv) {
    require(!c.csv_path.empty(), "config: task = csv needs csv_path");
    require(c.augment >= 0 && c.augment_lo < c.augment_hi, "config: bad augment settings");
  } else {
    require(c.n >= 4, "config: n must be >= 4");
    require(c.n_val >= 0 && c.n_eval >= 2, "config: n_val must be >= 0 and n_eval >= 2");
    require(c.noise_sd >= 0.0, "config: noise_sd must be >= 0");
  }
  return c;
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream o;
  auto num = [](double v) { return fmt(v); };
  auto integer = [](auto v) { return std::to_string(v); };
  o << "task = " << task_name(c.task) << "\n";
  if (!c.csv_path.empty()) o << "csv_path = " << c.csv_path << "\n";
  o << "target = " << c.target << "\n";
  o << "augment = " << c.augment << "\n";
  o << "augment_lo = " << fmt(c.augment_lo) << "\n";
  o << "augment_hi = " << fmt(c.augment_hi) << "\n";
  o << "n = " << c.n << "\n";
  o << "p = " << c.p << "\n";
  o << "seeds = " << join(c.seeds, integer) << "\n";
  o << "noise_sd = " << fmt(c.noise_sd) << "\n";
  o << "n_val = " << c.n_val << "\n";
  o << "n_eval = " << c.n_eval << "\n";
  o << "split = " << fmt(c.split[0]) << "," << fmt(c.split[1]) << "," << fmt(c.split[2]) << "\n";
  o << "lambda = " << join(c.lambda, num) << "\n";
  o << "n_basis = " << join(c.n_basis, integer) << "\n";
  o << "hidden = " << join(c.hidden, integer) << "\n";
  o << "degree = " << c.degree << "\n";
  o << "iters = " << c.iters << "\n";
  o << "batch_size = " << c.batch_size << "\n";
  o << "c = " << fmt(c.c) << "\n";
  o << "l_hat = " << fmt(c.l_hat) << "\n";
  o << "group_floor = " << fmt(c.group_floor) << "\n";
  o << "identity_link = " << (c.identity_link ? "true" : "false") << "\n";
  o << "standardize_response = " << (c.standardize_response ? "true" : "false") << "\n";
  o << "warm_start = " << (c.warm_start ? "true" : "false") << "\n";
  o << "partitions = " << c.partitions << "\n";
  o << "kappa_slack = " << fmt(c.kappa_slack) << "\n";
  o << "tie_break = " << (c.prefer_sparse ? "largest" : "smallest") << "\n";
  o << "shared_validation = " << (c.shared_validation ? "true" : "false") << "\n";
  o << "threshold = " << fmt(c.threshold) << "\n";
  o << "workers = " << c.workers << "\n";
  if (!c.output_dir.empty()) o << "output_dir = " << c.output_dir << "\n";
  o << "emit_traces = " << (c.emit_traces ? "true" : "false") << "\n";
  return o.str();
}

int RunReport::succeeded() const {
  return static_cast<int>(std::count_if(seeds.begin(), seeds.end(), [](const SeedResult& s) { return s.ok; }));
}

void emit_trace(const TrainTrace& trace, const std::string& path) { write_trace_csv(trace, path); }

namespace {

std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
  // splitmix64 finalizer over seed and tag
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct SeedData {
  Dataset train;
  Dataset val;
  Dataset eval;
};

SeedData make_seed_data(const ExperimentConfig& c, const Dataset* csv, std::uint64_t seed) {
  SeedData d;
  if (c.task == Task::csv) {
    const Dataset full = augment_irrelevant(*csv, c.augment, c.augment_lo, c.augment_hi, derive(seed, 4));
    auto parts = split(full, c.split, derive(seed, 5));
    d.train = std::move(parts.train);
    d.val = std::move(parts.val);
    d.eval = std::move(parts.test);
    return d;
  }
  SynthSpec spec;
  spec.example = c.task == Task::synth_a ? SynthExample::a : SynthExample::b;
  spec.n = c.n;
  spec.p = c.p;
  spec.noise_sd = c.noise_sd;
  spec.seed = seed;
  d.train = generate(spec);
  SynthSpec vs = spec;
  vs.seed = derive(seed, 1);
  d.val = gen_eval_grid(vs, c.n_val > 0 ? c.n_val : c.n);
  SynthSpec es = spec;
  es.seed = derive(seed, 2);
  d.eval = gen_eval_grid(es, c.n_eval);
  return d;
}

TrainConfig train_config(const ExperimentConfig& c, double lambda, std::uint64_t seed) {
  TrainConfig t;
  t.lambda = lambda;
  t.iters = c.iters;
  t.batch_size = c.batch_size;
  t.c = c.c;
  t.l_hat = c.l_hat;
  t.seed = derive(seed, 3);
  t.identity_link = c.identity_link;
  t.group_floor = c.group_floor;
  t.standardize_response = c.standardize_response;
  t.warm_start = c.warm_start;
  return t;
}

struct GridChoice {
  double lambda;
  Hyper hyper;
  double val_objective;
};

// Validation objective over the grid; ties keep the earlier point, and the
// visiting order is larger lambda, then smaller d, then smaller H.
GridChoice grid_search(const ExperimentConfig& c, const SeedData& d, std::uint64_t seed) {
  std::vector<double> lambdas = c.lambda;
  std::vector<int> ds = c.n_basis;
  std::vector<int> hs = c.hidden;
  std::sort(lambdas.rbegin(), lambdas.rend());
  std::sort(ds.begin(), ds.end());
  std::sort(hs.begin(), hs.end());
  std::optional<GridChoice> best;
  std::string last_error;
  for (double l : lambdas) {
    for (int nb : ds) {
      for (int h : hs) {
        Hyper hy{c.degree, nb, h};
        TrainConfig tc = train_config(c, l, seed);
        tc.record_trace = false;
        try {
          const auto fit = train(d.train, d.val, tc, hy);
          const double v = objective_outer(fit.model, d.val, LossSpec{});
          if (!std::isfinite(v)) continue;
          if (!best || v < best->val_objective) best = GridChoice{l, hy, v};
        } catch (const Error& e) {
          last_error = e.what();
        }
      }
    }
  }
  if (!best) fail(ErrorCode::numerical_divergence, "every grid point failed" + (last_error.empty() ? "" : ": " + last_error));
  return *best;
}

bool single_point(const ExperimentConfig& c) {
  return c.lambda.size() == 1 && c.n_basis.size() == 1 && c.hidden.size() == 1;
}

void write_outputs(const ExperimentConfig& c, SeedResult& r, const TrainResult& fit) {
  if (c.output_dir.empty()) return;
  const auto tag = std::to_string(r.seed);
  if (c.emit_traces) {
    r.trace_path = "trace_seed" + tag + ".csv";
    emit_trace(fit.trace, (fs::path(c.output_dir) / r.trace_path).string());
  }
  r.model_path = "model_seed" + tag + ".json";
  save_model(fit.model, (fs::path(c.output_dir) / r.model_path).string());
}

void fill_fit_stats(SeedResult& r, const TrainResult& fit) {
  r.initial_outer = fit.trace.initial_outer;
  if (!fit.trace.records.empty()) {
    r.final_outer = fit.trace.records.back().outer_objective;
    r.min_grad_norm = min_grad_norm(fit.trace);
    r.end_curvature = fit.trace.end_curvature;
  }
}

SeedResult run_one(const ExperimentConfig& c, const Dataset* csv, std::uint64_t seed, bool selection) {
  SeedResult r;
  r.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const SeedData d = make_seed_data(c, csv, seed);
    GridChoice choice{c.lambda.front(), Hyper{c.degree, c.n_basis.front(), c.hidden.front()}, 0.0};
    if (!single_point(c)) choice = grid_search(c, d, seed);
    r.lambda = choice.lambda;
    r.hyper = choice.hyper;
    const TrainConfig tc = train_config(c, choice.lambda, seed);

    TrainResult fit;
    if (selection) {
      StabilityConfig st;
      st.partitions = c.partitions;
      st.kappa_slack = c.kappa_slack;
      st.prefer_sparse = c.prefer_sparse;
      st.shared_validation = c.shared_validation;
      st.workers = 1;
      auto run = select_stable(d.train, d.val, tc, choice.hyper, st, c.threshold);
      fit = std::move(run.refit);
      r.selection = std::move(run.report);
      r.size = static_cast<int>(r.selection->active_set.size());
      if (d.train.truth) {
        const auto& inf = d.train.truth->informative;
        for (int j : r.selection->active_set) {
          (std::find(inf.begin(), inf.end(), j) != inf.end() ? r.tp : r.fp)++;
        }
      }
    } else {
      fit = train(d.train, d.val, tc, choice.hyper);
    }
    r.val_objective = objective_outer(fit.model, d.val, LossSpec{});
    r.eval = evaluate(fit.model, d.eval);
    r.has_truth = d.eval.truth.has_value();
    fill_fit_stats(r, fit);
    write_outputs(c, r, fit);
    r.ok = true;
  } catch (const Error& e) {
    r.error = e.what();
    r.error_code = static_cast<int>(e.code());
  } catch (const std::exception& e) {
    r.error = e.what();
    r.error_code = 99;
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

RunReport run(const ExperimentConfig& c, bool selection) {
  RunReport report;
  report.kind = selection ? "select" : "fit";
  report.label = c.identity_link ? "SpAM-style baseline (identity link)" : "GSAMUL";
  report.config = c;

  std::optional<Dataset> csv;
  if (c.task == Task::csv) {
    csv = load_csv(c.csv_path, c.target);
    report.feature_names = augment_irrelevant(*csv, c.augment, c.augment_lo, c.augment_hi, 0).feature_names;
  } else {
    report.feature_names = default_feature_names(c.p);
  }
  if (!c.output_dir.empty()) {
    std::error_code ec;
    fs::create_directories(c.output_dir, ec);
    if (ec) fail(ErrorCode::io_error, "cannot create output directory '" + c.output_dir + "': " + ec.message());
  }

  report.seeds.resize(c.seeds.size());
  parallel_for(static_cast<int>(c.seeds.size()), resolve_workers(c.workers), [&](int i) {
    report.seeds[static_cast<size_t>(i)] =
        run_one(c, csv ? &*csv : nullptr, c.seeds[static_cast<size_t>(i)], selection);
  });
  report.aggregate = aggregate_seeds(report.seeds, selection);
  if (!c.output_dir.empty()) write_text_file((fs::path(c.output_dir) / "report.json").string(), report_to_json(report));
  return report;
}

}  // namespace

std::map<std::string, Aggregate> aggregate_seeds(const std::vector<SeedResult>& seeds, bool selection) {
  std::map<std::string, std::vector<double>> cols;
  for (const auto& s : seeds) {
    if (!s.ok) continue;
    cols["rsse"].push_back(s.eval.rsse);
    cols["val_objective"].push_back(s.val_objective);
    if (s.has_truth) {
      cols["ase_g"].push_back(s.eval.ase_link);
      for (size_t j = 0; j < s.eval.ase_components.size(); ++j) {
        cols["ase_f" + std::to_string(j + 1)].push_back(s.eval.ase_components[j]);
      }
    }
    if (selection) {
      cols["size"].push_back(s.size);
      if (s.has_truth) {
        cols["tp"].push_back(s.tp);
        cols["fp"].push_back(s.fp);
      }
    }
  }
  std::map<std::string, Aggregate> out;
  for (const auto& [name, v] : cols) {
    Aggregate a;
    a.count = static_cast<int>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    a.mean = sum / a.count;
    if (a.count > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - a.mean) * (x - a.mean);
      a.std = std::sqrt(ss / (a.count - 1));
    }
    out[name] = a;
  }
  return out;
}

RunReport run_fit(const ExperimentConfig& config) { return run(config, false); }
RunReport run_select(const ExperimentConfig& config) { return run(config, true); }

std::string report_to_json(const RunReport& report) {
  json j;
  j["schema"] = kReportSchema;
  j["kind"] = report.kind;
  j["label"] = report.label;
  j["config"] = format_config(report.config);
  j["feature_names"] = report.feature_names;
  json seeds = json::array();
  for (const auto& s : report.seeds) {
    json e;
    e["seed"] = s.seed;
    e["ok"] = s.ok;
    e["wall_seconds"] = s.wall_seconds;
    if (!s.ok) {
      e["error"] = s.error;
      e["error_code"] = s.error_code;
      seeds.push_back(std::move(e));
      continue;
    }
    e["hyper"] = {{"lambda", s.lambda}, {"degree", s.hyper.degree}, {"n_basis", s.hyper.n_basis},
                  {"hidden", s.hyper.hidden}};
    e["val_objective"] = s.val_objective;
    json ev = {{"rsse", s.eval.rsse}, {"n_eval", s.eval.n_eval}};
    if (s.has_truth) {
      ev["ase_g"] = s.eval.ase_link;
      ev["ase_components"] = s.eval.ase_components;
    }
    e["eval"] = std::move(ev);
    e["trace"] = {{"initial_outer", s.initial_outer}, {"final_outer", s.final_outer},
                  {"min_grad_norm_sq", s.min_grad_norm}, {"end_curvature", s.end_curvature}};
    if (!s.trace_path.empty()) e["trace_path"] = s.trace_path;
    if (!s.model_path.empty()) e["model_path"] = s.model_path;
    if (s.selection) {
      const auto& sel = *s.selection;
      json curve = json::array();
      for (const auto& k : sel.kappa_curve) curve.push_back({k.threshold, k.mean_kappa, k.admissible});
      std::vector<std::string> names;
      for (int a : sel.active_set) names.push_back(report.feature_names.at(static_cast<size_t>(a)));
      json sj = {{"group_norms", sel.group_norms},
                 {"threshold", sel.threshold},
                 {"partitions", sel.partitions},
                 {"active_set", sel.active_set},
                 {"active_names", names},
                 {"kappa_curve", std::move(curve)},
                 {"size", s.size}};
      if (s.has_truth) {
        sj["tp"] = s.tp;
        sj["fp"] = s.fp;
      }
      e["selection"] = std::move(sj);
    }
    seeds.push_back(std::move(e));
  }
  j["seeds"] = std::move(seeds);
  json agg = json::object();
  for (const auto& [name, a] : report.aggregate) agg[name] = {{"mean", a.mean}, {"std", a.std}, {"count", a.count}};
  j["aggregate"] = std::move(agg);
  j["succeeded"] = report.succeeded();
  return j.dump(2);
}

std::string summarize_run(const std::string& dir) {
  require(fs::is_directory(dir), "run directory '" + dir + "' does not exist");
  std::vector<std::pair<std::string, fs::path>> traces;
  const fs::path report_path = fs::path(dir) / "report.json";
  if (fs::exists(report_path)) {
    json r;
    try {
      r = json::parse(read_text_file(report_path.string()));
    } catch (const json::exception& e) {
      fail(ErrorCode::invalid_input, "report '" + report_path.string() + "' is not valid JSON: " + e.what());
    }
    for (const auto& s : r.value("seeds", json::array())) {
      if (s.contains("trace_path")) {
        traces.emplace_back("seed " + std::to_string(s.at("seed").get<std::uint64_t>()),
                            fs::path(dir) / s.at("trace_path").get<std::string>());
      }
    }
  } else {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const auto name = entry.path().filename().string();
      if (name.rfind("trace_", 0) == 0 && entry.path().extension() == ".csv") traces.emplace_back(name, entry.path());
    }
    std::sort(traces.begin(), traces.end());
  }
  require(!traces.empty(), "no traces found in '" + dir + "'");

  std::ostringstream o;
  o << "run,rows,first_outer,last_outer,first_inner,last_inner,min_grad_norm_sq,outer_decreased\n";
  for (const auto& [label, path] : traces) {
    const auto trace = read_trace_csv(path.string());
    if (trace.records.empty()) {
      o << label << ",0,,,,,,\n";
      continue;
    }
    const auto& a = trace.records.front();
    const auto& b = trace.records.back();
    o << label << "," << trace.records.size() << "," << fmt(a.outer_objective) << "," << fmt(b.outer_objective) << ","
      << fmt(a.inner_objective) << "," << fmt(b.inner_objective) << "," << fmt(min_grad_norm(trace)) << ","
      << (b.outer_objective < a.outer_objective ? "yes" : "no") << "\n";
  }
  return o.str();
}

}  // namespace gsamul
