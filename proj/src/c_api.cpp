#include "gsamul/gsamul.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "gsamul/data.hpp"
#include "gsamul/error.hpp"
#include "gsamul/experiment.hpp"
#include "gsamul/optimizer.hpp"
#include "gsamul/selection.hpp"
#include "gsamul/serialize.hpp"

struct gsamul_dataset {
  gsamul::Dataset ds;
};
struct gsamul_model {
  gsamul::GsamulModel model;
};
struct gsamul_trace {
  gsamul::TrainTrace trace;
};

namespace {

thread_local std::string last_error;

gsamul_status to_status(gsamul::ErrorCode code) {
  switch (code) {
    case gsamul::ErrorCode::invalid_input:
      return GSAMUL_ERR_INVALID_INPUT;
    case gsamul::ErrorCode::degenerate_state:
      return GSAMUL_ERR_DEGENERATE_STATE;
    case gsamul::ErrorCode::numerical_divergence:
      return GSAMUL_ERR_NUMERICAL_DIVERGENCE;
    case gsamul::ErrorCode::io_error:
      return GSAMUL_ERR_IO;
    case gsamul::ErrorCode::degenerate_input:
      return GSAMUL_ERR_DEGENERATE_INPUT;
  }
  return GSAMUL_ERR_INTERNAL;
}

template <class F>
gsamul_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const gsamul::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GSAMUL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GSAMUL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return GSAMUL_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) gsamul::fail(gsamul::ErrorCode::invalid_input, std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gsamul::TrainConfig to_config(const gsamul_train_options& o) {
  gsamul::TrainConfig c;
  c.lambda = o.lambda;
  c.iters = o.iters;
  c.batch_size = o.batch_size;
  c.c = o.c;
  c.l_hat = o.l_hat;
  c.seed = o.seed;
  c.identity_link = o.identity_link != 0;
  c.group_floor = o.group_floor;
  c.standardize_response = o.standardize_response != 0;
  c.warm_start = o.warm_start != 0;
  return c;
}

gsamul::SynthSpec synth_spec(int example, size_t n, size_t p, double noise_sd, uint64_t seed) {
  gsamul::require(example == 0 || example == 1, "example must be 0 (A) or 1 (B)");
  gsamul::SynthSpec s;
  s.example = example == 0 ? gsamul::SynthExample::a : gsamul::SynthExample::b;
  s.n = static_cast<int>(n);
  s.p = static_cast<int>(p);
  s.noise_sd = noise_sd;
  s.seed = seed;
  return s;
}

gsamul_status run_with(const char* config_text, char** report, bool selection) {
  return guarded([&] {
    need(config_text, "config_text");
    need(report, "report");
    *report = nullptr;
    const auto cfg = gsamul::parse_config(config_text);
    const auto r = selection ? gsamul::run_select(cfg) : gsamul::run_fit(cfg);
    *report = dup(gsamul::report_to_json(r));
    if (r.succeeded() == 0) {
      last_error = "every seed failed";
      if (!r.seeds.empty()) last_error += "; first error: " + r.seeds.front().error;
      return GSAMUL_ERR_RUN_FAILED;
    }
    return GSAMUL_OK;
  });
}

}  // namespace

extern "C" {

const char* gsamul_version(void) { return "1.0.0"; }

const char* gsamul_last_error(void) { return last_error.c_str(); }

void gsamul_string_free(char* s) { std::free(s); }

gsamul_status gsamul_dataset_create(const double* X, const double* y, size_t n, size_t p, gsamul_dataset** out) {
  return guarded([&] {
    need(X, "X");
    need(y, "y");
    need(out, "out");
    gsamul::require(n >= 1 && p >= 1, "dataset needs n >= 1 and p >= 1");
    auto h = std::make_unique<gsamul_dataset>();
    h->ds.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        X, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    h->ds.y = Eigen::Map<const Eigen::VectorXd>(y, static_cast<Eigen::Index>(n));
    h->ds.feature_names = gsamul::default_feature_names(static_cast<int>(p));
    gsamul::validate(h->ds);
    *out = h.release();
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_dataset_load_csv(const char* path, const char* target_column, gsamul_dataset** out) {
  return guarded([&] {
    need(path, "path");
    need(target_column, "target_column");
    need(out, "out");
    auto h = std::make_unique<gsamul_dataset>();
    h->ds = gsamul::load_csv(path, target_column);
    *out = h.release();
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_dataset_synth(int example, size_t n, size_t p, double noise_sd, uint64_t seed, int noiseless,
                                   gsamul_dataset** out) {
  return guarded([&] {
    need(out, "out");
    const auto spec = synth_spec(example, n, p, noise_sd, seed);
    auto h = std::make_unique<gsamul_dataset>();
    h->ds = noiseless ? gsamul::gen_eval_grid(spec, spec.n) : gsamul::generate(spec);
    *out = h.release();
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_dataset_shape(const gsamul_dataset* ds, size_t* n, size_t* p) {
  return guarded([&] {
    need(ds, "dataset");
    if (n) *n = static_cast<size_t>(ds->ds.rows());
    if (p) *p = static_cast<size_t>(ds->ds.features());
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_dataset_write_csv(const gsamul_dataset* ds, const char* path) {
  return guarded([&] {
    need(ds, "dataset");
    need(path, "path");
    gsamul::write_csv(ds->ds, path);
    return GSAMUL_OK;
  });
}

void gsamul_dataset_free(gsamul_dataset* ds) { delete ds; }

gsamul_status gsamul_synth_write(int example, size_t n, size_t p, double noise_sd, uint64_t seed,
                                 const char* csv_path, const char* truth_path) {
  return guarded([&] {
    need(csv_path, "csv_path");
    const auto spec = synth_spec(example, n, p, noise_sd, seed);
    const auto ds = gsamul::generate(spec);
    gsamul::write_csv(ds, csv_path);
    if (truth_path) gsamul::write_truth_json(ds, spec, truth_path);
    return GSAMUL_OK;
  });
}

void gsamul_train_options_default(gsamul_train_options* opts) {
  if (opts == nullptr) return;
  const gsamul::TrainConfig c;
  const gsamul::Hyper h;
  opts->lambda = c.lambda;
  opts->iters = c.iters;
  opts->batch_size = c.batch_size;
  opts->c = c.c;
  opts->l_hat = c.l_hat;
  opts->seed = c.seed;
  opts->identity_link = c.identity_link ? 1 : 0;
  opts->group_floor = c.group_floor;
  opts->degree = h.degree;
  opts->n_basis = h.n_basis;
  opts->hidden = h.hidden;
  opts->standardize_response = c.standardize_response ? 1 : 0;
  opts->warm_start = c.warm_start ? 1 : 0;
}

gsamul_status gsamul_train(const gsamul_dataset* train, const gsamul_dataset* val, const gsamul_train_options* opts,
                           gsamul_model** model, gsamul_trace** trace) {
  return guarded([&] {
    need(train, "train");
    need(val, "val");
    need(opts, "opts");
    need(model, "model");
    const gsamul::Hyper hyper{opts->degree, opts->n_basis, opts->hidden};
    auto result = gsamul::train(train->ds, val->ds, to_config(*opts), hyper);
    auto m = std::make_unique<gsamul_model>();
    m->model = std::move(result.model);
    if (trace) {
      auto t = std::make_unique<gsamul_trace>();
      t->trace = std::move(result.trace);
      *trace = t.release();
    }
    *model = m.release();
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_model_features(const gsamul_model* m, size_t* p) {
  return guarded([&] {
    need(m, "model");
    need(p, "p");
    *p = static_cast<size_t>(m->model.features());
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_model_predict(const gsamul_model* m, const double* X, size_t n, size_t p, double* out) {
  return guarded([&] {
    need(m, "model");
    need(X, "X");
    need(out, "out");
    gsamul::require(p == static_cast<size_t>(m->model.features()),
                    "predict: model has " + std::to_string(m->model.features()) + " features, got " +
                        std::to_string(p));
    const Eigen::MatrixXd Xm = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        X, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    const Eigen::VectorXd y = gsamul::predict_rows(m->model, Xm);
    std::memcpy(out, y.data(), n * sizeof(double));
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_model_group_norms(const gsamul_model* m, double* out, size_t p) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    const auto norms = gsamul::group_norms(m->model.alpha);
    gsamul::require(p == norms.size(), "group_norms: output length must equal the feature count");
    std::memcpy(out, norms.data(), p * sizeof(double));
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_model_to_json(const gsamul_model* m, char** out) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    *out = dup(gsamul::model_to_json(m->model));
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_model_from_json(const char* text, gsamul_model** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    auto m = std::make_unique<gsamul_model>();
    m->model = gsamul::model_from_json(text);
    *out = m.release();
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_model_save(const gsamul_model* m, const char* path) {
  return guarded([&] {
    need(m, "model");
    need(path, "path");
    gsamul::save_model(m->model, path);
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_model_load(const char* path, gsamul_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto m = std::make_unique<gsamul_model>();
    m->model = gsamul::load_model(path);
    *out = m.release();
    return GSAMUL_OK;
  });
}

void gsamul_model_free(gsamul_model* m) { delete m; }

gsamul_status gsamul_trace_length(const gsamul_trace* tr, size_t* n) {
  return guarded([&] {
    need(tr, "trace");
    need(n, "n");
    *n = tr->trace.records.size();
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_trace_record(const gsamul_trace* tr, size_t i, int* t, double* inner, double* outer,
                                  double* grad_norm_sq) {
  return guarded([&] {
    need(tr, "trace");
    gsamul::require(i < tr->trace.records.size(), "trace index out of range");
    const auto& r = tr->trace.records[i];
    if (t) *t = r.t;
    if (inner) *inner = r.inner_objective;
    if (outer) *outer = r.outer_objective;
    if (grad_norm_sq) *grad_norm_sq = r.grad_norm_sq;
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_trace_min_grad_norm(const gsamul_trace* tr, double* out) {
  return guarded([&] {
    need(tr, "trace");
    need(out, "out");
    *out = gsamul::min_grad_norm(tr->trace);
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_trace_write_csv(const gsamul_trace* tr, const char* path) {
  return guarded([&] {
    need(tr, "trace");
    need(path, "path");
    gsamul::emit_trace(tr->trace, path);
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_trace_read_csv(const char* path, gsamul_trace** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto t = std::make_unique<gsamul_trace>();
    t->trace = gsamul::read_trace_csv(path);
    *out = t.release();
    return GSAMUL_OK;
  });
}

void gsamul_trace_free(gsamul_trace* tr) { delete tr; }

gsamul_status gsamul_cohen_kappa(const int* a, size_t na, const int* b, size_t nb, int p, double* out) {
  return guarded([&] {
    need(out, "out");
    if (na > 0) need(a, "a");
    if (nb > 0) need(b, "b");
    *out = gsamul::cohen_kappa(std::span<const int>(a, na), std::span<const int>(b, nb), p);
    return GSAMUL_OK;
  });
}

gsamul_status gsamul_run_fit(const char* config_text, char** report) { return run_with(config_text, report, false); }

gsamul_status gsamul_run_select(const char* config_text, char** report) {
  return run_with(config_text, report, true);
}

gsamul_status gsamul_run_summary(const char* run_dir, char** text) {
  return guarded([&] {
    need(run_dir, "run_dir");
    need(text, "text");
    *text = dup(gsamul::summarize_run(run_dir));
    return GSAMUL_OK;
  });
}

}  // extern "C"
