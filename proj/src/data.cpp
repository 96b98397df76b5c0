#include "gsamul/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

#include "gsamul/error.hpp"
#include "gsamul/link_net.hpp"

namespace gsamul {

void validate(const Dataset& ds) {
  require(ds.y.size() == ds.X.rows(), "dataset: y has " + std::to_string(ds.y.size()) + " rows but X has " +
                                          std::to_string(ds.X.rows()));
  require(ds.feature_names.size() == static_cast<size_t>(ds.X.cols()), "dataset: feature name count mismatch");
  require(ds.X.allFinite() && ds.y.allFinite(), "dataset contains non-finite values");
}

std::vector<std::string> default_feature_names(int p) {
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  return names;
}

Dataset take_rows(const Dataset& ds, const std::vector<int>& rows) {
  Dataset out;
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.X.resize(n, ds.X.cols());
  out.y.resize(n);
  out.feature_names = ds.feature_names;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int r = rows[static_cast<size_t>(i)];
    require(r >= 0 && r < ds.rows(), "take_rows: row index out of range");
    out.X.row(i) = ds.X.row(r);
    out.y(i) = ds.y(r);
  }
  if (ds.truth) {
    GroundTruth t;
    t.informative = ds.truth->informative;
    t.components.resize(n, ds.truth->components.cols());
    t.scores.resize(n);
    t.noiseless.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int r = rows[static_cast<size_t>(i)];
      t.components.row(i) = ds.truth->components.row(r);
      t.scores(i) = ds.truth->scores(r);
      t.noiseless(i) = ds.truth->noiseless(r);
    }
    out.truth = std::move(t);
  }
  return out;
}

namespace truth {

double example_a_component(int j, double x) {
  switch (j) {
    case 0:
      return std::sin(std::numbers::pi * x);
    case 1:
      return 0.5 * x * x - 2.0 / 3.0;
  }
  fail(ErrorCode::invalid_input, "example A has two components");
}

double example_a_link(double f) { return 3.0 * std::sin(f); }

double example_b_component(int j, double x) {
  switch (j) {
    case 0:
      return 0.3 * (std::sin(x * std::numbers::pi) - 2.0 / std::numbers::pi);
    case 1:
      return 0.5 * ((x - 0.5) * (x - 0.5) - 1.0 / 12.0);
    case 2:
      return 0.4 * (std::exp(-x) + std::numbers::e - 1.0);
    case 3:
      return std::numbers::ln2 - 1.0 / (1.0 + x);
  }
  fail(ErrorCode::invalid_input, "example B has four components");
}

double example_b_link(double f) { return std::exp(0.25 * f); }

}  // namespace truth

int informative_count(SynthExample example) { return example == SynthExample::a ? 2 : 4; }

namespace {

Dataset generate_impl(const SynthSpec& spec, bool noisy) {
  const int k = informative_count(spec.example);
  require(spec.p >= k, std::string("example ") + (spec.example == SynthExample::a ? "A" : "B") +
                           " needs p >= " + std::to_string(k) + ", got " + std::to_string(spec.p));
  require(spec.n >= 1, "synthetic n must be >= 1");
  require(spec.noise_sd >= 0.0 && std::isfinite(spec.noise_sd), "noise_sd must be finite and >= 0");

  Rng rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Dataset ds;
  ds.X.resize(spec.n, spec.p);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.p; ++j) ds.X(i, j) = unif(rng);
  ds.feature_names = default_feature_names(spec.p);

  GroundTruth t;
  t.informative.resize(static_cast<size_t>(k));
  std::iota(t.informative.begin(), t.informative.end(), 0);
  t.components = Eigen::MatrixXd::Zero(spec.n, spec.p);
  t.scores.resize(spec.n);
  t.noiseless.resize(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    double f = 0.0;
    for (int j = 0; j < k; ++j) {
      const double v = spec.example == SynthExample::a ? truth::example_a_component(j, ds.X(i, j))
                                                       : truth::example_b_component(j, ds.X(i, j));
      t.components(i, j) = v;
      f += v;
    }
    t.scores(i) = f;
    t.noiseless(i) = spec.example == SynthExample::a ? truth::example_a_link(f) : truth::example_b_link(f);
  }

  ds.y = t.noiseless;
  if (noisy && spec.noise_sd > 0.0) {
    for (int i = 0; i < spec.n; ++i) ds.y(i) += spec.noise_sd * gauss(rng);
  }
  ds.truth = std::move(t);
  return ds;
}

}  // namespace

Dataset gen_example_a(const SynthSpec& spec) {
  SynthSpec s = spec;
  s.example = SynthExample::a;
  return generate_impl(s, true);
}

Dataset gen_example_b(const SynthSpec& spec) {
  SynthSpec s = spec;
  s.example = SynthExample::b;
  return generate_impl(s, true);
}

Dataset generate(const SynthSpec& spec) { return generate_impl(spec, true); }

Dataset gen_eval_grid(const SynthSpec& spec, int n_eval) {
  SynthSpec s = spec;
  s.n = n_eval;
  return generate_impl(s, false);
}

Dataset augment_irrelevant(const Dataset& ds, int q, double lo, double hi, std::uint64_t seed) {
  require(q >= 0, "augment_irrelevant: q must be >= 0");
  require(lo < hi, "augment_irrelevant: need lo < hi");
  if (q == 0) return ds;
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  Dataset out = ds;
  const Eigen::Index p0 = ds.features();
  out.X.conservativeResize(Eigen::NoChange, p0 + q);
  for (Eigen::Index i = 0; i < ds.rows(); ++i)
    for (int k = 0; k < q; ++k) out.X(i, p0 + k) = unif(rng);
  for (int k = 0; k < q; ++k) out.feature_names.push_back("noise_" + std::to_string(k + 1));
  if (out.truth) {
    out.truth->components.conservativeResize(Eigen::NoChange, p0 + q);
    out.truth->components.rightCols(q).setZero();
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string_view rest(line);
  while (true) {
    const auto pos = rest.find(',');
    out.push_back(trim(rest.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open CSV file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::invalid_input, "CSV file '" + path + "' is empty");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);  // UTF-8 BOM
  const auto header = split_fields(line);

  const auto target_it = std::find(header.begin(), header.end(), target_column);
  if (target_it == header.end()) {
    fail(ErrorCode::invalid_input, "target column '" + target_column + "' not found in CSV header of '" + path + "'");
  }
  const auto target = static_cast<size_t>(target_it - header.begin());

  Dataset ds;
  for (size_t c = 0; c < header.size(); ++c)
    if (c != target) ds.feature_names.push_back(header[c]);

  std::vector<std::vector<double>> feats;
  std::vector<double> ys;
  std::vector<std::string> bad;
  int row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      bad.push_back("row " + std::to_string(row_no) + ": expected " + std::to_string(header.size()) + " fields, got " +
                    std::to_string(fields.size()));
      continue;
    }
    std::vector<double> row;
    row.reserve(header.size() - 1);
    double yv = 0.0;
    bool ok = true;
    for (size_t c = 0; c < fields.size(); ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        bad.push_back("row " + std::to_string(row_no) + ", column '" + header[c] + "': non-numeric value '" +
                      fields[c] + "'");
        ok = false;
        break;
      }
      if (c == target)
        yv = v;
      else
        row.push_back(v);
    }
    if (ok) {
      feats.push_back(std::move(row));
      ys.push_back(yv);
    }
  }
  if (!bad.empty()) {
    std::string msg = "CSV file '" + path + "' has " + std::to_string(bad.size()) + " invalid row(s):";
    for (size_t k = 0; k < bad.size() && k < 10; ++k) msg += "\n  " + bad[k];
    fail(ErrorCode::invalid_input, msg);
  }
  if (ys.empty()) fail(ErrorCode::invalid_input, "CSV file '" + path + "' has no data rows");

  const auto n = static_cast<Eigen::Index>(ys.size());
  const auto p = static_cast<Eigen::Index>(ds.feature_names.size());
  ds.X.resize(n, p);
  ds.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) ds.X(i, j) = feats[static_cast<size_t>(i)][static_cast<size_t>(j)];
    ds.y(i) = ys[static_cast<size_t>(i)];
  }
  return ds;
}

void write_csv(const Dataset& ds, const std::string& path, const std::string& target_column) {
  validate(ds);
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write CSV file '" + path + "'");
  out.precision(17);
  for (const auto& name : ds.feature_names) out << name << ',';
  out << target_column << '\n';
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.features(); ++j) out << ds.X(i, j) << ',';
    out << ds.y(i) << '\n';
  }
  if (!out) fail(ErrorCode::io_error, "failed writing CSV file '" + path + "'");
}

void write_truth_json(const Dataset& ds, const SynthSpec& spec, const std::string& path) {
  require(ds.truth.has_value(), "dataset carries no ground truth");
  const auto& t = *ds.truth;
  nlohmann::json j;
  j["schema"] = "gsamul.synth_truth/1";
  j["example"] = spec.example == SynthExample::a ? "a" : "b";
  j["n"] = ds.rows();
  j["p"] = ds.features();
  j["seed"] = spec.seed;
  j["noise_sd"] = spec.noise_sd;
  j["informative"] = t.informative;
  nlohmann::json comps = nlohmann::json::object();
  for (int k : t.informative) {
    std::vector<double> col(static_cast<size_t>(ds.rows()));
    for (Eigen::Index i = 0; i < ds.rows(); ++i) col[static_cast<size_t>(i)] = t.components(i, k);
    comps[ds.feature_names[static_cast<size_t>(k)]] = col;
  }
  j["components"] = comps;
  j["scores"] = std::vector<double>(t.scores.data(), t.scores.data() + t.scores.size());
  j["noiseless"] = std::vector<double>(t.noiseless.data(), t.noiseless.data() + t.noiseless.size());

  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write truth file '" + path + "'");
  out << j.dump(1) << '\n';
}

SplitParts split(const Dataset& ds, std::array<double, 3> fractions, std::uint64_t seed) {
  for (double f : fractions) require(f > 0.0, "split fractions must be positive");
  require(std::abs(fractions[0] + fractions[1] + fractions[2] - 1.0) <= 1e-9, "split fractions must sum to 1");
  const auto n = static_cast<int>(ds.rows());
  const int n_train = static_cast<int>(std::floor(fractions[0] * n + 1e-9));
  const int n_val = static_cast<int>(std::floor(fractions[1] * n + 1e-9));
  const int n_test = n - n_train - n_val;
  require(n_train > 0 && n_val > 0 && n_test > 0,
          "split leaves an empty part (n=" + std::to_string(n) + ", sizes " + std::to_string(n_train) + "/" +
              std::to_string(n_val) + "/" + std::to_string(n_test) + ")");

  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);

  auto part = [&](int from, int count) {
    return take_rows(ds, std::vector<int>(idx.begin() + from, idx.begin() + from + count));
  };
  return {part(0, n_train), part(n_train, n_val), part(n_train + n_val, n_test)};
}

std::pair<Dataset, Dataset> halve(const Dataset& ds, std::uint64_t seed) {
  const auto n = static_cast<int>(ds.rows());
  require(n >= 2, "cannot halve fewer than 2 rows");
  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const int h = n / 2;
  return {take_rows(ds, std::vector<int>(idx.begin(), idx.begin() + h)),
          take_rows(ds, std::vector<int>(idx.begin() + h, idx.begin() + 2 * h))};
}

}  // namespace gsamul
