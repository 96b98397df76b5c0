#include "gsamul/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gsamul/error.hpp"

namespace gsamul {

using nlohmann::json;

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string model_to_json(const GsamulModel& model) {
  validate(model);
  json j;
  j["schema"] = kModelSchema;
  j["link_mode"] = model.link_mode == LinkMode::identity ? "identity" : "network";
  j["degree"] = model.bases.front().degree;
  j["n_basis"] = model.alpha.group_size();
  json bases = json::array();
  for (const auto& b : model.bases) {
    bases.push_back({{"knots", b.knots}, {"domain", {b.domain_lo, b.domain_hi}}});
  }
  j["bases"] = std::move(bases);
  j["alpha"] = to_std(model.alpha.flat());
  if (model.link_mode == LinkMode::network) {
    j["hidden"] = model.link.hidden_size();
    j["theta"] = to_std(model.link.flatten());
  }
  return j.dump(2);
}

GsamulModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::invalid_input, std::string("model JSON does not parse: ") + e.what());
  }
  try {
    const auto schema = j.at("schema").get<std::string>();
    require(schema == kModelSchema, "unsupported model schema '" + schema + "' (expected " + kModelSchema + ")");
    GsamulModel model;
    const auto mode = j.at("link_mode").get<std::string>();
    require(mode == "network" || mode == "identity", "link_mode must be network or identity, got '" + mode + "'");
    model.link_mode = mode == "identity" ? LinkMode::identity : LinkMode::network;
    const int degree = j.at("degree").get<int>();
    const int n_basis = j.at("n_basis").get<int>();
    require(degree >= 1 && n_basis >= degree + 1, "model JSON: invalid degree / n_basis");
    for (const auto& b : j.at("bases")) {
      SplineBasis basis;
      basis.degree = degree;
      basis.n_basis = n_basis;
      basis.knots = b.at("knots").get<std::vector<double>>();
      const auto dom = b.at("domain").get<std::vector<double>>();
      require(dom.size() == 2 && dom[0] < dom[1], "model JSON: basis domain must be [lo, hi] with lo < hi");
      basis.domain_lo = dom[0];
      basis.domain_hi = dom[1];
      require(basis.knots.size() == static_cast<size_t>(n_basis + degree + 1), "model JSON: knot count mismatch");
      model.bases.push_back(std::move(basis));
    }
    require(!model.bases.empty(), "model JSON: no bases");
    const auto alpha = j.at("alpha").get<std::vector<double>>();
    require(alpha.size() == model.bases.size() * static_cast<size_t>(n_basis), "model JSON: alpha length mismatch");
    model.alpha = AdditiveCoefficients(static_cast<int>(model.bases.size()), n_basis, to_eigen(alpha));
    if (model.link_mode == LinkMode::network) {
      const int hidden = j.at("hidden").get<int>();
      const auto theta = j.at("theta").get<std::vector<double>>();
      require(hidden >= 1 && theta.size() == static_cast<size_t>(3 * hidden + 1), "model JSON: theta length mismatch");
      model.link = LinkNetwork::from_flat(to_eigen(theta));
    }
    validate(model);
    return model;
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_input, std::string("malformed model JSON: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::io_error, "write to '" + path + "' failed");
}

void save_model(const GsamulModel& model, const std::string& path) { write_text_file(path, model_to_json(model)); }

GsamulModel load_model(const std::string& path) { return model_from_json(read_text_file(path)); }

namespace {

void put(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

double parse_field(const std::string& s, const std::string& path, int row) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::invalid_input, "trace '" + path + "' row " + std::to_string(row) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(const TrainTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot open trace file '" + path + "' for writing");
  const size_t p = trace.records.empty() ? 0 : trace.records.front().group_norms.size();
  out << "t,inner_objective,outer_objective,grad_norm_sq";
  for (size_t j = 0; j < p; ++j) out << ",norm_" << (j + 1);
  out << '\n';
  std::string line;
  for (const auto& r : trace.records) {
    require(r.group_norms.size() == p, "trace records disagree on group count");
    line = std::to_string(r.t);
    for (double v : {r.inner_objective, r.outer_objective, r.grad_norm_sq}) {
      line += ',';
      put(line, v);
    }
    for (double v : r.group_norms) {
      line += ',';
      put(line, v);
    }
    out << line << '\n';
  }
  if (!out) fail(ErrorCode::io_error, "write to trace file '" + path + "' failed");
}

TrainTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open trace file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::invalid_input, "trace file '" + path + "' is empty");
  size_t cols = 1;
  for (char ch : line) cols += ch == ',';
  require(cols >= 4, "trace file '" + path + "' has too few columns");
  TrainTrace trace;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    require(fields.size() == cols, "trace '" + path + "' row " + std::to_string(row) + " has " +
                                       std::to_string(fields.size()) + " fields, expected " + std::to_string(cols));
    TraceRecord r;
    r.t = static_cast<int>(parse_field(fields[0], path, row));
    r.inner_objective = parse_field(fields[1], path, row);
    r.outer_objective = parse_field(fields[2], path, row);
    r.grad_norm_sq = parse_field(fields[3], path, row);
    for (size_t k = 4; k < cols; ++k) r.group_norms.push_back(parse_field(fields[k], path, row));
    trace.records.push_back(std::move(r));
  }
  return trace;
}

}  // namespace gsamul
