#pragma once

#include <string>

#include "gsamul/model.hpp"
#include "gsamul/optimizer.hpp"

namespace gsamul {

inline constexpr const char* kModelSchema = "gsamul.model/1";

// Versioned JSON holding the bases (degree, knots, domain), alpha, link mode
// and the flattened link parameters. Doubles round-trip exactly.
std::string model_to_json(const GsamulModel& model);
GsamulModel model_from_json(const std::string& text);

void save_model(const GsamulModel& model, const std::string& path);
GsamulModel load_model(const std::string& path);

// Columns: t, inner_objective, outer_objective, grad_norm_sq, norm_1..norm_p.
// One row per iteration, 17 significant digits.
void write_trace_csv(const TrainTrace& trace, const std::string& path);
TrainTrace read_trace_csv(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gsamul
