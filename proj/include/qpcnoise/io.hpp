#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "qpcnoise/model.hpp"
#include "qpcnoise/noise.hpp"

namespace qpcnoise {

/// Row-major nested array of [re, im] pairs.
nlohmann::json matrix_to_json(const Mat3& m);
Mat3 matrix_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const ModelParams& p);
nlohmann::json noise_to_json(const NoiseResult& r);

/// H, C1..C3, B_20, B_02, B_21, B_12 plus the rates and eigenstructure.
nlohmann::json operators_to_json(const ModelParams& p);

/// printf("%.15g"), used for every number written to CSV.
std::string format_number(double v);

}  // namespace qpcnoise
