#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "hetero/kernel.hpp"
#include "hetero/sim_model.hpp"
#include "hetero/statistics.hpp"
#include "hetero/testing.hpp"

namespace hetero {

using json = nlohmann::json;

void to_json(json& j, const FunctionSpec& s);
void from_json(const json& j, FunctionSpec& s);
void to_json(json& j, const NoiseSpec& s);
void from_json(const json& j, NoiseSpec& s);
void to_json(json& j, const RegressionModel& m);
void from_json(const json& j, RegressionModel& m);
void to_json(json& j, const BaseKernel& k);
void from_json(const json& j, BaseKernel& k);
void to_json(json& j, const StatisticConfig& c);
void from_json(const json& j, StatisticConfig& c);
void to_json(json& j, const StatisticReport& r);
void to_json(json& j, const CalibratedTest& t);
void from_json(const json& j, CalibratedTest& t);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string digest_hex(const std::string& bytes);
std::string model_digest(const RegressionModel& m);

}  // namespace hetero
