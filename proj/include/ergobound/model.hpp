/*
 * Copyright 2026 The ergobound Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef ERGOBOUND_MODEL_HPP
#define ERGOBOUND_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ergobound/chain_model.hpp"

namespace ergobound
{

constexpr int kModelSchemaVersion = 1;

enum class WeightsMode
{
    ones,
    perron,
    frozen_perron,  // Perron weights of B*(0); heuristic for time-varying chains
    list,
};

std::string_view to_string(WeightsMode mode);

struct AnalysisConfig
{
    double horizon = 1.0;
    std::size_t grid = 1001;
    std::size_t steps = 10'000;
    WeightsMode weights = WeightsMode::ones;
    std::vector<double> weight_values;  // WeightsMode::list
    std::size_t trials = 100;
    std::size_t pairs = 100;
    std::uint64_t seed = 1;
    double tol = 1e-8;

    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

/// A parsed model document. Named rates are resolved into `chain`; `rates`
/// keeps the definitions so overrides and serialization can see them.
struct ModelFile
{
    int schema_version = kModelSchemaVersion;
    ChainSpec chain;
    std::map<std::string, RateFunction> rates;
    AnalysisConfig analysis;
};

/// NAME=VALUE replaces the named rate with a constant before resolution.
struct RateOverride
{
    std::string name;
    double value = 0.0;
};

RateOverride parse_override(std::string_view text);

/// Throws ErrorCode::parse for malformed documents, unknown keys, and
/// unresolved rate names; chain validation errors keep their own code.
ModelFile parse_model(std::string_view text, const std::vector<RateOverride>& overrides = {});
ModelFile load_model(const std::filesystem::path& path, const std::vector<RateOverride>& overrides = {});

/// Writes every rate inline, so the output has no named references.
std::string serialize_model(const ModelFile& model);

/// A JSON array of positive numbers.
std::vector<double> load_weights(const std::filesystem::path& path);

}  // namespace ergobound

#endif  // ERGOBOUND_MODEL_HPP
