/*
 * Copyright 2026 The damp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

#include "damp/denoisers.hpp"
#include "json.hpp"

namespace damp {

// Declarative denoiser description. Keys:
//   kind, tuning, value, block_len, patch_radius, window_radius,
//   patch_distance (mean|sum), spatial_sigma, range_only, basis, levels,
//   support, table (path or inline object), smooth {r, r_relative, samples, seed}.
// Unknown keys are rejected. Relative table paths resolve against base_dir.
DenoiserHandle denoiser_from_json(const nlohmann::json& j, const std::string& base_dir = "");
nlohmann::json denoiser_to_json(const DenoiserHandle& h);

TuningTable tuning_table_from_json(const nlohmann::json& j);
TuningTable load_tuning_table(const std::string& path);
nlohmann::json tuning_table_to_json(const TuningTable& t);

// Shorthand names used by the CLI: soft, hard, nlm, nlm_table, haar, db4, ...
DenoiserHandle denoiser_preset(const std::string& name, bool image);

}  // namespace damp
