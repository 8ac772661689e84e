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
#include <string_view>
#include <vector>

#include "json.hpp"

namespace damp {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);

// Writes <dir>/manifest.json covering `outputs` (relative to dir) and
// `inputs` (any path). The manifest also hashes its own entry list.
void write_manifest(const std::string& dir, const std::vector<std::string>& outputs,
                    const std::vector<std::string>& inputs, const nlohmann::json& extra = {});

// Empty when every hash matches; otherwise one message per problem.
std::vector<std::string> verify_manifest(const std::string& dir);

}  // namespace damp
