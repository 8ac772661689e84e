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

#include "damp/denoiser_config.hpp"

#include <filesystem>
#include <set>

#include "damp/errors.hpp"
#include "damp/io.hpp"

namespace damp {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* where) {
  std::string bad;
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) bad += (bad.empty() ? "" : ", ") + it.key();
  if (!bad.empty()) throw ValidationError(std::string(where) + ": unknown keys: " + bad);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("denoiser config: bad value for '") + key + "': " +
                          e.what());
  }
}

}  // namespace

TuningTable tuning_table_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("tuning table must be a JSON object");
  reject_unknown(j, {"format", "version", "name", "kind", "relative", "breakpoints", "values",
                     "note"},
                 "tuning table");
  if (j.contains("version") && j.at("version") != 1)
    throw ValidationError("unsupported tuning table version");
  TuningTable t;
  try {
    t.breakpoints = j.at("breakpoints").get<std::vector<double>>();
    t.values = j.at("values").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("tuning table: ") + e.what());
  }
  t.relative = get_or<bool>(j, "relative", false);
  t.name = get_or<std::string>(j, "name", "");
  try {
    t.validate();
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }
  return t;
}

TuningTable load_tuning_table(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  TuningTable t = tuning_table_from_json(j);
  if (t.name.empty()) t.name = std::filesystem::path(path).stem().string();
  return t;
}

json tuning_table_to_json(const TuningTable& t) {
  return json{{"format", "damp-tuning-table"}, {"version", 1},          {"name", t.name},
              {"relative", t.relative},        {"breakpoints", t.breakpoints},
              {"values", t.values}};
}

DenoiserHandle denoiser_from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ValidationError("denoiser config must be a JSON object");
  reject_unknown(j, {"kind", "tuning", "value", "block_len", "patch_radius", "window_radius",
                     "patch_distance", "spatial_sigma", "range_only", "basis", "levels",
                     "support", "table", "smooth", "inner"},
                 "denoiser config");
  if (!j.contains("kind")) throw ValidationError("denoiser config: missing 'kind'");
  DenoiserKind kind;
  Tuning tuning;
  try {
    kind = parse_denoiser_kind(j.at("kind").get<std::string>());
    tuning = parse_tuning(get_or<std::string>(
        j, "tuning", j.contains("table") ? "lookup_table" : "scale_with_sigma"));
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }

  if (kind == DenoiserKind::smoothed) {
    if (!j.contains("inner") || !j.contains("smooth"))
      throw ValidationError("smoothed denoiser needs 'inner' and 'smooth'");
    json inner = j.at("inner");
    json wrapped = inner;
    wrapped["smooth"] = j.at("smooth");
    return denoiser_from_json(wrapped, base_dir);
  }

  DenoiserParams p;
  p.value = get_or<double>(j, "value", 1.0);
  p.block_len = get_or<std::size_t>(j, "block_len", 1);
  const bool image_default = kind == DenoiserKind::nlm && !j.contains("patch_radius");
  p.nlm = image_default ? nlm_geometry_2d() : NlmGeometry{};
  p.nlm.patch_radius = get_or<std::size_t>(j, "patch_radius", p.nlm.patch_radius);
  p.nlm.window_radius = get_or<std::size_t>(j, "window_radius", p.nlm.window_radius);
  const std::string dist = get_or<std::string>(j, "patch_distance", "mean");
  if (dist != "mean" && dist != "sum")
    throw ValidationError("patch_distance must be 'mean' or 'sum'");
  p.nlm.mean_distance = dist == "mean";
  p.bilateral.window_radius = get_or<std::size_t>(j, "window_radius", p.bilateral.window_radius);
  p.bilateral.spatial_sigma = get_or<double>(j, "spatial_sigma", p.bilateral.spatial_sigma);
  p.bilateral.range_only = get_or<bool>(j, "range_only", false);
  try {
    p.basis = parse_wavelet_basis(get_or<std::string>(j, "basis", "haar"));
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }
  p.levels = get_or<std::size_t>(j, "levels", 3);
  p.support = get_or<std::vector<std::size_t>>(j, "support", {});

  TuningTable table;
  if (tuning == Tuning::lookup_table) {
    if (!j.contains("table")) throw ValidationError("lookup_table tuning needs 'table'");
    const json& t = j.at("table");
    if (t.is_string()) {
      std::filesystem::path tp(t.get<std::string>());
      if (tp.is_relative() && !base_dir.empty() && std::filesystem::exists(base_dir / tp))
        tp = base_dir / tp;
      table = load_tuning_table(tp.string());
    } else {
      table = tuning_table_from_json(t);
    }
  }

  DenoiserHandle h;
  try {
    h = DenoiserHandle(kind, p, tuning, table);
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }

  if (j.contains("smooth")) {
    const json& s = j.at("smooth");
    if (!s.is_object()) throw ValidationError("'smooth' must be an object");
    reject_unknown(s, {"r", "r_relative", "samples", "seed"}, "smooth");
    SmoothingParams sp;
    sp.r = get_or<double>(s, "r", sp.r);
    sp.r_relative = get_or<bool>(s, "r_relative", sp.r_relative);
    sp.samples = get_or<std::size_t>(s, "samples", sp.samples);
    sp.seed = get_or<std::uint64_t>(s, "seed", sp.seed);
    try {
      h = DenoiserHandle::smoothed(h, sp);
    } catch (const ParameterError& e) {
      throw ValidationError(e.what());
    }
  }
  return h;
}

json denoiser_to_json(const DenoiserHandle& h) {
  if (h.kind() == DenoiserKind::smoothed) {
    json j = denoiser_to_json(h.inner());
    const auto& s = h.params().smooth;
    j["smooth"] = json{{"r", s.r}, {"r_relative", s.r_relative}, {"samples", s.samples},
                       {"seed", s.seed}};
    return j;
  }
  const auto& p = h.params();
  json j{{"kind", to_string(h.kind())}, {"tuning", to_string(h.tuning())}};
  switch (h.kind()) {
    case DenoiserKind::identity:
    case DenoiserKind::zero:
      j.erase("tuning");
      break;
    case DenoiserKind::projection:
      j.erase("tuning");
      j["support"] = p.support;
      break;
    case DenoiserKind::block_soft:
      j["value"] = p.value;
      j["block_len"] = p.block_len;
      break;
    case DenoiserKind::nlm:
      j["patch_radius"] = p.nlm.patch_radius;
      j["window_radius"] = p.nlm.window_radius;
      j["patch_distance"] = p.nlm.mean_distance ? "mean" : "sum";
      if (h.tuning() != Tuning::lookup_table) j["value"] = p.value;
      break;
    case DenoiserKind::bilateral:
      j["value"] = p.value;
      j["window_radius"] = p.bilateral.window_radius;
      j["spatial_sigma"] = p.bilateral.spatial_sigma;
      j["range_only"] = p.bilateral.range_only;
      break;
    case DenoiserKind::wavelet_soft:
    case DenoiserKind::wavelet_hard:
      j["value"] = p.value;
      j["basis"] = to_string(p.basis);
      j["levels"] = p.levels;
      break;
    default:
      j["value"] = p.value;
  }
  if (h.tuning() == Tuning::lookup_table) j["table"] = tuning_table_to_json(h.table());
  return j;
}

DenoiserHandle denoiser_preset(const std::string& name, bool image) {
  if (name == "soft") return DenoiserHandle::soft(1.5);
  if (name == "hard") return DenoiserHandle::hard(3.0);
  if (name == "nlm")
    return image ? DenoiserHandle::nlm(1.0, nlm_geometry_2d())
                 : DenoiserHandle::nlm(1.5, nlm_geometry_1d());
  if (name == "bilateral") return DenoiserHandle::bilateral(1.0, BilateralGeometry{});
  if (name == "gaussian") return DenoiserHandle::gaussian(1.0);
  if (name == "haar" || name == "wavelet")
    return DenoiserHandle::wavelet(1.5, WaveletBasis::haar, ThresholdMode::soft, 3);
  if (name == "db4") return DenoiserHandle::wavelet(1.5, WaveletBasis::db4, ThresholdMode::soft, 3);
  if (name == "svt") return DenoiserHandle::svt(1.0);
  throw ValidationError("unknown denoiser preset '" + name +
                        "' (use a JSON config for full control)");
}

}  // namespace damp
